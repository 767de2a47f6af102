#include "ptfloquet/floquet.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>

namespace ptfloquet {

namespace {

FloquetResult finish(CMatrix monodromy, std::vector<Complex> multipliers, const LossProfile& loss) {
  FloquetResult r;
  r.monodromy = std::move(monodromy);
  r.period = loss.period();
  std::vector<std::pair<Complex, Complex>> pairs;
  pairs.reserve(multipliers.size());
  for (const Complex& lambda : multipliers) {
    if (std::abs(lambda) == 0.0) throw NumericalError("monodromy has a zero eigenvalue");
    pairs.emplace_back(std::log(lambda) / r.period, lambda);
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    if (a.first.real() != b.first.real()) return a.first.real() > b.first.real();
    return a.first.imag() < b.first.imag();
  });
  for (const auto& [mu, lambda] : pairs) {
    r.exponents.push_back(mu);
    r.multipliers.push_back(lambda);
    r.lyapunov.push_back(mu.real());
  }
  r.mean_loss = mean_loss(loss);
  r.mean_loss_ref = -0.5 * r.mean_loss;
  return r;
}

std::vector<Complex> eigenvalues(const CMatrix& m) {
  if (m.rows() == 0) return {};
  Eigen::ComplexEigenSolver<CMatrix> solver(m, false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed");
  const CVector ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<Eigen::Index> sector_indices(const TwoModeBasis& basis, int n_ket, int n_bra) {
  const int d = basis.dim();
  std::vector<Eigen::Index> idx;
  for (int hb = 0; hb <= n_bra; ++hb) {
    for (int hk = 0; hk <= n_ket; ++hk) {
      const int row = TwoModeBasis::sector_begin(n_ket) + hk;
      const int col = TwoModeBasis::sector_begin(n_bra) + hb;
      idx.push_back(static_cast<Eigen::Index>(liouville_index(d, row, col)));
    }
  }
  return idx;
}

CMatrix power(const CMatrix& base, long k) {
  CMatrix result = CMatrix::Identity(base.rows(), base.cols());
  CMatrix square = base;
  while (k > 0) {
    if (k & 1) result = square * result;
    k >>= 1;
    if (k > 0) square = square * square;
  }
  return result;
}

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

std::string_view to_string(PtPhase phase) {
  return phase == PtPhase::Broken ? "Broken" : "Symmetric";
}

FloquetResult monodromy_2x2(const CouplerParams& params, const OdeTolerances& tolerances) {
  params.validate();
  const double period = params.loss.period();
  CVector y(4);
  y << 1.0, 0.0, 0.0, 1.0;
  const Complex minus_i_kappa(0.0, -params.kappa);
  const auto rhs = [&](double z, const CVector& s, CVector& ds) {
    const double gamma = params.loss.rate(z);
    ds.resize(4);
    // Column-major 2x2: (s0 s2; s1 s3), each column is one amplitude solution.
    for (int c = 0; c < 2; ++c) {
      const Complex c1 = s[2 * c];
      const Complex c2 = s[2 * c + 1];
      ds[2 * c] = minus_i_kappa * c2 - gamma * c1;
      ds[2 * c + 1] = minus_i_kappa * c1;
    }
  };
  integrate_dopri5(rhs, y, 0.0, period, tolerances);
  CMatrix m = Eigen::Map<const CMatrix>(y.data(), 2, 2);
  std::vector<Complex> lambda = eigenvalues(m);
  return finish(std::move(m), std::move(lambda), params.loss);
}

FloquetResult monodromy_full(const CouplerParams& params, const TwoModeBasis& basis,
                             const WeiNormanOptions& options) {
  const double period = params.loss.period();
  CMatrix u = propagator(params, period, basis, options).total();
  std::vector<Complex> lambda = sector_spectrum(u, basis);
  return finish(std::move(u), std::move(lambda), params.loss);
}

std::vector<Complex> sector_block_spectrum(const CMatrix& op, const TwoModeBasis& basis, int n_ket,
                                           int n_bra) {
  if (n_ket < 0 || n_bra < 0 || n_ket > basis.n_max() || n_bra > basis.n_max()) {
    throw InputError("sector outside the truncated space");
  }
  const int d = basis.dim();
  if (op.rows() != static_cast<Eigen::Index>(d) * d || op.cols() != op.rows()) {
    throw InputError("operator does not match the Liouville dimension of the basis");
  }
  const auto idx = sector_indices(basis, n_ket, n_bra);
  const auto k = static_cast<Eigen::Index>(idx.size());
  CMatrix block(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) block(i, j) = op(idx[i], idx[j]);
  }
  return eigenvalues(block);
}

std::vector<Complex> sector_spectrum(const CMatrix& op, const TwoModeBasis& basis) {
  std::vector<Complex> all;
  for (int nk = 0; nk <= basis.n_max(); ++nk) {
    for (int nb = 0; nb <= basis.n_max(); ++nb) {
      const auto part = sector_block_spectrum(op, basis, nk, nb);
      all.insert(all.end(), part.begin(), part.end());
    }
  }
  return all;
}

std::vector<Complex> predicted_sector_spectrum(const FloquetResult& single_photon, int n_ket,
                                               int n_bra) {
  if (single_photon.multipliers.size() != 2) {
    throw InputError("sector prediction needs the two single-photon multipliers");
  }
  if (n_ket < 0 || n_bra < 0) throw InputError("photon numbers must be >= 0");
  const Complex l0 = single_photon.multipliers[0];
  const Complex l1 = single_photon.multipliers[1];
  std::vector<Complex> out;
  for (int j = 0; j <= n_bra; ++j) {
    const Complex bra = std::pow(std::conj(l0), j) * std::pow(std::conj(l1), n_bra - j);
    for (int k = 0; k <= n_ket; ++k) out.push_back(std::pow(l0, k) * std::pow(l1, n_ket - k) * bra);
  }
  return out;
}

double spectrum_distance(const std::vector<Complex>& expected, const std::vector<Complex>& actual) {
  if (expected.size() != actual.size()) throw InputError("spectra differ in size");
  std::vector<bool> used(actual.size(), false);
  double worst = 0.0;
  for (const Complex& e : expected) {
    std::size_t best = actual.size();
    double best_d = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(actual[i] - e);
      if (best == actual.size() || d < best_d) {
        best = i;
        best_d = d;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

double lyapunov_splitting(const FloquetResult& result) {
  if (result.lyapunov.size() != 2) throw InputError("splitting needs a two-exponent result");
  return std::abs(result.lyapunov[0] - result.lyapunov[1]);
}

PtPhase classify_pt(const FloquetResult& result, double eps_split) {
  if (!(eps_split > 0.0)) throw InputError("eps_split must be positive");
  const double split = lyapunov_splitting(result);
  if (split > eps_split) return PtPhase::Broken;
  for (double l : result.lyapunov) {
    if (std::abs(l - result.mean_loss_ref) > 10.0 * eps_split) {
      throw NumericalError("symmetric phase with Lyapunov exponent off the mean loss");
    }
  }
  return PtPhase::Symmetric;
}

void PhaseDiagramConfig::validate() const {
  if (!(omega_min > 0.0) || !(omega_max > omega_min)) {
    throw InputError("omega range must satisfy 0 < omega_min < omega_max");
  }
  if (!(gamma_min > 0.0) || !(gamma_max > gamma_min)) {
    throw InputError("gamma range must satisfy 0 < gamma_min < gamma_max");
  }
  if (n_omega < 2 || n_gamma < 2) throw InputError("grid sizes must be >= 2");
  if (!(kappa > 0.0)) throw InputError("kappa must be positive");
  if (!(min_ratio > 0.0 && min_ratio < 1.0)) throw InputError("min_ratio must lie in (0, 1)");
  if (!(eps_split > 0.0)) throw InputError("eps_split must be positive");
  if (!(tolerances.rel > 0.0) || !(tolerances.abs > 0.0)) throw InputError("tolerances must be positive");
}

std::optional<double> PhaseDiagram::threshold(std::size_t i_omega) const {
  for (std::size_t j = 0; j < gamma.size(); ++j) {
    const PhasePoint& p = at(i_omega, j);
    if (p.ok && p.phase == PtPhase::Broken) return gamma[j];
  }
  return std::nullopt;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw InputError("linspace needs n >= 1");
  std::vector<double> v(static_cast<std::size_t>(n));
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  v.back() = hi;
  return v;
}

CouplerParams grid_params(const PhaseDiagramConfig& config, double omega, double gamma_bar) {
  CouplerParams p;
  p.kappa = config.kappa;
  const double w = omega * config.kappa;
  const double g = gamma_bar * config.kappa;
  p.loss = config.constant_profile ? LossProfile::constant(g, 2.0 * M_PI / w)
                                   : profile_for_target(g, w, config.min_ratio);
  return p;
}

PhaseDiagram phase_diagram(const PhaseDiagramConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  PhaseDiagram out;
  out.config = config;
  out.omega = linspace(config.omega_min, config.omega_max, config.n_omega);
  out.gamma = linspace(config.gamma_min, config.gamma_max, config.n_gamma);
  out.points.resize(out.omega.size() * out.gamma.size());

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= out.points.size()) return;
      const std::size_t i = k / out.gamma.size();
      const std::size_t j = k % out.gamma.size();
      PhasePoint& p = out.points[k];
      try {
        const CouplerParams params = grid_params(config, out.omega[i], out.gamma[j]);
        p.sharpness = params.loss.sharpness();
        const FloquetResult r = monodromy_2x2(params, config.tolerances);
        p.splitting = lyapunov_splitting(r) / config.kappa;
        p.phase = classify_pt(r, config.eps_split * config.kappa);
        p.ok = true;
      } catch (const std::exception& e) {
        p.ok = false;
        p.error = e.what();
      }
    }
  };
  unsigned jobs = config.jobs ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, out.points.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<DensityMatrix> propagate_state(const CouplerParams& params, const DensityMatrix& rho0,
                                           const std::vector<double>& z_samples,
                                           const WeiNormanOptions& options) {
  params.validate();
  for (std::size_t i = 0; i < z_samples.size(); ++i) {
    if (!(z_samples[i] >= 0.0) || !std::isfinite(z_samples[i])) {
      throw InputError("z samples must be finite and >= 0");
    }
    if (i > 0 && z_samples[i] < z_samples[i - 1]) throw InputError("z samples must be ascending");
  }
  const TwoModeBasis& basis = rho0.basis();
  const double period = params.loss.period();
  const CVector v0 = vectorize(rho0).data();

  std::vector<DensityMatrix> out;
  out.reserve(z_samples.size());
  if (z_samples.empty()) return out;

  const CMatrix mono = propagator(params, period, basis, options).total();
  // Stroboscopic vectors U(T)^k v0, computed by repeated squaring per distinct k.
  std::map<long, CVector> strobe;
  for (double z : z_samples) {
    long k = static_cast<long>(std::floor(z / period));
    double r = z - static_cast<double>(k) * period;
    const double snap = 1e-12 * std::max(1.0, z);
    if (period - r <= snap) {
      ++k;
      r = 0.0;
    }
    if (r <= snap) r = 0.0;
    auto it = strobe.find(k);
    if (it == strobe.end()) it = strobe.emplace(k, power(mono, k) * v0).first;
    CVector v = it->second;
    if (r > 0.0) v = propagator(params, r, basis, options).total() * v;
    out.push_back(devectorize(basis, v));
  }
  return out;
}

std::vector<double> OccupationTable::sector_total(int n) const {
  std::vector<double> s(rows.size(), 0.0);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].first != n) continue;
    for (std::size_t i = 0; i < rows.size(); ++i) s[i] += rows[i][c];
  }
  return s;
}

OccupationTable occupation_trajectories(const CouplerParams& params, const DensityMatrix& rho0,
                                        double z_max, int n_samples,
                                        const WeiNormanOptions& options) {
  if (!(z_max >= 0.0) || !std::isfinite(z_max)) throw InputError("z_max must be >= 0");
  if (n_samples < 1) throw InputError("n_samples must be >= 1");
  if (z_max > 0.0 && n_samples < 2) throw InputError("n_samples must be >= 2 when z_max > 0");
  const std::vector<double> z = z_max == 0.0 ? std::vector<double>{0.0} : linspace(0.0, z_max, n_samples);

  OccupationTable table;
  table.z = z;
  const TwoModeBasis& basis = rho0.basis();
  for (const FockState& s : basis.states()) table.columns.emplace_back(s.total(), s.h);
  const auto states = propagate_state(params, rho0, z, options);
  for (const DensityMatrix& rho : states) {
    std::vector<double> row;
    row.reserve(table.columns.size());
    for (const auto& [n, h] : table.columns) row.push_back(occupation(rho, n, h));
    table.rows.push_back(std::move(row));
    table.trace.push_back(rho.trace());
  }
  return table;
}

StrandSplitting fit_strand_splitting(const CouplerParams& params, const DensityMatrix& rho0,
                                     int first_period, int last_period,
                                     const WeiNormanOptions& options) {
  if (first_period < 0 || last_period < first_period + 2) {
    throw InputError("strand fit needs at least three periods");
  }
  const TwoModeBasis& basis = rho0.basis();
  int top = 0;
  for (int n = basis.n_max(); n >= 1 && top == 0; --n) {
    for (int h = 0; h <= n; ++h) {
      if (occupation(rho0, n, h) > 1e-14) top = n;
    }
  }
  if (top == 0) throw InputError("strand fit needs a state with photons");

  const double period = params.loss.period();
  const CMatrix mono = propagator(params, period, basis, options).total();
  CVector v = power(mono, first_period) * vectorize(rho0).data();
  std::vector<double> z, log_pop;
  for (int k = first_period; k <= last_period; ++k) {
    const DensityMatrix rho = devectorize(basis, v);
    double pop = 0.0;
    for (int h = 0; h <= top; ++h) pop += occupation(rho, top, h);
    if (!(pop > 0.0)) throw NumericalError("top sector population vanished in the fit window");
    z.push_back(k * period);
    log_pop.push_back(std::log(pop));
    v = mono * v;
  }
  StrandSplitting s;
  s.sector = top;
  s.first_period = first_period;
  s.last_period = last_period;
  s.mean_loss = mean_loss(params.loss);
  s.slow_rate = -slope(z, log_pop) / top;
  s.fast_rate = 2.0 * s.mean_loss - s.slow_rate;
  s.splitting = s.fast_rate - s.slow_rate;
  return s;
}

}  // namespace ptfloquet
