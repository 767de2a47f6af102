#include "ptfloquet/wei_norman.hpp"

#include <cmath>
#include <string>

#include "ptfloquet/expm.hpp"

namespace ptfloquet {

namespace {

// Relative slack for the per-segment trace-preservation check.
constexpr double kTraceCheckTolerance = 1e-8;

struct GeneratorSet {
  SparseCMatrix k_plus_l, k_zero_l, k_minus_l;
  SparseCMatrix k_plus_r, k_zero_r, k_minus_r;
  SparseCMatrix total_l, total_r;
  std::array<SparseCMatrix, 4> jumps;  // L1-R1-, L2-R2-, L2-R1-, L1-R2-

  explicit GeneratorSet(const TwoModeBasis& basis)
      : k_plus_l(generator_matrix("L1+L2-", basis)),
        k_zero_l(generator_matrix("K0L", basis)),
        k_minus_l(generator_matrix("L2+L1-", basis)),
        k_plus_r(generator_matrix("R1+R2-", basis)),
        k_zero_r(generator_matrix("K0R", basis)),
        k_minus_r(generator_matrix("R2+R1-", basis)),
        total_l(generator_matrix("ML", basis)),
        total_r(generator_matrix("MR", basis)),
        jumps{generator_matrix("L1-R1-", basis), generator_matrix("L2-R2-", basis),
              generator_matrix("L2-R1-", basis), generator_matrix("L1-R2-", basis)} {}
};

CMatrix assemble(const GeneratorSet& g, const Sl2Point& left, const Sl2Point& right,
                 const SolvablePoint& a) {
  SparseCMatrix u = exp_generator_sparse(left.plus, g.k_plus_l);
  const auto times = [&u](const SparseCMatrix& f) { u = SparseCMatrix(u * f); };
  times(exp_generator_sparse(left.zero, g.k_zero_l));
  times(exp_generator_sparse(left.minus, g.k_minus_l));
  times(exp_generator_sparse(right.plus, g.k_plus_r));
  times(exp_generator_sparse(right.zero, g.k_zero_r));
  times(exp_generator_sparse(right.minus, g.k_minus_r));
  times(exp_generator_sparse(a[0], g.total_l));
  times(exp_generator_sparse(a[1], g.total_r));
  for (std::size_t k = 0; k < 4; ++k) times(exp_generator_sparse(a[k + 2], g.jumps[k]));
  return CMatrix(u);
}

bool inside_chart(const CVector& y, double bound) {
  return std::abs(y[0]) <= bound && std::abs(y[2]) <= bound &&
         std::abs(y[1].real()) <= std::log(bound) && y.allFinite();
}

Sl2Point to_point(const CVector& y) { return {y[0], y[1], y[2]}; }

}  // namespace

bool Sl2Point::finite() const {
  const auto ok = [](Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); };
  return ok(plus) && ok(zero) && ok(minus);
}

Sl2Coefficients Sl2Coefficients::conjugate() const {
  Sl2Coefficients out{z, {}};
  out.values.reserve(values.size());
  for (const auto& v : values) out.values.push_back(v.conjugate());
  return out;
}

Matrix2c sl2_generator(const CouplerParams& params, double z) {
  const Complex c_pm(0.0, -params.kappa);
  const Complex c0(-0.5 * params.loss.rate(z), 0.0);
  Matrix2c g;
  g << c0, c_pm, c_pm, -c0;
  return g;
}

Sl2Point sl2_rhs(double z, const Sl2Point& f, const CouplerParams& params) {
  const Complex c_plus(0.0, -params.kappa);
  const Complex c_minus = c_plus;
  const Complex c0(-0.5 * params.loss.rate(z), 0.0);
  return {c_plus + 2.0 * c0 * f.plus - c_minus * f.plus * f.plus,
          c0 - c_minus * f.plus,
          c_minus * std::exp(2.0 * f.zero)};
}

Sl2Integration integrate_sl2(const CouplerParams& params, double z0, double z1,
                             const WeiNormanOptions& options) {
  params.validate();
  if (z1 < z0) throw InputError("integrate_sl2 needs z1 >= z0");
  Sl2Integration result;
  result.coefficients.z.push_back(z0);
  result.coefficients.values.push_back({});
  result.reached_z = z0;
  if (z1 == z0) return result;

  CVector y = CVector::Zero(3);
  const auto rhs = [&params](double z, const CVector& s, CVector& ds) {
    const Sl2Point d = sl2_rhs(z, to_point(s), params);
    ds.resize(3);
    ds << d.plus, d.zero, d.minus;
  };
  const auto observe = [&](double z, const CVector& s) {
    if (!inside_chart(s, options.chart_bound)) return false;
    result.coefficients.z.push_back(z);
    result.coefficients.values.push_back(to_point(s));
    return true;
  };
  result.reached_z = integrate_dopri5(rhs, y, z0, z1, options.tolerances, observe);
  result.chart_limited = result.reached_z < z1;
  if (result.chart_limited && result.reached_z == z0) {
    throw NumericalError("chart bound hit on the first step at z = " + std::to_string(z0));
  }
  return result;
}

Matrix2c integrate_sl2_linear(const CouplerParams& params, double z0, double z1,
                              const WeiNormanOptions& options) {
  params.validate();
  if (z1 < z0) throw InputError("integrate_sl2_linear needs z1 >= z0");
  CVector y(4);
  y << 1.0, 0.0, 0.0, 1.0;  // column-major identity
  const auto rhs = [&params](double z, const CVector& s, CVector& ds) {
    const Matrix2c m = Eigen::Map<const Matrix2c>(s.data());
    const Matrix2c dm = sl2_generator(params, z) * m;
    ds = Eigen::Map<const CVector>(dm.data(), 4);
  };
  integrate_dopri5(rhs, y, z0, z1, options.tolerances);
  return Eigen::Map<const Matrix2c>(y.data());
}

Sl2Point sl2_from_fundamental(const Matrix2c& m) {
  const Complex m22 = m(1, 1);
  if (std::abs(m22) == 0.0) {
    throw NumericalError("fundamental matrix has M22 = 0: outside the product chart");
  }
  return {m(0, 1) / m22, -std::log(m22), m(1, 0) / m22};
}

Matrix2c fundamental_from_sl2(const Sl2Point& f) {
  const Complex e = std::exp(f.zero);
  const Complex ei = 1.0 / e;
  Matrix2c m;
  m << e + f.plus * f.minus * ei, f.plus * ei, f.minus * ei, ei;
  return m;
}

SolvableCoefficients integrate_solvable(const CouplerParams& params, double z0, double z1,
                                        const WeiNormanOptions& options) {
  params.validate();
  if (z1 < z0) throw InputError("integrate_solvable needs z1 >= z0");
  SolvableCoefficients out;
  out.z.push_back(z0);
  out.values.push_back(SolvablePoint{});
  if (z1 == z0) return out;

  // State: M (4, column-major), accumulated loss integral, b11, b22, b21, b12.
  CVector y = CVector::Zero(9);
  y[0] = 1.0;
  y[3] = 1.0;
  const auto rhs = [&params](double z, const CVector& s, CVector& ds) {
    const Matrix2c m = Eigen::Map<const Matrix2c>(s.data());
    const Matrix2c dm = sl2_generator(params, z) * m;
    const double gamma = params.loss.rate(z);
    const Complex weight = 2.0 * gamma * std::exp(-s[4].real());
    ds.resize(9);
    ds.head<4>() = Eigen::Map<const CVector>(dm.data(), 4);
    ds[4] = gamma;
    ds[5] = weight * m(0, 0) * std::conj(m(0, 0));
    ds[6] = weight * m(0, 1) * std::conj(m(0, 1));
    ds[7] = weight * m(0, 1) * std::conj(m(0, 0));
    ds[8] = weight * m(0, 0) * std::conj(m(0, 1));
  };
  const auto to_solvable = [](const CVector& s) {
    const Complex mean = -0.5 * s[4];
    return SolvablePoint{mean, mean, s[5], s[6], s[7], s[8]};
  };
  const auto observe = [&](double z, const CVector& s) {
    if (!s.allFinite()) return false;
    out.z.push_back(z);
    out.values.push_back(to_solvable(s));
    return true;
  };
  const double reached = integrate_dopri5(rhs, y, z0, z1, options.tolerances, observe);
  if (reached < z1) {
    throw NumericalError("solvable-part integration failed at z = " + std::to_string(reached));
  }
  // The mean-loss exponents come from adaptive quadrature rather than the ODE.
  const Complex mean = -0.5 * params.loss.integral(z0, z1);
  out.values.back()[0] = mean;
  out.values.back()[1] = mean;
  return out;
}

SolvablePoint integrate_solvable_by_conjugation(const CouplerParams& params,
                                                const TwoModeBasis& basis, double z0, double z1,
                                                const WeiNormanOptions& options) {
  params.validate();
  if (z1 < z0) throw InputError("integrate_solvable_by_conjugation needs z1 >= z0");
  if (basis.n_max() < 1) throw InputError("conjugation route needs n_max >= 1");
  if (z1 == z0) return SolvablePoint{};

  const int d = basis.dim();
  const CMatrix a1 = basis.annihilation(1);
  const CMatrix a2 = basis.annihilation(2);
  const SparseCMatrix hop_12 = CMatrix(a1.adjoint() * a2).sparseView();
  const SparseCMatrix hop_21 = CMatrix(a2.adjoint() * a1).sparseView();
  const SparseCMatrix imbalance = CMatrix(basis.number(1) - basis.number(2)).sparseView();
  const CMatrix total_number = basis.number(1) + basis.number(2);

  const int i00 = basis.index(0, 0);
  const int i10 = basis.index(1, 0);
  const int i01 = basis.index(0, 1);
  // Probe operators; U_R maps each to a combination whose coefficients are the a_k.
  const std::array<std::pair<int, int>, 6> probes = {
      std::pair{i10, i00}, std::pair{i00, i10}, std::pair{i10, i10},
      std::pair{i01, i01}, std::pair{i01, i10}, std::pair{i10, i01}};

  const Eigen::Index block = static_cast<Eigen::Index>(d) * d;
  CVector y = CVector::Zero(4 + 6 * block);
  y[0] = 1.0;
  y[3] = 1.0;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const auto [r, c] = probes[p];
    y[4 + static_cast<Eigen::Index>(p) * block + liouville_index(d, r, c)] = 1.0;
  }

  const auto rhs = [&](double z, const CVector& s, CVector& ds) {
    const Matrix2c m = Eigen::Map<const Matrix2c>(s.data());
    const Matrix2c dm = sl2_generator(params, z) * m;
    ds.resize(s.size());
    ds.head<4>() = Eigen::Map<const CVector>(dm.data(), 4);

    const Sl2Point f = sl2_from_fundamental(m);
    const CMatrix v = exp_generator(f.plus, hop_12) * exp_generator(f.zero, imbalance) *
                      exp_generator(f.minus, hop_21);
    const CMatrix v_inv = exp_generator(-f.minus, hop_21) * exp_generator(-f.zero, imbalance) *
                          exp_generator(-f.plus, hop_12);
    const double gamma = params.loss.rate(z);
    for (Eigen::Index p = 0; p < 6; ++p) {
      const Eigen::Map<const CMatrix> x(s.data() + 4 + p * block, d, d);
      const CMatrix lifted = v * x * v.adjoint();
      const CMatrix acted = -0.5 * gamma * (total_number * lifted + lifted * total_number) +
                            2.0 * gamma * a1 * lifted * a1.adjoint();
      const CMatrix back = v_inv * acted * v_inv.adjoint();
      ds.segment(4 + p * block, block) = Eigen::Map<const CVector>(back.data(), block);
    }
  };
  integrate_dopri5(rhs, y, z0, z1, options.tolerances);

  const auto image = [&](std::size_t p, int r, int c) {
    return y[4 + static_cast<Eigen::Index>(p) * block + liouville_index(d, r, c)];
  };
  SolvablePoint a{};
  a[0] = std::log(image(0, i10, i00));
  a[1] = std::log(image(1, i00, i10));
  a[2] = image(2, i00, i00);
  a[3] = image(3, i00, i00);
  a[4] = image(4, i00, i00);
  a[5] = image(5, i00, i00);
  return a;
}

Superoperator assemble_propagator(const Sl2Point& left, const Sl2Point& right,
                                  const SolvablePoint& solvable, const TwoModeBasis& basis) {
  bool finite = left.finite() && right.finite();
  for (const auto& c : solvable) finite = finite && std::isfinite(c.real()) && std::isfinite(c.imag());
  if (!finite) throw NumericalError("non-finite product-expansion coefficients");
  return Superoperator(basis, assemble(GeneratorSet(basis), left, right, solvable), "U");
}

SegmentedPropagator::SegmentedPropagator(TwoModeBasis basis, std::vector<PropagatorSegment> segments)
    : basis_(std::move(basis)), segments_(std::move(segments)) {
  const auto n = static_cast<Eigen::Index>(basis_.dim()) * basis_.dim();
  total_ = CMatrix::Identity(n, n);
  for (const auto& s : segments_) total_ = s.matrix * total_;
}

double SegmentedPropagator::z_end() const {
  return segments_.empty() ? 0.0 : segments_.back().z_end;
}

Superoperator SegmentedPropagator::superoperator() const { return Superoperator(basis_, total_, "U"); }

SegmentedPropagator propagator(const CouplerParams& params, double z, const TwoModeBasis& basis,
                               const WeiNormanOptions& options) {
  params.validate();
  if (!(z >= 0.0) || !std::isfinite(z)) throw InputError("propagation length must be >= 0");

  const GeneratorSet generators(basis);
  const CVector trace_row = vectorized_identity(basis);
  const double period = params.loss.period();
  std::vector<PropagatorSegment> segments;
  double z_cur = 0.0;
  while (z_cur < z) {
    const double next_boundary = (std::floor(z_cur / period * (1.0 + 1e-14) + 1e-12) + 1.0) * period;
    const double target = std::min(z, next_boundary);
    const Sl2Integration sl2 = integrate_sl2(params, z_cur, target, options);
    const SolvableCoefficients solv = integrate_solvable(params, z_cur, sl2.reached_z, options);

    PropagatorSegment seg;
    seg.z_begin = z_cur;
    seg.z_end = sl2.reached_z;
    seg.sl2 = sl2.coefficients.final();
    seg.solvable = solv.final();
    seg.matrix = assemble(generators, seg.sl2, seg.sl2.conjugate(), seg.solvable);
    if (!seg.matrix.allFinite()) {
      throw NumericalError("non-finite segment propagator on [" + std::to_string(seg.z_begin) +
                           ", " + std::to_string(seg.z_end) + "]");
    }
    const double trace_defect =
        (trace_row.transpose() * seg.matrix - trace_row.transpose()).cwiseAbs().maxCoeff();
    if (trace_defect > kTraceCheckTolerance) {
      throw NumericalError("segment propagator violates trace preservation by " +
                           std::to_string(trace_defect));
    }
    segments.push_back(std::move(seg));
    z_cur = sl2.reached_z;
  }
  return SegmentedPropagator(basis, std::move(segments));
}

}  // namespace ptfloquet
