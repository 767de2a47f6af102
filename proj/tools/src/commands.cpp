#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ptfloquet/floquet.hpp"
#include "ptfloquet/oracle.hpp"
#include "ptfloquet/reservoir.hpp"
#include "ptfloquet/version.hpp"

namespace ptfloquet::cli {

namespace {

using nlohmann::json;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

json base_metadata(const RunConfig& cfg, double wall_seconds) {
  return json{{"command", cfg.command},
              {"version", std::string(kVersion)},
              {"timestamp", utc_timestamp()},
              {"wall_seconds", wall_seconds},
              {"config", cfg.to_json()}};
}

// Writes the CSV then its sidecar; file I/O happens only here.
void emit(const RunConfig& cfg, const std::string& csv, const json& meta, std::ostream& log) {
  write_file(cfg.out, csv);
  const std::string side = sidecar_path(cfg.out);
  write_file(side, meta.dump(2) + "\n");
  log << "wrote " << cfg.out << " and " << side << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CouplerParams coupler_params(const RunConfig& cfg) {
  PhaseDiagramConfig grid;
  grid.kappa = *cfg.kappa;
  grid.min_ratio = cfg.min_ratio;
  grid.constant_profile = cfg.static_profile;
  return grid_params(grid, *cfg.omega, *cfg.gamma_max);
}

WeiNormanOptions wn_options(const RunConfig& cfg) {
  WeiNormanOptions o;
  o.tolerances = {cfg.tol, cfg.tol * 1e-2};
  return o;
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

json profile_json(const LossProfile& loss) {
  return json{{"kind", loss.is_constant() ? "constant" : "modulated"},
              {"amplitude", loss.amplitude()},
              {"sharpness", loss.sharpness()},
              {"omega", loss.omega()},
              {"period", loss.period()},
              {"gamma_max", loss.gamma_max()},
              {"gamma_min", loss.gamma_min()},
              {"mean_loss", mean_loss(loss)}};
}

Complex parse_complex(const std::string& token) {
  const auto colon = token.find(':');
  const auto num = [&token](const std::string& s) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    const auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) throw InputError("bad amplitude '" + token + "'");
    return v;
  };
  if (colon == std::string::npos) return {num(token), 0.0};
  return {num(token.substr(0, colon)), num(token.substr(colon + 1))};
}

DensityMatrix parse_state(const std::string& text, const TwoModeBasis& basis) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  std::vector<std::string> parts;
  {
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
  }
  const auto to_int = [&text](const std::string& s) {
    int v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw InputError("bad state '" + text + "'");
    return v;
  };
  if (kind == "superposition" && parts.size() == 1) {
    const int n = to_int(parts[0]);
    if (n < 1 || n > basis.n_max()) throw InputError("superposition photon number outside [1, nmax]");
    return superposition_state(basis, n);
  }
  if (kind == "fock" && parts.size() == 2) {
    return fock_state(basis, to_int(parts[0]), to_int(parts[1]));
  }
  if (kind == "amplitudes") {
    if (static_cast<int>(parts.size()) != basis.dim()) {
      throw InputError("amplitude list needs " + std::to_string(basis.dim()) + " entries");
    }
    CVector psi(basis.dim());
    for (int i = 0; i < basis.dim(); ++i) psi[i] = parse_complex(parts[i]);
    if (!(psi.norm() > 0.0)) throw InputError("amplitude list is zero");
    return DensityMatrix::pure(basis, psi);
  }
  throw InputError("state must be superposition:n, fock:m,h or amplitudes:a0,a1,... (got '" + text + "')");
}

struct Check {
  std::string name;
  double residual;
  double threshold;
  [[nodiscard]] bool passed() const { return residual <= threshold; }
};

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::string sidecar_path(const std::string& csv_path) {
  const auto slash = csv_path.find_last_of('/');
  const auto dot = csv_path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return csv_path.substr(0, dot) + ".json";
  }
  return csv_path + ".json";
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(f, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": empty key");
    entries.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return entries;
}

void RunConfig::resolve_defaults() {
  if (command == "reservoir") {
    if (!kappa) kappa = 0.0;
    if (!gamma_max) gamma_max = 0.125;
    if (!omega) omega = 1.0;
    if (!zmax) zmax = 100.0;
  } else {
    if (!kappa) kappa = 1.0;
    if (!gamma_max) gamma_max = 0.25;
    // validate without --omega runs at both reference frequencies
    if (!omega && command != "validate") omega = 1.5;
  }
  if (!samples) samples = command == "coeffs" ? 201 : 601;
  if (command == "evolve" && !zmax) zmax = 10.0 * 2.0 * std::numbers::pi / (*omega * *kappa);
  if (out.empty()) out = command + (command == "validate" ? ".json" : ".csv");
}

void RunConfig::validate() const {
  const auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw InputError(msg);
  };
  if (command == "reservoir") {
    require(*kappa >= 0.0, "--kappa must be >= 0");
    require(*gamma_max >= 0.0, "--gamma-max must be >= 0");
  } else {
    require(*kappa > 0.0, "--kappa must be positive");
    require(*gamma_max >= 0.0, "--gamma-max must be >= 0");
  }
  require(!omega || *omega > 0.0, "--omega must be positive");
  require(min_ratio > 0.0 && min_ratio < 1.0, "--min-ratio must lie in (0, 1)");
  require(nmax >= 1 && nmax <= 12, "--nmax must lie in [1, 12]");
  require(tol > 0.0 && tol < 1.0, "--tol must lie in (0, 1)");
  require(eps_split > 0.0, "--eps-split must be positive");
  require(n_bath >= 1, "--n-bath must be >= 1");
  require(kappa_b > 0.0, "--kappa-b must be positive");
  require(dz > 0.0, "--dz must be positive");
  require(!zmax || *zmax >= 0.0, "--zmax must be >= 0");
  require(!samples || *samples >= 1, "--samples must be >= 1");
  if (command == "phase-diagram") {
    require(omega_min > 0.0 && omega_max > omega_min, "need 0 < --omega-min < --omega-max");
    require(gamma_min > 0.0 && gamma_lim > gamma_min, "need 0 < --gamma-min < --gamma-lim");
    require(n_omega >= 2 && n_gamma >= 2, "grid sizes must be >= 2");
  }
  if (command == "evolve") require(*zmax == 0.0 || *samples >= 2, "--samples must be >= 2 when --zmax > 0");
}

json RunConfig::to_json() const {
  json j{{"command", command},
         {"out", out},
         {"config_file", config_path},
         {"kappa", kappa.value_or(NAN)},
         {"gamma_max", gamma_max.value_or(NAN)},
         {"omega", omega.value_or(NAN)},
         {"min_ratio", min_ratio},
         {"nmax", nmax},
         {"tol", tol},
         {"eps_split", eps_split},
         {"jobs", jobs}};
  if (command == "phase-diagram") {
    j["omega_min"] = omega_min;
    j["omega_max"] = omega_max;
    j["n_omega"] = n_omega;
    j["gamma_min"] = gamma_min;
    j["gamma_lim"] = gamma_lim;
    j["n_gamma"] = n_gamma;
    j["static"] = static_profile;
  }
  if (command == "evolve" || command == "coeffs") {
    j["static"] = static_profile;
    j["samples"] = samples.value_or(0);
  }
  if (command == "evolve") {
    j["state"] = state;
    j["zmax"] = zmax.value_or(NAN);
  }
  if (command == "reservoir") {
    j["n_bath"] = n_bath;
    j["kappa_b"] = kappa_b;
    j["zmax"] = zmax.value_or(NAN);
    j["dz"] = dz;
  }
  return j;
}

int cmd_phase_diagram(const RunConfig& cfg, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  PhaseDiagramConfig grid;
  grid.omega_min = cfg.omega_min;
  grid.omega_max = cfg.omega_max;
  grid.n_omega = cfg.n_omega;
  grid.gamma_min = cfg.gamma_min;
  grid.gamma_max = cfg.gamma_lim;
  grid.n_gamma = cfg.n_gamma;
  grid.kappa = *cfg.kappa;
  grid.min_ratio = cfg.min_ratio;
  grid.eps_split = cfg.eps_split;
  grid.constant_profile = cfg.static_profile;
  grid.tolerances = {cfg.tol, cfg.tol * 1e-2};
  grid.jobs = cfg.jobs;
  const PhaseDiagram pd = phase_diagram(grid);

  std::string csv = "omega_over_kappa,gammabar_over_kappa,classification,splitting\n";
  json sharpness = json::array();
  json failures = json::array();
  json thresholds = json::array();
  for (std::size_t i = 0; i < pd.omega.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < pd.gamma.size(); ++j) {
      const PhasePoint& p = pd.at(i, j);
      csv += format_double(pd.omega[i]) + "," + format_double(pd.gamma[j]) + "," +
             (p.ok ? std::string(to_string(p.phase)) : std::string("Error")) + "," +
             format_double(p.ok ? p.splitting : NAN) + "\n";
      row.push_back(p.sharpness);
      if (!p.ok) failures.push_back({{"omega", pd.omega[i]}, {"gamma", pd.gamma[j]}, {"error", p.error}});
    }
    sharpness.push_back(std::move(row));
    const auto th = pd.threshold(i);
    thresholds.push_back(th ? json(*th) : json(nullptr));
  }
  json meta = base_metadata(cfg, seconds_since(t0));
  meta["tolerances"] = {{"rel", grid.tolerances.rel}, {"abs", grid.tolerances.abs}};
  meta["eps_split"] = cfg.eps_split;
  meta["min_ratio"] = cfg.min_ratio;
  meta["classifier"] = "single-photon 2x2 monodromy, Broken iff |Re mu+ - Re mu-| > eps_split";
  meta["omega_grid"] = pd.omega;
  meta["gamma_grid"] = pd.gamma;
  meta["sharpness"] = std::move(sharpness);
  meta["broken_threshold"] = std::move(thresholds);
  meta["failures"] = std::move(failures);
  meta["sweep_seconds"] = pd.wall_seconds;
  emit(cfg, csv, meta, log);
  log << pd.points.size() << " grid points in " << pd.wall_seconds << " s\n";
  return kSuccess;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const CouplerParams params = coupler_params(cfg);
  const TwoModeBasis basis(cfg.nmax);
  const DensityMatrix rho0 = parse_state(cfg.state, basis);
  const OccupationTable table =
      occupation_trajectories(params, rho0, *cfg.zmax, *cfg.samples, wn_options(cfg));

  std::string csv = "z";
  for (const auto& [n, h] : table.columns) csv += ",P_" + std::to_string(n) + "_" + std::to_string(h);
  csv += ",trace\n";
  for (std::size_t i = 0; i < table.z.size(); ++i) {
    csv += format_double(table.z[i]);
    for (double p : table.rows[i]) csv += "," + format_double(p);
    csv += "," + format_double(table.trace[i]) + "\n";
  }

  const FloquetResult fr = monodromy_2x2(params, {cfg.tol, cfg.tol * 1e-2});
  json meta = base_metadata(cfg, seconds_since(t0));
  meta["loss_profile"] = profile_json(params.loss);
  meta["exponents"] = {complex_json(fr.exponents[0]), complex_json(fr.exponents[1])};
  meta["phase"] = std::string(to_string(classify_pt(fr, cfg.eps_split * *cfg.kappa)));
  meta["columns"] = "P_n_h is the occupation of |n-h, h>, photons in the lossy waveguide first";
  emit(cfg, csv, meta, log);
  return kSuccess;
}

int cmd_reservoir(const RunConfig& cfg, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  ReservoirConfig rc;
  if (*cfg.gamma_max > 0.0) rc = reservoir_for_target(*cfg.gamma_max, *cfg.omega, cfg.min_ratio, cfg.kappa_b);
  rc.kappa_b = cfg.kappa_b;
  rc.omega = *cfg.omega;
  rc.n_bath = cfg.n_bath;
  rc.kappa = *cfg.kappa;
  rc.z_max = *cfg.zmax;
  rc.dz_out = cfg.dz;
  rc.tolerances = {cfg.tol, cfg.tol * 1e-2};
  rc.validate();

  std::string csv = "z,system_population,analytic_decay,relative_deviation\n";
  json meta = base_metadata(cfg, 0.0);
  const auto row = [&csv](double z, double s, double a, double d) {
    csv += format_double(z) + "," + format_double(s) + "," + format_double(a) + "," + format_double(d) + "\n";
  };
  double max_dev = 0.0;
  if (rc.kappa == 0.0) {
    const Trajectory t = simulate_array(rc);
    const DecayComparison d = analytic_decay(rc, t);
    for (std::size_t i = 0; i < d.z.size(); ++i) row(d.z[i], d.simulated[i], d.analytic[i], d.deviation[i]);
    meta["reference"] = "C exp(-int_0^z gamma)";
    meta["normalization"] = d.normalization;
    meta["fit_window"] = {d.fit_begin, d.fit_end};
    meta["fit_method"] = d.fit_method;
    meta["max_deviation_from_fit_start"] = d.max_deviation;
    meta["max_deviation_from_zero"] = d.max_deviation_all;
    meta["max_norm_defect"] = t.max_norm_defect;
    max_dev = d.max_deviation;
  } else {
    const SystemComparison s = full_system_comparison(rc);
    for (std::size_t i = 0; i < s.z.size(); ++i) {
      row(s.z[i], s.array_population[i], s.lindblad_population[i], s.deviation[i]);
    }
    meta["reference"] = "master-equation single-photon population";
    meta["lindblad_loss_scale"] = s.lindblad_loss_scale;
    meta["max_deviation"] = s.max_deviation;
    max_dev = s.max_deviation;
  }
  meta["recurrence_cutoff"] = recurrence_estimate(rc);
  meta["coupling"] = {{"amplitude", rc.amplitude}, {"sharpness", rc.sharpness}, {"omega", rc.omega}};
  meta["wall_seconds"] = seconds_since(t0);
  emit(cfg, csv, meta, log);
  log << "max relative deviation before cutoff: " << max_dev << "\n";
  return kSuccess;
}

int cmd_validate(const RunConfig& cfg, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Check> checks;
  const TwoModeBasis basis(cfg.nmax);
  {
    const CommutatorReport table = commutator_table(basis);
    checks.push_back({"commutator_table", table.max_residual, table.threshold});
  }
  const WeiNormanOptions options = wn_options(cfg);
  const CVector trace_row = vectorized_identity(basis);
  const std::vector<double> omegas = cfg.omega ? std::vector<double>{*cfg.omega} : std::vector<double>{1.5, 2.0};
  for (double w : omegas) {
    RunConfig point = cfg;
    point.omega = w;
    const CouplerParams params = coupler_params(point);
    const std::string at = "@omega=" + format_double(w);
    const FloquetResult two = monodromy_2x2(params, {1e-12, 1e-14});
    checks.push_back({"sum_rule" + at, std::abs(two.lyapunov[0] + two.lyapunov[1] + two.mean_loss), 1e-8});

    std::optional<FloquetResult> full;
    try {
      full = monodromy_full(params, basis, options);
    } catch (const NumericalError& e) {
      log << "product expansion failed" << at << ": " << e.what() << "\n";
    }
    if (!full) {
      for (const char* name : {"oracle_monodromy", "trace_preservation", "sector_product"}) {
        checks.push_back({name + at, INFINITY, name[0] == 's' ? 1e-7 : 1e-8});
      }
      continue;
    }
    const Superoperator oracle = oracle_monodromy(params, basis);
    const CMatrix diff = full->monodromy - oracle.dense();
    double worst_column = 0.0;
    for (Eigen::Index c = 0; c < diff.cols(); ++c) worst_column = std::max(worst_column, diff.col(c).norm());
    checks.push_back({"oracle_monodromy" + at, worst_column, 1e-8});

    checks.push_back({"trace_preservation" + at,
                      (trace_row.transpose() * full->monodromy - trace_row.transpose()).cwiseAbs().maxCoeff(),
                      1e-8});

    double sector = 0.0;
    for (int nk = 0; nk <= basis.n_max(); ++nk) {
      for (int nb = 0; nb <= basis.n_max(); ++nb) {
        sector = std::max(sector, spectrum_distance(predicted_sector_spectrum(two, nk, nb),
                                                    sector_block_spectrum(full->monodromy, basis, nk, nb)));
      }
    }
    checks.push_back({"sector_product" + at, sector, 1e-7});
  }

  bool all = true;
  json report = json::array();
  for (const Check& c : checks) {
    all = all && c.passed();
    char line[160];
    std::snprintf(line, sizeof line, "%-30s residual %-12.4e threshold %-10.1e %s", c.name.c_str(),
                  c.residual, c.threshold, c.passed() ? "PASS" : "FAIL");
    log << line << "\n";
    report.push_back({{"name", c.name}, {"residual", std::isfinite(c.residual) ? json(c.residual) : json("inf")}, {"threshold", c.threshold}, {"passed", c.passed()}});
  }
  json meta = base_metadata(cfg, seconds_since(t0));
  meta["checks"] = std::move(report);
  meta["passed"] = all;
  write_file(cfg.out, meta.dump(2) + "\n");
  log << (all ? "all checks passed" : "validation FAILED") << "\n";
  return all ? kSuccess : kValidationFailure;
}

int cmd_coeffs(const RunConfig& cfg, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const CouplerParams params = coupler_params(cfg);
  const WeiNormanOptions options = wn_options(cfg);
  const TwoModeBasis basis(1);
  const double period = params.loss.period();
  const SegmentedPropagator prop = propagator(params, period, basis, options);
  const std::vector<double> z = *cfg.samples == 1 ? std::vector<double>{0.0} : linspace(0.0, period, *cfg.samples);

  std::string csv = "segment,z";
  for (const char* name : {"f_plus", "f_zero", "f_minus", "a1", "a2", "a3", "a4", "a5", "a6"}) {
    csv += std::string(",") + name + "_re," + name + "_im";
  }
  csv += "\n";
  std::size_t seg = 0;
  for (double zi : z) {
    while (seg + 1 < prop.segments().size() && zi > prop.segments()[seg].z_end) ++seg;
    const double zb = prop.segments()[seg].z_begin;
    const double ze = std::min(zi, prop.segments()[seg].z_end);
    const Sl2Point f = sl2_from_fundamental(integrate_sl2_linear(params, zb, ze, options));
    const SolvablePoint a = integrate_solvable(params, zb, ze, options).final();
    csv += std::to_string(seg) + "," + format_double(zi);
    for (Complex c : {f.plus, f.zero, f.minus, a[0], a[1], a[2], a[3], a[4], a[5]}) {
      csv += "," + format_double(c.real()) + "," + format_double(c.imag());
    }
    csv += "\n";
  }
  json meta = base_metadata(cfg, seconds_since(t0));
  meta["loss_profile"] = profile_json(params.loss);
  json segs = json::array();
  for (const auto& s : prop.segments()) segs.push_back({s.z_begin, s.z_end});
  meta["segments"] = std::move(segs);
  meta["chart_bound"] = options.chart_bound;
  meta["note"] = "coefficients restart from zero at every segment start";
  emit(cfg, csv, meta, log);
  return kSuccess;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> kCommands = {"phase-diagram", "evolve", "reservoir", "validate",
                                                     "coeffs"};
  std::vector<std::string> args(argv + 1, argv + argc);

  RunConfig cfg;
  try {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (!config_path.empty()) {
      const auto sub = std::find_first_of(args.begin(), args.end(), kCommands.begin(), kCommands.end());
      if (sub != args.end()) {
        std::vector<std::string> from_file;
        for (const auto& [k, v] : read_config_file(config_path)) from_file.push_back("--" + k + "=" + v);
        // File values go first so that later command-line values win.
        args.insert(sub + 1, from_file.begin(), from_file.end());
      }
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }

  CLI::App app{"Floquet and Lindblad analysis of a two-waveguide coupler with periodically modulated loss",
               "ptfloquet"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  const auto shared = [&cfg](CLI::App* sub) {
    sub->add_option("--config", cfg.config_path, "key=value file; command-line flags override it");
    sub->add_option("--out", cfg.out, "output path (CSV; the JSON sidecar sits next to it)");
    sub->add_option_function<double>("--kappa", [&cfg](double v) { cfg.kappa = v; }, "waveguide coupling");
    sub->add_option_function<double>("--gamma-max", [&cfg](double v) { cfg.gamma_max = v; },
                                     "peak loss rate gamma-bar");
    sub->add_option_function<double>("--omega", [&cfg](double v) { cfg.omega = v; }, "modulation frequency");
    sub->add_option("--min-ratio", cfg.min_ratio, "gamma_min/gamma_max bound that fixes the sharpness");
    sub->add_option("--nmax", cfg.nmax, "photon-number truncation");
    sub->add_option("--tol", cfg.tol, "relative integrator tolerance");
    sub->add_option("--eps-split", cfg.eps_split, "Lyapunov splitting threshold (units of kappa)");
    sub->add_option("--jobs", cfg.jobs, "worker threads for the sweep (0 = all processors)");
  };

  auto* pd = app.add_subcommand("phase-diagram", "classify the PT phase on an (omega, gamma-bar) grid");
  shared(pd);
  pd->add_option("--omega-min", cfg.omega_min);
  pd->add_option("--omega-max", cfg.omega_max);
  pd->add_option("--n-omega", cfg.n_omega);
  pd->add_option("--gamma-min", cfg.gamma_min);
  pd->add_option("--gamma-lim", cfg.gamma_lim, "largest gamma-bar of the grid");
  pd->add_option("--n-gamma", cfg.n_gamma);
  pd->add_flag("--static", cfg.static_profile, "constant loss instead of the modulated profile");

  auto* ev = app.add_subcommand("evolve", "occupation trajectories P(n, h; z)");
  shared(ev);
  ev->add_option("--state", cfg.state, "superposition:n | fock:m,h | amplitudes:a0,a1,... (re or re:im)");
  ev->add_option_function<double>("--zmax", [&cfg](double v) { cfg.zmax = v; }, "propagation length");
  ev->add_option_function<int>("--samples", [&cfg](int v) { cfg.samples = v; }, "output rows");
  ev->add_flag("--static", cfg.static_profile);

  auto* rs = app.add_subcommand("reservoir", "waveguide-array realization of the loss");
  shared(rs);
  rs->add_option("--n-bath", cfg.n_bath, "bath waveguides");
  rs->add_option("--kappa-b", cfg.kappa_b, "intra-bath coupling");
  rs->add_option_function<double>("--zmax", [&cfg](double v) { cfg.zmax = v; }, "propagation length");
  rs->add_option("--dz", cfg.dz, "output spacing");

  auto* va = app.add_subcommand("validate", "oracle and invariant checks");
  shared(va);

  auto* co = app.add_subcommand("coeffs", "product-expansion coefficients over one period");
  shared(co);
  co->add_option_function<int>("--samples", [&cfg](int v) { cfg.samples = v; }, "output rows");
  co->add_flag("--static", cfg.static_profile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kSuccess;
    }
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }

  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  try {
    cfg.resolve_defaults();
    cfg.validate();
    if (cfg.command == "phase-diagram") return cmd_phase_diagram(cfg, out);
    if (cfg.command == "evolve") return cmd_evolve(cfg, out);
    if (cfg.command == "reservoir") return cmd_reservoir(cfg, out);
    if (cfg.command == "validate") return cmd_validate(cfg, out);
    return cmd_coeffs(cfg, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kValidationFailure;
  }
}

}  // namespace ptfloquet::cli
