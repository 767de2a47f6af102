#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"

namespace fs = std::filesystem;
using namespace ptfloquet::cli;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "ptfloquet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ptfloquet_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(sidecar_path("a/b.csv") == "a/b.json");
}

TEST_CASE("phase-diagram grid output") {
  const fs::path csv = scratch("pd.csv");
  const std::vector<std::string> args = {"phase-diagram", "--omega-min", "1.5", "--omega-max", "2",
                                         "--n-omega", "2", "--gamma-min", "0.25", "--gamma-lim", "0.5",
                                         "--n-gamma", "2", "--out", csv.string()};
  REQUIRE(invoke(args).code == kSuccess);
  const auto rows = lines(csv);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "omega_over_kappa,gammabar_over_kappa,classification,splitting");
  CHECK(split(rows[1])[2] == "Symmetric");
  CHECK(split(rows[3])[2] == "Broken");
  CHECK(slurp(csv).find('\r') == std::string::npos);

  const auto meta = nlohmann::json::parse(slurp(sidecar_path(csv.string())));
  CHECK(meta.contains("config"));
  CHECK(meta["config"]["n_omega"] == 2);

  const std::string first = slurp(csv);
  REQUIRE(invoke(args).code == kSuccess);
  CHECK(slurp(csv) == first);
}

TEST_CASE("evolve output") {
  const fs::path csv = scratch("ev.csv");
  REQUIRE(invoke({"evolve", "--zmax", "0", "--samples", "1", "--out", csv.string()}).code == kSuccess);
  auto rows = lines(csv);
  REQUIRE(rows.size() == 2);
  const auto header = split(rows[0]);
  CHECK(header.front() == "z");
  CHECK(header.back() == "trace");
  CHECK(header.size() == 12);
  const auto row = split(rows[1]);
  CHECK(std::stod(row.back()) == doctest::Approx(1.0));

  REQUIRE(invoke({"evolve", "--zmax", "4", "--samples", "5", "--out", csv.string()}).code == kSuccess);
  rows = lines(csv);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split(rows[i]);
    double sum = 0.0;
    for (std::size_t k = 1; k + 1 < cells.size(); ++k) sum += std::stod(cells[k]);
    CHECK(sum == doctest::Approx(std::stod(cells.back())).epsilon(1e-8));
  }
}

TEST_CASE("reservoir output") {
  const fs::path csv = scratch("rs.csv");
  REQUIRE(invoke({"reservoir", "--n-bath", "60", "--zmax", "20", "--out", csv.string()}).code == kSuccess);
  const auto rows = lines(csv);
  REQUIRE(rows.size() > 2);
  CHECK(rows[0] == "z,system_population,analytic_decay,relative_deviation");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto c = split(rows[i]);
    const double sim = std::stod(c[1]), ana = std::stod(c[2]), dev = std::stod(c[3]);
    CHECK(dev == doctest::Approx(std::abs(sim - ana) / ana));
  }
}

TEST_CASE("validate and its negative control") {
  const fs::path json = scratch("validate.json");
  const Invocation ok = invoke({"validate", "--omega", "1.5", "--out", json.string()});
  CHECK(ok.code == kSuccess);
  CHECK(ok.out.find("commutator_table") != std::string::npos);
  CHECK(ok.out.find("sum_rule") != std::string::npos);
  CHECK(nlohmann::json::parse(slurp(json)).contains("checks"));

  const Invocation bad = invoke({"validate", "--omega", "1.5", "--tol", "1e-2", "--out", json.string()});
  CHECK(bad.code == kValidationFailure);
  CHECK(bad.out.find("FAIL") != std::string::npos);
}

TEST_CASE("input and io errors") {
  CHECK(invoke({"evolve", "--state", "nonsense", "--out", scratch("x.csv").string()}).code == kBadInput);
  CHECK(invoke({"evolve", "--kappa", "-1", "--out", scratch("x.csv").string()}).code == kBadInput);
  CHECK(invoke({"phase-diagram", "--n-gamma", "1", "--out", scratch("x.csv").string()}).code == kBadInput);
  CHECK(invoke({"no-such-command"}).code == kBadInput);
  CHECK(invoke({"evolve", "--zmax", "0", "--samples", "1", "--out", "/nonexistent_dir/x/out.csv"}).code == kIoError);
  CHECK(invoke({"evolve", "--config", "/nonexistent_dir/cfg.txt"}).code == kIoError);
}

TEST_CASE("config file merges under command-line flags") {
  const fs::path cfg = scratch("run.cfg");
  {
    std::ofstream f(cfg);
    f << "# evolve settings\n\nzmax = 0\nsamples=1\nnmax = 2\nstate = fock:1,0\n";
  }
  const fs::path csv = scratch("cfg.csv");
  REQUIRE(invoke({"evolve", "--config", cfg.string(), "--out", csv.string()}).code == kSuccess);
  CHECK(split(lines(csv)[0]).size() == 8);

  REQUIRE(invoke({"evolve", "--config", cfg.string(), "--nmax", "3", "--out", csv.string()}).code == kSuccess);
  CHECK(split(lines(csv)[0]).size() == 12);

  {
    std::ofstream f(cfg);
    f << "this line has no separator\n";
  }
  CHECK(invoke({"evolve", "--config", cfg.string(), "--out", csv.string()}).code == kBadInput);
}
