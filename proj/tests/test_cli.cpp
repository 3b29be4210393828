#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "mde/cli.hpp"
#include "mde/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result mdelab(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = mde::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string preset_path(const std::string& name) {
  return std::string(MDE_PRESET_DIR) + "/" + name + ".cfg";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mdelab_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("metrics on two Dirac masses prints 1") {
  const auto dir = scratch("metrics");
  mde::io::save_measure(dir / "a.csv", mde::DiscreteMeasure::dirac({0.0}));
  mde::io::save_measure(dir / "b.json", mde::DiscreteMeasure::dirac({1.0}));
  const auto r = mdelab({"metrics", (dir / "a.csv").string(), (dir / "b.json").string(), "--plan",
                         (dir / "plan.csv").string()});
  CHECK(r.code == 0);
  CHECK(r.out == "flat_distance 1\nwasserstein1 1\n");
  CHECK(slurp(dir / "plan.csv") == "i,j,mass,cost\n0,0,1,1\n");
}

TEST_CASE("solve on the growth preset: mass column is exponential") {
  const auto dir = scratch("solve");
  const auto r = mdelab({"solve", "--config", preset_path("growth"), "--out", dir.string()});
  CHECK(r.code == 0);
  std::istringstream csv(slurp(dir / "diagnostics.csv"));
  std::string row;
  std::getline(csv, row);
  CHECK(row == "t,mass,support_radius,atom_count");
  const double m0 = 1.0;  // both initial atoms sit on the lattice
  int rows = 0;
  while (std::getline(csv, row)) {
    double t = 0.0;
    double mass = 0.0;
    char comma = 0;
    std::istringstream fields(row);
    fields >> t >> comma >> mass;
    CHECK(mass == doctest::Approx(std::exp(0.7 * t) * m0).epsilon(1e-12));
    ++rows;
  }
  CHECK(rows == 9);
  CHECK(fs::exists(dir / "trajectory.csv"));
  CHECK(fs::exists(dir / "run.cfg"));
}

TEST_CASE("identical config and seed give byte-identical CSVs") {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  for (const auto& cmd : {"solve", "certify", "residual", "converge"}) {
    mdelab({cmd, "--config", preset_path("lipschitz"), "--out", a.string(), "--seed", "9"});
    mdelab({cmd, "--config", preset_path("lipschitz"), "--out", b.string(), "--seed", "9"});
  }
  for (const auto& file : {"trajectory.csv", "diagnostics.csv", "certify.csv", "residual.csv",
                           "convergence.csv"}) {
    CAPTURE(file);
    CHECK(!slurp(a / file).empty());
    CHECK(slurp(a / file) == slurp(b / file));
  }
}

TEST_CASE("certify fails on the broken-marginal control and names the deficit") {
  const auto dir = scratch("broken");
  const auto r = mdelab({"certify", "--config", preset_path("broken_marginal"), "--out", dir.string()});
  CHECK(r.code == mde::cli::kAssertionFailed);
  CHECK(r.out.find("FAIL  marginal_mu") != std::string::npos);
  CHECK(r.err.find("mass deficit") != std::string::npos);
  CHECK(fs::exists(dir / "witnesses.json"));
}

TEST_CASE("every preset passes certify and residual at N = 8") {
  for (const char* name : testing::kPresets) {
    CAPTURE(name);
    const auto dir = scratch(std::string("preset_") + name);
    CHECK(mdelab({"certify", "--config", preset_path(name), "--out", dir.string()}).code == 0);
    CHECK(mdelab({"residual", "--config", preset_path(name), "--out", dir.string(), "--n-list", "8"})
              .code == 0);
  }
}

TEST_CASE("continuity on the Lipschitz preset writes both tables") {
  const auto dir = scratch("continuity");
  const auto r = mdelab({"continuity", "--config", preset_path("lipschitz"), "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(slurp(dir / "continuity.csv").rfind("t,ratio,bound\n", 0) == 0);
  CHECK(fs::exists(dir / "continuity_check.csv"));
}

TEST_CASE("config errors and usage errors exit 2") {
  const auto dir = scratch("errors");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "bad.cfg");
    cfg << "mvf.kind = affine_field\nmvf.C_S = 1\ninitial.atoms = 0:1\nnumerics.n = zero\n";
  }
  auto r = mdelab({"solve", "--config", (dir / "bad.cfg").string()});
  CHECK(r.code == mde::cli::kUsageOrConfig);
  CHECK(r.err.find("bad.cfg:4:") != std::string::npos);
  CHECK(mdelab({"solve"}).code == mde::cli::kUsageOrConfig);
  CHECK(mdelab({"frobnicate"}).code == mde::cli::kUsageOrConfig);
  CHECK(mdelab({"--help"}).code == 0);
}

TEST_CASE("leaving the lattice reports a suggested N") {
  const auto dir = scratch("outside");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "fast.cfg");
    cfg << "scenario.horizon = 2\nmvf.kind = affine_field\nmvf.offset = 1\nmvf.C_S = 1\n"
           "initial.atoms = 1:1\n";
  }
  const auto r = mdelab({"solve", "--config", (dir / "fast.cfg").string(), "--n", "1", "--out",
                         dir.string()});
  CHECK(r.code == mde::cli::kOutsideMesh);
  CHECK(r.err.find("suggest N >=") != std::string::npos);
}

}  // TEST_SUITE
