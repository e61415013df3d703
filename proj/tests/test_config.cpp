#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "wt/config.hpp"
#include "wt/csvio.hpp"
#include "wt/experiments.hpp"

using namespace wt;

TEST_SUITE_BEGIN("config");

TEST_CASE("minimal config gets defaults") {
  const ExperimentConfig cfg =
      validate_config("[experiment]\nkind = onemode-pdf\n");
  CHECK(cfg.kind == "onemode-pdf");
  CHECK(cfg.seed == 1);
  CHECK(cfg.reproducible);
  CHECK(cfg.cells == 400);
  CHECK(cfg.epsilon == doctest::Approx(0.05));
}

TEST_CASE("unknown keys and sections are rejected by name") {
  try {
    validate_config("[experiment]\nkind = onemode-pdf\nfoo = 1\n");
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("foo") != std::string::npos);
  }
  CHECK_THROWS_AS(
      validate_config("[experiment]\nkind = onemode-pdf\n[nonsense]\nx = 1\n"),
      std::invalid_argument);
}

TEST_CASE("range violations name the bound") {
  try {
    validate_config(
        "[experiment]\nkind = onemode-pdf\n[system]\nepsilon = -1\n");
    FAIL("expected range error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("epsilon") != std::string::npos);
    CHECK(std::string(e.what()).find("range") != std::string::npos);
  }
}

TEST_CASE("Monte-Carlo experiments need a real ensemble") {
  CHECK_THROWS_AS(validate_config("[experiment]\nkind = mc-kinetic-3w\n"
                                  "[ensemble]\nR = 0\n"),
                  std::invalid_argument);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    validate_config("[experiment]\nkind = onemode-pdf\nbroken line\n");
    FAIL("expected parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(validate_config("[experiment]\nkind = onemode-pdf\nkind = "
                                  "onemode-pdf\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_config("x = 1\n"), std::invalid_argument);
}

TEST_CASE("unknown experiment kind is rejected") {
  CHECK_THROWS_AS(validate_config("[experiment]\nkind = frobnicate\n"),
                  std::invalid_argument);
}

TEST_CASE("csv values round-trip at 17 significant digits") {
  const double values[] = {1.0 / 3.0, 6.02214076e23, -2.5e-300, pi};
  for (double v : values) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("csv writer emits header and schema sidecar") {
  const auto dir = std::filesystem::temp_directory_path() / "wt_csv_test";
  std::filesystem::remove_all(dir);
  {
    CsvWriter csv(dir / "t.csv", {{"a", "1/time"}, {"b", ""}});
    csv.row({1.0, 2.0});
    csv.close();
  }
  std::ifstream in(dir / "t.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "a,b");
  CHECK(std::filesystem::exists(dir / "t.csv.schema.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("module csv emitters") {
  const auto dir = std::filesystem::temp_directory_path() / "wt_emit_test";
  std::filesystem::remove_all(dir);
  const FourierLattice lat = build_lattice(1, 4, 2.0 * pi);
  const AmplitudeLaw law = AmplitudeLaw::rayleigh_law(ArrayXd::Constant(4, 1.0));
  Ensemble ens;
  for (int r = 0; r < 200; ++r)
    ens.push_back(generate_rpa_field(lat, law, 3, r).a);
  write_ensemble_stats_csv(dir / "stats.csv", estimate_moments(ens, 3));
  const ArrayXd edges = ArrayXd::LinSpaced(9, 0.0, 8.0);
  write_histogram_csv(dir / "hist.csv", estimate_one_mode_pdf(ens, 1, edges));
  Trajectory traj;
  traj.times = {0.0, 0.5};
  traj.states = {ens[0], ens[1]};
  write_trajectory_csv(dir / "traj.csv", traj);
  for (const char* f : {"stats.csv", "hist.csv", "traj.csv"}) {
    CHECK(std::filesystem::exists(dir / f));
    CHECK(std::filesystem::exists(dir / (std::string(f) + ".schema.json")));
  }
  std::ifstream in(dir / "traj.csv");
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 1 + 2 * 4);
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiment runs are deterministic across worker counts") {
  const std::string base =
      "[experiment]\nkind = mc-kinetic-3w\nseed = 5\n"
      "[lattice]\nn_side = 32\nL = 25.132741228718345\n"
      "[system]\nkind = capillary\nepsilon = 0.05\n"
      "[ensemble]\nR = 12\n"
      "[spectrum]\nkind = gauss-bump\nn0 = 0.5\nk0 = 1.0\nkwidth = 0.5\n"
      "[time]\nT = 4.0\n";
  const auto dir = std::filesystem::temp_directory_path() / "wt_det_test";
  std::filesystem::remove_all(dir);

  auto run_with = [&](int workers, const std::string& sub) {
    ExperimentConfig cfg = validate_config(base);
    cfg.workers = workers;
    cfg.output_dir = (dir / sub).string();
    run_experiment(cfg);
    std::ifstream in(dir / sub / "rates.csv", std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string one = run_with(1, "w1");
  const std::string two = run_with(2, "w2");
  CHECK(one == two);
  CHECK(!one.empty());
  std::filesystem::remove_all(dir);
}

TEST_CASE("canonical config hashing is stable") {
  const ExperimentConfig a =
      validate_config("[experiment]\nkind = onemode-pdf\n");
  const ExperimentConfig b =
      validate_config("[experiment]\nkind = onemode-pdf\nseed = 1\n");
  CHECK(fnv1a_hex(canonical_config(a)) == fnv1a_hex(canonical_config(b)));
  const ExperimentConfig c =
      validate_config("[experiment]\nkind = onemode-pdf\nseed = 2\n");
  CHECK(fnv1a_hex(canonical_config(a)) != fnv1a_hex(canonical_config(c)));
}

TEST_SUITE_END();
