#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "tdse/errors.hpp"
#include "tdse/runner.hpp"

namespace fs = std::filesystem;

namespace {

/// Fresh, empty directory under the system temp dir.
fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("tdse_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::string* header = nullptr) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

const char* kSmallScattering = R"(
[grid]
x_min = -12
x_max = 12
dx = 0.05
[time]
dt = 0.01
steps = 300
[mode]
type = transparent_source
k = 2.4
x_source = -6
[potential]
type = square_barrier
v0 = 5
a = -1
b = 1
[absorber_right]
c = 0.1
x_i = 6
[absorber_left]
c = 0.1
x_i = -8
[output]
snapshot_stride = 100
probes = -7, 3
)";

}  // namespace

TEST_CASE("numbers are written with 17 significant digits and round-trip") {
  CHECK(tdse::format_number(0.1) == "0.10000000000000001");
  CHECK(tdse::format_number(1.0) == "1");
  CHECK(tdse::format_number(-2.5e-300) == "-2.5e-300");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(tdse::format_number(v)) == v);
  }
}

TEST_CASE("file names") {
  CHECK(tdse::snapshot_filename(0) == "snap_0.csv");
  CHECK(tdse::snapshot_filename(2000) == "snap_2000.csv");
  CHECK(tdse::probe_filename(-20.0) == "current_x-20.csv");
  CHECK(tdse::probe_filename(10.0) == "current_x10.csv");
  CHECK(tdse::probe_filename(2.5) == "current_x2.5.csv");
}

TEST_CASE("run_scenario writes snapshots, probe currents and a manifest") {
  const auto dir = scratch_dir("run");
  const auto sc = tdse::parse_config(kSmallScattering);
  const auto report = tdse::run_scenario(sc, dir);
  CHECK(report.exit_code == tdse::kExitOk);
  for (const char* f : {"snap_0.csv", "snap_100.csv", "snap_200.csv", "snap_300.csv", "current_x-7.csv",
                        "current_x3.csv", "run_manifest.json"}) {
    CAPTURE(f);
    CHECK(fs::exists(dir / f));
  }

  std::string header;
  const auto snap = read_csv(dir / "snap_100.csv", &header);
  CHECK(header == "t,x,re,im,density,v_re,v_im");
  REQUIRE(snap.size() == sc.grid.n_points());
  bool density_ok = true;
  for (const auto& row : snap) {
    REQUIRE(row.size() == 7);
    const double d = row[2] * row[2] + row[3] * row[3];
    density_ok = density_ok && std::abs(row[4] - d) <= 1e-15 * std::max(d, 1e-300);
  }
  CHECK(density_ok);
  CHECK(snap[0][0] == 1.0);
  CHECK(snap[0][1] == -12.0);
  CHECK(snap.back()[6] == doctest::Approx(-0.1 * 36.0));  // absorber at x = 12

  const auto probe = read_csv(dir / "current_x3.csv", &header);
  CHECK(header == "t,j_probe");
  CHECK(probe.size() == 301);
  CHECK(probe.back()[0] == 3.0);

  const auto manifest = nlohmann::json::parse(slurp(dir / "run_manifest.json"));
  CHECK(manifest["status"] == "ok");
  CHECK(manifest["exit_code"] == 0);
  CHECK(manifest["steps_completed"] == 300);
  CHECK(manifest["failed_step"].is_null());
  CHECK(manifest["scenario"]["mode"]["type"] == "transparent_source");
  fs::remove_all(dir);
}

TEST_CASE("re-running a scenario reproduces the files byte for byte") {
  const auto a = scratch_dir("det_a");
  const auto b = scratch_dir("det_b");
  const auto sc = tdse::parse_config(kSmallScattering);
  tdse::run_scenario(sc, a);
  tdse::run_scenario(sc, b);
  for (const char* f : {"snap_300.csv", "current_x3.csv", "current_x-7.csv"}) {
    CAPTURE(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("zero-step run writes only the initial snapshot") {
  const auto dir = scratch_dir("zero");
  std::string text = kSmallScattering;
  text.replace(text.find("steps = 300"), 11, "steps = 0");
  const auto report = tdse::run_scenario(tdse::parse_config(text), dir);
  CHECK(report.exit_code == 0);
  std::size_t snaps = 0;
  for (const auto& e : fs::directory_iterator(dir)) snaps += e.path().filename().string().rfind("snap_", 0) == 0;
  CHECK(snaps == 1);
  CHECK(fs::exists(dir / "snap_0.csv"));
  CHECK(read_csv(dir / "current_x3.csv").size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("a final snapshot is written when steps is not a multiple of the stride") {
  const auto dir = scratch_dir("tail");
  std::string text = kSmallScattering;
  text.replace(text.find("steps = 300"), 11, "steps = 150");
  tdse::run_scenario(tdse::parse_config(text), dir);
  CHECK(fs::exists(dir / "snap_100.csv"));
  CHECK(fs::exists(dir / "snap_150.csv"));
  fs::remove_all(dir);
}

TEST_CASE("numeric failure gives exit code 2 and the failing step") {
  const auto dir = scratch_dir("fail");
  std::string text = kSmallScattering;
  text.replace(text.find("v0 = 5"), 6, "v0 = 1e308");
  const auto report = tdse::run_scenario(tdse::parse_config(text), dir);
  CHECK(report.exit_code == tdse::kExitNumeric);
  REQUIRE(report.failed_step.has_value());
  CHECK(*report.failed_step == 1);
  const auto manifest = nlohmann::json::parse(slurp(dir / "run_manifest.json"));
  CHECK(manifest["status"] == "numeric_failure");
  CHECK(manifest["exit_code"] == 2);
  CHECK(manifest["failed_step"] == 1);
  fs::remove_all(dir);
}

TEST_CASE("wavefront scenario snapshots") {
  const auto dir = scratch_dir("fig1");
  const auto sc = tdse::load_config(fs::path(TDSE_CONFIG_DIR) / "fig1_wavefront.ini");
  tdse::run_scenario(sc, dir);
  for (std::size_t step : {0u, 250u, 500u, 2000u}) CHECK(fs::exists(dir / tdse::snapshot_filename(step)));

  // t = 5: half-density crossing near x_g + 2kt = 14
  const auto snap = read_csv(dir / "snap_500.csv");
  double front = 0.0;
  for (std::size_t j = snap.size() - 2; j > 0; --j) {
    if (snap[j][4] >= 0.5) {
      front = snap[j][1] + 0.05 * (snap[j][4] - 0.5) / (snap[j][4] - snap[j + 1][4]);
      break;
    }
  }
  CHECK(std::abs(front - 14.0) <= 0.05 * 14.0);
  fs::remove_all(dir);
}

TEST_CASE("scattering probes") {
  const auto sc = tdse::parse_config(kSmallScattering);
  const auto p = tdse::scattering_probes(sc);
  CHECK(sc.grid.position(p.reflected) == doctest::Approx(-7.0));
  CHECK(sc.grid.position(p.transmitted) == doctest::Approx(3.0));

  std::string one_sided = kSmallScattering;
  one_sided.replace(one_sided.find("probes = -7, 3"), 14, "probes = 3, 4");
  CHECK_THROWS_AS(tdse::scattering_probes(tdse::parse_config(one_sided)), tdse::ConfigError);
}

TEST_CASE("sweep records are sorted and agree with the analytic values") {
  auto sc = tdse::load_config(fs::path(TDSE_CONFIG_DIR) / "fig3_sweep.ini");
  sc.time.n_steps = 2000;
  const std::vector<double> ks = {2.4, 1.0};
  tdse::SweepOptions opts;
  opts.threads = 2;
  const auto records = tdse::run_sweep(sc, ks, opts);
  REQUIRE(records.size() == 2);
  CHECK(records[0].k == 1.0);
  CHECK(records[1].k == 2.4);
  CHECK(records[0].T_num <= 0.01);
  CHECK(records[0].T_ana == doctest::Approx(8.5862293069851148e-4));
  CHECK(std::abs(records[1].T_num - 0.4191) <= 0.02);
  CHECK_FALSE(records[1].failed);
  CHECK(records[1].steady_time.has_value());

  CHECK(tdse::run_sweep(sc, std::vector<double>{}).empty());
}

TEST_CASE("sweep preconditions") {
  std::string hard = kSmallScattering;
  hard.replace(hard.find("transparent_source"), 18, "hard_source");
  hard.replace(hard.find("[absorber_left]\nc = 0.1\nx_i = -8\n"), 32, "");
  const std::vector<double> ks = {1.0};
  CHECK_THROWS_AS(tdse::run_sweep(tdse::parse_config(hard), ks), tdse::ConfigError);

  std::string osc = kSmallScattering;
  osc.replace(osc.find("square_barrier"), 14, "oscillating_barrier\nalpha = 0.5\nnu = 1");
  CHECK_THROWS_AS(tdse::run_sweep(tdse::parse_config(osc), ks), tdse::ConfigError);

  const std::vector<double> bad = {-1.0};
  CHECK_THROWS_AS(tdse::run_sweep(tdse::parse_config(kSmallScattering), bad), tdse::ConfigError);
}

TEST_CASE("sweep CSV") {
  const auto dir = scratch_dir("sweepcsv");
  std::vector<tdse::ScatteringRecord> recs(2);
  recs[0].k = 0.5;
  recs[0].T_num = 0.25;
  recs[0].R_num = 0.75;
  recs[0].T_ana = 0.2;
  recs[0].R_ana = 0.8;
  recs[0].steady_time = 12.0;
  recs[1].k = 0.7;
  recs[1].failed = true;
  recs[1].T_num = recs[1].R_num = std::numeric_limits<double>::quiet_NaN();
  tdse::write_sweep_csv(dir / "sweep.csv", recs);
  CHECK(slurp(dir / "sweep.csv") ==
        "k,T_num,R_num,T_ana,R_ana,steady_time\n"
        "0.5,0.25,0.75,0.20000000000000001,0.80000000000000004,12\n"
        "0.69999999999999996,nan,nan,0,0,nan\n");
  fs::remove_all(dir);
}

TEST_CASE("k_grid") {
  const auto ks = tdse::k_grid(0.6, 3.2, 0.2);
  REQUIRE(ks.size() == 14);
  CHECK(ks.front() == 0.6);
  CHECK(ks[3] == 1.2);
  CHECK(ks.back() == 3.2);
  CHECK(tdse::k_grid(1.0, 0.5, 0.1).empty());
  CHECK(tdse::k_grid(1.0, 1.0, 0.1) == std::vector<double>{1.0});
  CHECK_THROWS_AS(tdse::k_grid(0.0, 1.0, 0.0), tdse::ConfigError);
}
