// tdse1d: command-line driver.
//
//   tdse1d run <config> [--out DIR]
//   tdse1d sweep <config> --k-from F --k-to T --k-step S [--out DIR] [--threads N]
//   tdse1d validate <config>
//
// Exit codes: 0 success, 1 configuration error, 2 numeric failure.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tdse/errors.hpp"
#include "tdse/runner.hpp"
#include "tdse/scenario.hpp"

namespace {

int cmd_run(const std::string& config, const std::string& out) {
  const tdse::Scenario scenario = tdse::load_config(config);
  const auto report = tdse::run_scenario(scenario, out);
  if (report.exit_code != tdse::kExitOk) {
    std::cerr << "tdse1d: numeric failure at step " << report.failed_step.value_or(0) << ": " << report.error
              << '\n';
    return report.exit_code;
  }
  std::cout << "wrote " << report.files.size() << " files to "
            << (out.empty() ? scenario.output_dir : std::filesystem::path(out)).string() << '\n';
  return tdse::kExitOk;
}

int cmd_sweep(const std::string& config, double from, double to, double step, const std::string& out,
              unsigned threads) {
  const tdse::Scenario scenario = tdse::load_config(config);
  const auto ks = tdse::k_grid(from, to, step);
  tdse::SweepOptions options;
  options.threads = threads;
  const auto records = tdse::run_sweep(scenario, ks, options);

  const std::filesystem::path dir = out.empty() ? scenario.output_dir : std::filesystem::path(out);
  std::filesystem::create_directories(dir);
  tdse::write_sweep_csv(dir / "sweep.csv", records);

  int code = tdse::kExitOk;
  nlohmann::ordered_json failed = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    std::printf("k=%-6g T_num=%-10.6f R_num=%-10.6f T_ana=%-10.6f %s\n", r.k, r.T_num, r.R_num, r.T_ana,
                r.failed ? ("FAILED: " + r.error).c_str() : "");
    if (r.failed) {
      code = tdse::kExitNumeric;
      failed.push_back({{"k", r.k}, {"error", r.error}});
    }
  }
  nlohmann::ordered_json manifest = {
      {"command", "sweep"},
      {"config", config},
      {"k_values", ks},
      {"status", code == tdse::kExitOk ? "ok" : "numeric_failure"},
      {"exit_code", code},
      {"failed", failed},
      {"files", {"sweep.csv"}},
  };
  std::ofstream(dir / "run_manifest.json") << manifest.dump(2) << '\n';
  return code;
}

int cmd_validate(const std::string& config) {
  const tdse::Scenario scenario = tdse::load_config(config);
  std::cout << config << ": ok (" << scenario.grid.n_points() << " points, " << scenario.time.n_steps
            << " steps)\n";
  return tdse::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D time-dependent Schroedinger equation solver (Crank-Nicolson)"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  double k_from = 0.0, k_to = 0.0, k_step = 0.0;
  unsigned threads = 0;

  auto* run = app.add_subcommand("run", "Run a scenario and write snapshots, probe currents and a manifest");
  run->add_option("config", config, "Scenario file")->required();
  run->add_option("--out", out, "Output directory (overrides [output] dir)");

  auto* sweep = app.add_subcommand("sweep", "Transmission/reflection sweep over the incident wavevector");
  sweep->add_option("config", config, "Scenario file")->required();
  sweep->add_option("--k-from", k_from, "First k")->required();
  sweep->add_option("--k-to", k_to, "Last k (inclusive)")->required();
  sweep->add_option("--k-step", k_step, "Step in k")->required();
  sweep->add_option("--out", out, "Output directory (overrides [output] dir)");
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* validate = app.add_subcommand("validate", "Parse and check a scenario file");
  validate->add_option("config", config, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tdse::kExitConfig;
  }

  try {
    if (*run) return cmd_run(config, out);
    if (*sweep) return cmd_sweep(config, k_from, k_to, k_step, out, threads);
    return cmd_validate(config);
  } catch (const tdse::ConfigError& e) {
    std::cerr << "tdse1d: configuration error: " << e.what() << '\n';
    return tdse::kExitConfig;
  } catch (const tdse::NumericError& e) {
    std::cerr << "tdse1d: numeric failure: " << e.what() << '\n';
    return tdse::kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "tdse1d: " << e.what() << '\n';
    return tdse::kExitConfig;
  }
}
