#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chemoflow/errors.hpp"
#include "chemoflow/experiment.hpp"

using namespace chemoflow;

namespace {

std::string default_out_root() {
  if (const char* env = std::getenv("CHEMOFLOW_OUT_ROOT")) return env;
  return ".";
}

std::string resolve_out(const std::string& flag_value, const Config& cfg,
                        const std::string& fallback_name) {
  if (!flag_value.empty()) return flag_value;
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  return default_out_root() + "/" + fallback_name;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-species chemotaxis-fluid simulator with decay-rate verification"};
  app.require_subcommand(1);

  std::string config_path, out_flag;
  std::vector<double> a1_list, a2_list;
  int jobs = 1;

  auto* run_cmd = app.add_subcommand("run", "run one experiment and write series + verdicts");
  run_cmd->add_option("--config", config_path, "JSON config file")->required();
  run_cmd->add_option("--out", out_flag, "output directory");

  auto* sweep_cmd = app.add_subcommand("sweep", "run a cartesian sweep over (a1, a2)");
  sweep_cmd->add_option("--config", config_path, "JSON config file")->required();
  sweep_cmd->add_option("--a1", a1_list, "a1 values")->required()->delimiter(',');
  sweep_cmd->add_option("--a2", a2_list, "a2 values")->required()->delimiter(',');
  sweep_cmd->add_option("--jobs", jobs, "parallel workers")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", out_flag, "output directory");

  auto* rates_cmd = app.add_subcommand("rates", "print the closed-form rate constants");
  rates_cmd->add_option("--config", config_path, "JSON config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const Config cfg = parse_config_file(config_path);

    if (run_cmd->parsed()) {
      const std::string out = resolve_out(out_flag, cfg, "chemoflow_out");
      const RunArtifacts art = run_experiment(cfg, out);
      std::printf("status: %s\n", art.summary.value("status", "?").c_str());
      std::printf("wrote %s, %s, %s\n", art.csv_path.c_str(), art.json_path.c_str(),
                  art.plot_path.c_str());
      return art.exit_code;
    }

    if (sweep_cmd->parsed()) {
      const std::string out = resolve_out(out_flag, cfg, "chemoflow_sweep");
      const nlohmann::json agg = sweep(cfg, a1_list, a2_list, jobs, out);
      std::printf("%zu points -> %s/sweep.json\n", agg["points"].size(), out.c_str());
      for (const auto& p : agg["points"]) {
        std::printf("  a1=%-6g a2=%-6g %-16s %s\n", p["a1"].get<double>(), p["a2"].get<double>(),
                    p.value("regime", "?").c_str(), p.value("status", "?").c_str());
      }
      return 0;
    }

    // rates: constants only, no simulation.
    const Regime regime = classify_regime(cfg.params.a1, cfg.params.a2);
    if (regime == Regime::Unsupported) {
      std::fprintf(stderr, "unsupported regime: a1=%g a2=%g\n", cfg.params.a1, cfg.params.a2);
      return kExitUnsupported;
    }
    const RateConstants rc = rate_constants(cfg.params, regime, cfg.domain, 2, cfg.rates.eps);
    std::printf("%s\n", rate_constants_json(rc).dump(2).c_str());
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailedChecks;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return kExitFailedChecks;
  }
}
