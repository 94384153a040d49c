// uccap — capability decision-risk toolkit.
//
//   uccap analyze|train|simulate|evaluate|decide
//         --config <json> [--data <csv>] [--model <json>] [--out <dir>] [--seed <int>]
//
// Every subcommand is deterministic for a fixed seed and inputs; the
// UCCAP_SEED environment variable overrides the configured seed.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "uccap/errors.hpp"
#include "uccap/pipeline.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string data_path;
  std::string model_path;
  std::string out_dir = ".";
  std::optional<std::int64_t> seed;
};

uccap::RunConfig resolve_config(const CommonArgs& args) {
  uccap::RunConfig cfg =
      args.config_path.empty() ? uccap::RunConfig{} : uccap::load_run_config(args.config_path);
  if (args.seed) {
    cfg.seed = static_cast<std::uint64_t>(*args.seed);
  }
  if (const char* env = std::getenv("UCCAP_SEED")) {
    cfg.seed = static_cast<std::uint64_t>(std::stoll(env));
  }
  cfg.sim.seed = cfg.seed;
  return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_data) {
  cmd->add_option("--config", args.config_path, "run configuration JSON");
  auto* data = cmd->add_option("--data", args.data_path, "measurement CSV");
  if (needs_data) data->required();
  cmd->add_option("--model", args.model_path, "model JSON");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "seed override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uccap: finite-sample capability decision risk"};
  app.require_subcommand(1);

  CommonArgs args;
  auto* analyze = app.add_subcommand("analyze", "per-dimension capability risk report");
  add_common(analyze, args, true);
  auto* train = app.add_subcommand("train", "fit the residual risk model");
  add_common(train, args, true);
  auto* simulate = app.add_subcommand("simulate", "nested Monte Carlo oracle study");
  add_common(simulate, args, false);
  auto* evaluate = app.add_subcommand("evaluate", "calibration report / leak-free protocol");
  add_common(evaluate, args, true);
  auto* decide = app.add_subcommand("decide", "threshold decisions from an analysis report");
  add_common(decide, args, true);

  CLI11_PARSE(app, argc, argv);

  try {
    const uccap::RunConfig cfg = resolve_config(args);
    const std::optional<std::string> model =
        args.model_path.empty() ? std::nullopt : std::make_optional(args.model_path);

    if (analyze->parsed()) {
      std::cout << uccap::cmd_analyze(cfg, args.data_path, model, args.out_dir) << "\n";
    } else if (train->parsed()) {
      const auto out = uccap::cmd_train(cfg, args.data_path, args.out_dir);
      std::cout << out.model_path << "\n" << out.log_path << "\n";
    } else if (simulate->parsed()) {
      const auto out = uccap::cmd_simulate(cfg, args.out_dir);
      std::cout << out.records_path << "\n" << out.metrics_path << "\n";
    } else if (evaluate->parsed()) {
      const auto out = uccap::cmd_evaluate(cfg, args.data_path, model, args.out_dir);
      std::cout << out.report_path << "\n";
    } else if (decide->parsed()) {
      std::cout << uccap::cmd_decide(cfg, args.data_path, args.out_dir) << "\n";
    }
  } catch (const uccap::Error& e) {
    nlohmann::json err;
    err["error"] = uccap::error_code_name(e.code());
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = "Unexpected";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  }
  return 0;
}
