// grace: dataset generation, training, robustness sweeps, hyperparameter
// sweeps and spectral/convergence audits for the entangled-graph detector.
//
//   grace gen-data    --config cfg.json --out out/
//   grace train       --manifest out/manifest.json --out out/ [--resume ckpt]
//   grace sweep       --manifest ... --checkpoint ... --out out/
//   grace hyper-sweep --axis alpha --values 1e-7,1e-6,1e-5 --out out/
//   grace audit       [--checkpoint ckpt] --out out/
//
// Reports are CSV/JSON, deterministic in the seed; exit code 0 on success,
// nonzero with a JSON error object on stderr otherwise.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "grace/harness/config.hpp"
#include "grace/harness/experiment.hpp"
#include "grace/harness/io.hpp"
#include "grace/kernels.hpp"

namespace {

using grace::harness::ExperimentConfig;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::vector<double> mask_ratios;
  std::string mask_mode;
  std::vector<std::string> ablate;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config JSON");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "master seed override")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_option("--m-r", args.mask_ratios,
                  "evaluation masking ratios (comma separated)")
      ->delimiter(',');
  cmd->add_option("--mask-mode", args.mask_mode,
                  "restrict evaluation to one mask mode (background|black)");
  cmd->add_option("--ablate", args.ablate,
                  "components to disable: glspr, sc, or gcn for both")
      ->delimiter(',');
}

ExperimentConfig resolve_config(const CommonArgs& args) {
  ExperimentConfig cfg = args.config_path.empty()
                             ? ExperimentConfig::desk_default()
                             : grace::harness::load_config_file(args.config_path);
  if (args.seed_set) cfg.set_master_seed(args.seed);
  if (!args.mask_ratios.empty()) cfg.eval.mask_ratios = args.mask_ratios;
  if (!args.mask_mode.empty())
    cfg.eval.mask_modes = {grace::mask_mode_from_name(args.mask_mode)};
  for (const std::string& component : args.ablate) {
    if (component == "glspr") {
      cfg.model.glspr = false;
    } else if (component == "sc") {
      cfg.model.sparsity_constraint = false;
    } else if (component == "gcn") {
      cfg.model.glspr = false;
      cfg.model.sparsity_constraint = false;
    } else {
      throw CLI::ValidationError("--ablate",
                                 "unknown component '" + component + "'");
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entangled-graph detector experiment harness"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string manifest_path, checkpoint_path, resume_path, axis;
  std::vector<double> axis_values;

  CLI::App* gen = app.add_subcommand("gen-data", "write a dataset manifest");
  add_common(gen, args);

  CLI::App* train = app.add_subcommand("train", "train from a manifest");
  add_common(train, args);
  train->add_option("--manifest", manifest_path, "manifest JSON path");
  train->add_option("--resume", resume_path, "checkpoint to resume from");

  CLI::App* sweep =
      app.add_subcommand("sweep", "masking-ratio robustness sweep");
  add_common(sweep, args);
  sweep->add_option("--manifest", manifest_path, "manifest JSON path");
  sweep->add_option("--checkpoint", checkpoint_path, "trained checkpoint");

  CLI::App* hyper =
      app.add_subcommand("hyper-sweep", "sweep one hyperparameter axis");
  add_common(hyper, args);
  hyper->add_option("--axis", axis, "one of N, g_n, alpha, g_dim, n_out")
      ->required();
  hyper->add_option("--values", axis_values, "axis values (comma separated)")
      ->delimiter(',')
      ->required();

  CLI::App* audit =
      app.add_subcommand("audit", "spectral and convergence certificates");
  add_common(audit, args);
  audit->add_option("--checkpoint", checkpoint_path,
                    "audit the weights of a trained checkpoint");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = resolve_config(args);
    const std::string out = args.out_dir;

    if (gen->parsed()) {
      grace::harness::run_gen_data(cfg, out);
      std::cout << "wrote " << out << "/" << grace::harness::kManifestFile
                << "\n";
    } else if (train->parsed()) {
      nlohmann::json manifest = grace::harness::load_json_file(
          manifest_path.empty() ? out + "/" + grace::harness::kManifestFile
                                : manifest_path);
      nlohmann::json resume;
      const nlohmann::json* resume_ptr = nullptr;
      if (!resume_path.empty()) {
        resume = grace::harness::load_json_file(resume_path);
        resume_ptr = &resume;
      }
      auto run = grace::harness::run_train(cfg, manifest, out, resume_ptr);
      std::cout << "final test: accuracy="
                << run.report.at("final_test").at("accuracy")
                << " auc=" << run.report.at("final_test").at("auc") << "\n";
    } else if (sweep->parsed()) {
      nlohmann::json manifest = grace::harness::load_json_file(
          manifest_path.empty() ? out + "/" + grace::harness::kManifestFile
                                : manifest_path);
      nlohmann::json checkpoint = grace::harness::load_json_file(
          checkpoint_path.empty() ? out + "/" + grace::harness::kCheckpointFile
                                  : checkpoint_path);
      grace::harness::run_sweep(cfg, manifest, checkpoint, out);
      std::cout << "wrote " << out << "/" << grace::harness::kSweepCsvFile
                << "\n";
    } else if (hyper->parsed()) {
      grace::harness::run_hyper_sweep(cfg, axis, axis_values, out);
      std::cout << "wrote " << out << "/" << grace::harness::kHyperCsvFile
                << "\n";
    } else if (audit->parsed()) {
      nlohmann::json checkpoint;
      const nlohmann::json* checkpoint_ptr = nullptr;
      if (!checkpoint_path.empty()) {
        checkpoint = grace::harness::load_json_file(checkpoint_path);
        checkpoint_ptr = &checkpoint;
      }
      grace::harness::run_audit(cfg, checkpoint_ptr, out);
      std::cout << "wrote " << out << "/" << grace::harness::kAuditReportFile
                << " (kernels: "
                << grace::kernels::backend_name(
                       grace::kernels::active_backend())
                << ")\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
}
