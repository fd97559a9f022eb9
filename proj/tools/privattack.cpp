// Workbench for inference attacks on anonymized tabular data. Subcommands:
//   attack-dp         noisy-counts Naive Bayes attack, epsilon sweep
//   anonymize         l-diverse Anatomy release of a dataset
//   attack-definetti  permutation-sampling attack on an Anatomy release
//   verify-dp         analytic pmf-ratio check of the geometric mechanism
//   summarize         min/mean/max table from a results CSV
// Exit codes: 0 success, 2 configuration error, 3 data or eligibility error.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "privattack/anatomy.hpp"
#include "privattack/config.hpp"
#include "privattack/errors.hpp"
#include "privattack/harness.hpp"
#include "privattack/mechanism.hpp"

namespace {

using namespace privattack;

struct GlobalArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
};

ExperimentConfig require_config(const GlobalArgs& g) {
  if (g.config_path.empty())
    throw ConfigError("--config <path> is required for this subcommand");
  ExperimentConfig cfg = load_experiment_config(g.config_path);
  if (g.seed) cfg.seed = *g.seed;
  if (!g.out_path.empty()) cfg.out_path = g.out_path;
  return cfg;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open output file '" + path + "'");
  out << contents;
}

void emit_results(const ExperimentConfig& cfg,
                  const std::vector<ResultRow>& rows) {
  std::ostringstream results;
  write_results_csv(rows, results);
  std::ostringstream summary;
  write_summary_csv(summarize(rows), summary);
  if (cfg.out_path.empty()) {
    std::cout << results.str();
  } else {
    write_file(cfg.out_path, results.str());
    write_file(cfg.out_path + ".summary.csv", summary.str());
    std::cerr << "wrote " << rows.size() << " rows to " << cfg.out_path
              << "\n";
  }
  std::cerr << summary.str();
}

int run(int argc, char** argv) {
  CLI::App app{"inference attacks on anonymized tabular data"};
  app.require_subcommand(1);

  GlobalArgs global;
  app.add_option("--config", global.config_path, "experiment config (JSON)");
  std::uint64_t seed_opt = 0;
  auto* seed_flag =
      app.add_option("--seed", seed_opt, "master seed (overrides config)");
  app.add_option("--out", global.out_path, "output path (overrides config)");

  auto* attack_dp = app.add_subcommand(
      "attack-dp", "Naive Bayes attack on noisy count releases");
  std::vector<double> eps_override;
  std::string mech_override;
  bool timing = false;
  attack_dp->add_option("--epsilon", eps_override,
                        "epsilon values (overrides config list)");
  attack_dp->add_option("--mechanism", mech_override,
                        "geometric|laplace|none (overrides config)");
  attack_dp->add_flag("--timing", timing,
                      "record wall time in the seconds column (breaks "
                      "byte-for-byte reproducibility)");

  auto* anonymize_cmd =
      app.add_subcommand("anonymize", "write an l-diverse Anatomy release");
  int anon_l = 0;
  int anon_merge = 1;
  anonymize_cmd->add_option("--l", anon_l, "group size parameter")->required();
  anonymize_cmd->add_option("--merge-factor", anon_merge,
                            "merge consecutive groups (>= 2 to enable)");

  auto* attack_def = app.add_subcommand(
      "attack-definetti", "permutation-sampling attack on Anatomy releases");
  std::vector<int> l_override;
  std::vector<int> merge_override;
  std::int64_t iter_override = -1, window_override = -1;
  int reps_override = -1;
  std::string method = "all";
  attack_def->add_option("--l", l_override, "l values (overrides config)");
  attack_def->add_option("--merge-factor", merge_override,
                         "merge factors, 1 = unmerged (overrides config)");
  attack_def->add_option("--iterations", iter_override, "sampler iterations");
  attack_def->add_option("--window", window_override,
                         "assignment history window");
  attack_def->add_option("--reps", reps_override, "repetitions");
  attack_def->add_option("--method", method,
                         "permutation|group|open|all (filters output rows)");
  attack_def->add_flag("--timing", timing,
                       "record wall time in the seconds column");

  auto* verify = app.add_subcommand(
      "verify-dp", "enumerate the geometric mechanism's worst pmf ratio");
  double v_eps = 1.0;
  int v_sens = 1, v_shift = -1;
  std::int64_t v_range = 40;
  verify->add_option("--epsilon", v_eps, "privacy parameter")->required();
  verify->add_option("--sensitivity", v_sens, "L1 sensitivity");
  verify->add_option("--max-shift", v_shift,
                     "largest per-entry shift (default: sensitivity)");
  verify->add_option("--z-range", v_range, "enumerate z in [-range, range]");

  auto* summarize_cmd =
      app.add_subcommand("summarize", "summarize a results CSV");
  std::string in_path;
  summarize_cmd->add_option("--in", in_path, "results CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*seed_flag) global.seed = seed_opt;
  RunOptions options;
  options.record_timing = timing;
  options.log = &std::cerr;

  if (attack_dp->parsed()) {
    ExperimentConfig cfg = require_config(global);
    if (!eps_override.empty()) cfg.epsilons = eps_override;
    if (!mech_override.empty())
      cfg.mechanism = mechanism_from_string(mech_override);
    cfg.validate();
    emit_results(cfg, run_naive_attack(cfg, options));
    return 0;
  }

  if (anonymize_cmd->parsed()) {
    ExperimentConfig cfg = require_config(global);
    const Table table = load_dataset(cfg.dataset);
    const auto domains =
        std::make_shared<const DomainSet>(build_domains(table));
    const auto enc =
        std::make_shared<const EncodedTable>(encode_table(table, domains));
    Rng rng(derive_seed(cfg.seed, "anonymize", anon_l, anon_merge));
    AnatomyRelease release = anonymize(enc, anon_l, rng);
    if (anon_merge > 1) release = merge_groups(release, anon_merge);
    const std::string prefix =
        cfg.out_path.empty() ? std::string("release") : cfg.out_path;
    std::ostringstream members, sa, truth;
    write_members_csv(release, members);
    write_sa_multisets_csv(release, sa);
    write_truth_csv(release, truth);
    write_file(prefix + "_members.csv", members.str());
    write_file(prefix + "_sa.csv", sa.str());
    write_file(prefix + "_truth.csv", truth.str());
    std::cerr << "wrote " << release.groups.size() << " groups to " << prefix
              << "_{members,sa,truth}.csv\n";
    return 0;
  }

  if (attack_def->parsed()) {
    ExperimentConfig cfg = require_config(global);
    if (!l_override.empty()) cfg.l_values = l_override;
    if (!merge_override.empty()) cfg.merge_factors = merge_override;
    if (iter_override > 0) cfg.iterations = iter_override;
    if (window_override >= 0) cfg.window = window_override;
    if (reps_override > 0) cfg.repetitions = reps_override;
    cfg.validate();
    if (method != "all" && method != "permutation" && method != "group" &&
        method != "open")
      throw ConfigError("unknown method '" + method + "'");
    std::vector<ResultRow> rows = run_definetti_attack(cfg, options);
    if (method != "all") {
      std::erase_if(rows, [&](const ResultRow& r) {
        return r.method != method && r.method != "baseline";
      });
    }
    emit_results(cfg, rows);
    return 0;
  }

  if (verify->parsed()) {
    PrivacyParams params{v_eps, v_sens, Mechanism::kGeometric};
    if (v_shift < 0) v_shift = v_sens;
    const double ratio = verify_dp_ratio(params, v_shift, v_range);
    const double bound = std::exp(v_eps);
    std::cout << "alpha=" << noise_scale(params) << " max_ratio=" << ratio
              << " bound=exp(eps)=" << bound << " "
              << (ratio <= bound * (1.0 + 1e-9) ? "OK" : "VIOLATION") << "\n";
    return ratio <= bound * (1.0 + 1e-9) ? 0 : 1;
  }

  if (summarize_cmd->parsed()) {
    std::ifstream in(in_path);
    if (!in) throw DataError("cannot open results file '" + in_path + "'");
    const std::vector<ResultRow> rows = read_results_csv(in);
    std::ostringstream out;
    write_summary_csv(summarize(rows), out);
    if (global.out_path.empty())
      std::cout << out.str();
    else
      write_file(global.out_path, out.str());
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
