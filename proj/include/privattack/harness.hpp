#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "privattack/anatomy.hpp"
#include "privattack/classifier.hpp"
#include "privattack/config.hpp"
#include "privattack/definetti.hpp"

namespace privattack {

// One measurement. `param` is the swept parameter rendered as text (epsilon
// for the naive attack, l for the deFinetti attack, "-" for baselines).
// `seconds` stays 0 unless timing output is requested, so that result files
// are byte-identical across reruns of the same config and seed.
struct ResultRow {
  std::string kind;    // naive | naive_conf | definetti | definetti_merge<f>
  std::string param;
  int rep = 0;
  std::string split;   // train | test | all
  std::string method;  // naive | permutation | group | open | baseline
  double accuracy = 0.0;
  std::int64_t subset_size = 0;
  double seconds = 0.0;
};

double accuracy(const std::vector<std::int32_t>& predictions,
                const std::vector<std::int32_t>& truth);

struct MajorityBaseline {
  std::int32_t sa_index = -1;
  std::string sa_value;
  double accuracy = 0.0;  // frequency of the majority value in the same table
};

MajorityBaseline baseline_majority(const EncodedTable& table);

struct RunOptions {
  bool record_timing = false;  // fill ResultRow::seconds from wall time
  std::ostream* log = nullptr; // progress notes, one line per step
};

// The naive attack: per epsilon and repetition, release the count workload
// with noise, fit, and score on the training and withheld test rows, plus the
// high-confidence subsets at the configured threshold.
std::vector<ResultRow> run_naive_attack(const ExperimentConfig& config,
                                        const RunOptions& options = {});

// The deFinetti attack: per (l, merge factor) and repetition, anonymize,
// optionally merge, run the sampler, and score the permutation, group and
// open prediction methods over the whole table.
std::vector<ResultRow> run_definetti_attack(const ExperimentConfig& config,
                                            const RunOptions& options = {});

struct SummaryRow {
  std::string kind;
  std::string param;
  std::string split;
  std::string method;
  int repetitions = 0;
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

// Per-(kind, param, split, method) min/mean/max over repetitions. Independent
// of the input row order.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out);
std::vector<ResultRow> read_results_csv(std::istream& in);
void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);

std::string format_param(double epsilon);

}  // namespace privattack
