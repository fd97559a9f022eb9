#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "privattack/dataset.hpp"
#include "privattack/mechanism.hpp"

namespace privattack {

struct DatasetConfig {
  std::string csv_path;
  bool has_header = false;
  std::string missing_token = "?";
  Schema schema;
};

// One experiment description, read from a JSON config file. Relative paths
// resolve against the config file's directory.
struct ExperimentConfig {
  DatasetConfig dataset;
  Mechanism mechanism = Mechanism::kGeometric;
  std::vector<double> epsilons = {0.01, 0.05, 0.1, 0.5, 1.0, 10.0, 100.0};
  int repetitions = 9;
  double test_fraction = 0.3;
  double confidence_threshold = 0.8;
  std::vector<int> l_values = {2, 3, 4, 5, 6, 7};
  std::vector<int> merge_factors = {1};
  std::int64_t iterations = 1000;
  std::int64_t window = 100;
  std::uint64_t seed = 1;
  std::string out_path;

  void validate() const;  // throws ConfigError
};

ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::string& base_dir);

// load_csv + bucketize + drop_missing_sa, in that order.
Table load_dataset(const DatasetConfig& config);

}  // namespace privattack
