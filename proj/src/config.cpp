#include "privattack/config.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "privattack/errors.hpp"

namespace privattack {
namespace {

using nlohmann::json;

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " +
                      e.what());
  }
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

DatasetConfig parse_dataset(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ConfigError("config: 'dataset' must be an object");
  DatasetConfig d;
  if (!j.contains("csv"))
    throw ConfigError("config: dataset.csv path is required");
  d.csv_path = resolve(base_dir, j.at("csv").get<std::string>());
  d.has_header = get_or(j, "has_header", false);
  d.missing_token = get_or(j, "missing_token", std::string("?"));
  d.schema.attributes =
      get_or(j, "attributes", std::vector<std::string>{});
  d.schema.qi = get_or(j, "qi", std::vector<std::string>{});
  d.schema.sa = get_or(j, "sa", std::string());
  if (j.contains("buckets")) {
    const json& b = j.at("buckets");
    if (!b.is_object())
      throw ConfigError("config: dataset.buckets must map attributes to "
                        "boundary lists");
    for (auto it = b.begin(); it != b.end(); ++it)
      d.schema.buckets[it.key()] = it.value().get<std::vector<double>>();
  }
  return d;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (repetitions < 1) throw ConfigError("config: repetitions must be >= 1");
  if (!(confidence_threshold > 0.0 && confidence_threshold < 1.0))
    throw ConfigError("config: confidence_threshold must lie in (0,1)");
  if (!(test_fraction >= 0.0 && test_fraction <= 1.0))
    throw ConfigError("config: test_fraction must lie in [0,1]");
  for (const double e : epsilons)
    if (!(e > 0.0)) throw ConfigError("config: epsilon values must be positive");
  for (const int l : l_values)
    if (l < 2) throw ConfigError("config: l values must be at least 2");
  for (const int f : merge_factors)
    if (f < 1) throw ConfigError("config: merge factors must be at least 1");
  if (iterations < 1) throw ConfigError("config: iterations must be >= 1");
  if (window < 0) throw ConfigError("config: window must be nonnegative");
}

ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  if (!j.contains("dataset"))
    throw ConfigError("config: 'dataset' section is required");

  ExperimentConfig cfg;
  cfg.dataset = parse_dataset(j.at("dataset"), base_dir);
  cfg.mechanism = mechanism_from_string(
      get_or(j, "mechanism", std::string("geometric")));
  cfg.epsilons = get_or(j, "epsilons", cfg.epsilons);
  cfg.repetitions = get_or(j, "repetitions", cfg.repetitions);
  cfg.test_fraction = get_or(j, "test_fraction", cfg.test_fraction);
  cfg.confidence_threshold =
      get_or(j, "confidence_threshold", cfg.confidence_threshold);
  cfg.l_values = get_or(j, "l_values", cfg.l_values);
  cfg.merge_factors = get_or(j, "merge_factors", cfg.merge_factors);
  cfg.iterations = get_or(j, "iterations", cfg.iterations);
  cfg.window = get_or(j, "window", cfg.window);
  cfg.seed = get_or(j, "seed", cfg.seed);
  cfg.out_path = get_or(j, "out", std::string());
  if (!cfg.out_path.empty()) cfg.out_path = resolve(base_dir, cfg.out_path);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(
      buf.str(), std::filesystem::path(path).parent_path().string());
}

Table load_dataset(const DatasetConfig& config) {
  Table table = load_csv(config.csv_path, config.schema, config.missing_token,
                         config.has_header);
  table = apply_buckets(table);
  return drop_missing_sa(table);
}

}  // namespace privattack
