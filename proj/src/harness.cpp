#include "privattack/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <tuple>

#include "privattack/errors.hpp"
#include "privattack/mechanism.hpp"

namespace privattack {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_double(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

double score_split(const NBModel& model, const EncodedTable& table) {
  std::int64_t correct = 0;
  for (std::int64_t r = 0; r < table.n; ++r)
    if (predict(model, table.row(r)) == table.sa[r]) ++correct;
  return table.n == 0 ? 0.0
                      : static_cast<double>(correct) /
                            static_cast<double>(table.n);
}

void log_line(const RunOptions& options, const std::string& text) {
  if (options.log) (*options.log) << text << '\n';
}

}  // namespace

std::string format_param(double epsilon) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", epsilon);
  return buf;
}

double accuracy(const std::vector<std::int32_t>& predictions,
                const std::vector<std::int32_t>& truth) {
  if (predictions.empty() || predictions.size() != truth.size())
    throw DataError("accuracy: prediction and truth lengths differ or are 0");
  std::int64_t correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    correct += predictions[i] == truth[i];
  return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

MajorityBaseline baseline_majority(const EncodedTable& table) {
  if (table.n == 0) throw DataError("baseline_majority: empty table");
  std::vector<std::int64_t> counts(table.domains->sa.size(), 0);
  for (std::int64_t r = 0; r < table.n; ++r)
    if (table.sa[r] >= 0) ++counts[table.sa[r]];
  MajorityBaseline b;
  std::int64_t best = -1;
  for (std::int32_t s = 0; s < static_cast<std::int32_t>(counts.size()); ++s) {
    if (counts[s] > best) {
      best = counts[s];
      b.sa_index = s;
    }
  }
  b.sa_value = table.domains->sa.values[b.sa_index];
  b.accuracy = static_cast<double>(best) / static_cast<double>(table.n);
  return b;
}

std::vector<ResultRow> run_naive_attack(const ExperimentConfig& config,
                                        const RunOptions& options) {
  config.validate();
  const Table full = load_dataset(config.dataset);
  auto [train, test] =
      split_train_test(full, config.test_fraction,
                       derive_seed(config.seed, "split"));
  const auto domains = std::make_shared<const DomainSet>(build_domains(train));
  const EncodedTable enc_train = encode_table(train, domains);
  const EncodedTable enc_test = encode_table(test, domains);
  const CountWorkload exact = exact_counts(enc_train);
  const int m = domains->num_attributes();

  std::vector<ResultRow> rows;
  const MajorityBaseline base = baseline_majority(enc_train);
  auto score_baseline = [&](const EncodedTable& t) {
    std::int64_t hits = 0;
    for (std::int64_t r = 0; r < t.n; ++r) hits += t.sa[r] == base.sa_index;
    return t.n == 0 ? 0.0
                    : static_cast<double>(hits) / static_cast<double>(t.n);
  };
  rows.push_back({"naive", "-", 0, "train", "baseline",
                  score_baseline(enc_train), enc_train.n, 0.0});
  if (enc_test.n > 0)
    rows.push_back({"naive", "-", 0, "test", "baseline",
                    score_baseline(enc_test), enc_test.n, 0.0});

  for (std::size_t ei = 0; ei < config.epsilons.size(); ++ei) {
    const double eps = config.epsilons[ei];
    const PrivacyParams params{eps, m, config.mechanism};
    for (int rep = 0; rep < config.repetitions; ++rep) {
      const auto start = Clock::now();
      Rng rng(derive_seed(config.seed, "naive", ei, rep));
      const NBModel model =
          fit(clip_nonnegative(release(exact, params, rng)));

      const std::string param = format_param(eps);
      const double train_acc = score_split(model, enc_train);
      const double test_acc = enc_test.n > 0 ? score_split(model, enc_test) : 0.0;
      const HighConfidenceResult conf_train =
          high_confidence(model, enc_train, config.confidence_threshold);
      const HighConfidenceResult conf_test =
          enc_test.n > 0
              ? high_confidence(model, enc_test, config.confidence_threshold)
              : HighConfidenceResult{};
      const double secs = options.record_timing ? elapsed_seconds(start) : 0.0;

      rows.push_back({"naive", param, rep, "train", "naive", train_acc,
                      enc_train.n, secs});
      rows.push_back({"naive_conf", param, rep, "train", "naive",
                      conf_train.accuracy, conf_train.size(), 0.0});
      if (enc_test.n > 0) {
        rows.push_back({"naive", param, rep, "test", "naive", test_acc,
                        enc_test.n, 0.0});
        rows.push_back({"naive_conf", param, rep, "test", "naive",
                        conf_test.accuracy, conf_test.size(), 0.0});
      }
      log_line(options, "naive eps=" + param + " rep=" +
                            std::to_string(rep) + " train=" +
                            format_double(train_acc, 4) + " test=" +
                            format_double(test_acc, 4));
    }
  }
  return rows;
}

std::vector<ResultRow> run_definetti_attack(const ExperimentConfig& config,
                                            const RunOptions& options) {
  config.validate();
  const Table full = load_dataset(config.dataset);
  const auto domains = std::make_shared<const DomainSet>(build_domains(full));
  const auto table =
      std::make_shared<const EncodedTable>(encode_table(full, domains));

  // Fail fast on any infeasible l before sampling anything.
  for (const int l : config.l_values) {
    const Eligibility e = check_eligibility(*table, l);
    if (!e.feasible)
      throw EligibilityError(
          "definetti: l=" + std::to_string(l) + " is infeasible: SA value '" +
          domains->sa.values[e.max_sa_index] + "' occurs " +
          std::to_string(e.max_sa_count) + " times, limit " +
          std::to_string(e.num_groups));
  }

  std::vector<std::int32_t> truth(table->sa.begin(), table->sa.end());
  std::vector<ResultRow> rows;
  rows.push_back({"definetti", "-", 0, "all", "baseline",
                  baseline_majority(*table).accuracy, table->n, 0.0});

  for (const int l : config.l_values) {
    for (const int factor : config.merge_factors) {
      const std::string kind =
          factor <= 1 ? "definetti" : "definetti_merge" + std::to_string(factor);
      for (int rep = 0; rep < config.repetitions; ++rep) {
        const auto start = Clock::now();
        Rng rng(derive_seed(config.seed, "definetti",
                            (static_cast<std::uint64_t>(l) << 8) | factor,
                            rep));
        AnatomyRelease release = anonymize(table, l, rng);
        if (factor > 1) release = merge_groups(release, factor);
        const definetti::RunResult result =
            definetti::run(release, config.iterations, config.window, rng);

        std::vector<std::int32_t> perm(table->n), group(table->n),
            open(table->n);
        for (std::int64_t r = 0; r < table->n; ++r) {
          perm[r] = definetti::predict_permutation(result.trace, r);
          group[r] = definetti::predict_group(result.model, release, r);
          open[r] = definetti::predict_open(result.model, *table, r);
        }
        const double secs =
            options.record_timing ? elapsed_seconds(start) : 0.0;
        const std::string param = std::to_string(l);
        rows.push_back({kind, param, rep, "all", "permutation",
                        accuracy(perm, truth), table->n, secs});
        rows.push_back({kind, param, rep, "all", "group",
                        accuracy(group, truth), table->n, 0.0});
        rows.push_back({kind, param, rep, "all", "open",
                        accuracy(open, truth), table->n, 0.0});
        log_line(options,
                 kind + " l=" + param + " rep=" + std::to_string(rep) +
                     " perm=" + format_double(accuracy(perm, truth), 4) +
                     " group=" + format_double(accuracy(group, truth), 4) +
                     " open=" + format_double(accuracy(open, truth), 4));
      }
    }
  }
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw DataError("summarize: no rows");
  std::map<std::tuple<std::string, std::string, std::string, std::string>,
           std::vector<double>>
      groups;
  for (const auto& r : rows)
    groups[{r.kind, r.param, r.split, r.method}].push_back(r.accuracy);

  std::vector<SummaryRow> out;
  out.reserve(groups.size());
  for (auto& [key, accs] : groups) {
    // canonical accumulation order makes the summary independent of the
    // input row order, bit for bit
    std::sort(accs.begin(), accs.end());
    SummaryRow s;
    std::tie(s.kind, s.param, s.split, s.method) = key;
    s.repetitions = static_cast<int>(accs.size());
    s.min = accs.front();
    s.max = accs.back();
    s.mean = 0.0;
    for (const double a : accs) s.mean += a;
    s.mean /= static_cast<double>(accs.size());
    out.push_back(std::move(s));
  }
  return out;
}

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  std::vector<ResultRow> sorted = rows;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ResultRow& a, const ResultRow& b) {
                     return std::tie(a.kind, a.param, a.rep, a.method,
                                     a.split) <
                            std::tie(b.kind, b.param, b.rep, b.method,
                                     b.split);
                   });
  out << "kind,param,rep,split,method,accuracy,subset_size,seconds\n";
  for (const auto& r : sorted)
    out << r.kind << ',' << r.param << ',' << r.rep << ',' << r.split << ','
        << r.method << ',' << format_double(r.accuracy, 6) << ','
        << r.subset_size << ',' << format_double(r.seconds, 3) << '\n';
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string line;
  bool header = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::stringstream ss(line);
    ResultRow r;
    std::string rep, acc, subset, secs;
    if (!(std::getline(ss, r.kind, ',') && std::getline(ss, r.param, ',') &&
          std::getline(ss, rep, ',') && std::getline(ss, r.split, ',') &&
          std::getline(ss, r.method, ',') && std::getline(ss, acc, ',') &&
          std::getline(ss, subset, ',') && std::getline(ss, secs, ',')))
      throw DataError("results csv: malformed line " + std::to_string(line_no));
    r.rep = std::stoi(rep);
    r.accuracy = std::stod(acc);
    r.subset_size = std::stoll(subset);
    r.seconds = std::stod(secs);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << "kind,param,split,method,repetitions,min,mean,max\n";
  for (const auto& s : rows)
    out << s.kind << ',' << s.param << ',' << s.split << ',' << s.method << ','
        << s.repetitions << ',' << format_double(s.min, 6) << ','
        << format_double(s.mean, 6) << ',' << format_double(s.max, 6) << '\n';
}

}  // namespace privattack
