#include "privattack/classifier.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "privattack/errors.hpp"

namespace privattack {

CountWorkload exact_counts(const EncodedTable& table) {
  const DomainSet& ds = *table.domains;
  CountWorkload w;
  w.domains = table.domains;
  w.nonnegative = true;
  w.counts.reserve(ds.qi.size());
  for (const auto& dom : ds.qi)
    w.counts.push_back(Eigen::ArrayXXd::Zero(dom.size(), ds.sa.size()));

  for (std::int64_t r = 0; r < table.n; ++r) {
    const std::int32_t s = table.sa[r];
    if (s < 0)
      throw DataError("exact_counts: row " + std::to_string(r) +
                      " has an SA value outside the domain");
    const auto row = table.row(r);
    for (int i = 0; i < table.m; ++i) {
      if (row[i] < 0)
        throw DataError("exact_counts: row " + std::to_string(r) +
                        " has a QI value outside the domain");
      w.counts[i](row[i], s) += 1.0;
    }
  }
  return w;
}

NBModel fit(const CountWorkload& counts) {
  if (!counts.nonnegative)
    throw DataError("fit: counts must be nonnegative; apply clip_nonnegative");
  if (!counts.domains || counts.domains->sa.size() == 0)
    throw ConfigError("fit: empty SA domain");

  const auto S = counts.domains->sa.size();
  NBModel model;
  model.domains = counts.domains;
  model.cond.reserve(counts.counts.size());
  model.log_cond.reserve(counts.counts.size());

  Eigen::ArrayXd prior_num = Eigen::ArrayXd::Zero(S);
  for (const auto& block : counts.counts) {
    const Eigen::ArrayXXd smoothed = block + 1.0;
    const Eigen::ArrayXd col_sums = smoothed.colwise().sum();
    Eigen::ArrayXXd cond = smoothed.rowwise() / col_sums.transpose();
    prior_num += col_sums;
    model.log_cond.push_back(cond.log());
    model.cond.push_back(std::move(cond));
  }
  model.prior = prior_num / prior_num.sum();
  model.log_prior = model.prior.log();
  return model;
}

Eigen::ArrayXd posterior(const NBModel& model,
                         std::span<const std::int32_t> qi) {
  Eigen::ArrayXd log_p = model.log_prior;
  for (std::size_t i = 0; i < qi.size(); ++i) {
    const std::int32_t v = qi[i];
    if (v < 0) continue;  // unseen value: no evidence
    if (v == model.domains->qi[i].missing_index) continue;
    log_p += model.log_cond[i].row(v).transpose();
  }
  log_p -= log_p.maxCoeff();
  Eigen::ArrayXd p = log_p.exp();
  p /= p.sum();
  return p;
}

namespace {

std::int32_t argmax_first(const Eigen::ArrayXd& p) {
  std::int32_t best = 0;
  for (std::int32_t s = 1; s < p.size(); ++s)
    if (p(s) > p(best)) best = s;
  return best;
}

}  // namespace

std::int32_t predict(const NBModel& model, std::span<const std::int32_t> qi) {
  return argmax_first(posterior(model, qi));
}

Eigen::ArrayXd posterior_restricted(const NBModel& model,
                                    std::span<const std::int32_t> qi,
                                    std::span<const std::int32_t> allowed) {
  if (allowed.empty())
    throw DataError("posterior_restricted: empty set of allowed SA values");
  Eigen::ArrayXd mult = Eigen::ArrayXd::Zero(model.num_sa());
  for (const std::int32_t s : allowed) {
    if (s < 0 || s >= model.num_sa())
      throw DataError("posterior_restricted: SA index out of range");
    mult(s) += 1.0;
  }
  Eigen::ArrayXd p = posterior(model, qi) * mult;
  p /= p.sum();
  return p;
}

HighConfidenceResult high_confidence(const NBModel& model,
                                     const EncodedTable& table,
                                     double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw ConfigError("high_confidence: threshold must lie in (0,1)");
  HighConfidenceResult result;
  std::int64_t correct = 0;
  for (std::int64_t r = 0; r < table.n; ++r) {
    const Eigen::ArrayXd p = posterior(model, table.row(r));
    const std::int32_t best = argmax_first(p);
    if (p(best) > threshold) {
      result.rows.push_back(r);
      if (best == table.sa[r]) ++correct;
    }
  }
  result.accuracy = result.rows.empty()
                        ? 0.0
                        : static_cast<double>(correct) /
                              static_cast<double>(result.rows.size());
  return result;
}

void dump_model(const NBModel& model, std::ostream& out) {
  const DomainSet& ds = *model.domains;
  out.precision(17);
  for (std::size_t i = 0; i < model.cond.size(); ++i)
    for (Eigen::Index v = 0; v < model.cond[i].rows(); ++v)
      for (Eigen::Index s = 0; s < model.cond[i].cols(); ++s)
        out << ds.qi_names[i] << '\t' << ds.qi[i].values[v] << '\t'
            << ds.sa.values[s] << '\t' << model.cond[i](v, s) << '\n';
  for (Eigen::Index s = 0; s < model.prior.size(); ++s)
    out << "<prior>\t-\t" << ds.sa.values[s] << '\t' << model.prior(s) << '\n';
}

NBModel load_model(std::istream& in, std::shared_ptr<const DomainSet> domains) {
  NBModel model;
  model.domains = domains;
  const auto S = domains->sa.size();
  for (const auto& dom : domains->qi)
    model.cond.push_back(Eigen::ArrayXXd::Zero(dom.size(), S));
  model.prior = Eigen::ArrayXd::Zero(S);

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string attr, value, sa;
    double p = 0.0;
    if (!(std::getline(ss, attr, '\t') && std::getline(ss, value, '\t') &&
          std::getline(ss, sa, '\t') && (ss >> p)))
      throw DataError("load_model: malformed line '" + line + "'");
    const std::int32_t s = domains->sa.find(sa);
    if (s < 0) throw DataError("load_model: unknown SA value '" + sa + "'");
    if (attr == "<prior>") {
      model.prior(s) = p;
      continue;
    }
    bool found = false;
    for (std::size_t i = 0; i < domains->qi_names.size(); ++i) {
      if (domains->qi_names[i] == attr) {
        const std::int32_t v = domains->qi[i].find(value);
        if (v < 0)
          throw DataError("load_model: unknown value '" + value + "' for '" +
                          attr + "'");
        model.cond[i](v, s) = p;
        found = true;
        break;
      }
    }
    if (!found) throw DataError("load_model: unknown attribute '" + attr + "'");
  }
  model.log_cond.reserve(model.cond.size());
  for (const auto& c : model.cond) model.log_cond.push_back(c.log());
  model.log_prior = model.prior.log();
  return model;
}

}  // namespace privattack
