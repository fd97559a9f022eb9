#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <span>
#include <vector>

#include "privattack/workload.hpp"

namespace privattack {

// Smoothed Naive Bayes model over fixed domains. cond[i](v, s) is
// Pr[attribute i = v | SA = s]; every (i, s) column sums to 1 and all entries
// are strictly positive thanks to the add-one correction, so log tables are
// always finite.
struct NBModel {
  std::shared_ptr<const DomainSet> domains;
  std::vector<Eigen::ArrayXXd> cond;      // per attribute, |domain(i)| x |SA|
  std::vector<Eigen::ArrayXXd> log_cond;  // cached logs of cond
  Eigen::ArrayXd prior;                   // |SA|
  Eigen::ArrayXd log_prior;

  std::int32_t num_sa() const { return static_cast<std::int32_t>(prior.size()); }
};

// Joint counts of the encoded table. Every QI cell of the table must be
// inside its domain (use the table the domains were built from).
CountWorkload exact_counts(const EncodedTable& table);

// Builds the model from clipped counts:
//   cond(i,v,s)  = (1 + c(i,v,s)) / sum_t (1 + c(i,t,s))
//   prior(s)    ~  sum_i sum_t (1 + c(i,t,s))
// The prior comes from the same summed counts rather than a separate SA
// marginal, so the whole workload has sensitivity m. Each row contributes to
// the numerator once per attribute, which cancels in the ratio.
NBModel fit(const CountWorkload& counts);

// Posterior over SA for one QI record, evaluated in log space. Cells coded
// -1 (outside the domain) and cells equal to the missing category contribute
// no factor.
Eigen::ArrayXd posterior(const NBModel& model, std::span<const std::int32_t> qi);

// Argmax of posterior; ties resolve to the first SA value in domain order.
std::int32_t predict(const NBModel& model, std::span<const std::int32_t> qi);

// Posterior reweighted by the multiplicity of each SA value in `allowed` and
// renormalized over its support.
Eigen::ArrayXd posterior_restricted(const NBModel& model,
                                    std::span<const std::int32_t> qi,
                                    std::span<const std::int32_t> allowed);

struct HighConfidenceResult {
  std::vector<std::int64_t> rows;  // rows whose top posterior exceeds the threshold
  double accuracy = 0.0;           // fraction of those rows predicted correctly
  std::int64_t size() const { return static_cast<std::int64_t>(rows.size()); }
};

HighConfidenceResult high_confidence(const NBModel& model,
                                     const EncodedTable& table,
                                     double threshold);

// Plain-text dump/load of the model tables for inspection, one line per entry:
// attribute value sa probability (prior lines use "<prior>" as attribute).
void dump_model(const NBModel& model, std::ostream& out);
NBModel load_model(std::istream& in, std::shared_ptr<const DomainSet> domains);

}  // namespace privattack
