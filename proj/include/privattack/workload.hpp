#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "privattack/dataset.hpp"

namespace privattack {

// The count-query workload behind the Naive Bayes attack: for every QI
// attribute i, a |domain(i)| x |SA| table of joint counts. There is no
// separate SA marginal; the prior is derived from these sums, which keeps the
// per-individual L1 sensitivity at m (one increment per attribute).
struct CountWorkload {
  std::shared_ptr<const DomainSet> domains;
  std::vector<Eigen::ArrayXXd> counts;  // counts[i](v, s)
  bool nonnegative = true;  // false after a noisy release, true after clipping

  std::int64_t num_entries() const {
    std::int64_t total = 0;
    for (const auto& c : counts) total += c.size();
    return total;
  }
};

}  // namespace privattack
