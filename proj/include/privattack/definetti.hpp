#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "privattack/anatomy.hpp"
#include "privattack/classifier.hpp"
#include "privattack/rng.hpp"

namespace privattack {
namespace definetti {

// Sampler state: one SA assignment per row (a within-group bijection onto the
// published SA multiset) plus the joint counts it induces. Counts are kept
// incrementally and always equal a full recount.
struct AssignmentState {
  const AnatomyRelease* release = nullptr;
  std::vector<std::int32_t> assigned;     // per row, SA index
  std::vector<Eigen::ArrayXXi> counts;    // per attribute |domain(i)| x |SA|

  void check_consistency() const;  // throws DataError on violation
};

// Assignment history over the last `window` sweeps plus the L1 series between
// the joint distributions of consecutive models.
struct SamplerTrace {
  std::vector<double> l1;
  Eigen::ArrayXXi history;  // n x recorded columns, oldest column first
  std::int64_t recorded = 0;

  std::int64_t window() const { return history.cols(); }
};

struct RunResult {
  NBModel model;  // estimated from the final assignment
  AssignmentState state;
  SamplerTrace trace;
  std::int64_t accepted_swaps = 0;
};

// Uniformly random within-group permutation of each published SA multiset.
AssignmentState init(const AnatomyRelease& release, Rng& rng);

// Naive Bayes model induced by the current assignment (same smoothing and
// summed-count prior as the classifier's fit).
NBModel estimate(const AssignmentState& state);

// One Metropolis sweep: per group in creation order, propose one uniformly
// random transposition of two members' assignments and accept it with
// probability min(1, R). R is the conditional-likelihood ratio of the two
// affected rows under the frozen `model`; the priors cancel because a swap
// never changes the group's SA multiset. Returns the number of accepted
// proposals.
std::int64_t sweep(AssignmentState& state, const NBModel& model, Rng& rng);

// Alternates estimate/sweep for `iterations` rounds and re-estimates once at
// the end, recording the final `window` assignments and the full L1 series
// (one entry per iteration).
RunResult run(const AnatomyRelease& release, std::int64_t iterations,
              std::int64_t window, Rng& rng);

// Sum over all (attribute, value, sa) cells of |joint_a - joint_b| where
// joint(i,v,s) = cond(i,v,s) * prior(s).
double l1_convergence(const NBModel& a, const NBModel& b);

// Majority SA value over the row's recorded history; ties go to the value
// assigned most recently.
std::int32_t predict_permutation(const SamplerTrace& trace, std::int64_t row);

// Argmax of the posterior restricted to the row's group SA multiset.
std::int32_t predict_group(const NBModel& model, const AnatomyRelease& release,
                           std::int64_t row);

// The classifier alone, ignoring group structure.
std::int32_t predict_open(const NBModel& model, const EncodedTable& table,
                          std::int64_t row);

}  // namespace definetti
}  // namespace privattack
