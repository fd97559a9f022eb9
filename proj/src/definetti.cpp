#include "privattack/definetti.hpp"

#include <algorithm>

#include "privattack/errors.hpp"

namespace privattack {
namespace definetti {
namespace {

std::vector<Eigen::ArrayXXi> recount(const AnatomyRelease& release,
                                     const std::vector<std::int32_t>& assigned) {
  const EncodedTable& table = *release.table;
  const DomainSet& ds = *table.domains;
  std::vector<Eigen::ArrayXXi> counts;
  counts.reserve(ds.qi.size());
  for (const auto& dom : ds.qi)
    counts.push_back(Eigen::ArrayXXi::Zero(dom.size(), ds.sa.size()));
  for (std::int64_t r = 0; r < table.n; ++r) {
    const auto row = table.row(r);
    if (assigned[r] < 0)
      throw DataError("definetti: row " + std::to_string(r) + " unassigned");
    for (int i = 0; i < table.m; ++i) {
      if (row[i] < 0)
        throw DataError("definetti: the release table must be encoded against "
                        "its own domains");
      counts[i](row[i], assigned[r]) += 1;
    }
  }
  return counts;
}

CountWorkload to_workload(const AssignmentState& state) {
  CountWorkload w;
  w.domains = state.release->table->domains;
  w.nonnegative = true;
  w.counts.reserve(state.counts.size());
  for (const auto& block : state.counts)
    w.counts.push_back(block.cast<double>());
  return w;
}

}  // namespace

void AssignmentState::check_consistency() const {
  for (const auto& g : release->groups) {
    std::vector<std::int32_t> values;
    values.reserve(g.rows.size());
    for (const std::int32_t r : g.rows) values.push_back(assigned[r]);
    std::sort(values.begin(), values.end());
    if (values != g.sa_multiset)
      throw DataError("state: assignment is not a permutation of a group's "
                      "SA multiset");
  }
  const auto fresh = recount(*release, assigned);
  for (std::size_t i = 0; i < counts.size(); ++i)
    if ((counts[i] != fresh[i]).any())
      throw DataError("state: incremental counts diverged from a recount");
}

AssignmentState init(const AnatomyRelease& release, Rng& rng) {
  AssignmentState state;
  state.release = &release;
  state.assigned.assign(release.n(), -1);
  for (const auto& g : release.groups) {
    std::vector<std::int32_t> perm = g.sa_multiset;
    for (std::size_t i = perm.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.bounded(i));
      std::swap(perm[i - 1], perm[j]);
    }
    for (std::size_t k = 0; k < g.rows.size(); ++k)
      state.assigned[g.rows[k]] = perm[k];
  }
  state.counts = recount(release, state.assigned);
  return state;
}

NBModel estimate(const AssignmentState& state) {
  return fit(to_workload(state));
}

std::int64_t sweep(AssignmentState& state, const NBModel& model, Rng& rng) {
  const EncodedTable& table = *state.release->table;
  std::int64_t accepted = 0;
  for (const auto& g : state.release->groups) {
    const auto size = static_cast<std::uint64_t>(g.rows.size());
    if (size < 2) continue;
    // uniformly random unordered pair of members
    const auto a = static_cast<std::size_t>(rng.bounded(size));
    auto b = static_cast<std::size_t>(rng.bounded(size - 1));
    if (b >= a) ++b;
    const std::int32_t row_a = g.rows[a];
    const std::int32_t row_b = g.rows[b];
    const std::int32_t sa_a = state.assigned[row_a];
    const std::int32_t sa_b = state.assigned[row_b];

    double ratio = 1.0;
    if (sa_a != sa_b) {
      const auto qa = table.row(row_a);
      const auto qb = table.row(row_b);
      for (int i = 0; i < table.m; ++i) {
        const auto& cond = model.cond[i];
        ratio *= cond(qa[i], sa_b) / cond(qa[i], sa_a);
        ratio *= cond(qb[i], sa_a) / cond(qb[i], sa_b);
      }
    }
    if (ratio >= 1.0 || rng.uniform01() < ratio) {
      ++accepted;
      if (sa_a != sa_b) {
        const auto qa = table.row(row_a);
        const auto qb = table.row(row_b);
        for (int i = 0; i < table.m; ++i) {
          state.counts[i](qa[i], sa_a) -= 1;
          state.counts[i](qa[i], sa_b) += 1;
          state.counts[i](qb[i], sa_b) -= 1;
          state.counts[i](qb[i], sa_a) += 1;
        }
        state.assigned[row_a] = sa_b;
        state.assigned[row_b] = sa_a;
      }
    }
  }
  return accepted;
}

RunResult run(const AnatomyRelease& release, std::int64_t iterations,
              std::int64_t window, Rng& rng) {
  if (iterations < 1)
    throw ConfigError("definetti: iterations must be at least 1");
  if (window < 0) throw ConfigError("definetti: window must be nonnegative");
  window = std::min(window, iterations);

  RunResult result;
  result.state = init(release, rng);
  result.trace.history = Eigen::ArrayXXi::Constant(
      release.n(), static_cast<Eigen::Index>(window), -1);

  NBModel previous;
  for (std::int64_t t = 0; t < iterations; ++t) {
    NBModel model = estimate(result.state);
    if (t > 0) result.trace.l1.push_back(l1_convergence(previous, model));
    result.accepted_swaps += sweep(result.state, model, rng);
#ifndef NDEBUG
    result.state.check_consistency();
#endif
    previous = std::move(model);
    if (t >= iterations - window) {
      const Eigen::Index col = result.trace.recorded++;
      for (std::int64_t r = 0; r < release.n(); ++r)
        result.trace.history(r, col) = result.state.assigned[r];
    }
  }
  result.model = estimate(result.state);
  result.trace.l1.push_back(l1_convergence(previous, result.model));
  return result;
}

double l1_convergence(const NBModel& a, const NBModel& b) {
  if (a.cond.size() != b.cond.size() || a.prior.size() != b.prior.size())
    throw DataError("l1_convergence: models have different domains");
  double total = 0.0;
  for (std::size_t i = 0; i < a.cond.size(); ++i) {
    if (a.cond[i].rows() != b.cond[i].rows())
      throw DataError("l1_convergence: models have different domains");
    const Eigen::ArrayXXd joint_a = a.cond[i].rowwise() * a.prior.transpose();
    const Eigen::ArrayXXd joint_b = b.cond[i].rowwise() * b.prior.transpose();
    total += (joint_a - joint_b).abs().sum();
  }
  return total;
}

std::int32_t predict_permutation(const SamplerTrace& trace, std::int64_t row) {
  if (trace.recorded < 1)
    throw DataError("predict_permutation: empty assignment history");
  std::vector<std::int64_t> votes;
  std::vector<std::int64_t> last_seen;
  for (std::int64_t c = 0; c < trace.recorded; ++c) {
    const std::int32_t s = trace.history(row, c);
    if (s >= static_cast<std::int32_t>(votes.size())) {
      votes.resize(s + 1, 0);
      last_seen.resize(s + 1, -1);
    }
    ++votes[s];
    last_seen[s] = c;
  }
  std::int32_t best = -1;
  for (std::int32_t s = 0; s < static_cast<std::int32_t>(votes.size()); ++s) {
    if (votes[s] == 0) continue;
    if (best < 0 || votes[s] > votes[best] ||
        (votes[s] == votes[best] && last_seen[s] > last_seen[best]))
      best = s;
  }
  return best;
}

std::int32_t predict_group(const NBModel& model, const AnatomyRelease& release,
                           std::int64_t row) {
  const Group& g = release.groups[release.group_of[row]];
  const Eigen::ArrayXd p = posterior_restricted(
      model, release.table->row(row),
      std::span<const std::int32_t>(g.sa_multiset));
  std::int32_t best = 0;
  for (std::int32_t s = 1; s < p.size(); ++s)
    if (p(s) > p(best)) best = s;
  return best;
}

std::int32_t predict_open(const NBModel& model, const EncodedTable& table,
                          std::int64_t row) {
  return predict(model, table.row(row));
}

}  // namespace definetti
}  // namespace privattack
