#include "privattack/anatomy.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "privattack/errors.hpp"

namespace privattack {
namespace {

std::vector<std::int64_t> sa_histogram(const EncodedTable& table) {
  std::vector<std::int64_t> counts(table.domains->sa.size(), 0);
  for (std::int64_t r = 0; r < table.n; ++r) {
    if (table.sa[r] < 0)
      throw DataError("anatomy: row " + std::to_string(r) +
                      " has an SA value outside the domain");
    ++counts[table.sa[r]];
  }
  return counts;
}

// Residual-count greedy with the group sizes committed up front: the
// n mod l oversize groups (size l+1) are formed first, then size-l groups,
// each taking one uniformly random tuple from the k most frequent remaining
// SA values. While b oversize groups remain out of g, every count is at most
// g and at most l + b/g values can sit at that maximum, so the k picked
// values always cover them and the bound survives the round. Eligibility
// (max count <= floor(n/l), n mod l <= floor(n/l)) therefore guarantees
// completion with no leftover phase.
void greedy_groups(const EncodedTable& table, int l, Rng& rng,
                   std::vector<Group>& groups) {
  const auto S = static_cast<std::int32_t>(table.domains->sa.size());
  std::vector<std::vector<std::int32_t>> buckets(S);
  for (std::int64_t r = 0; r < table.n; ++r)
    buckets[table.sa[r]].push_back(static_cast<std::int32_t>(r));

  groups.clear();
  const std::int64_t num_groups = table.n / l;
  const std::int64_t oversize = table.n % l;
  std::vector<std::int32_t> order(S);
  std::iota(order.begin(), order.end(), 0);

  for (std::int64_t gi = 0; gi < num_groups; ++gi) {
    const int k = gi < oversize ? l + 1 : l;
    // the k SA values with the largest remaining counts; ties by SA order
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](std::int32_t a, std::int32_t b) {
                        if (buckets[a].size() != buckets[b].size())
                          return buckets[a].size() > buckets[b].size();
                        return a < b;
                      });
    Group g;
    for (int j = 0; j < k; ++j) {
      auto& bucket = buckets[order[j]];
      const auto pick = static_cast<std::size_t>(rng.bounded(bucket.size()));
      g.rows.push_back(bucket[pick]);
      g.sa_multiset.push_back(order[j]);
      bucket[pick] = bucket.back();
      bucket.pop_back();
    }
    std::sort(g.rows.begin(), g.rows.end());
    std::sort(g.sa_multiset.begin(), g.sa_multiset.end());
    groups.push_back(std::move(g));
  }
}

void fill_group_of(AnatomyRelease& release) {
  release.group_of.assign(release.n(), -1);
  for (std::size_t g = 0; g < release.groups.size(); ++g)
    for (const std::int32_t r : release.groups[g].rows)
      release.group_of[r] = static_cast<std::int32_t>(g);
}

}  // namespace

Eligibility check_eligibility(const EncodedTable& table, int l) {
  if (l < 2) throw ConfigError("anatomy: l must be at least 2");
  const auto counts = sa_histogram(table);
  Eligibility e;
  for (std::int32_t s = 0; s < static_cast<std::int32_t>(counts.size()); ++s) {
    if (counts[s] > e.max_sa_count) {
      e.max_sa_count = counts[s];
      e.max_sa_index = s;
    }
  }
  e.num_groups = table.n / l;
  const std::int64_t oversize = table.n % l;  // members beyond l per group
  e.feasible = e.max_sa_count <= e.num_groups && oversize <= e.num_groups;
  return e;
}

AnatomyRelease anonymize(std::shared_ptr<const EncodedTable> table, int l,
                         Rng& rng) {
  if (!table) throw ConfigError("anonymize: null table");
  const Eligibility e = check_eligibility(*table, l);
  if (!e.feasible) {
    std::string offender = e.max_sa_index >= 0
                               ? table->domains->sa.values[e.max_sa_index]
                               : std::string("?");
    throw EligibilityError(
        "anonymize: no l-diverse partition for l=" + std::to_string(l) +
        ": SA value '" + offender + "' occurs " +
        std::to_string(e.max_sa_count) + " times but only " +
        std::to_string(e.num_groups) + " groups fit " +
        std::to_string(table->n) + " rows");
  }

  AnatomyRelease release;
  release.l = l;
  release.table = table;
  greedy_groups(*table, l, rng, release.groups);
  fill_group_of(release);
  validate_release(release, /*base_groups=*/true);
  return release;
}

AnatomyRelease merge_groups(const AnatomyRelease& release, int factor) {
  if (factor < 2) throw ConfigError("merge_groups: factor must be at least 2");
  AnatomyRelease merged;
  merged.l = release.l;
  merged.table = release.table;
  for (std::size_t start = 0; start < release.groups.size(); start += factor) {
    const std::size_t stop =
        std::min(start + static_cast<std::size_t>(factor), release.groups.size());
    Group g;
    for (std::size_t i = start; i < stop; ++i) {
      const Group& src = release.groups[i];
      g.rows.insert(g.rows.end(), src.rows.begin(), src.rows.end());
      g.sa_multiset.insert(g.sa_multiset.end(), src.sa_multiset.begin(),
                           src.sa_multiset.end());
    }
    std::sort(g.rows.begin(), g.rows.end());
    std::sort(g.sa_multiset.begin(), g.sa_multiset.end());
    merged.groups.push_back(std::move(g));
  }
  fill_group_of(merged);
  return merged;
}

void validate_release(const AnatomyRelease& release, bool base_groups) {
  const std::int64_t n = release.n();
  std::vector<char> seen(n, 0);
  for (const auto& g : release.groups) {
    if (g.rows.size() != g.sa_multiset.size())
      throw DataError("release: row/SA arity mismatch in a group");
    if (base_groups) {
      if (g.size() != release.l && g.size() != release.l + 1)
        throw DataError("release: base group size " + std::to_string(g.size()) +
                        " not in {l, l+1}");
      for (std::size_t i = 1; i < g.sa_multiset.size(); ++i)
        if (g.sa_multiset[i] == g.sa_multiset[i - 1])
          throw DataError("release: duplicate SA value in a base group");
    }
    // l-diversity: multiplicity * l <= group size
    std::size_t i = 0;
    while (i < g.sa_multiset.size()) {
      std::size_t j = i;
      while (j < g.sa_multiset.size() && g.sa_multiset[j] == g.sa_multiset[i])
        ++j;
      if (static_cast<std::int64_t>(j - i) * release.l > g.size())
        throw DataError("release: SA multiplicity breaks l-diversity");
      i = j;
    }
    for (const std::int32_t r : g.rows) {
      if (r < 0 || r >= n || seen[r])
        throw DataError("release: groups do not partition the rows");
      seen[r] = 1;
    }
  }
  for (std::int64_t r = 0; r < n; ++r)
    if (!seen[r]) throw DataError("release: row " + std::to_string(r) +
                                  " missing from every group");
  // hidden truth restricted to a group is a permutation of its SA multiset
  for (const auto& g : release.groups) {
    std::vector<std::int32_t> truth;
    truth.reserve(g.rows.size());
    for (const std::int32_t r : g.rows) truth.push_back(release.table->sa[r]);
    std::sort(truth.begin(), truth.end());
    if (truth != g.sa_multiset)
      throw DataError("release: SA multiset does not match the hidden truth");
  }
}

void write_members_csv(const AnatomyRelease& release, std::ostream& out) {
  const DomainSet& ds = *release.table->domains;
  out << "group_id,row_id";
  for (const auto& name : ds.qi_names) out << ',' << name;
  out << '\n';
  for (std::size_t g = 0; g < release.groups.size(); ++g) {
    for (const std::int32_t r : release.groups[g].rows) {
      out << g << ',' << r;
      const auto row = release.table->row(r);
      for (int j = 0; j < release.table->m; ++j)
        out << ',' << (row[j] >= 0 ? ds.qi[j].values[row[j]] : kMissingLabel);
      out << '\n';
    }
  }
}

void write_sa_multisets_csv(const AnatomyRelease& release, std::ostream& out) {
  const Domain& sa = release.table->domains->sa;
  out << "group_id,sa_value,multiplicity\n";
  for (std::size_t g = 0; g < release.groups.size(); ++g) {
    const auto& ms = release.groups[g].sa_multiset;
    std::size_t i = 0;
    while (i < ms.size()) {
      std::size_t j = i;
      while (j < ms.size() && ms[j] == ms[i]) ++j;
      out << g << ',' << sa.values[ms[i]] << ',' << (j - i) << '\n';
      i = j;
    }
  }
}

void write_truth_csv(const AnatomyRelease& release, std::ostream& out) {
  const Domain& sa = release.table->domains->sa;
  out << "row_id,sa_value\n";
  for (std::int64_t r = 0; r < release.n(); ++r)
    out << r << ',' << sa.values[release.table->sa[r]] << '\n';
}

}  // namespace privattack
