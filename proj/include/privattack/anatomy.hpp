#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "privattack/dataset.hpp"
#include "privattack/rng.hpp"

namespace privattack {

// One published group: the member row ids (their QI records stay readable
// through the table) and the multiset of SA values, with the exact mapping
// withheld. Base groups produced by anonymize() have l or l+1 members with
// pairwise distinct SA values.
struct Group {
  std::vector<std::int32_t> rows;         // ascending row ids
  std::vector<std::int32_t> sa_multiset;  // ascending SA indices

  std::int32_t size() const { return static_cast<std::int32_t>(rows.size()); }
};

struct AnatomyRelease {
  int l = 2;
  std::vector<Group> groups;           // creation order; "adjacent" = consecutive
  std::vector<std::int32_t> group_of;  // row id -> group index
  // QI records of the members. table->sa is the hidden truth, retained for
  // evaluation only; the sampler never reads it.
  std::shared_ptr<const EncodedTable> table;

  std::int64_t n() const { return table ? table->n : 0; }
};

struct Eligibility {
  bool feasible = false;
  std::int64_t max_sa_count = 0;
  std::int32_t max_sa_index = -1;
  std::int64_t num_groups = 0;  // floor(n/l), the group budget
};

// Feasibility of an l-diverse Anatomy partition into groups of size l or l+1
// with distinct SA values per group: the most frequent SA count may not
// exceed floor(n/l), and floor(n/l) groups must be able to absorb the n mod l
// oversize members (floor(n/l) >= n mod l, which only binds for tiny n).
Eligibility check_eligibility(const EncodedTable& table, int l);

// Residual-count greedy: each group draws one uniformly random tuple from
// each of the k SA values with the largest remaining counts, where k is the
// group's size; the n mod l groups of size l+1 are formed first, which makes
// the eligibility condition sufficient for completion.
AnatomyRelease anonymize(std::shared_ptr<const EncodedTable> table, int l,
                         Rng& rng);

// Concatenates consecutive runs of `factor` groups (trailing short run merged
// as-is). l is unchanged; SA multiplicities stay <= factor <= group size / l,
// so the result is still l-diverse.
AnatomyRelease merge_groups(const AnatomyRelease& release, int factor);

// Throws DataError when a release invariant is violated; used by tests and
// by anonymize() itself before returning.
void validate_release(const AnatomyRelease& release, bool base_groups);

// Serialization: members as (group_id,row_id,<qi columns>), SA multisets as
// (group_id,sa_value,multiplicity), truth as (row_id,sa_value).
void write_members_csv(const AnatomyRelease& release, std::ostream& out);
void write_sa_multisets_csv(const AnatomyRelease& release, std::ostream& out);
void write_truth_csv(const AnatomyRelease& release, std::ostream& out);

}  // namespace privattack
