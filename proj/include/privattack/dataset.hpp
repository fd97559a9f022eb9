#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace privattack {

// Label that stands in for a missing value after loading. Missing QI values
// are kept and behave as an ordinary category; rows with a missing sensitive
// value are dropped by drop_missing_sa().
inline constexpr const char* kMissingLabel = "<missing>";

struct Schema {
  std::vector<std::string> attributes;  // one entry per CSV column, in order
  std::vector<std::string> qi;          // ordered subset of attributes
  std::string sa;                       // exactly one attribute, not in qi
  std::map<std::string, std::vector<double>> buckets;  // per-attribute strictly
                                                       // increasing boundaries

  void validate() const;  // throws ConfigError
  int attribute_index(std::string_view name) const;  // -1 when absent
  int num_qi() const { return static_cast<int>(qi.size()); }
};

struct Table {
  Schema schema;
  std::vector<std::vector<std::string>> rows;  // arity = schema.attributes.size()

  std::int64_t size() const { return static_cast<std::int64_t>(rows.size()); }
};

// Reads a comma-separated file. Fields are trimmed of surrounding whitespace
// (the UCI files pad with a space after each comma) and fields equal to
// missing_token are mapped to kMissingLabel. When has_header is set and the
// schema names no attributes, the header row supplies them.
Table load_csv(const std::string& path, const Schema& schema,
               const std::string& missing_token, bool has_header);

// Keeps exactly the rows whose SA value is present. Missing QI values survive.
Table drop_missing_sa(const Table& table);

// Replaces a numeric attribute by interval labels "[lo-hi]" with a final
// open bucket "hi+". Boundaries are inclusive upper bounds and are meant to be
// integers; e.g. {25,40,60} yields [0-25], [26-40], [41-60], 60+.
Table bucketize(const Table& table, const std::string& attr,
                const std::vector<double>& boundaries);

// Applies every bucket spec in table.schema.buckets.
Table apply_buckets(const Table& table);

std::string bucket_label(const std::vector<double>& boundaries, double value);

// Disjoint (train, test) partition with |test| = round(n * test_fraction).
// Row order within each part follows the input table.
std::pair<Table, Table> split_train_test(const Table& table,
                                         double test_fraction,
                                         std::uint64_t seed);

// Ordered list of the distinct values observed for one attribute.
struct Domain {
  std::vector<std::string> values;  // sorted lexicographically, distinct
  std::unordered_map<std::string, std::int32_t> index;
  std::int32_t missing_index = -1;  // position of kMissingLabel, -1 if absent

  std::int32_t size() const { return static_cast<std::int32_t>(values.size()); }
  std::int32_t find(const std::string& v) const {
    auto it = index.find(v);
    return it == index.end() ? -1 : it->second;
  }
  static Domain from_values(std::vector<std::string> sorted_values);
};

Domain attribute_domain(const Table& table, const std::string& attr);

// Domains of the QI attributes and of the SA attribute, fixed once from the
// training table. Values seen only later encode to -1.
struct DomainSet {
  std::vector<std::string> qi_names;
  std::string sa_name;
  std::vector<Domain> qi;  // parallel to qi_names
  Domain sa;

  int num_attributes() const { return static_cast<int>(qi.size()); }
};

DomainSet build_domains(const Table& table);

// Integer-coded view of a table against fixed domains. qi is row-major n x m;
// a cell holds the domain index of the value or -1 when the value is outside
// the domain. sa holds -1 for SA values outside the training SA domain.
struct EncodedTable {
  std::shared_ptr<const DomainSet> domains;
  std::vector<std::int32_t> qi;
  std::vector<std::int32_t> sa;
  std::int64_t n = 0;
  int m = 0;

  std::span<const std::int32_t> row(std::int64_t r) const {
    return {qi.data() + r * m, static_cast<std::size_t>(m)};
  }
};

EncodedTable encode_table(const Table& table,
                          std::shared_ptr<const DomainSet> domains);

}  // namespace privattack
