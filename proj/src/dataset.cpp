#include "privattack/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "privattack/errors.hpp"
#include "privattack/rng.hpp"

namespace privattack {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

void Schema::validate() const {
  if (attributes.empty()) throw ConfigError("schema: attribute list is empty");
  std::set<std::string> seen;
  for (const auto& a : attributes) {
    if (!seen.insert(a).second)
      throw ConfigError("schema: duplicate attribute '" + a + "'");
  }
  if (qi.empty()) throw ConfigError("schema: qi list is empty");
  if (sa.empty()) throw ConfigError("schema: sa attribute is not set");
  for (const auto& q : qi) {
    if (!seen.count(q))
      throw ConfigError("schema: qi attribute '" + q + "' is not a column");
    if (q == sa)
      throw ConfigError("schema: sa attribute '" + sa + "' also listed as qi");
  }
  if (!seen.count(sa))
    throw ConfigError("schema: sa attribute '" + sa + "' is not a column");
  std::set<std::string> qi_seen;
  for (const auto& q : qi)
    if (!qi_seen.insert(q).second)
      throw ConfigError("schema: duplicate qi attribute '" + q + "'");
  for (const auto& [attr, bounds] : buckets) {
    if (!seen.count(attr))
      throw ConfigError("schema: bucket attribute '" + attr + "' is not a column");
    if (bounds.empty())
      throw ConfigError("schema: empty bucket boundaries for '" + attr + "'");
    for (std::size_t i = 1; i < bounds.size(); ++i)
      if (!(bounds[i - 1] < bounds[i]))
        throw ConfigError("schema: bucket boundaries for '" + attr +
                          "' must be strictly increasing");
  }
}

int Schema::attribute_index(std::string_view name) const {
  for (std::size_t i = 0; i < attributes.size(); ++i)
    if (attributes[i] == name) return static_cast<int>(i);
  return -1;
}

Table load_csv(const std::string& path, const Schema& schema,
               const std::string& missing_token, bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file '" + path + "'");

  Table table;
  table.schema = schema;

  std::string line;
  std::size_t line_no = 0;
  bool expect_header = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (expect_header) {
      expect_header = false;
      if (table.schema.attributes.empty()) table.schema.attributes = fields;
      continue;
    }
    if (table.schema.attributes.empty())
      throw ConfigError("schema: attribute list is empty and file '" + path +
                        "' has no header to take names from");
    if (fields.size() != table.schema.attributes.size())
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(table.schema.attributes.size()) +
                      " fields, got " + std::to_string(fields.size()));
    for (auto& f : fields)
      if (f == missing_token) f = kMissingLabel;
    table.rows.push_back(std::move(fields));
  }
  table.schema.validate();
  return table;
}

Table drop_missing_sa(const Table& table) {
  const int sa = table.schema.attribute_index(table.schema.sa);
  if (sa < 0) throw ConfigError("sa attribute '" + table.schema.sa + "' unknown");
  Table out;
  out.schema = table.schema;
  out.rows.reserve(table.rows.size());
  for (const auto& row : table.rows)
    if (row[sa] != kMissingLabel) out.rows.push_back(row);
  return out;
}

std::string bucket_label(const std::vector<double>& boundaries, double value) {
  if (value <= boundaries.front())
    return "[0-" + format_number(boundaries.front()) + "]";
  for (std::size_t j = 1; j < boundaries.size(); ++j)
    if (value <= boundaries[j])
      return "[" + format_number(boundaries[j - 1] + 1) + "-" +
             format_number(boundaries[j]) + "]";
  return format_number(boundaries.back()) + "+";
}

Table bucketize(const Table& table, const std::string& attr,
                const std::vector<double>& boundaries) {
  const int col = table.schema.attribute_index(attr);
  if (col < 0) throw ConfigError("bucketize: unknown attribute '" + attr + "'");
  if (boundaries.empty())
    throw ConfigError("bucketize: empty boundary list for '" + attr + "'");
  for (std::size_t i = 1; i < boundaries.size(); ++i)
    if (!(boundaries[i - 1] < boundaries[i]))
      throw ConfigError("bucketize: boundaries for '" + attr +
                        "' must be strictly increasing");

  Table out = table;
  for (std::size_t r = 0; r < out.rows.size(); ++r) {
    std::string& cell = out.rows[r][col];
    if (cell == kMissingLabel) continue;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0')
      throw DataError("bucketize: attribute '" + attr + "' row " +
                      std::to_string(r) + ": non-numeric value '" + cell + "'");
    cell = bucket_label(boundaries, v);
  }
  return out;
}

Table apply_buckets(const Table& table) {
  Table out = table;
  for (const auto& [attr, bounds] : table.schema.buckets)
    out = bucketize(out, attr, bounds);
  return out;
}

std::pair<Table, Table> split_train_test(const Table& table,
                                         double test_fraction,
                                         std::uint64_t seed) {
  if (test_fraction < 0.0 || test_fraction > 1.0)
    throw ConfigError("split_train_test: test_fraction must lie in [0,1]");
  const std::int64_t n = table.size();
  const std::int64_t k = std::llround(test_fraction * static_cast<double>(n));

  std::vector<std::int64_t> ids(n);
  for (std::int64_t i = 0; i < n; ++i) ids[i] = i;
  Rng rng(seed);
  for (std::int64_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::int64_t>(rng.bounded(i + 1));
    std::swap(ids[i], ids[j]);
  }
  std::vector<std::int64_t> test_ids(ids.begin(), ids.begin() + k);
  std::vector<std::int64_t> train_ids(ids.begin() + k, ids.end());
  std::sort(test_ids.begin(), test_ids.end());
  std::sort(train_ids.begin(), train_ids.end());

  Table train, test;
  train.schema = table.schema;
  test.schema = table.schema;
  train.rows.reserve(train_ids.size());
  test.rows.reserve(test_ids.size());
  for (auto i : train_ids) train.rows.push_back(table.rows[i]);
  for (auto i : test_ids) test.rows.push_back(table.rows[i]);
  return {std::move(train), std::move(test)};
}

Domain Domain::from_values(std::vector<std::string> sorted_values) {
  Domain d;
  d.values = std::move(sorted_values);
  d.index.reserve(d.values.size());
  for (std::int32_t i = 0; i < d.size(); ++i) {
    d.index.emplace(d.values[i], i);
    if (d.values[i] == kMissingLabel) d.missing_index = i;
  }
  return d;
}

Domain attribute_domain(const Table& table, const std::string& attr) {
  const int col = table.schema.attribute_index(attr);
  if (col < 0)
    throw ConfigError("attribute_domain: unknown attribute '" + attr + "'");
  std::set<std::string> distinct;
  for (const auto& row : table.rows) distinct.insert(row[col]);
  return Domain::from_values({distinct.begin(), distinct.end()});
}

DomainSet build_domains(const Table& table) {
  DomainSet ds;
  ds.qi_names = table.schema.qi;
  ds.sa_name = table.schema.sa;
  ds.qi.reserve(ds.qi_names.size());
  for (const auto& q : ds.qi_names) ds.qi.push_back(attribute_domain(table, q));
  ds.sa = attribute_domain(table, ds.sa_name);
  return ds;
}

EncodedTable encode_table(const Table& table,
                          std::shared_ptr<const DomainSet> domains) {
  EncodedTable enc;
  enc.domains = std::move(domains);
  enc.n = table.size();
  enc.m = enc.domains->num_attributes();

  std::vector<int> qi_cols(enc.m);
  for (int j = 0; j < enc.m; ++j) {
    qi_cols[j] = table.schema.attribute_index(enc.domains->qi_names[j]);
    if (qi_cols[j] < 0)
      throw ConfigError("encode_table: attribute '" +
                        enc.domains->qi_names[j] + "' not in table schema");
  }
  const int sa_col = table.schema.attribute_index(enc.domains->sa_name);
  if (sa_col < 0)
    throw ConfigError("encode_table: sa attribute '" + enc.domains->sa_name +
                      "' not in table schema");

  enc.qi.resize(enc.n * enc.m);
  enc.sa.resize(enc.n);
  for (std::int64_t r = 0; r < enc.n; ++r) {
    const auto& row = table.rows[r];
    for (int j = 0; j < enc.m; ++j)
      enc.qi[r * enc.m + j] = enc.domains->qi[j].find(row[qi_cols[j]]);
    enc.sa[r] = enc.domains->sa.find(row[sa_col]);
  }
  return enc;
}

}  // namespace privattack
