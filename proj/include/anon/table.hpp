#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace anon {

// Reserved suppression symbol. Input cells may never contain it.
inline constexpr char kSuppressed[] = "*";

// Pad symbols used by the scaled-anonymity instance generator. Rejected in
// user-supplied tables so generated instances cannot collide with real data.
inline constexpr char kPad1[] = "#PAD1";
inline constexpr char kPad2[] = "#PAD2";

struct Record {
  std::vector<std::string> qi;
  std::string sa;
};

// A microdata table: a multiset of records, each with m QI values and one SA
// value over finite alphabets. Immutable after construction.
class Table {
 public:
  Table(std::size_t num_qi, std::vector<Record> records,
        std::vector<std::string> qi_names, std::string sa_name);

  std::size_t num_qi() const { return num_qi_; }
  std::size_t num_rows() const { return records_.size(); }
  const std::vector<Record>& records() const { return records_; }
  const Record& record(std::size_t i) const { return records_.at(i); }
  const std::vector<std::string>& qi_names() const { return qi_names_; }
  const std::string& sa_name() const { return sa_name_; }

  // Distinct SA values in first-appearance order.
  std::vector<std::string> sa_values() const;

 private:
  std::size_t num_qi_;
  std::vector<Record> records_;
  std::vector<std::string> qi_names_;
  std::string sa_name_;
};

// Non-empty set of zero-based row indices into a table.
struct Group {
  std::vector<std::size_t> rows;  // sorted ascending, unique
};

struct Partition {
  std::vector<Group> groups;
};

struct GeneralizedRecord {
  std::vector<std::string> qi;  // attribute value or "*"
  std::string sa;               // never suppressed
};

struct SuppressionResult {
  std::vector<GeneralizedRecord> records;
  long long cost = 0;  // |group| x (number of suppressed columns)
};

SuppressionResult suppress_group(const Table& table, const Group& group);
long long partition_cost(const Table& table, const Partition& partition);

// True iff the groups are non-empty, pairwise disjoint and cover every row.
// On failure `reason` (when non-null) receives a machine-readable tag:
// "empty-group", "bad-index", "duplicate-row", "missing-row".
bool validate_partition(const Table& table, const Partition& partition,
                        std::string* reason = nullptr);

// Groups of identical records, sorted ascending by size then by smallest row
// index. With qi_only the SA column is ignored (the k-anonymity view).
std::vector<Group> equivalence_classes(const Table& table,
                                       bool qi_only = false);

struct CsvOptions {
  // Split every QI column whose values are all digit strings of one common
  // length into one QI column per digit (reproduces per-digit zip/age QIs).
  bool split_digits = false;
  // Accept the reserved #PAD1/#PAD2 symbols (generated instances only).
  bool allow_pad = false;
};

// CSV format: header of tokens `qi:<name>` (m times) and exactly one
// `sa:<name>`; body rows of comma-separated values.
Table parse_table_csv(const std::string& text, const CsvOptions& opts = {});
Table load_table_csv(const std::string& path, const CsvOptions& opts = {});
std::string table_to_csv(const Table& table);

// Generalized output CSV (cells may be "*"), same header layout.
std::string generalized_to_csv(const Table& table, const Partition& partition);

// Partition file: one line of comma-separated row indices per group,
// final line `cost=<int>`; the single line `infeasible` when applicable.
std::string partition_to_text(const Partition& partition, long long cost);
std::optional<Partition> parse_partition_text(const std::string& text);

}  // namespace anon
