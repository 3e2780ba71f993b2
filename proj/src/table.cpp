#include "anon/table.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace anon {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

void check_cell(const std::string& value, bool allow_pad) {
  if (value == kSuppressed) {
    throw std::invalid_argument("cell value '*' is reserved");
  }
  if (!allow_pad && (value == kPad1 || value == kPad2)) {
    throw std::invalid_argument("cell value '" + value + "' is reserved");
  }
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

}  // namespace

Table::Table(std::size_t num_qi, std::vector<Record> records,
             std::vector<std::string> qi_names, std::string sa_name)
    : num_qi_(num_qi),
      records_(std::move(records)),
      qi_names_(std::move(qi_names)),
      sa_name_(std::move(sa_name)) {
  if (records_.empty()) throw std::invalid_argument("table has no records");
  if (qi_names_.size() != num_qi_) {
    throw std::invalid_argument("qi name count does not match num_qi");
  }
  for (const Record& r : records_) {
    if (r.qi.size() != num_qi_) {
      throw std::invalid_argument("record arity does not match table");
    }
    for (const std::string& v : r.qi) {
      if (v == kSuppressed) {
        throw std::invalid_argument("cell value '*' is reserved");
      }
    }
    if (r.sa == kSuppressed) {
      throw std::invalid_argument("cell value '*' is reserved");
    }
  }
}

std::vector<std::string> Table::sa_values() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const Record& r : records_) {
    if (seen.insert(r.sa).second) out.push_back(r.sa);
  }
  return out;
}

SuppressionResult suppress_group(const Table& table, const Group& group) {
  if (group.rows.empty()) throw std::invalid_argument("empty group");
  for (std::size_t r : group.rows) {
    if (r >= table.num_rows()) throw std::invalid_argument("bad row index");
  }
  const std::size_t m = table.num_qi();
  std::vector<bool> keep(m, true);
  const Record& first = table.record(group.rows.front());
  std::size_t suppressed = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t r : group.rows) {
      if (table.record(r).qi[i] != first.qi[i]) {
        keep[i] = false;
        break;
      }
    }
    if (!keep[i]) ++suppressed;
  }
  SuppressionResult res;
  res.cost = static_cast<long long>(group.rows.size()) *
             static_cast<long long>(suppressed);
  res.records.reserve(group.rows.size());
  for (std::size_t r : group.rows) {
    GeneralizedRecord g;
    g.qi.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      g.qi.push_back(keep[i] ? table.record(r).qi[i] : kSuppressed);
    }
    g.sa = table.record(r).sa;
    res.records.push_back(std::move(g));
  }
  return res;
}

long long partition_cost(const Table& table, const Partition& partition) {
  std::string reason;
  if (!validate_partition(table, partition, &reason)) {
    throw std::invalid_argument("invalid partition: " + reason);
  }
  long long total = 0;
  for (const Group& g : partition.groups) {
    total += suppress_group(table, g).cost;
  }
  return total;
}

bool validate_partition(const Table& table, const Partition& partition,
                        std::string* reason) {
  auto fail = [&](const char* tag) {
    if (reason) *reason = tag;
    return false;
  };
  std::vector<bool> seen(table.num_rows(), false);
  std::size_t covered = 0;
  for (const Group& g : partition.groups) {
    if (g.rows.empty()) return fail("empty-group");
    for (std::size_t r : g.rows) {
      if (r >= table.num_rows()) return fail("bad-index");
      if (seen[r]) return fail("duplicate-row");
      seen[r] = true;
      ++covered;
    }
  }
  if (covered != table.num_rows()) return fail("missing-row");
  if (reason) reason->clear();
  return true;
}

std::vector<Group> equivalence_classes(const Table& table, bool qi_only) {
  std::map<std::vector<std::string>, Group> classes;
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    std::vector<std::string> key = table.record(r).qi;
    if (!qi_only) key.push_back(table.record(r).sa);
    classes[key].rows.push_back(r);
  }
  std::vector<Group> out;
  out.reserve(classes.size());
  for (auto& [key, group] : classes) out.push_back(std::move(group));
  std::sort(out.begin(), out.end(), [](const Group& a, const Group& b) {
    if (a.rows.size() != b.rows.size()) return a.rows.size() < b.rows.size();
    return a.rows.front() < b.rows.front();
  });
  return out;
}

Table parse_table_csv(const std::string& text, const CsvOptions& opts) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty csv");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header = split(line, ',');
  std::vector<std::string> qi_names;
  std::string sa_name;
  std::vector<int> roles;  // 0 = qi, 1 = sa
  bool saw_sa = false;
  for (const std::string& tok : header) {
    if (tok.rfind("qi:", 0) == 0) {
      qi_names.push_back(tok.substr(3));
      roles.push_back(0);
    } else if (tok.rfind("sa:", 0) == 0) {
      if (saw_sa) throw std::invalid_argument("multiple sa: columns");
      saw_sa = true;
      sa_name = tok.substr(3);
      roles.push_back(1);
    } else {
      throw std::invalid_argument("bad header token: " + tok);
    }
  }
  if (!saw_sa) throw std::invalid_argument("missing sa: column");

  std::vector<Record> records;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells = split(line, ',');
    if (cells.size() != roles.size()) {
      throw std::invalid_argument("row arity does not match header");
    }
    Record rec;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      check_cell(cells[i], opts.allow_pad);
      if (roles[i] == 0) {
        rec.qi.push_back(cells[i]);
      } else {
        rec.sa = cells[i];
      }
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw std::invalid_argument("table has no records");

  if (opts.split_digits) {
    std::vector<std::string> new_names;
    std::vector<Record> new_records(records.size());
    for (std::size_t r = 0; r < records.size(); ++r) {
      new_records[r].sa = records[r].sa;
    }
    for (std::size_t i = 0; i < qi_names.size(); ++i) {
      bool splittable = all_digits(records[0].qi[i]);
      std::size_t len = records[0].qi[i].size();
      for (const Record& rec : records) {
        if (!all_digits(rec.qi[i]) || rec.qi[i].size() != len) {
          splittable = false;
          break;
        }
      }
      if (splittable && len > 1) {
        for (std::size_t d = 0; d < len; ++d) {
          new_names.push_back(qi_names[i] + std::to_string(d + 1));
          for (std::size_t r = 0; r < records.size(); ++r) {
            new_records[r].qi.push_back(std::string(1, records[r].qi[i][d]));
          }
        }
      } else {
        new_names.push_back(qi_names[i]);
        for (std::size_t r = 0; r < records.size(); ++r) {
          new_records[r].qi.push_back(records[r].qi[i]);
        }
      }
    }
    qi_names = std::move(new_names);
    records = std::move(new_records);
  }

  const std::size_t num_qi = qi_names.size();
  return Table(num_qi, std::move(records), std::move(qi_names),
               std::move(sa_name));
}

Table load_table_csv(const std::string& path, const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open table file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_table_csv(buf.str(), opts);
}

std::string table_to_csv(const Table& table) {
  std::ostringstream out;
  for (std::size_t i = 0; i < table.num_qi(); ++i) {
    out << "qi:" << table.qi_names()[i] << ",";
  }
  out << "sa:" << table.sa_name() << "\n";
  for (const Record& r : table.records()) {
    for (const std::string& v : r.qi) out << v << ",";
    out << r.sa << "\n";
  }
  return out.str();
}

std::string generalized_to_csv(const Table& table, const Partition& partition) {
  std::string reason;
  if (!validate_partition(table, partition, &reason)) {
    throw std::invalid_argument("invalid partition: " + reason);
  }
  std::vector<GeneralizedRecord> rows(table.num_rows());
  for (const Group& g : partition.groups) {
    SuppressionResult res = suppress_group(table, g);
    for (std::size_t i = 0; i < g.rows.size(); ++i) {
      rows[g.rows[i]] = res.records[i];
    }
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < table.num_qi(); ++i) {
    out << "qi:" << table.qi_names()[i] << ",";
  }
  out << "sa:" << table.sa_name() << "\n";
  for (const GeneralizedRecord& r : rows) {
    for (const std::string& v : r.qi) out << v << ",";
    out << r.sa << "\n";
  }
  return out.str();
}

std::string partition_to_text(const Partition& partition, long long cost) {
  std::ostringstream out;
  for (const Group& g : partition.groups) {
    for (std::size_t i = 0; i < g.rows.size(); ++i) {
      if (i) out << ",";
      out << g.rows[i];
    }
    out << "\n";
  }
  out << "cost=" << cost << "\n";
  return out.str();
}

std::optional<Partition> parse_partition_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Partition p;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "infeasible") return std::nullopt;
    if (line.rfind("cost=", 0) == 0) break;
    Group g;
    for (const std::string& tok : split(line, ',')) {
      g.rows.push_back(std::stoul(tok));
    }
    std::sort(g.rows.begin(), g.rows.end());
    p.groups.push_back(std::move(g));
  }
  return p;
}

}  // namespace anon
