#pragma once

#include "anon/table.hpp"

#include <string>

// Worked-example fixtures used across the test suites: a 10-row microdata
// table with zip/age/education QIs and a disease SA, plus the three
// partitions discussed alongside it. Digit columns are split per digit, so
// the table has 5 + 2 + 1 = 8 QI columns.
namespace fixtures {

inline const char* kMicroCsv =
    "qi:zip,qi:age,qi:edu,sa:disease\n"
    "98765,38,Bachelor,Viral Infection\n"
    "98654,39,Doctorate,Heart Disease\n"
    "98543,32,Master,Heart Disease\n"
    "97654,65,Bachelor,Cancer\n"
    "96689,45,Bachelor,Viral Infection\n"
    "97427,33,Bachelor,Viral Infection\n"
    "96552,54,Bachelor,Heart Disease\n"
    "97017,69,Doctorate,Cancer\n"
    "97023,55,Master,Cancer\n"
    "97009,62,Bachelor,Cancer\n";

inline anon::Table micro_table() {
  anon::CsvOptions opts;
  opts.split_digits = true;
  return anon::parse_table_csv(kMicroCsv, opts);
}

// The 3-anonymous partition (cost 54).
inline anon::Partition anon3_partition() {
  return {{{{0, 1, 2}}, {{3, 4, 5, 6}}, {{7, 8, 9}}}};
}

// The 2-diverse partition (fails closeness at t = 3/10).
inline anon::Partition diverse2_partition() {
  return {{{{0, 1}}, {{2, 4, 7, 8}}, {{3, 5}}, {{6, 9}}}};
}

// The 0.3-closeness partition (in fact 0.1-close; cost 67).
inline anon::Partition close_partition() {
  return {{{{0, 1, 3}}, {{2, 4, 7, 8}}, {{5, 6, 9}}}};
}

}  // namespace fixtures
