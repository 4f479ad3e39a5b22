// Uniform report rows for every subcommand: one row per (quantity, m) with a
// certified/measured interval, the reference quantity, and the identifier of
// the inequality being checked. CSV is the flat projection of the JSON.
#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace lindy {

struct Row {
  std::string quantity;
  std::uint64_t m = 0;
  double lower = 0.0;
  double upper = 0.0;
  double reference = 0.0;
  std::string rule;
  bool pass = true;
};

// Rows are sorted by (quantity, m) so identical configs emit identical bytes.
void sort_rows(std::vector<Row>& rows);
void write_csv(std::ostream& out, const std::vector<Row>& rows);
void write_json(std::ostream& out, const std::vector<Row>& rows);

bool all_pass(const std::vector<Row>& rows);

} // namespace lindy
