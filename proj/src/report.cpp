#include "lindy/report.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

namespace lindy {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

} // namespace

void sort_rows(std::vector<Row>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.quantity != b.quantity) return a.quantity < b.quantity;
    return a.m < b.m;
  });
}

void write_csv(std::ostream& out, const std::vector<Row>& rows) {
  out << "quantity,m,lower,upper,reference,rule,pass\n";
  for (const auto& r : rows) {
    out << r.quantity << ',' << r.m << ',' << fmt(r.lower) << ',' << fmt(r.upper) << ',' << fmt(r.reference)
        << ',' << r.rule << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<Row>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"quantity", r.quantity},
                   {"m", r.m},
                   {"lower", r.lower},
                   {"upper", r.upper},
                   {"reference", r.reference},
                   {"rule", r.rule},
                   {"pass", r.pass}});
  }
  out << arr.dump(2) << '\n';
}

bool all_pass(const std::vector<Row>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.pass; });
}

} // namespace lindy
