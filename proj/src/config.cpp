#include "lindy/config.hpp"

#include <algorithm>
#include <sstream>

#include "lindy/errors.hpp"

namespace lindy {

void ExperimentConfig::validate() const {
  if (!(p > 0.0) || p > 1.0) throw ConfigError("p must lie in (0, 1]");
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
  if (!std::is_sorted(m_grid.begin(), m_grid.end()) ||
      std::adjacent_find(m_grid.begin(), m_grid.end()) != m_grid.end())
    throw ConfigError("m grid must be strictly increasing");
}

std::vector<Index> parse_m_grid(const std::string& text) {
  std::vector<std::string> tokens;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) tokens.push_back(item);

  auto parse_one = [](const std::string& s) -> Index {
    try {
      size_t pos = 0;
      auto v = std::stoull(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("m grid: cannot parse '" + s + "'");
    }
  };

  std::vector<Index> grid;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    if (tok == ".." || tok == "...") {
      if (grid.size() < 2 || i + 1 >= tokens.size())
        throw ConfigError("m grid: '...' needs two values before and one after");
      Index a = grid[grid.size() - 2], b = grid.back();
      Index stop = parse_one(tokens[i + 1]);
      ++i;
      if (!(b > a && stop > b)) throw ConfigError("m grid: '...' needs an increasing prefix");
      bool ratio_ok = b % a == 0 && b / a >= 2;
      // three known values pin the progression; with two, pick the one whose
      // step lands exactly on the stop value (geometric wins ties)
      bool geometric = ratio_ok;
      if (grid.size() >= 3 && ratio_ok) {
        Index c = grid[grid.size() - 3];
        geometric = a % c == 0 && a / c == b / a;
      } else if (ratio_ok) {
        Index r = b / a, v = b;
        bool geo_hit = false;
        while (v <= stop / r) {
          v *= r;
          if (v == stop) geo_hit = true;
        }
        bool arith_hit = (stop - b) % (b - a) == 0;
        geometric = geo_hit || !arith_hit;
      }
      if (geometric) {
        Index r = b / a;
        for (Index v = b * r; v <= stop; v *= r) grid.push_back(v);
      } else {
        Index d = b - a;
        for (Index v = b + d; v <= stop; v += d) grid.push_back(v);
      }
      if (grid.back() != stop) grid.push_back(stop);
    } else {
      auto range = tok.find("..");
      if (range != std::string::npos) {
        Index a = parse_one(tok.substr(0, range));
        Index b = parse_one(tok.substr(range + 2));
        if (b < a) throw ConfigError("m grid: descending range");
        for (Index v = a; v <= b; ++v) grid.push_back(v);
      } else {
        grid.push_back(parse_one(tok));
      }
    }
  }
  if (grid.empty()) throw ConfigError("m grid is empty");
  if (!std::is_sorted(grid.begin(), grid.end()) || std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw ConfigError("m grid must be strictly increasing");
  return grid;
}

std::vector<Index> default_m_grid(Index limit) {
  std::vector<Index> grid;
  for (Index m = 2; m <= limit; m *= 2) grid.push_back(m);
  return grid;
}

} // namespace lindy
