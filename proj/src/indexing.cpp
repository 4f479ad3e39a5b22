#include "lindy/indexing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace lindy {

namespace {

Index checked_add(Index a, Index b, const char* what) {
  Index out;
  if (__builtin_add_overflow(a, b, &out)) throw CapacityError(what);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

Index parse_index(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return static_cast<Index>(v);
  } catch (const std::exception&) {
    throw ConfigError(std::string(what) + ": cannot parse integer '" + s + "'");
  }
}

void require_ge2(std::span<const Index> terms) {
  for (Index t : terms)
    if (t < 2) throw ConfigError("delta terms must be integers >= 2, got " + std::to_string(t));
}

} // namespace

DeltaSpec DeltaSpec::constant(Index c) {
  if (c < 2) throw ConfigError("delta const rule needs c >= 2, got " + std::to_string(c));
  DeltaSpec spec;
  spec.rule_ = Rule::Constant;
  spec.constant_ = c;
  spec.nondecreasing_ = true;
  return spec;
}

DeltaSpec DeltaSpec::explicit_list(std::vector<Index> terms, std::optional<Index> tail) {
  if (terms.empty()) throw ConfigError("delta list rule needs at least one term");
  require_ge2(terms);
  DeltaSpec spec;
  spec.rule_ = Rule::Explicit;
  spec.terms_ = std::move(terms);
  spec.tail_ = tail.value_or(spec.terms_.back());
  if (*spec.tail_ < 2) throw ConfigError("delta tail must be >= 2");
  spec.nondecreasing_ = std::is_sorted(spec.terms_.begin(), spec.terms_.end()) &&
                        *spec.tail_ >= spec.terms_.back();
  return spec;
}

DeltaSpec DeltaSpec::power(double exponent) {
  if (!(exponent >= 0.0) || !std::isfinite(exponent))
    throw ConfigError("delta pow rule needs a finite exponent >= 0");
  DeltaSpec spec;
  spec.rule_ = Rule::Power;
  spec.exponent_ = exponent;
  spec.nondecreasing_ = true; // max(2, ceil(n^a)) is nondecreasing for a >= 0
  return spec;
}

DeltaSpec DeltaSpec::table(std::vector<Index> terms) {
  if (terms.empty()) throw ConfigError("delta table rule needs at least one term");
  require_ge2(terms);
  DeltaSpec spec;
  spec.rule_ = Rule::Table;
  spec.nondecreasing_ = std::is_sorted(terms.begin(), terms.end());
  spec.terms_ = std::move(terms);
  return spec;
}

DeltaSpec DeltaSpec::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ConfigError("delta spec '" + text + "' missing rule prefix (const:/list:/pow:/table:)");
  std::string kind = text.substr(0, colon);
  std::string body = text.substr(colon + 1);
  if (kind == "const") return constant(parse_index(body, "delta const"));
  if (kind == "pow") {
    try {
      return power(std::stod(body));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("delta pow: cannot parse exponent '" + body + "'");
    }
  }
  if (kind == "list") {
    std::optional<Index> tail;
    auto semi = body.find(';');
    if (semi != std::string::npos) {
      std::string opt = body.substr(semi + 1);
      body = body.substr(0, semi);
      if (opt.rfind("tail=", 0) != 0) throw ConfigError("delta list: expected ';tail=<c>', got '" + opt + "'");
      tail = parse_index(opt.substr(5), "delta tail");
    }
    std::vector<Index> terms;
    for (const auto& part : split(body, ',')) terms.push_back(parse_index(part, "delta list"));
    return explicit_list(std::move(terms), tail);
  }
  if (kind == "table") {
    std::ifstream in(body);
    if (!in) throw ConfigError("delta table: cannot open '" + body + "'");
    std::vector<Index> terms;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      terms.push_back(parse_index(line, "delta table"));
    }
    return table(std::move(terms));
  }
  throw ConfigError("unknown delta rule '" + kind + "'");
}

Index DeltaSpec::term(Index n) const {
  switch (rule_) {
    case Rule::Constant:
      return constant_;
    case Rule::Explicit:
      if (n <= terms_.size()) return terms_[static_cast<size_t>(n - 1)];
      return *tail_;
    case Rule::Power: {
      // d_n = max(2, ceil(n^a)); long double keeps ceil exact within table range
      long double v = std::ceil(std::pow(static_cast<long double>(n), static_cast<long double>(exponent_)));
      if (v >= static_cast<long double>(std::numeric_limits<Index>::max()))
        throw CapacityError("pow delta term overflows index type");
      return std::max<Index>(2, static_cast<Index>(v));
    }
    case Rule::Table:
      if (n <= terms_.size()) return terms_[static_cast<size_t>(n - 1)];
      throw CapacityError("delta table exhausted at n=" + std::to_string(n));
  }
  throw ConfigError("corrupt delta rule");
}

std::optional<Index> DeltaSpec::term_limit() const {
  if (rule_ == Rule::Table) return static_cast<Index>(terms_.size());
  return std::nullopt;
}

std::string DeltaSpec::describe() const {
  switch (rule_) {
    case Rule::Constant:
      return "const:" + std::to_string(constant_);
    case Rule::Explicit: {
      std::string s = "list:";
      for (size_t i = 0; i < std::min<size_t>(terms_.size(), 8); ++i)
        s += (i ? "," : "") + std::to_string(terms_[i]);
      if (terms_.size() > 8) s += ",...";
      s += ";tail=" + std::to_string(*tail_);
      return s;
    }
    case Rule::Power: {
      std::ostringstream os;
      os << "pow:" << exponent_;
      return os.str();
    }
    case Rule::Table:
      return "table[" + std::to_string(terms_.size()) + " terms]";
  }
  return "?";
}

IndexTables::IndexTables(DeltaSpec spec, Index max_index) : spec_(std::move(spec)), max_index_(max_index) {
  if (max_index < 2) throw ConfigError("max_index must be >= 2");
  // sigma(k) grows past max_index after at most max_index/2 steps since d >= 2.
  sigma_.push_back(2);
  Index prev_d = 0;
  while (sigma_.back() <= max_index) {
    Index k = static_cast<Index>(sigma_.size()); // next term needed: d_k
    Index d;
    try {
      d = spec_.term(k);
    } catch (const CapacityError&) {
      // finite table ran out: coverage ends here
      max_index_ = sigma_.back() - 1;
      break;
    }
    if (d < 2) throw ConfigError("generated d_" + std::to_string(k) + " = " + std::to_string(d) + " < 2");
    if (spec_.nondecreasing_hint() && d < prev_d)
      throw ConfigError("delta flagged nondecreasing but d_" + std::to_string(k) + " decreases");
    if (d < prev_d) nondecreasing_ = false;
    prev_d = d;
    sigma_.push_back(checked_add(sigma_.back(), d, "sigma overflows index type"));
  }
  if (sigma_.size() < 2) throw CapacityError("delta table too short to cover any coordinate");

  lambda_.push_back(1);
  lambda_.push_back(2);
  while (lambda_.back() <= sigma_count()) {
    lambda_.push_back(sigma(lambda_.back()));
  }
}

Index IndexTables::delta(Index k) const {
  if (k < 1 || k >= sigma_count()) throw CapacityError("delta(k) out of cached range, k=" + std::to_string(k));
  return sigma_[static_cast<size_t>(k)] - sigma_[static_cast<size_t>(k - 1)];
}

Index IndexTables::sigma(Index k) const {
  if (k < 1 || k > sigma_count()) throw CapacityError("sigma(k) out of cached range, k=" + std::to_string(k));
  return sigma_[static_cast<size_t>(k - 1)];
}

Index IndexTables::rho(Index k) const {
  if (k < 2) throw ConfigError("rho(k) requires k >= 2, got " + std::to_string(k));
  if (k >= sigma_.back()) throw CapacityError("rho(k) out of cached range, k=" + std::to_string(k));
  // binary search: greatest j with sigma(j) <= k
  auto it = std::upper_bound(sigma_.begin(), sigma_.end(), k);
  return static_cast<Index>(it - sigma_.begin());
}

Index IndexTables::lambda_at(Index n) const {
  if (n >= lambda_.size()) throw CapacityError("Lambda(n) beyond max level, n=" + std::to_string(n));
  return lambda_[static_cast<size_t>(n)];
}

Index IndexTables::gamma(Index m) const {
  if (m < 1) throw ConfigError("Gamma(m) requires m >= 1");
  if (m >= lambda_.back()) throw CapacityError("Gamma(m) beyond cached levels, m=" + std::to_string(m));
  auto it = std::upper_bound(lambda_.begin(), lambda_.end(), m);
  return static_cast<Index>(it - lambda_.begin()) - 1;
}

Index IndexTables::sigma_iterate(Index k, Index n) const {
  if (k < 1) throw ConfigError("sigma_iterate requires k >= 1");
  Index v = k;
  for (Index i = 0; i < n; ++i) {
    if (v > sigma_count()) throw CapacityError("sigma iterate leaves cached range");
    v = sigma(v);
  }
  return v;
}

IndexInterval IndexTables::block_interval(Index k, Index n) const {
  return {sigma_iterate(k, n), sigma_iterate(k + 1, n)};
}

std::shared_ptr<const IndexTables> make_tables_for_basis(const DeltaSpec& spec, Index max_k, Index min_coordinate) {
  Index acc = 2; // sigma(1)
  for (Index j = 1; j <= max_k; ++j) {
    Index d;
    try {
      d = spec.term(j);
    } catch (const CapacityError&) {
      break; // finite table: cover as much as it allows
    }
    acc = checked_add(acc, d, "sigma overflows index type");
  }
  return std::make_shared<const IndexTables>(spec, std::max(acc, min_coordinate));
}

std::vector<IndexInterval> IndexTables::sigma_set(std::span<const Index> A) const {
  std::vector<IndexInterval> blocks;
  blocks.reserve(A.size());
  for (Index k : A) blocks.push_back({sigma(k), sigma(k + 1)});
  std::sort(blocks.begin(), blocks.end(), [](const IndexInterval& a, const IndexInterval& b) { return a.lo < b.lo; });
  std::vector<IndexInterval> merged;
  for (const auto& b : blocks) {
    if (b.size() == 0) continue;
    if (!merged.empty() && merged.back().hi == b.lo)
      merged.back().hi = b.hi;
    else
      merged.push_back(b);
  }
  return merged;
}

} // namespace lindy
