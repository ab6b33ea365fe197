#include "triadica/finite_space.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "triadica/errors.hpp"

namespace triadica {

std::size_t cardinality(PointSet s) { return static_cast<std::size_t>(std::popcount(s)); }

std::vector<std::size_t> points_of(PointSet s) {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; s != 0; ++x, s >>= 1) {
    if (s & 1U) out.push_back(x);
  }
  return out;
}

std::size_t position_in(PointSet s, std::size_t x) {
  PointSet below = x == 0 ? 0 : (s & ((PointSet{1} << x) - 1));
  return cardinality(below);
}

std::string format_set(PointSet s) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (auto x : points_of(s)) {
    if (!first) out << ',';
    out << x;
    first = false;
  }
  out << '}';
  return out.str();
}

FiniteSpace::FiniteSpace(std::size_t point_count, std::vector<PointSet> opens)
    : point_count_(point_count), opens_(std::move(opens)) {
  if (point_count_ > kMaxPoints) {
    throw PreconditionViolation("finite spaces are limited to 64 points");
  }
}

FiniteSpace FiniteSpace::discrete(std::size_t n) {
  if (n > 16) throw PreconditionViolation("discrete space too large to list its opens");
  std::vector<PointSet> opens;
  for (PointSet s = 0; s < (PointSet{1} << n); ++s) opens.push_back(s);
  return {n, std::move(opens)};
}

FiniteSpace FiniteSpace::indiscrete(std::size_t n) {
  FiniteSpace tmp(n, {});
  if (n == 0) return {0, {0}};
  return {n, {0, tmp.full_set()}};
}

FiniteSpace FiniteSpace::sierpinski() { return {2, {0b00, 0b01, 0b11}}; }

PointSet FiniteSpace::full_set() const {
  return point_count_ == 64 ? ~PointSet{0} : ((PointSet{1} << point_count_) - 1);
}

std::optional<std::size_t> FiniteSpace::index_of(PointSet s) const {
  auto it = std::find(opens_.begin(), opens_.end(), s);
  if (it == opens_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - opens_.begin());
}

std::size_t FiniteSpace::require_open(PointSet s) const {
  auto index = index_of(s);
  if (!index) throw PreconditionViolation(format_set(s) + " is not an open set");
  return *index;
}

bool FiniteSpace::is_discrete() const {
  for (std::size_t x = 0; x < point_count_; ++x) {
    if (!index_of(PointSet{1} << x)) return false;
  }
  return true;
}

TopologyReport check_topology(const FiniteSpace& space) {
  TopologyReport report;
  auto fail = [&](std::string message) {
    report.valid = false;
    report.violations.push_back(std::move(message));
  };
  const auto& opens = space.opens();
  const PointSet full = space.full_set();
  for (std::size_t i = 0; i < opens.size(); ++i) {
    if (!is_subset(opens[i], full)) fail("open #" + std::to_string(i) + " contains points outside the space");
    for (std::size_t j = 0; j < i; ++j) {
      if (opens[i] == opens[j]) {
        fail("duplicate open " + format_set(opens[i]) + " at #" + std::to_string(j) + " and #" + std::to_string(i));
      }
    }
  }
  if (!space.index_of(0)) fail("missing empty set");
  if (!space.index_of(full)) fail("missing full set " + format_set(full));
  std::vector<PointSet> missing;
  auto note_missing = [&](PointSet s, const char* what, PointSet a, PointSet b) {
    if (space.index_of(s) || std::find(missing.begin(), missing.end(), s) != missing.end()) return;
    missing.push_back(s);
    fail(std::string("missing ") + what + " " + format_set(a) + (what[0] == 'u' ? " | " : " & ") + format_set(b) +
         " = " + format_set(s));
  };
  for (std::size_t i = 0; i < opens.size(); ++i) {
    for (std::size_t j = i + 1; j < opens.size(); ++j) {
      note_missing(opens[i] | opens[j], "union", opens[i], opens[j]);
      if ((opens[i] & opens[j]) != 0) note_missing(opens[i] & opens[j], "intersection", opens[i], opens[j]);
    }
  }
  return report;
}

void require_topology(const FiniteSpace& space) {
  auto report = check_topology(space);
  if (report.valid) return;
  std::string message = "invalid topology:";
  for (const auto& v : report.violations) message += " " + v + ";";
  throw PreconditionViolation(message);
}

std::size_t minimal_open_superset(const FiniteSpace& space, PointSet k) {
  PointSet meet = space.full_set();
  for (PointSet u : space.opens()) {
    if (is_subset(k, u)) meet &= u;
  }
  return space.require_open(meet);
}

std::size_t minimal_open(const FiniteSpace& space, std::size_t x) {
  if (x >= space.point_count()) throw PreconditionViolation("point out of range");
  return minimal_open_superset(space, PointSet{1} << x);
}

namespace {

PointSet preimage_of(const std::vector<std::size_t>& values, PointSet v) {
  PointSet out = 0;
  for (std::size_t x = 0; x < values.size(); ++x) {
    if (contains_point(v, values[x])) out |= PointSet{1} << x;
  }
  return out;
}

}  // namespace

ContinuityResult is_continuous(const std::vector<std::size_t>& values, const FiniteSpace& domain,
                               const FiniteSpace& codomain) {
  for (PointSet v : codomain.opens()) {
    if (!domain.index_of(preimage_of(values, v))) return {false, v};
  }
  return {};
}

ContinuousMap::ContinuousMap(FiniteSpace domain, FiniteSpace codomain, std::vector<std::size_t> values)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), values_(std::move(values)) {
  if (values_.size() != domain_.point_count()) {
    throw PreconditionViolation("map table has " + std::to_string(values_.size()) + " entries, domain has " +
                                std::to_string(domain_.point_count()) + " points");
  }
  for (auto y : values_) {
    if (y >= codomain_.point_count()) throw PreconditionViolation("map value out of range");
  }
  auto result = is_continuous(values_, domain_, codomain_);
  if (!result.continuous) {
    throw PreconditionViolation("map is not continuous: preimage of " + format_set(*result.witness) +
                                " is not open");
  }
}

ContinuousMap ContinuousMap::identity(const FiniteSpace& space) {
  std::vector<std::size_t> values(space.point_count());
  for (std::size_t x = 0; x < values.size(); ++x) values[x] = x;
  return {space, space, std::move(values)};
}

ContinuousMap ContinuousMap::constant(const FiniteSpace& domain, const FiniteSpace& codomain, std::size_t point) {
  return {domain, codomain, std::vector<std::size_t>(domain.point_count(), point)};
}

PointSet ContinuousMap::preimage(PointSet v) const { return preimage_of(values_, v); }

PointSet ContinuousMap::image(PointSet u) const {
  PointSet out = 0;
  for (auto x : points_of(u)) out |= PointSet{1} << values_[x];
  return out;
}

std::size_t ContinuousMap::preimage_open(std::size_t v) const {
  return domain_.require_open(preimage(codomain_.open(v)));
}

ContinuousMap ContinuousMap::after(const ContinuousMap& inner) const {
  if (!(inner.codomain() == domain_)) throw PreconditionViolation("maps are not composable");
  std::vector<std::size_t> values(inner.domain().point_count());
  for (std::size_t x = 0; x < values.size(); ++x) values[x] = values_[inner(x)];
  return {inner.domain(), codomain_, std::move(values)};
}

std::size_t preimage_open(const ContinuousMap& f, std::size_t v) { return f.preimage_open(v); }

}  // namespace triadica
