#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace triadica {

/// Subset of the points {0..63} as a bitmask.
using PointSet = std::uint64_t;

inline constexpr std::size_t kMaxPoints = 64;

inline bool contains_point(PointSet s, std::size_t x) { return (s >> x) & 1U; }
inline bool is_subset(PointSet a, PointSet b) { return (a & ~b) == 0; }
std::size_t cardinality(PointSet s);
/// Points of s in increasing order.
std::vector<std::size_t> points_of(PointSet s);
/// Position of x among the points of s (s must contain x).
std::size_t position_in(PointSet s, std::size_t x);
std::string format_set(PointSet s);

/// A finite topological space given by its explicit list of opens. The
/// list order is the stable open index used everywhere else.
class FiniteSpace {
 public:
  FiniteSpace() = default;
  FiniteSpace(std::size_t point_count, std::vector<PointSet> opens);

  static FiniteSpace discrete(std::size_t n);
  static FiniteSpace indiscrete(std::size_t n);
  /// {}, {0}, {0,1}.
  static FiniteSpace sierpinski();

  std::size_t point_count() const noexcept { return point_count_; }
  std::size_t open_count() const noexcept { return opens_.size(); }
  const std::vector<PointSet>& opens() const noexcept { return opens_; }
  PointSet open(std::size_t index) const { return opens_.at(index); }
  PointSet full_set() const;

  std::optional<std::size_t> index_of(PointSet s) const;
  /// Index of s, throwing PreconditionViolation when s is not open.
  std::size_t require_open(PointSet s) const;
  std::size_t empty_open() const { return require_open(0); }
  std::size_t full_open() const { return require_open(full_set()); }

  bool is_discrete() const;

  friend bool operator==(const FiniteSpace&, const FiniteSpace&) = default;

 private:
  std::size_t point_count_ = 0;
  std::vector<PointSet> opens_;
};

struct TopologyReport {
  bool valid = true;
  std::vector<std::string> violations;
};

TopologyReport check_topology(const FiniteSpace& space);

/// Throws PreconditionViolation listing the violations if the space is
/// not a topology.
void require_topology(const FiniteSpace& space);

std::size_t minimal_open(const FiniteSpace& space, std::size_t x);
std::size_t minimal_open_superset(const FiniteSpace& space, PointSet k);

struct ContinuityResult {
  bool continuous = true;
  /// An open of the codomain whose preimage is not open.
  std::optional<PointSet> witness;
};

ContinuityResult is_continuous(const std::vector<std::size_t>& values, const FiniteSpace& domain,
                               const FiniteSpace& codomain);

class ContinuousMap {
 public:
  /// Throws PreconditionViolation if the table is malformed or f is not
  /// continuous.
  ContinuousMap(FiniteSpace domain, FiniteSpace codomain, std::vector<std::size_t> values);

  static ContinuousMap identity(const FiniteSpace& space);
  static ContinuousMap constant(const FiniteSpace& domain, const FiniteSpace& codomain,
                                std::size_t point);

  const FiniteSpace& domain() const noexcept { return domain_; }
  const FiniteSpace& codomain() const noexcept { return codomain_; }
  const std::vector<std::size_t>& values() const noexcept { return values_; }
  std::size_t operator()(std::size_t x) const { return values_.at(x); }

  PointSet preimage(PointSet v) const;
  PointSet image(PointSet u) const;
  /// Open index of f^-1(V) in the domain, for V an open index of the codomain.
  std::size_t preimage_open(std::size_t v) const;

  /// this after inner: x -> this(inner(x)).
  ContinuousMap after(const ContinuousMap& inner) const;

  friend bool operator==(const ContinuousMap&, const ContinuousMap&) = default;

 private:
  FiniteSpace domain_;
  FiniteSpace codomain_;
  std::vector<std::size_t> values_;
};

std::size_t preimage_open(const ContinuousMap& f, std::size_t v);

}  // namespace triadica
