#pragma once

#include <optional>
#include <vector>

#include "triadica/algebra.hpp"
#include "triadica/finite_space.hpp"
#include "triadica/report.hpp"

namespace triadica {

/// Per-open finite-dimensional vector spaces with restriction matrices
/// r^U_V : S(U) -> S(V) for every pair of opens V ⊆ U. This is the linear
/// skeleton shared by algebra and module presheaves.
class RestrictionSystem {
 public:
  RestrictionSystem() = default;
  RestrictionSystem(FiniteSpace space, std::vector<std::size_t> dims);

  const FiniteSpace& space() const noexcept { return space_; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t dim(std::size_t open) const { return dims_.at(open); }

  bool has_restriction(std::size_t from, std::size_t to) const;
  /// r^from_to; the pair must satisfy open(to) ⊆ open(from).
  const Matrix& restriction(std::size_t from, std::size_t to) const;
  void set_restriction(std::size_t from, std::size_t to, Matrix m);

  /// Fills identities, maps into or out of zero-dimensional sections, and
  /// composites through intermediate opens for every pair still missing. Throws
  /// DimensionMismatch if some pair cannot be derived.
  void complete();

  friend bool operator==(const RestrictionSystem&, const RestrictionSystem&) = default;

 private:
  std::size_t slot(std::size_t from, std::size_t to) const { return from * dims_.size() + to; }

  FiniteSpace space_;
  std::vector<std::size_t> dims_;
  std::vector<Matrix> restrictions_;
  std::vector<bool> present_;
};

/// Dimensions, identities r^U_U and r^V_W r^U_V = r^U_W on all chains.
Report check_functoriality(const RestrictionSystem& system);

struct AlgebraPresheaf {
  RestrictionSystem system;
  std::vector<Algebra> sections;
  /// Optional functional structure: per open U, an injective unital
  /// morphism A(U) -> Q^|U| compatible with restrictions.
  std::optional<std::vector<Matrix>> embeddings;

  const FiniteSpace& space() const noexcept { return system.space(); }
  const Algebra& algebra(std::size_t open) const { return sections.at(open); }
  const Matrix& restriction(std::size_t from, std::size_t to) const { return system.restriction(from, to); }
  bool is_functional() const noexcept { return embeddings.has_value(); }

  friend bool operator==(const AlgebraPresheaf&, const AlgebraPresheaf&) = default;
};

struct ModulePresheaf {
  RestrictionSystem system;
  /// sections[U] is a module over the algebra of the base presheaf at U.
  std::vector<Module> sections;

  const Module& module(std::size_t open) const { return sections.at(open); }
  const Matrix& restriction(std::size_t from, std::size_t to) const { return system.restriction(from, to); }

  friend bool operator==(const ModulePresheaf&, const ModulePresheaf&) = default;
};

/// Builds an algebra presheaf from per-open algebras and whatever
/// restrictions are given, completing the rest (see RestrictionSystem::complete).
AlgebraPresheaf make_algebra_presheaf(FiniteSpace space, std::vector<Algebra> sections);

Report validate_algebra_presheaf(const AlgebraPresheaf& p);
Report validate_module_presheaf(const AlgebraPresheaf& base, const ModulePresheaf& m);

/// U -> A for every nonempty U, identity restrictions.
AlgebraPresheaf constant_presheaf(const FiniteSpace& space, const Algebra& a);
/// U -> Q^|U| with restriction of functions; functional via the identity.
AlgebraPresheaf functional_presheaf(const FiniteSpace& space);
/// U -> product of the given per-point algebras over x in U, with
/// projections as restrictions.
AlgebraPresheaf pointwise_product_presheaf(const FiniteSpace& space, const std::vector<Algebra>& stalks);
/// Omega = 0 over the given presheaf.
ModulePresheaf zero_module_presheaf(const AlgebraPresheaf& base);

/// Product algebra with coordinates concatenated.
Algebra product_algebra(const std::vector<Algebra>& factors);

/// Componentwise linear maps S(U) -> T(U), one per open.
struct PresheafMorphism {
  std::vector<Matrix> components;

  friend bool operator==(const PresheafMorphism&, const PresheafMorphism&) = default;
};

PresheafMorphism identity_morphism(const RestrictionSystem& system);

/// Dimensions and naturality h_V r^U_V = rho^U_V h_U.
Report check_presheaf_morphism(const PresheafMorphism& h, const RestrictionSystem& source,
                               const RestrictionSystem& target);
/// Additionally requires every component to be a unital algebra morphism.
Report check_algebra_presheaf_morphism(const PresheafMorphism& h, const AlgebraPresheaf& source,
                                       const AlgebraPresheaf& target);

}  // namespace triadica
