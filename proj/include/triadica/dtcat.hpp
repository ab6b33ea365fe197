#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "triadica/triad.hpp"

namespace triadica {

/// (f, f_A, f_Omega) : delta_X -> delta_Y. Components are indexed by the
/// opens V of Y: f_A[V] : A_Y(V) -> A_X(f^-1 V) and
/// f_Omega[V] : Omega_Y(V) -> Omega_X(f^-1 V).
struct TriadMorphism {
  ContinuousMap f;
  std::vector<Matrix> fA;
  std::vector<Matrix> fOmega;

  friend bool operator==(const TriadMorphism&, const TriadMorphism&) = default;
};

/// Continuity, f_A a unit-preserving algebra presheaf morphism
/// A_Y -> f_* A_X, f_Omega an f_A-semilinear presheaf morphism
/// Omega_Y -> f_* Omega_X, and the differential square f_Omega d_Y = d_X f_A per open.
/// Locations name the condition: "(i)", "(ii) ...", "(iii) ...", "(iv) ...".
Report check_morphism(const TriadMorphism& m, const DifferentialTriad& source, const DifferentialTriad& target);

/// (g f)_A[W] = f_A[g^-1 W] g_A[W], likewise for Omega.
TriadMorphism compose(const TriadMorphism& g, const TriadMorphism& f);

TriadMorphism identity_morphism(const DifferentialTriad& t);

/// The constant map X -> Y at c with c_A(alpha) = alpha(c) 1 and
/// c_Omega = 0. Throws NotFunctional if A_Y carries no embeddings.
TriadMorphism constant_morphism(const DifferentialTriad& source, const DifferentialTriad& target, std::size_t c);

struct AgreementResult {
  Report report;
  bool agree_on_image = true;
  bool agree_globally = true;
};

/// Compares f_Omega of two morphisms with the same f and f_A on a basis of
/// Im d_Y per open.
AgreementResult differential_agreement_on_image(const TriadMorphism& m1, const TriadMorphism& m2,
                                                const DifferentialTriad& source, const DifferentialTriad& target);

struct UniquenessResult {
  Report report;
  bool hypothesis_met = false;
  bool algebra_components_equal = true;
};

/// For morphisms with the same f and f_Omega over a source whose d kills
/// only constants, compares the f_A components. Differences are located
/// and checked to land in ker d_X. Without the hypothesis the report is
/// exploratory and asserts nothing.
UniquenessResult algebra_component_uniqueness(const TriadMorphism& m1, const TriadMorphism& m2,
                                              const DifferentialTriad& source, const DifferentialTriad& target);

struct EvaluationCharacter {
  std::size_t open = 0;
  Character character;
  /// ev^V_x = ev_x r^V_{U_x} for every open V containing x.
  Report consistency;
};

/// Evaluation at x on the stalk of a functional algebra presheaf. Throws
/// NotFunctional without embeddings.
EvaluationCharacter evaluation_character(const AlgebraPresheaf& a, std::size_t x);

/// h_V(alpha) = alpha o f on U -> Q^|U| presheaves.
PresheafMorphism pullback_morphism(const ContinuousMap& f);

/// Point map read off from h: x -> the point whose evaluation equals
/// ev_x h_Y on global sections, if there is one.
std::optional<std::vector<std::size_t>> recover_map(const PresheafMorphism& h, const ContinuousMap& f);

/// Checks that a unit-preserving presheaf morphism h : A_Y -> f_* A_X of
/// full functional presheaves is the pullback along f. Non-discrete
/// spaces give an exploratory report.
Report verify_pullback_forced(const ContinuousMap& f, const PresheafMorphism& h);

/// Every unit-preserving presheaf morphism between presheaves whose
/// sections are function algebras Q^k, by backtracking over opens in
/// decreasing size with restriction pruning. Throws PreconditionViolation
/// if some section is not a function algebra.
std::vector<PresheafMorphism> enumerate_function_presheaf_morphisms(const AlgebraPresheaf& source,
                                                                    const AlgebraPresheaf& target);

struct AffineMorphismFamily {
  std::vector<Matrix> particular;
  std::vector<std::vector<Matrix>> directions;
};

/// All f_Omega completing (f, f_A) to a morphism: an affine family, or
/// nothing if conditions (iii)-(iv) cannot be met.
std::optional<AffineMorphismFamily> omega_components(const ContinuousMap& f, const std::vector<Matrix>& fA,
                                                     const DifferentialTriad& source,
                                                     const DifferentialTriad& target);

struct FullnessResult {
  Report report;
  std::size_t map_count = 0;
  std::size_t morphism_count = 0;
  /// Each point map carries exactly one morphism and it is the pullback.
  bool bijective = false;
};

/// Enumerates all morphisms between the Omega = 0 functional triads on
/// discrete X and Y. Throws BoundExceeded when |Y|^|X| > bound and
/// PreconditionViolation on non-discrete spaces.
FullnessResult fullness_check(const FiniteSpace& x, const FiniteSpace& y, std::uint64_t bound = 64);

}  // namespace triadica
