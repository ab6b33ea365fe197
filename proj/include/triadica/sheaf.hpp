#pragma once

#include <string>
#include <utility>
#include <vector>

#include "triadica/presheaf.hpp"

namespace triadica {

/// Germs at a point. In a finite space the directed system of
/// neighbourhoods has a least element, the minimal open U_x, so the stalk
/// is S(U_x) and the germ map from U ∋ x is r^U_{U_x}.
struct StalkData {
  std::size_t open = 0;
  std::size_t dim = 0;
  /// (U, r^U_{U_x}) for every open U containing x.
  std::vector<std::pair<std::size_t, Matrix>> germ_maps;
};

StalkData stalk(const RestrictionSystem& system, std::size_t x);

struct AlgebraStalk {
  Algebra algebra;
  StalkData data;
};

struct ModuleStalk {
  Module module;
  StalkData data;
};

AlgebraStalk stalk(const AlgebraPresheaf& p, std::size_t x);
ModuleStalk stalk(const ModulePresheaf& p, std::size_t x);

struct SheafWitness {
  std::size_t open = 0;
  /// Open indices of the cover members (empty for the empty cover of ∅).
  std::vector<std::size_t> cover;
  /// "locality" (sections not separated) or "gluing" (compatible families
  /// that do not come from a section).
  std::string kind;
  std::size_t section_dim = 0;
  std::size_t equalizer_dim = 0;
  std::size_t image_rank = 0;
};

struct SheafCertificate {
  bool is_sheaf = true;
  /// Ordered by open index, then cover in lexicographic order.
  std::vector<SheafWitness> witnesses;

  Report to_report(const FiniteSpace& space) const;
};

/// Checks the equalizer condition for every open and every irredundant
/// cover by strictly smaller opens.
SheafCertificate check_sheaf_condition(const RestrictionSystem& system);

/// Irredundant covers of the open by strictly smaller nonempty opens, in
/// lexicographic order of open indices.
std::vector<std::vector<std::size_t>> irredundant_covers(const FiniteSpace& space, std::size_t open);

/// Compatible germ families: P+(U) ⊆ prod_{x in U} P(U_x).
struct Sheafification {
  RestrictionSystem system;
  /// Per open: the family subspace inside the stalk product coordinates.
  std::vector<Subspace> families;
  /// Per open: points of U and the offset of each stalk block.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> layout;
  /// Canonical morphism P -> P+.
  PresheafMorphism canonical;
};

Sheafification sheafify(const RestrictionSystem& system);

struct AlgebraSheafification {
  AlgebraPresheaf sheaf;
  PresheafMorphism canonical;
  Sheafification families;
};

/// Sheafification of an algebra presheaf. Functional structure is carried
/// over when the induced maps into functions stay injective.
AlgebraSheafification sheafify(const AlgebraPresheaf& p);

struct ModuleSheafification {
  ModulePresheaf sheaf;
  PresheafMorphism canonical;
  Sheafification families;
};

/// Sheafifies m as a module over the sheafification of its base.
ModuleSheafification sheafify(const AlgebraPresheaf& base, const ModulePresheaf& m,
                              const AlgebraSheafification& base_plus);

/// (f_* S)(V) = S(f^-1 V).
RestrictionSystem pushforward(const ContinuousMap& f, const RestrictionSystem& system);
AlgebraPresheaf pushforward(const ContinuousMap& f, const AlgebraPresheaf& p);
ModulePresheaf pushforward(const ContinuousMap& f, const ModulePresheaf& m);
/// f_*(h)_V = h_{f^-1 V}.
PresheafMorphism pushforward(const ContinuousMap& f, const PresheafMorphism& h);

/// Sections over an arbitrary subset K: the limit over opens containing K
/// is attained at the minimal open superset.
struct SectionsOverSubset {
  std::size_t open = 0;
  std::size_t dim = 0;
  /// (V, r^V_K) for every open V ⊇ K.
  std::vector<std::pair<std::size_t, Matrix>> maps;
};

SectionsOverSubset sections_over_subset(const RestrictionSystem& system, PointSet k);

/// h_K for a presheaf morphism h : S -> T, after checking
/// h_K r^V_K = rho^V_K h_V for every open V ⊇ K. Throws DiagramTwoViolation.
Matrix morphism_over_subset(const PresheafMorphism& h, const RestrictionSystem& source,
                            const RestrictionSystem& target, PointSet k);

}  // namespace triadica
