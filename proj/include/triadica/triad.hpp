#pragma once

#include <vector>

#include "triadica/sheaf.hpp"

namespace triadica {

/// (A, d, Omega) over a finite space: d[U] : A(U) -> Omega(U) for every
/// open U, stored as an Omega(U).dim x A(U).dim matrix.
struct DifferentialTriad {
  AlgebraPresheaf algebra;
  ModulePresheaf omega;
  std::vector<Matrix> d;

  const FiniteSpace& space() const noexcept { return algebra.space(); }

  friend bool operator==(const DifferentialTriad&, const DifferentialTriad&) = default;
};

/// d(e_i e_j) = e_i d(e_j) + e_j d(e_i) on all basis pairs i <= j. The
/// first failing pair is reported with witness {i, j}.
Report check_leibniz(const Matrix& d, const Algebra& a, const Module& m);

/// L(u, v) = d(uv) - u d(v) - v d(u).
Vector leibniz_deviation(const Matrix& d, const Algebra& a, const Module& m, const Vector& u, const Vector& v);

/// Presheaf, module and sheaf validations, Leibniz on every open, d(1) = 0,
/// and the naturality squares rho^U_V d_U = d_V r^U_V.
Report validate_triad(const DifferentialTriad& t);

/// Componentwise pushforward along f.
DifferentialTriad pushforward_triad(const ContinuousMap& f, const DifferentialTriad& t);

struct DifferentialKernel {
  Subspace kernel;
  /// kernel equals the span of the unit section.
  bool constants_only = false;
};

DifferentialKernel kernel_of_differential(const DifferentialTriad& t, std::size_t open);

/// kernel_of_differential is constants-only on every open.
bool differential_kills_only_constants(const DifferentialTriad& t);

/// Im d_U inside Omega(U).
Subspace image_of_differential(const DifferentialTriad& t, std::size_t open);

/// Sections of Omega(U) whose germ at every x in U lies in Im d at the
/// minimal open of x.
Subspace sheaf_image_of_differential(const DifferentialTriad& t, std::size_t open);

/// Omega = 0 and d = 0 over the given algebra presheaf.
DifferentialTriad zero_differential_triad(const AlgebraPresheaf& a);

/// Functional triad with Omega = 0 on U -> Q^|U|.
DifferentialTriad functional_triad(const FiniteSpace& space);

}  // namespace triadica
