#pragma once

#include <vector>

#include "triadica/triad.hpp"

namespace triadica {

/// Omega_A = I / I^2 for I = ker(m : A (x) A -> A), with the left action
/// a . (xi + I^2) = (a (x) 1) xi + I^2 and d(x) = (x (x) 1 - 1 (x) x) + I^2.
struct KaehlerModule {
  Algebra algebra;
  TensorProduct tensor;
  Subspace ideal;
  Subspace ideal_square;
  /// I^2 expressed in the basis of I, and the quotient I -> I / I^2.
  Quotient quotient;
  std::size_t omega_dim = 0;
  Matrix d_matrix;
  Module module;

  /// Class in Omega of an element of I given in A (x) A coordinates.
  Vector to_omega(const Vector& xi) const;
  /// Representative in A (x) A of an Omega vector.
  Vector lift(const Vector& omega) const;
};

KaehlerModule kaehler_module(const Algebra& a);

struct Factorization {
  /// The A-linear map phi : Omega_A -> M with phi d_A = D.
  Matrix phi;
  /// The generators a d(b) span Omega_A, so phi is forced.
  bool unique = false;
  std::size_t generator_rank = 0;
};

/// Throws NotADerivation if D fails Leibniz against m, FactorizationFailed
/// if the generator system has no exact solution.
Factorization factor_derivation(const KaehlerModule& k, const Module& m, const Matrix& derivation);

/// Basis of the derivations A -> M, as M.dim x A.dim matrices.
std::vector<Matrix> derivation_space(const Algebra& a, const Module& m);

/// Omega(h) : Omega_A -> Omega_B for a unital morphism h : A -> B, the
/// factorization of d_B h.
Matrix kaehler_map(const Matrix& h, const KaehlerModule& source, const KaehlerModule& target);

struct KaehlerPresheaf {
  std::vector<KaehlerModule> modules;
  /// Per-open Kaehler modules with restrictions obtained by factoring
  /// d_V r^U_V, packaged as a triad over the unsheafified algebra presheaf.
  DifferentialTriad presheaf_triad;
  AlgebraSheafification algebra_plus;
  ModuleSheafification omega_plus;
  /// The sheafified triad.
  DifferentialTriad triad;
};

KaehlerPresheaf kaehler_presheaf(const AlgebraPresheaf& p);

}  // namespace triadica
