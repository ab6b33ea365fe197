#pragma once

#include <vector>

#include "triadica/linalg.hpp"
#include "triadica/report.hpp"

namespace triadica {

/// Finite-dimensional algebra over Q given by structure constants:
/// e_i * e_j = sum_k mult(i, j, k) e_k. Meant to be commutative,
/// associative and unital; validate_algebra checks this.
struct Algebra {
  std::size_t dim = 0;
  Bilinear mult;
  Vector unit;

  Algebra() = default;
  Algebra(std::size_t n, Bilinear m, Vector u) : dim(n), mult(std::move(m)), unit(std::move(u)) {}

  Vector multiply(const Vector& a, const Vector& b) const { return mult.apply(a, b); }
  /// Matrix of b -> a * b.
  Matrix left_operator(const Vector& a) const { return mult.left_operator(a); }
  /// The zero algebra (sections over the empty set).
  bool is_degenerate() const { return dim == 0; }

  friend bool operator==(const Algebra&, const Algebra&) = default;
};

/// Reports the first violated commutativity, associativity or unit triple.
Report validate_algebra(const Algebra& a);

Algebra zero_algebra();
/// Q^k with pointwise product on indicator functions.
Algebra function_algebra(std::size_t k);
/// Q[x]/(x^order), basis 1, x, ..., x^(order-1).
Algebra truncated_poly_algebra(std::size_t order);
/// Q[x_1..x_g]/(all degree-2 monomials), basis 1, x_1, ..., x_g.
Algebra square_zero_algebra(std::size_t generators);
/// Q[x]/(p) for p monic of degree d >= 1, given by its coefficients
/// c_0..c_{d-1} (low to high, leading 1 implied). Basis 1, x, ..., x^(d-1).
Algebra polynomial_quotient_algebra(const Vector& lower_coefficients);

struct TensorProduct {
  /// Basis e_i (x) f_j at index i * dim(B) + j.
  Algebra algebra;
  /// a -> a (x) 1.
  Matrix left_embedding;
  /// b -> 1 (x) b.
  Matrix right_embedding;
};

TensorProduct tensor_product(const Algebra& a, const Algebra& b);

/// The linear map A (x) A -> A, e_i (x) e_j -> e_i e_j (dim x dim^2).
Matrix multiplication_map(const Algebra& a);

/// Nilpotent elements, computed as the radical of the trace form
/// (a, b) -> tr(L_{ab}).
Subspace nilradical(const Algebra& a);

/// Checks that h (target.dim x source.dim) preserves the unit and products.
Report check_algebra_morphism(const Matrix& h, const Algebra& source, const Algebra& target);

struct AlgebraMorphism {
  Algebra source;
  Algebra target;
  Matrix matrix;
};

/// A-module structure on Q^dim: action(i, j) = e_i . w_j.
struct Module {
  std::size_t dim = 0;
  Bilinear action;

  Vector act(const Vector& a, const Vector& w) const { return action.apply(a, w); }
  /// Matrix of w -> a . w.
  Matrix operator_of(const Vector& a) const { return action.left_operator(a); }

  friend bool operator==(const Module&, const Module&) = default;
};

Module zero_module(const Algebra& a);
Module regular_module(const Algebra& a);
Module direct_sum(const Module& m1, const Module& m2);
/// Views a B-module as an A-module through h : A -> B.
Module restrict_scalars(const Module& m, const Matrix& h);

/// Unit acts as identity and (ab).w = a.(b.w) on basis triples.
Report validate_module(const Algebra& a, const Module& m);

/// Checks that phi (m2.dim x m1.dim) satisfies phi(a.w) = h(a).phi(w),
/// for h : A -> B and m1 an A-module, m2 a B-module.
Report check_semilinear(const Matrix& phi, const Matrix& h, const Algebra& a, const Module& m1, const Module& m2);

struct Character {
  /// Row vector: the value on each basis element.
  Vector functional;

  friend bool operator==(const Character&, const Character&) = default;
  friend bool operator<(const Character& x, const Character& y) { return x.functional < y.functional; }
};

bool is_character(const Algebra& a, const Vector& functional);

/// All Q-valued characters, sorted by functional. Throws NotSplit when
/// the semisimple quotient has a factor that is a proper extension of Q.
std::vector<Character> characters(const Algebra& a);

/// Pullback along g : {0..k-1} -> {0..m-1}, as the k x m matrix of
/// Q^m -> Q^k.
Matrix pullback_matrix(const std::vector<std::size_t>& g, std::size_t m);

/// Every unit-preserving morphism Q^m -> Q^k, one per point map
/// {0..k-1} -> {0..m-1}, in lexicographic order of the map tables.
std::vector<AlgebraMorphism> enumerate_unital_morphisms(std::size_t m, std::size_t k);

/// All tables {0..domain-1} -> {0..codomain-1} in lexicographic order.
std::vector<std::vector<std::size_t>> all_point_maps(std::size_t domain, std::size_t codomain);

}  // namespace triadica
