#include <random>

#include "doctest.h"
#include "sheaf_fixtures.hpp"
#include "test_support.hpp"
#include "triad_fixtures.hpp"
#include "triadica/errors.hpp"
#include "triadica/kaehler.hpp"

using namespace triadica;
using triadica::testing::kaehler_fixture_algebras;
using triadica::testing::presentation_omega_dim;
using triadica::testing::random_rational;

namespace {

Matrix random_derivation(const Algebra& a, const Module& m, std::mt19937& rng) {
  Matrix d(m.dim, a.dim);
  for (const auto& b : derivation_space(a, m)) d = d + random_rational(rng) * b;
  return d;
}

struct NamedMorphism {
  std::string name;
  Algebra source, target;
  Matrix h;
};

std::vector<NamedMorphism> fixture_morphisms() {
  Matrix truncate(2, 3);  // Q[x]/(x^3) -> Q[x]/(x^2)
  truncate(0, 0) = 1;
  truncate(1, 1) = 1;
  Matrix square(3, 3);  // x -> x^2 on Q[x]/(x^3)
  square(0, 0) = 1;
  square(2, 1) = 1;
  Matrix shift(3, 3);  // x -> x + x^2, x^2 -> x^2
  shift(0, 0) = 1;
  shift(1, 1) = 1;
  shift(2, 1) = 1;
  shift(2, 2) = 1;
  Matrix evaluate(1, 2);  // x -> 0 on the dual numbers
  evaluate(0, 0) = 1;
  Matrix unit(3, 1);  // Q -> Q[x]/(x^3)
  unit(0, 0) = 1;
  Matrix dual_into_square_zero(3, 2);  // x -> x + y
  dual_into_square_zero(0, 0) = 1;
  dual_into_square_zero(1, 1) = 1;
  dual_into_square_zero(2, 1) = 1;
  return {{"truncate", truncated_poly_algebra(3), truncated_poly_algebra(2), truncate},
          {"square", truncated_poly_algebra(3), truncated_poly_algebra(3), square},
          {"shift", truncated_poly_algebra(3), truncated_poly_algebra(3), shift},
          {"evaluate", truncated_poly_algebra(2), function_algebra(1), evaluate},
          {"unit", function_algebra(1), truncated_poly_algebra(3), unit},
          {"dual into square zero", truncated_poly_algebra(2), square_zero_algebra(2), dual_into_square_zero},
          {"pullback", function_algebra(2), function_algebra(3), pullback_matrix({0, 1, 1}, 2)}};
}

}  // namespace

TEST_CASE("kaehler_module dimensions match the presentation oracle") {
  const std::vector<std::size_t> expected{0, 0, 0, 1, 2, 3};
  const auto fixtures = kaehler_fixture_algebras();
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    const auto& [name, a] = fixtures[i];
    CAPTURE(name);
    const auto k = kaehler_module(a);
    CHECK(k.omega_dim == presentation_omega_dim(a));
    CHECK(k.omega_dim == triadica::testing::tensor_omega_dim(a));
    CHECK(k.omega_dim == expected[i]);
    CHECK(k.omega_dim <= k.ideal.dim());
    CHECK(k.ideal.dim() == a.dim * a.dim - a.dim);
  }
}

TEST_CASE("kaehler_module examples") {
  const auto q = kaehler_module(function_algebra(1));
  CHECK(q.ideal.dim() == 0);
  CHECK(q.omega_dim == 0);

  const auto dual = kaehler_module(truncated_poly_algebra(2));
  CHECK(dual.ideal.dim() == 2);
  CHECK(dual.ideal_square.dim() == 1);
  CHECK(dual.omega_dim == 1);
  CHECK(is_zero(dual.d_matrix.column(0)));
  CHECK_FALSE(is_zero(dual.d_matrix.column(1)));
  // x . dx = 0 in Omega.
  CHECK(is_zero(dual.module.act({0, 1}, dual.d_matrix.column(1))));

  const auto cubic = kaehler_module(truncated_poly_algebra(3));
  CHECK(cubic.ideal.dim() == 6);
  CHECK(cubic.omega_dim == 2);
  const Vector dx = cubic.d_matrix.column(1);
  const Vector x_dx = cubic.module.act({0, 1, 0}, dx);
  CHECK(Subspace::span(2, {dx, x_dx}).dim() == 2);
  CHECK(is_zero(cubic.module.act({0, 0, 1}, dx)));
  // d(a + bx + cx^2) = b dx + 2c x dx.
  CHECK(cubic.d_matrix.column(2) == Rational(2) * x_dx);
  CHECK(kernel(cubic.d_matrix) == Subspace::span(3, {{1, 0, 0}}));

  for (std::size_t k = 1; k <= 3; ++k) CHECK(kaehler_module(function_algebra(k)).omega_dim == 0);
}

TEST_CASE("Kaehler differentials are derivations into valid modules") {
  for (const auto& [name, a] : kaehler_fixture_algebras()) {
    CAPTURE(name);
    const auto k = kaehler_module(a);
    CHECK(validate_module(a, k.module).ok());
    CHECK(check_leibniz(k.d_matrix, a, k.module).ok());
    CHECK((k.quotient.projection * k.quotient.section).is_identity());
  }
}

TEST_CASE("left and right actions agree on I / I^2") {
  for (const auto& [name, a] : kaehler_fixture_algebras()) {
    CAPTURE(name);
    const auto k = kaehler_module(a);
    for (std::size_t j = 0; j < k.omega_dim; ++j) {
      const Vector xi = k.lift(unit_vector(k.omega_dim, j));
      for (std::size_t i = 0; i < a.dim; ++i) {
        const Vector e = unit_vector(a.dim, i);
        const Vector left = k.tensor.algebra.multiply(k.tensor.left_embedding.apply(e), xi);
        const Vector right = k.tensor.algebra.multiply(k.tensor.right_embedding.apply(e), xi);
        CHECK(k.to_omega(left) == k.to_omega(right));
      }
    }
  }
}

TEST_CASE("factor_derivation examples") {
  const auto k = kaehler_module(truncated_poly_algebra(3));
  const auto self = factor_derivation(k, k.module, k.d_matrix);
  CHECK(self.phi.is_identity());
  CHECK(self.unique);
  const auto zero = factor_derivation(k, regular_module(k.algebra), Matrix(3, 3));
  CHECK(zero.phi.is_zero());
  const auto twice = factor_derivation(k, k.module, Rational(2) * k.d_matrix);
  CHECK(twice.phi == Rational(2) * Matrix::identity(2));

  CHECK_THROWS_AS(factor_derivation(k, regular_module(k.algebra), triadica::testing::naive_truncated_derivative()),
                  NotADerivation);
}

TEST_CASE("universal property on random derivations") {
  std::mt19937 rng(20241016);
  for (const auto& [name, a] : kaehler_fixture_algebras()) {
    CAPTURE(name);
    const auto k = kaehler_module(a);
    const std::vector<Module> targets{k.module, regular_module(a), direct_sum(k.module, regular_module(a))};
    for (const auto& m : targets) {
      for (const auto& basis : derivation_space(a, m)) CHECK(check_leibniz(basis, a, m).ok());
      for (int trial = 0; trial < 10; ++trial) {
        const Matrix d = random_derivation(a, m, rng);
        REQUIRE(check_leibniz(d, a, m).ok());
        const auto f = factor_derivation(k, m, d);
        CHECK(f.phi * k.d_matrix == d);
        CHECK(f.unique);
        CHECK(f.generator_rank == k.omega_dim);
        CHECK(check_semilinear(f.phi, Matrix::identity(a.dim), a, k.module, m).ok());
      }
    }
  }
}

TEST_CASE("derivation spaces match Hom(Omega, M)") {
  // Derivations A -> Omega_A correspond to A-linear endomorphisms of Omega_A.
  for (const auto& [name, a] : kaehler_fixture_algebras()) {
    CAPTURE(name);
    const auto k = kaehler_module(a);
    std::size_t endomorphisms = 0;
    // A-linear maps: phi L_i = L_i phi for every basis element.
    const std::size_t w = k.omega_dim;
    Matrix constraints(a.dim * w * w, w * w);
    std::size_t row = 0;
    for (std::size_t i = 0; i < a.dim; ++i) {
      const Matrix li = k.module.operator_of(unit_vector(a.dim, i));
      for (std::size_t r = 0; r < w; ++r)
        for (std::size_t c = 0; c < w; ++c, ++row)
          for (std::size_t s = 0; s < w; ++s) {
            constraints(row, r * w + s) += li(s, c);
            constraints(row, s * w + c) -= li(r, s);
          }
    }
    endomorphisms = kernel(constraints).dim();
    CHECK(derivation_space(a, k.module).size() == endomorphisms);
  }
}

TEST_CASE("Kaehler functor is natural") {
  for (const auto& m : fixture_morphisms()) {
    CAPTURE(m.name);
    REQUIRE(check_algebra_morphism(m.h, m.source, m.target).ok());
    const auto ka = kaehler_module(m.source);
    const auto kb = kaehler_module(m.target);
    const Matrix omega_h = kaehler_map(m.h, ka, kb);
    CHECK(omega_h * ka.d_matrix == kb.d_matrix * m.h);
    CHECK(check_semilinear(omega_h, m.h, m.source, ka.module, kb.module).ok());
    CHECK(kaehler_map(Matrix::identity(m.source.dim), ka, ka).is_identity());
  }
  // Omega(g h) = Omega(g) Omega(h) for truncate after square.
  const auto morphisms = fixture_morphisms();
  const auto& square = morphisms[1];
  const auto& truncate = morphisms[0];
  const auto k3 = kaehler_module(truncated_poly_algebra(3));
  const auto k2 = kaehler_module(truncated_poly_algebra(2));
  CHECK(kaehler_map(truncate.h * square.h, k3, k2) == kaehler_map(truncate.h, k3, k2) * kaehler_map(square.h, k3, k3));
}

TEST_CASE("kaehler_presheaf examples") {
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto result = kaehler_presheaf(constant_presheaf(FiniteSpace::discrete(2), function_algebra(k)));
    for (auto d : result.triad.omega.system.dims()) CHECK(d == 0);
    CHECK(validate_triad(result.triad).ok());
  }

  const auto sierpinski = kaehler_presheaf(constant_presheaf(FiniteSpace::sierpinski(), truncated_poly_algebra(3)));
  CHECK(sierpinski.triad.omega.system.dims() == std::vector<std::size_t>{0, 2, 2});
  CHECK(validate_triad(sierpinski.triad).ok());

  const auto mixed = kaehler_presheaf(
      pointwise_product_presheaf(FiniteSpace::discrete(2), {truncated_poly_algebra(2), function_algebra(1)}));
  CHECK(mixed.triad.omega.system.dim(FiniteSpace::discrete(2).full_open()) == 1);
  CHECK(validate_triad(mixed.triad).ok());
}

TEST_CASE("kaehler_presheaf on fixture presheaves yields valid triads") {
  for (const auto& [name, p] : triadica::testing::fixture_presheaves()) {
    CAPTURE(name);
    const auto result = kaehler_presheaf(p);
    CHECK(validate_module_presheaf(p, result.presheaf_triad.omega).ok());
    for (std::size_t u = 0; u < p.space().open_count(); ++u)
      CHECK(check_leibniz(result.presheaf_triad.d[u], p.algebra(u), result.presheaf_triad.omega.module(u)).ok());
    const Report report = validate_triad(result.triad);
    CHECK(report.ok());
    if (!report.ok()) MESSAGE(report.first_error().location, ": ", report.first_error().message);
    // Stalks of the sheafified Omega are the Kaehler modules of the stalks.
    for (std::size_t x = 0; x < p.space().point_count(); ++x) {
      const std::size_t mx = minimal_open(p.space(), x);
      CHECK(result.triad.omega.system.dim(mx) == kaehler_module(p.algebra(mx)).omega_dim);
    }
  }
}
