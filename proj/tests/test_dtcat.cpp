#include <set>
#include <string>
#include <tuple>

#include "doctest.h"
#include "dtcat_fixtures.hpp"
#include "sheaf_fixtures.hpp"
#include "test_support.hpp"
#include "triadica/errors.hpp"

using namespace triadica;
using namespace triadica::testing;

namespace {

const std::vector<Rational> kGrid{-1, 0, 1, 2};

}  // namespace

TEST_CASE("check_morphism examples") {
  const auto cubic = point_kaehler_triad(truncated_poly_algebra(3));
  const auto id = identity_morphism(cubic);
  CHECK(check_morphism(id, cubic, cubic).ok());

  auto doubled = id;
  for (auto& m : doubled.fOmega) m = Rational(2) * m;
  const auto report = check_morphism(doubled, cubic, cubic);
  REQUIRE_FALSE(report.ok());
  CHECK(report.first_error().location == "(iv) open {0}");
  CHECK(report.first_error().witness == std::vector<std::string>{"{0}", "e1"});

  auto not_unital = id;
  not_unital.fA[1] = Rational(2) * not_unital.fA[1];
  CHECK(check_morphism(not_unital, cubic, cubic).first_error().location.rfind("(ii)", 0) == 0);

  const auto sierpinski = functional_triad(FiniteSpace::sierpinski());
  for (std::size_t c = 0; c < 2; ++c) CHECK(check_morphism(constant_morphism(cubic, sierpinski, c), cubic, sierpinski).ok());
}

TEST_CASE("fixture diagram morphisms are valid") {
  const auto d = fixture_diagram();
  for (std::size_t i = 0; i < d.arrows.size(); ++i) {
    CAPTURE(i);
    CHECK(validate_triad(d.triads[i]).ok());
    CHECK(check_morphism(d.arrows[i], d.triads[i], d.triads[i + 1]).ok());
  }
}

TEST_CASE("category laws on the fixture diagram") {
  const auto d = fixture_diagram();
  const auto& [f, g, h] = std::tie(d.arrows[0], d.arrows[1], d.arrows[2]);
  for (std::size_t i = 0; i < d.arrows.size(); ++i) {
    const auto& a = d.arrows[i];
    CHECK(compose(identity_morphism(d.triads[i + 1]), a) == a);
    CHECK(compose(a, identity_morphism(d.triads[i])) == a);
  }
  const auto gf = compose(g, f);
  const auto hg = compose(h, g);
  CHECK(check_morphism(gf, d.triads[0], d.triads[2]).ok());
  CHECK(check_morphism(hg, d.triads[1], d.triads[3]).ok());
  const auto left = compose(hg, f);
  const auto right = compose(h, gf);
  CHECK(left == right);
  CHECK(check_morphism(left, d.triads[0], d.triads[3]).ok());
  for (const auto& t : d.triads) CHECK(compose(identity_morphism(t), identity_morphism(t)) == identity_morphism(t));
}

TEST_CASE("composites push f_A forward along g") {
  // g_*(f_A) is a presheaf morphism whenever f_A is.
  const auto d = fixture_diagram();
  const auto& f = d.arrows[0];
  const auto& g = d.arrows[1];
  const auto pushed = pushforward(g.f, PresheafMorphism{f.fA});
  CHECK(check_presheaf_morphism(pushed, pushforward(g.f, d.triads[1].algebra.system),
                                pushforward(g.f, pushforward(f.f, d.triads[0].algebra.system)))
            .ok());
}

TEST_CASE("constant_morphism examples") {
  const auto cubic = point_kaehler_triad(truncated_poly_algebra(3));
  const auto sierpinski = functional_triad(FiniteSpace::sierpinski());
  const auto c0 = constant_morphism(cubic, sierpinski, 0);
  CHECK(check_morphism(c0, cubic, sierpinski).ok());
  // c_A(1) = 1.
  const std::size_t full = sierpinski.space().full_open();
  CHECK(c0.fA[full].apply(sierpinski.algebra.algebra(full).unit) == cubic.algebra.algebra(1).unit);
  // The differential square reduces to d_X c_A = 0.
  for (std::size_t v = 0; v < sierpinski.space().open_count(); ++v)
    CHECK((cubic.d[c0.f.preimage_open(v)] * c0.fA[v]).is_zero());

  const auto no_embeddings = point_kaehler_triad(function_algebra(2));
  CHECK_THROWS_AS(constant_morphism(cubic, no_embeddings, 0), NotFunctional);

  // Two constant maps compose to the constant map at the final point.
  const auto vee = functional_triad(vee_space());
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t e = 0; e < 3; ++e) {
      const auto composite = compose(constant_morphism(sierpinski, vee, e), constant_morphism(cubic, sierpinski, c));
      CHECK(composite == constant_morphism(cubic, vee, e));
    }
}

TEST_CASE("constant morphisms over a grid of triads") {
  const std::vector<DifferentialTriad> sources{
      point_kaehler_triad(truncated_poly_algebra(3)),
      kaehler_presheaf(constant_presheaf(FiniteSpace::sierpinski(), truncated_poly_algebra(2))).triad,
      functional_triad(FiniteSpace::discrete(2)),
      pointwise_kaehler_triad(chain_space(), truncated_poly_algebra(2))};
  const std::vector<DifferentialTriad> targets{functional_triad(FiniteSpace::sierpinski()), functional_triad(vee_space()),
                                               functional_triad(FiniteSpace::discrete(2)),
                                               functional_triad(chain_space())};
  std::size_t combinations = 0;
  for (const auto& s : sources)
    for (const auto& t : targets)
      for (std::size_t c = 0; c < t.space().point_count(); ++c) {
        const auto m = constant_morphism(s, t, c);
        CHECK(check_morphism(m, s, t).ok());
        ++combinations;
      }
  CHECK(combinations >= 6);
}

TEST_CASE("f_Omega agrees on the image of d_Y") {
  const auto extended = extended_omega_triad();
  REQUIRE(validate_triad(extended).ok());
  const auto point = FiniteSpace::discrete(1);
  const auto id_map = ContinuousMap::identity(point);
  std::size_t pairs = 0, differ_off_image = 0;
  for (const auto& source : {point_kaehler_triad(truncated_poly_algebra(3)), point_kaehler_triad(truncated_poly_algebra(2))})
    for (const auto& target : {extended, point_kaehler_triad(truncated_poly_algebra(3))}) {
      const std::size_t k = target.algebra.algebra(1).dim;
      for (const auto& h : grid_morphisms(k, source.algebra.algebra(1), kGrid)) {
        const std::vector<Matrix> fA{Matrix(0, 0), h};
        const auto completions = all_completions(id_map, fA, source, target);
        for (const auto& m1 : completions)
          for (const auto& m2 : completions) {
            REQUIRE(check_morphism(m1, source, target).ok());
            const auto r = differential_agreement_on_image(m1, m2, source, target);
            CHECK(r.agree_on_image);
            CHECK(r.report.ok());
            ++pairs;
            if (!r.agree_globally) {
              ++differ_off_image;
              CHECK(r.report.findings().back().message == "agree on Im d, differ on complement");
            }
          }
      }
    }
  CHECK(pairs > 0);
  CHECK(differ_off_image > 0);
}

TEST_CASE("f_Omega breaking the differential square disagrees inside the image") {
  const auto cubic = point_kaehler_triad(truncated_poly_algebra(3));
  const auto id = identity_morphism(cubic);
  auto broken = id;
  broken.fOmega[1] = Rational(2) * broken.fOmega[1];
  const auto r = differential_agreement_on_image(id, broken, cubic, cubic);
  CHECK_FALSE(r.agree_on_image);
  CHECK_FALSE(r.report.ok());
  CHECK(r.report.first_error().witness[0] == "{0}");
  CHECK(differential_agreement_on_image(id, id, cubic, cubic).agree_globally);
}

TEST_CASE("equal f_Omega forces equal f_A when d_X kills only constants") {
  const auto source = point_kaehler_triad(truncated_poly_algebra(3));
  REQUIRE(differential_kills_only_constants(source));
  const auto point = FiniteSpace::discrete(1);
  const auto id_map = ContinuousMap::identity(point);
  std::size_t pairs = 0;
  for (std::size_t k : {1, 2, 3}) {
    const auto target = point_kaehler_triad(truncated_poly_algebra(k));
    std::vector<TriadMorphism> morphisms;
    for (const auto& h : grid_morphisms(k, source.algebra.algebra(1), kGrid))
      for (const auto& m : all_completions(id_map, {Matrix(0, 0), h}, source, target)) morphisms.push_back(m);
    CHECK(morphisms.size() > 1 - (k == 1));
    for (const auto& m1 : morphisms)
      for (const auto& m2 : morphisms) {
        if (m1.fOmega != m2.fOmega) continue;
        const auto r = algebra_component_uniqueness(m1, m2, source, target);
        CHECK(r.hypothesis_met);
        CHECK(r.algebra_components_equal);
        CHECK(r.report.ok());
        ++pairs;
      }
  }
  CHECK(pairs > 0);
}

TEST_CASE("uniqueness reports an unmet hypothesis") {
  const auto flat = zero_differential_triad(constant_presheaf(FiniteSpace::discrete(1), truncated_poly_algebra(2)));
  const auto target = functional_triad(FiniteSpace::discrete(1));
  const auto m = constant_morphism(flat, target, 0);
  const auto r = algebra_component_uniqueness(m, m, flat, target);
  CHECK_FALSE(r.hypothesis_met);
  CHECK(r.report.status() == "exploratory");
  CHECK(r.report.findings().back().message.rfind("hypothesis not met", 0) == 0);

  const auto cubic = point_kaehler_triad(truncated_poly_algebra(3));
  const auto id = identity_morphism(cubic);
  CHECK(algebra_component_uniqueness(id, id, cubic, cubic).algebra_components_equal);
}

TEST_CASE("equal f_Omega with a multi-character stalk leaves f_A free") {
  // Omega_Y = 0 and the stalk Q^2 of A_Y at 1 has two characters, so both
  // evaluations give morphisms over the constant map at 1.
  const auto source = point_kaehler_triad(truncated_poly_algebra(3));
  const auto target = functional_triad(FiniteSpace::sierpinski());
  const auto f = ContinuousMap::constant(source.space(), target.space(), 1);
  std::vector<TriadMorphism> morphisms;
  for (std::size_t which = 0; which < 2; ++which) {
    std::vector<Matrix> fA{Matrix(0, 0), Matrix(0, 1), Matrix(3, 2)};
    fA[2](0, which) = 1;
    morphisms.push_back(complete_with_omega(f, fA, source, target));
    CHECK(check_morphism(morphisms.back(), source, target).ok());
  }
  REQUIRE(morphisms[0].fOmega == morphisms[1].fOmega);
  const auto r = algebra_component_uniqueness(morphisms[0], morphisms[1], source, target);
  CHECK(r.hypothesis_met);
  CHECK_FALSE(r.algebra_components_equal);
  CHECK(r.report.first_error().message.find("constant section") != std::string::npos);
}

TEST_CASE("evaluation_character examples") {
  const auto discrete = functional_presheaf(FiniteSpace::discrete(2));
  const auto ev = evaluation_character(discrete, 1);
  CHECK(ev.character.functional == Vector{1});
  CHECK(characters(discrete.algebra(ev.open)).size() == 1);
  CHECK(ev.consistency.ok());

  const auto sierpinski = functional_presheaf(FiniteSpace::sierpinski());
  const auto ev1 = evaluation_character(sierpinski, 1);
  CHECK(ev1.character.functional == Vector{0, 1});
  CHECK(characters(sierpinski.algebra(ev1.open)).size() == 2);
  CHECK(ev1.consistency.ok());

  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& space : all_topologies(n)) {
      const auto p = functional_presheaf(space);
      for (std::size_t x = 0; x < n; ++x) {
        const auto e = evaluation_character(p, x);
        CHECK(e.consistency.ok());
        Rational at_unit;
        const Vector& unit = p.algebra(e.open).unit;
        for (std::size_t i = 0; i < unit.size(); ++i) at_unit += e.character.functional[i] * unit[i];
        CHECK(at_unit == 1);
      }
    }
  CHECK_THROWS_AS(evaluation_character(constant_presheaf(FiniteSpace::discrete(1), function_algebra(1)), 0),
                  NotFunctional);
}

TEST_CASE("unit-preserving morphisms between discrete functional sheaves are pullbacks") {
  for (std::size_t nx = 1; nx <= 3; ++nx)
    for (std::size_t ny = 1; ny <= 3; ++ny) {
      const auto x = FiniteSpace::discrete(nx), y = FiniteSpace::discrete(ny);
      const auto source = functional_presheaf(y);
      for (const auto& table : all_point_maps(nx, ny)) {
        const ContinuousMap f(x, y, table);
        const auto target = pushforward(f, functional_presheaf(x));
        const auto listed = enumerate_function_presheaf_morphisms(source, target);
        // Oracle: the pullbacks along all g : X -> Y that land in f_* A_X.
        std::set<std::string> oracle;
        for (const auto& g : all_point_maps(nx, ny)) {
          const auto h = oracle_pullback(x, y, g);
          bool shapes = true;
          for (std::size_t v = 0; v < y.open_count(); ++v)
            shapes = shapes && h.components[v].rows() == target.system.dim(v);
          if (shapes && check_algebra_presheaf_morphism(h, source, target).ok()) oracle.insert(matrices_key(h.components));
        }
        std::set<std::string> found;
        for (const auto& h : listed) found.insert(matrices_key(h.components));
        CHECK(found == oracle);
        REQUIRE(listed.size() == 1);
        CHECK(listed[0] == oracle_pullback(x, y, table));
        CHECK(verify_pullback_forced(f, listed[0]).status() == "pass");
      }
    }
}

TEST_CASE("verify_pullback_forced reports") {
  const auto x = FiniteSpace::discrete(2), y = FiniteSpace::discrete(2);
  const ContinuousMap swap(x, y, {1, 0});
  const auto report = verify_pullback_forced(swap, pullback_morphism(ContinuousMap::identity(y)));
  CHECK(report.status() == "fail");

  // Over Sierpinski the stalk at 1 is Q^2 and h need not be the pullback.
  const auto point = FiniteSpace::discrete(1);
  const auto sierpinski = FiniteSpace::sierpinski();
  const auto f = ContinuousMap::constant(point, sierpinski, 1);
  const auto listed =
      enumerate_function_presheaf_morphisms(functional_presheaf(sierpinski), pushforward(f, functional_presheaf(point)));
  CHECK(listed.size() == 2);
  for (const auto& h : listed) CHECK(verify_pullback_forced(f, h).status() == "exploratory");
  const auto pulled = verify_pullback_forced(f, pullback_morphism(f));
  CHECK(pulled.status() == "exploratory");
  CHECK(pulled.error_count() == 0);
}

TEST_CASE("recover_map reads the point map off the global component") {
  const auto x = FiniteSpace::discrete(3), y = FiniteSpace::discrete(2);
  for (const auto& table : all_point_maps(3, 2)) {
    const ContinuousMap f(x, y, table);
    const auto recovered = recover_map(pullback_morphism(f), f);
    REQUIRE(recovered);
    CHECK(*recovered == table);
  }
}

TEST_CASE("fullness_check counts") {
  const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> cases{
      {1, 2, 2}, {2, 2, 4}, {2, 3, 9}, {3, 2, 8}, {2, 1, 1}, {1, 1, 1}, {3, 3, 27}};
  for (const auto& [nx, ny, expected] : cases) {
    CAPTURE(nx);
    CAPTURE(ny);
    // Oracle: number of point maps.
    std::size_t maps = 1;
    for (std::size_t i = 0; i < nx; ++i) maps *= ny;
    CHECK(maps == expected);
    const auto r = fullness_check(FiniteSpace::discrete(nx), FiniteSpace::discrete(ny));
    CHECK(r.morphism_count == expected);
    CHECK(r.map_count == expected);
    CHECK(r.bijective);
    CHECK(r.report.ok());
  }
  CHECK_THROWS_AS(fullness_check(FiniteSpace::discrete(3), FiniteSpace::discrete(3), 8), BoundExceeded);
  CHECK_THROWS_AS(fullness_check(FiniteSpace::sierpinski(), FiniteSpace::discrete(1)), PreconditionViolation);
}

TEST_CASE("omega_components examples") {
  const auto cubic = point_kaehler_triad(truncated_poly_algebra(3));
  const auto id_map = ContinuousMap::identity(FiniteSpace::discrete(1));
  const std::vector<Matrix> id_A{Matrix(0, 0), Matrix::identity(3)};
  // The identity on the Kaehler triad has a unique completion.
  const auto unique = omega_components(id_map, id_A, cubic, cubic);
  REQUIRE(unique);
  CHECK(unique->directions.empty());
  CHECK(unique->particular == identity_morphism(cubic).fOmega);

  // Omega_Y = 0 with d_X f_A != 0: the differential square cannot commute.
  const auto flat = zero_differential_triad(constant_presheaf(FiniteSpace::discrete(1), truncated_poly_algebra(3)));
  CHECK_FALSE(omega_components(id_map, id_A, cubic, flat).has_value());
  // Reversed, f_Omega lands in zero sections and is forced to vanish.
  const auto into_flat = omega_components(id_map, id_A, flat, cubic);
  REQUIRE(into_flat);
  CHECK(into_flat->directions.empty());
}
