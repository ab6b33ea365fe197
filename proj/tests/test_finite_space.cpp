#include <random>

#include "doctest.h"
#include "triadica/errors.hpp"
#include "triadica/finite_space.hpp"

using namespace triadica;

namespace {

std::vector<FiniteSpace> sample_spaces() {
  return {FiniteSpace::discrete(2),    FiniteSpace::discrete(3),         FiniteSpace::sierpinski(),
          FiniteSpace::indiscrete(3),  FiniteSpace(3, {0, 1, 3, 7}),     FiniteSpace(3, {0, 1, 2, 3, 7}),
          FiniteSpace(3, {0, 4, 6, 7})};
}

}  // namespace

TEST_CASE("check_topology examples") {
  CHECK(check_topology(FiniteSpace::discrete(2)).valid);
  CHECK(check_topology(FiniteSpace::sierpinski()).valid);

  auto bad = check_topology(FiniteSpace(2, {0b00, 0b01, 0b10}));
  CHECK_FALSE(bad.valid);
  bool missing_full = false, missing_union = false;
  for (const auto& v : bad.violations) {
    if (v.find("missing full set {0,1}") != std::string::npos) missing_full = true;
    if (v.find("missing union {0} | {1} = {0,1}") != std::string::npos) missing_union = true;
  }
  CHECK(missing_full);
  CHECK(missing_union);

  CHECK_FALSE(check_topology(FiniteSpace(3, {0, 3, 6, 7})).valid);  // {1} = {0,1} & {1,2} missing
  CHECK_FALSE(check_topology(FiniteSpace(2, {0, 1, 1, 3})).valid);  // duplicate
  for (const auto& s : sample_spaces()) CHECK(check_topology(s).valid);
}

TEST_CASE("minimal_open examples") {
  const auto discrete = FiniteSpace::discrete(3);
  CHECK(discrete.open(minimal_open(discrete, 0)) == 0b001);
  const auto sierpinski = FiniteSpace::sierpinski();
  CHECK(sierpinski.open(minimal_open(sierpinski, 1)) == 0b11);
  CHECK(sierpinski.open(minimal_open(sierpinski, 0)) == 0b01);
  const auto indiscrete = FiniteSpace::indiscrete(3);
  CHECK(indiscrete.open(minimal_open(indiscrete, 2)) == 0b111);
}

TEST_CASE("minimal_open_superset examples") {
  for (const auto& s : sample_spaces()) {
    for (std::size_t x = 0; x < s.point_count(); ++x)
      CHECK(minimal_open_superset(s, PointSet{1} << x) == minimal_open(s, x));
    CHECK(s.open(minimal_open_superset(s, 0)) == 0);
  }
  const auto sierpinski = FiniteSpace::sierpinski();
  CHECK(sierpinski.open(minimal_open_superset(sierpinski, 0b11)) == 0b11);
}

TEST_CASE("minimal_open is the least open containing the point") {
  for (const auto& s : sample_spaces()) {
    for (std::size_t x = 0; x < s.point_count(); ++x) {
      const PointSet m = s.open(minimal_open(s, x));
      CHECK(contains_point(m, x));
      for (PointSet u : s.opens()) {
        if (contains_point(u, x)) CHECK(is_subset(m, u));
      }
    }
  }
}

TEST_CASE("is_continuous examples") {
  const auto d2 = FiniteSpace::discrete(2), d3 = FiniteSpace::discrete(3);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) CHECK(is_continuous({a, b}, d2, d3).continuous);

  for (const auto& y : sample_spaces())
    for (std::size_t c = 0; c < y.point_count(); ++c)
      CHECK(is_continuous({c, c, c}, FiniteSpace::indiscrete(3), y).continuous);

  auto result = is_continuous({0, 1}, FiniteSpace::indiscrete(2), d2);
  CHECK_FALSE(result.continuous);
  REQUIRE(result.witness);
  CHECK(*result.witness == 0b01);
  CHECK_THROWS_AS(ContinuousMap(FiniteSpace::indiscrete(2), d2, {0, 1}), PreconditionViolation);
}

TEST_CASE("preimage_open examples") {
  const auto x = FiniteSpace::discrete(2);
  const auto y = FiniteSpace::sierpinski();
  const auto c = ContinuousMap::constant(x, y, 0);
  CHECK(x.open(preimage_open(c, y.require_open(0b01))) == x.full_set());
  const auto c1 = ContinuousMap::constant(x, y, 1);
  CHECK(x.open(preimage_open(c1, y.require_open(0b01))) == 0);
  const auto id = ContinuousMap::identity(y);
  for (std::size_t v = 0; v < y.open_count(); ++v) CHECK(preimage_open(id, v) == v);
}

TEST_CASE("continuous maps are monotone on minimal opens and preimages are lattice maps") {
  std::mt19937 rng(3);
  const auto spaces = sample_spaces();
  int checked = 0;
  for (const auto& x : spaces) {
    for (const auto& y : spaces) {
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::size_t> values(x.point_count());
        for (auto& v : values) v = rng() % y.point_count();
        if (!is_continuous(values, x, y).continuous) continue;
        const ContinuousMap f(x, y, values);
        ++checked;
        for (std::size_t p = 0; p < x.point_count(); ++p)
          CHECK(is_subset(f.image(x.open(minimal_open(x, p))), y.open(minimal_open(y, f(p)))));
        for (PointSet a : y.opens())
          for (PointSet b : y.opens()) {
            CHECK(f.preimage(a | b) == (f.preimage(a) | f.preimage(b)));
            CHECK(f.preimage(a & b) == (f.preimage(a) & f.preimage(b)));
          }
      }
    }
  }
  CHECK(checked > 50);
}
