#include "triadica/triad.hpp"

#include <string>

#include "triadica/errors.hpp"

namespace triadica {
namespace {

std::string open_name(const FiniteSpace& space, std::size_t u) { return "open " + format_set(space.open(u)); }

}  // namespace

Vector leibniz_deviation(const Matrix& d, const Algebra& a, const Module& m, const Vector& u, const Vector& v) {
  return d.apply(a.multiply(u, v)) - m.act(u, d.apply(v)) - m.act(v, d.apply(u));
}

Report check_leibniz(const Matrix& d, const Algebra& a, const Module& m) {
  Report report;
  if (d.rows() != m.dim || d.cols() != a.dim) {
    report.error("", "differential has shape " + std::to_string(d.rows()) + "x" + std::to_string(d.cols()) +
                         ", expected " + std::to_string(m.dim) + "x" + std::to_string(a.dim));
    return report;
  }
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = i; j < a.dim; ++j) {
      const Vector dev = leibniz_deviation(d, a, m, unit_vector(a.dim, i), unit_vector(a.dim, j));
      if (!is_zero(dev)) {
        report.error("", "Leibniz fails on (e" + std::to_string(i) + ", e" + std::to_string(j) + ")",
                     {std::to_string(i), std::to_string(j)});
        return report;
      }
    }
  return report;
}

Report validate_triad(const DifferentialTriad& t) {
  Report report = validate_algebra_presheaf(t.algebra);
  if (!report.ok()) return report;
  report.merge(validate_module_presheaf(t.algebra, t.omega), "omega");
  if (!report.ok()) return report;
  const auto& space = t.space();
  report.merge(check_sheaf_condition(t.algebra.system).to_report(space), "algebra sheaf");
  report.merge(check_sheaf_condition(t.omega.system).to_report(space), "omega sheaf");
  if (t.d.size() != space.open_count()) {
    report.error("d", "expected one differential per open");
    return report;
  }
  bool shapes = true;
  for (std::size_t u = 0; u < space.open_count(); ++u) {
    const Report leibniz = check_leibniz(t.d[u], t.algebra.algebra(u), t.omega.module(u));
    shapes = shapes && t.d[u].rows() == t.omega.system.dim(u) && t.d[u].cols() == t.algebra.system.dim(u);
    report.merge(leibniz, "d " + open_name(space, u));
  }
  if (!shapes) return report;
  for (std::size_t u = 0; u < space.open_count(); ++u) {
    if (!is_zero(t.d[u].apply(t.algebra.algebra(u).unit))) report.error("d " + open_name(space, u), "d(1) != 0");
  }
  for (std::size_t u = 0; u < space.open_count(); ++u)
    for (std::size_t v = 0; v < space.open_count(); ++v) {
      if (u == v || !is_subset(space.open(v), space.open(u))) continue;
      const Matrix lhs = t.omega.restriction(u, v) * t.d[u];
      const Matrix rhs = t.d[v] * t.algebra.restriction(u, v);
      for (std::size_t j = 0; j < lhs.cols(); ++j) {
        if (lhs.column(j) != rhs.column(j)) {
          report.error("d " + format_set(space.open(u)) + "->" + format_set(space.open(v)),
                       "d does not commute with restriction",
                       {format_set(space.open(u)), format_set(space.open(v)), "e" + std::to_string(j)});
          break;
        }
      }
    }
  return report;
}

DifferentialTriad pushforward_triad(const ContinuousMap& f, const DifferentialTriad& t) {
  DifferentialTriad out{pushforward(f, t.algebra), pushforward(f, t.omega), {}};
  for (std::size_t v = 0; v < f.codomain().open_count(); ++v) out.d.push_back(t.d.at(f.preimage_open(v)));
  return out;
}

DifferentialKernel kernel_of_differential(const DifferentialTriad& t, std::size_t open) {
  DifferentialKernel out{kernel(t.d.at(open)), false};
  const Algebra& a = t.algebra.algebra(open);
  out.constants_only = out.kernel == Subspace::span(a.dim, {a.unit});
  return out;
}

bool differential_kills_only_constants(const DifferentialTriad& t) {
  for (std::size_t u = 0; u < t.space().open_count(); ++u)
    if (!kernel_of_differential(t, u).constants_only) return false;
  return true;
}

Subspace image_of_differential(const DifferentialTriad& t, std::size_t open) { return Subspace::column_space(t.d.at(open)); }

Subspace sheaf_image_of_differential(const DifferentialTriad& t, std::size_t open) {
  const auto& space = t.space();
  const std::size_t n = t.omega.system.dim(open);
  std::vector<Matrix> blocks;
  std::size_t rows = 0;
  for (auto x : points_of(space.open(open))) {
    const std::size_t mx = minimal_open(space, x);
    // Germs must be killed by the projection onto Omega(U_x) / Im d.
    const auto q = quotient_space(t.omega.system.dim(mx), image_of_differential(t, mx));
    blocks.push_back(q.projection * t.omega.restriction(open, mx));
    rows += q.dim;
  }
  Matrix constraints(rows, n);
  std::size_t r0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (std::size_t c = 0; c < n; ++c) constraints(r0 + r, c) = b(r, c);
    r0 += b.rows();
  }
  return kernel(constraints);
}

DifferentialTriad zero_differential_triad(const AlgebraPresheaf& a) {
  DifferentialTriad t{a, zero_module_presheaf(a), {}};
  for (const auto& s : a.sections) t.d.emplace_back(0, s.dim);
  return t;
}

DifferentialTriad functional_triad(const FiniteSpace& space) { return zero_differential_triad(functional_presheaf(space)); }

}  // namespace triadica
