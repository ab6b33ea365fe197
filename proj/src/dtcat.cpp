#include "triadica/dtcat.hpp"

#include <algorithm>
#include <string>

#include "triadica/errors.hpp"

namespace triadica {
namespace {

std::string open_name(const FiniteSpace& space, std::size_t u) { return "open " + format_set(space.open(u)); }

std::string format_table(const std::vector<std::size_t>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(values[i]);
  }
  return out + "]";
}

// Linear equations over the entries of several matrix unknowns.
class MatrixSystem {
 public:
  std::size_t add_unknown(std::size_t rows, std::size_t cols) {
    shapes_.emplace_back(rows, cols);
    offsets_.push_back(total_);
    total_ += rows * cols;
    return shapes_.size() - 1;
  }

  struct Term {
    const Matrix* left;
    std::size_t unknown;
    const Matrix* right;
    Rational sign;
  };

  /// sum of sign * left * X * right = rhs.
  void add_equation(const std::vector<Term>& terms, const Matrix& rhs) {
    for (std::size_t a = 0; a < rhs.rows(); ++a)
      for (std::size_t b = 0; b < rhs.cols(); ++b) {
        Vector row(total_);
        for (const auto& t : terms) {
          const auto [rows, cols] = shapes_[t.unknown];
          for (std::size_t r = 0; r < rows; ++r) {
            const Rational& l = (*t.left)(a, r);
            if (l == 0) continue;
            for (std::size_t c = 0; c < cols; ++c) {
              const Rational& rr = (*t.right)(c, b);
              if (rr != 0) row[offsets_[t.unknown] + r * cols + c] += t.sign * l * rr;
            }
          }
        }
        rows_.push_back(std::move(row));
        rhs_.push_back(rhs(a, b));
      }
  }

  std::vector<Matrix> unpack(const Vector& x) const {
    std::vector<Matrix> out;
    for (std::size_t u = 0; u < shapes_.size(); ++u) {
      const auto [rows, cols] = shapes_[u];
      Matrix m(rows, cols);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = x[offsets_[u] + r * cols + c];
      out.push_back(std::move(m));
    }
    return out;
  }

  std::size_t size() const { return total_; }
  Matrix matrix() const { return Matrix::from_rows(total_, rows_); }
  const Vector& rhs() const { return rhs_; }

 private:
  std::vector<std::pair<std::size_t, std::size_t>> shapes_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
  std::vector<Vector> rows_;
  Vector rhs_;
};

bool is_function_algebra(const Algebra& a) { return a == function_algebra(a.dim); }

void enumerate_components(const AlgebraPresheaf& source, const AlgebraPresheaf& target,
                          const std::vector<std::size_t>& order,
                          const std::vector<std::vector<AlgebraMorphism>>& candidates, std::size_t depth,
                          std::vector<Matrix>& chosen, std::vector<bool>& assigned,
                          std::vector<PresheafMorphism>& out) {
  if (depth == order.size()) {
    out.push_back({chosen});
    return;
  }
  const auto& space = source.space();
  const std::size_t v = order[depth];
  for (const auto& candidate : candidates[v]) {
    bool compatible = true;
    for (std::size_t u = 0; u < space.open_count() && compatible; ++u) {
      if (!assigned[u]) continue;
      if (is_subset(space.open(v), space.open(u))) {
        compatible = candidate.matrix * source.restriction(u, v) == target.restriction(u, v) * chosen[u];
      } else if (is_subset(space.open(u), space.open(v))) {
        compatible = chosen[u] * source.restriction(v, u) == target.restriction(v, u) * candidate.matrix;
      }
    }
    if (!compatible) continue;
    chosen[v] = candidate.matrix;
    assigned[v] = true;
    enumerate_components(source, target, order, candidates, depth + 1, chosen, assigned, out);
    assigned[v] = false;
  }
}

}  // namespace

Report check_morphism(const TriadMorphism& m, const DifferentialTriad& source, const DifferentialTriad& target) {
  Report report;
  const auto& f = m.f;
  if (!(f.domain() == source.space()) || !(f.codomain() == target.space())) {
    report.error("(i)", "underlying map does not run between the triads' spaces");
    return report;
  }
  if (auto c = is_continuous(f.values(), f.domain(), f.codomain()); !c.continuous) {
    report.error("(i)", "map is not continuous", {format_set(*c.witness)});
    return report;
  }
  const auto& y = target.space();
  const std::size_t n = y.open_count();
  if (m.fA.size() != n || m.fOmega.size() != n) {
    report.error("", "expected one component per open of the codomain");
    return report;
  }
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t pre = f.preimage_open(v);
    if (m.fA[v].rows() != source.algebra.system.dim(pre) || m.fA[v].cols() != target.algebra.system.dim(v)) {
      report.error("(ii) " + open_name(y, v), "f_A component has wrong shape");
    }
    if (m.fOmega[v].rows() != source.omega.system.dim(pre) || m.fOmega[v].cols() != target.omega.system.dim(v)) {
      report.error("(iii) " + open_name(y, v), "f_Omega component has wrong shape");
    }
  }
  if (!report.ok()) return report;

  const AlgebraPresheaf pushed_algebra = pushforward(f, source.algebra);
  report.merge(check_algebra_presheaf_morphism({m.fA}, target.algebra, pushed_algebra), "(ii)");
  report.merge(check_presheaf_morphism({m.fOmega}, target.omega.system, pushforward(f, source.omega.system)), "(iii)");
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t pre = f.preimage_open(v);
    report.merge(check_semilinear(m.fOmega[v], m.fA[v], target.algebra.algebra(v), target.omega.module(v),
                                  source.omega.module(pre)),
                 "(iii) " + open_name(y, v));
  }
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t pre = f.preimage_open(v);
    const Matrix lhs = m.fOmega[v] * target.d[v];
    const Matrix rhs = source.d[pre] * m.fA[v];
    for (std::size_t j = 0; j < lhs.cols(); ++j) {
      if (lhs.column(j) != rhs.column(j)) {
        report.error("(iv) " + open_name(y, v), "differential square does not commute: f_Omega d_Y != d_X f_A",
                     {format_set(y.open(v)), "e" + std::to_string(j)});
        break;
      }
    }
  }
  return report;
}

TriadMorphism compose(const TriadMorphism& g, const TriadMorphism& f) {
  if (!(g.f.domain() == f.f.codomain())) throw PreconditionViolation("morphisms are not composable");
  TriadMorphism out{g.f.after(f.f), {}, {}};
  for (std::size_t w = 0; w < g.f.codomain().open_count(); ++w) {
    const std::size_t pre = g.f.preimage_open(w);
    out.fA.push_back(f.fA.at(pre) * g.fA.at(w));
    out.fOmega.push_back(f.fOmega.at(pre) * g.fOmega.at(w));
  }
  return out;
}

TriadMorphism identity_morphism(const DifferentialTriad& t) {
  return {ContinuousMap::identity(t.space()), identity_morphism(t.algebra.system).components,
          identity_morphism(t.omega.system).components};
}

TriadMorphism constant_morphism(const DifferentialTriad& source, const DifferentialTriad& target, std::size_t c) {
  if (!target.algebra.embeddings) throw NotFunctional("target algebra sheaf carries no function embeddings");
  const auto& y = target.space();
  if (c >= y.point_count()) throw PreconditionViolation("point " + std::to_string(c) + " is not in the codomain");
  TriadMorphism out{ContinuousMap::constant(source.space(), y, c), {}, {}};
  for (std::size_t v = 0; v < y.open_count(); ++v) {
    const std::size_t pre = out.f.preimage_open(v);
    const Algebra& a = source.algebra.algebra(pre);
    Matrix fa(a.dim, target.algebra.system.dim(v));
    if (contains_point(y.open(v), c)) {
      const Matrix& emb = (*target.algebra.embeddings)[v];
      const std::size_t row = position_in(y.open(v), c);
      for (std::size_t i = 0; i < a.dim; ++i)
        for (std::size_t j = 0; j < fa.cols(); ++j) fa(i, j) = a.unit[i] * emb(row, j);
    }
    out.fA.push_back(std::move(fa));
    out.fOmega.emplace_back(source.omega.system.dim(pre), target.omega.system.dim(v));
  }
  return out;
}

AgreementResult differential_agreement_on_image(const TriadMorphism& m1, const TriadMorphism& m2,
                                                const DifferentialTriad& source, const DifferentialTriad& target) {
  AgreementResult out;
  if (!(m1.f == m2.f) || m1.fA != m2.fA) {
    out.report.error("", "precondition: morphisms must share f and f_A");
    out.agree_on_image = out.agree_globally = false;
    return out;
  }
  for (const auto* m : {&m1, &m2}) {
    const Report r = check_morphism(*m, source, target);
    if (!r.ok()) {
      out.report.warning(m == &m1 ? "first" : "second",
                         "not a morphism: " + r.first_error().location + ": " + r.first_error().message);
    }
  }
  const auto& y = target.space();
  for (std::size_t v = 0; v < y.open_count(); ++v) {
    const Subspace image = image_of_differential(target, v);
    for (std::size_t i = 0; i < image.dim(); ++i) {
      const Vector b = image.basis_vector(i);
      if (m1.fOmega[v].apply(b) != m2.fOmega[v].apply(b)) {
        out.agree_on_image = false;
        out.report.error(open_name(y, v), "f_Omega components differ on Im d_Y",
                         {format_set(y.open(v)), "image basis " + std::to_string(i)});
        break;
      }
    }
    if (m1.fOmega[v] != m2.fOmega[v]) out.agree_globally = false;
  }
  if (out.agree_on_image) {
    out.report.info("", out.agree_globally ? "agree on Im d and globally" : "agree on Im d, differ on complement");
  }
  return out;
}

UniquenessResult algebra_component_uniqueness(const TriadMorphism& m1, const TriadMorphism& m2,
                                              const DifferentialTriad& source, const DifferentialTriad& target) {
  UniquenessResult out;
  if (!(m1.f == m2.f) || m1.fOmega != m2.fOmega) {
    out.report.error("", "precondition: morphisms must share f and f_Omega");
    return out;
  }
  for (const auto* m : {&m1, &m2}) {
    const Report r = check_morphism(*m, source, target);
    if (!r.ok()) {
      out.report.warning(m == &m1 ? "first" : "second",
                         "not a morphism: " + r.first_error().location + ": " + r.first_error().message);
    }
  }
  const auto& x = source.space();
  for (std::size_t u = 0; u < x.open_count(); ++u) {
    if (!kernel_of_differential(source, u).constants_only) {
      out.report.info(open_name(x, u), "hypothesis not met: d_X vanishes on non-constant sections");
      out.report.set_exploratory(true);
      return out;
    }
  }
  out.hypothesis_met = true;
  const auto& y = target.space();
  for (std::size_t v = 0; v < y.open_count(); ++v) {
    const std::size_t pre = m1.f.preimage_open(v);
    const Matrix diff = m1.fA[v] - m2.fA[v];
    for (std::size_t j = 0; j < diff.cols(); ++j) {
      const Vector d = diff.column(j);
      if (is_zero(d)) continue;
      out.algebra_components_equal = false;
      const bool constant = kernel_of_differential(source, pre).kernel.contains(d);
      out.report.error(open_name(y, v),
                       std::string("f_A components differ although f_Omega agrees; the difference is ") +
                           (constant ? "a constant section" : "not in ker d_X"),
                       {format_set(y.open(v)), "e" + std::to_string(j)});
      break;
    }
  }
  return out;
}

EvaluationCharacter evaluation_character(const AlgebraPresheaf& a, std::size_t x) {
  if (!a.embeddings) throw NotFunctional("algebra presheaf carries no function embeddings");
  const auto& space = a.space();
  EvaluationCharacter out;
  out.open = minimal_open(space, x);
  const Matrix& emb = (*a.embeddings)[out.open];
  out.character.functional = emb.row(position_in(space.open(out.open), x));
  if (!is_character(a.algebra(out.open), out.character.functional)) {
    out.consistency.error(open_name(space, out.open), "evaluation is not a character");
  }
  for (std::size_t v = 0; v < space.open_count(); ++v) {
    if (!contains_point(space.open(v), x)) continue;
    const Vector direct = (*a.embeddings)[v].row(position_in(space.open(v), x));
    const Vector through_germ = a.restriction(v, out.open).apply_left(out.character.functional);
    if (direct != through_germ) {
      out.consistency.error(open_name(space, v), "ev^V_x differs from ev_x after the germ map",
                            {format_set(space.open(v)), std::to_string(x)});
    }
  }
  return out;
}

PresheafMorphism pullback_morphism(const ContinuousMap& f) {
  PresheafMorphism h;
  const auto& y = f.codomain();
  for (std::size_t v = 0; v < y.open_count(); ++v) {
    const PointSet vset = y.open(v);
    const auto pre = points_of(f.preimage(vset));
    std::vector<std::size_t> g;
    for (auto x : pre) g.push_back(position_in(vset, f(x)));
    h.components.push_back(pullback_matrix(g, cardinality(vset)));
  }
  return h;
}

std::optional<std::vector<std::size_t>> recover_map(const PresheafMorphism& h, const ContinuousMap& f) {
  const auto& y = f.codomain();
  const Matrix& global = h.components.at(y.full_open());
  const std::size_t points = y.point_count();
  std::vector<std::size_t> table;
  for (std::size_t x = 0; x < f.domain().point_count(); ++x) {
    const Vector character = global.row(x);
    std::optional<std::size_t> found;
    for (std::size_t p = 0; p < points; ++p)
      if (character == unit_vector(points, p)) found = p;
    if (!found) return std::nullopt;
    table.push_back(*found);
  }
  return table;
}

Report verify_pullback_forced(const ContinuousMap& f, const PresheafMorphism& h) {
  Report report;
  const auto& x = f.domain();
  const auto& y = f.codomain();
  const bool discrete = x.is_discrete() && y.is_discrete();
  report.set_exploratory(!discrete);
  auto finding = [&](std::string location, std::string message, std::vector<std::string> witness) {
    if (discrete) {
      report.error(std::move(location), std::move(message), std::move(witness));
    } else {
      report.warning(std::move(location), std::move(message), std::move(witness));
    }
  };
  const AlgebraPresheaf source = functional_presheaf(y);
  const AlgebraPresheaf target = pushforward(f, functional_presheaf(x));
  report.merge(check_algebra_presheaf_morphism(h, source, target), "h");
  if (!report.ok()) return report;

  for (std::size_t p = 0; p < x.point_count(); ++p) {
    const std::size_t v = minimal_open(y, f(p));
    const PointSet vset = y.open(v);
    const std::size_t row = position_in(f.preimage(vset), p);
    const Vector composite = h.components[v].row(row);
    const auto stalk_characters = characters(source.algebra(v));
    report.info("point " + std::to_string(p),
                "stalk of A_Y at " + std::to_string(f(p)) + " has " + std::to_string(stalk_characters.size()) +
                    " character(s)");
    if (!is_character(source.algebra(v), composite)) {
      finding("point " + std::to_string(p), "ev_x h is not a character", {std::to_string(p)});
    } else if (composite != unit_vector(cardinality(vset), position_in(vset, f(p)))) {
      finding("point " + std::to_string(p), "ev_x h is not ev_f(x) on the stalk", {std::to_string(p)});
    }
  }
  const PresheafMorphism pullback = pullback_morphism(f);
  for (std::size_t v = 0; v < y.open_count(); ++v) {
    if (h.components[v] == pullback.components[v]) continue;
    for (std::size_t j = 0; j < h.components[v].cols(); ++j) {
      if (h.components[v].column(j) != pullback.components[v].column(j)) {
        finding(open_name(y, v), "h_V(alpha) != alpha o f", {format_set(y.open(v)), "e" + std::to_string(j)});
        break;
      }
    }
  }
  if (auto recovered = recover_map(h, f)) {
    report.info("", "recovered map " + format_table(*recovered));
    if (*recovered != f.values()) finding("", "recovered map differs from f", {format_table(*recovered)});
  } else {
    finding("", "global component does not come from a point map", {});
  }
  return report;
}

std::vector<PresheafMorphism> enumerate_function_presheaf_morphisms(const AlgebraPresheaf& source,
                                                                    const AlgebraPresheaf& target) {
  const auto& space = source.space();
  const std::size_t n = space.open_count();
  std::vector<std::vector<AlgebraMorphism>> candidates(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (!is_function_algebra(source.algebra(v)) || !is_function_algebra(target.algebra(v))) {
      throw PreconditionViolation("sections over " + format_set(space.open(v)) + " are not a function algebra");
    }
    candidates[v] = enumerate_unital_morphisms(source.algebra(v).dim, target.algebra(v).dim);
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cardinality(space.open(a)) > cardinality(space.open(b));
  });
  std::vector<Matrix> chosen(n);
  std::vector<bool> assigned(n, false);
  std::vector<PresheafMorphism> out;
  enumerate_components(source, target, order, candidates, 0, chosen, assigned, out);
  return out;
}

std::optional<AffineMorphismFamily> omega_components(const ContinuousMap& f, const std::vector<Matrix>& fA,
                                                     const DifferentialTriad& source,
                                                     const DifferentialTriad& target) {
  const auto& y = target.space();
  const std::size_t n = y.open_count();
  MatrixSystem system;
  std::vector<std::size_t> pre(n);
  for (std::size_t v = 0; v < n; ++v) {
    pre[v] = f.preimage_open(v);
    system.add_unknown(source.omega.system.dim(pre[v]), target.omega.system.dim(v));
  }
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t dx = source.omega.system.dim(pre[v]), dy = target.omega.system.dim(v);
    const Matrix id_x = Matrix::identity(dx), id_y = Matrix::identity(dy);
    for (std::size_t w = 0; w < n; ++w) {
      if (w == v || !is_subset(y.open(w), y.open(v))) continue;
      const Matrix id_w = Matrix::identity(source.omega.system.dim(pre[w]));
      const Matrix& ry = target.omega.restriction(v, w);
      const Matrix& rx = source.omega.restriction(pre[v], pre[w]);
      system.add_equation({{&id_w, w, &ry, 1}, {&rx, v, &id_y, -1}}, Matrix(rx.rows(), dy));
    }
    const Algebra& ay = target.algebra.algebra(v);
    for (std::size_t i = 0; i < ay.dim; ++i) {
      const Matrix ly = target.omega.module(v).operator_of(unit_vector(ay.dim, i));
      const Matrix lx = source.omega.module(pre[v]).operator_of(fA.at(v).column(i));
      system.add_equation({{&id_x, v, &ly, 1}, {&lx, v, &id_y, -1}}, Matrix(dx, dy));
    }
    system.add_equation({{&id_x, v, &target.d[v], 1}}, source.d[pre[v]] * fA.at(v));
  }
  const Matrix m = system.matrix();
  const auto solved = solve(m, system.rhs());
  if (!solved.solution) return std::nullopt;
  AffineMorphismFamily family{system.unpack(*solved.solution), {}};
  for (const auto& b : kernel(m).basis_vectors()) family.directions.push_back(system.unpack(b));
  return family;
}

FullnessResult fullness_check(const FiniteSpace& x, const FiniteSpace& y, std::uint64_t bound) {
  if (!x.is_discrete() || !y.is_discrete()) throw PreconditionViolation("fullness check needs discrete spaces");
  std::uint64_t maps = 1;
  for (std::size_t i = 0; i < x.point_count(); ++i) {
    maps *= y.point_count();
    if (maps > bound) {
      throw BoundExceeded("|Y|^|X| exceeds the bound " + std::to_string(bound));
    }
  }
  FullnessResult out;
  const DifferentialTriad dx = functional_triad(x);
  const DifferentialTriad dy = functional_triad(y);
  out.bijective = true;
  for (const auto& table : all_point_maps(x.point_count(), y.point_count())) {
    if (!is_continuous(table, x, y).continuous) continue;
    ++out.map_count;
    const ContinuousMap f(x, y, table);
    std::size_t per_map = 0;
    bool pullback_only = true;
    for (const auto& h : enumerate_function_presheaf_morphisms(dy.algebra, pushforward(f, dx.algebra))) {
      const auto omega = omega_components(f, h.components, dx, dy);
      if (!omega) continue;
      // Omega = 0 on both sides, so the family is a single point.
      const TriadMorphism m{f, h.components, omega->particular};
      if (!check_morphism(m, dx, dy).ok()) continue;
      ++per_map;
      pullback_only = pullback_only && h == pullback_morphism(f) && omega->directions.empty();
    }
    out.morphism_count += per_map;
    out.report.info("f = " + format_table(table), std::to_string(per_map) + " morphism(s)");
    if (per_map != 1 || !pullback_only) {
      out.bijective = false;
      out.report.error("f = " + format_table(table), "expected exactly the pullback morphism",
                       {std::to_string(per_map)});
    }
  }
  out.report.info("", "maps " + std::to_string(out.map_count) + ", morphisms " + std::to_string(out.morphism_count));
  if (out.morphism_count != maps) {
    out.report.error("", "morphism count differs from |Y|^|X|",
                     {std::to_string(out.morphism_count), std::to_string(maps)});
  }
  return out;
}

}  // namespace triadica
