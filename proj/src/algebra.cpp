#include "triadica/algebra.hpp"

#include <algorithm>
#include <cassert>
#include <string>

#include "triadica/errors.hpp"

namespace triadica {
namespace {

std::string idx(std::size_t i) { return std::to_string(i); }

std::string format_vector(const Vector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += to_string(v[i]);
  }
  return out + ")";
}

Rational trace(const Matrix& m) {
  Rational t;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

// Monic minimal polynomial of a square matrix, coefficients low to high.
Vector minimal_polynomial(const Matrix& m) {
  const std::size_t d = m.rows();
  std::vector<Vector> powers;
  Matrix power = Matrix::identity(d);
  for (std::size_t k = 0; k <= d; ++k) {
    Vector flat(power.data().begin(), power.data().end());
    if (!powers.empty()) {
      auto solved = solve(Matrix::from_columns(d * d, powers), flat);
      if (solved.solution) {
        Vector poly(k + 1);
        for (std::size_t i = 0; i < k; ++i) poly[i] = -(*solved.solution)[i];
        poly[k] = 1;
        return poly;
      }
    }
    powers.push_back(std::move(flat));
    power = power * m;
  }
  throw std::logic_error("minimal polynomial degree exceeds matrix size");
}

Rational evaluate(const Vector& poly, const Rational& x) {
  Rational acc;
  for (std::size_t i = poly.size(); i-- > 0;) acc = acc * x + poly[i];
  return acc;
}

std::vector<mpz_class> positive_divisors(mpz_class n) {
  n = abs(n);
  std::vector<mpz_class> small, large;
  for (mpz_class d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

// Distinct rational roots by the rational root theorem.
std::vector<Rational> rational_roots(Vector poly) {
  std::vector<Rational> roots;
  while (poly.size() > 1 && poly.front() == 0) {
    if (roots.empty()) roots.push_back(0);
    poly.erase(poly.begin());
  }
  if (poly.size() <= 1) return roots;
  mpz_class common = 1;
  for (const auto& c : poly) common = lcm(common, c.get_den());
  std::vector<mpz_class> ints;
  for (const auto& c : poly) ints.push_back(mpz_class(c * common));
  for (const auto& p : positive_divisors(ints.front())) {
    for (const auto& q : positive_divisors(ints.back())) {
      for (int sign : {1, -1}) {
        Rational candidate(mpz_class(sign * p), q);
        candidate.canonicalize();
        if (evaluate(poly, candidate) == 0 &&
            std::find(roots.begin(), roots.end(), candidate) == roots.end()) {
          roots.push_back(candidate);
        }
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

Report validate_algebra(const Algebra& a) {
  Report report;
  const std::size_t n = a.dim;
  if (a.mult.left_dim() != n || a.mult.right_dim() != n || a.mult.out_dim() != n || a.unit.size() != n) {
    report.error("", "structure constants or unit do not match dimension " + idx(n));
    return report;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (a.mult.value(i, j) != a.mult.value(j, i)) {
        report.error("", "not commutative: e" + idx(i) + "*e" + idx(j) + " != e" + idx(j) + "*e" + idx(i),
                     {idx(i), idx(j)});
        return report;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Vector ij = a.mult.value(i, j);
      for (std::size_t l = 0; l < n; ++l) {
        Vector left = a.multiply(ij, unit_vector(n, l));
        Vector right = a.multiply(unit_vector(n, i), a.mult.value(j, l));
        if (left != right) {
          report.error("", "not associative: (e" + idx(i) + "*e" + idx(j) + ")*e" + idx(l) + " = " + format_vector(left) +
                               " but e" + idx(i) + "*(e" + idx(j) + "*e" + idx(l) + ") = " + format_vector(right),
                       {idx(i), idx(j), idx(l)});
          return report;
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (a.multiply(a.unit, unit_vector(n, i)) != unit_vector(n, i)) {
      report.error("", "unit does not act as identity on e" + idx(i), {idx(i)});
      return report;
    }
  }
  return report;
}

Algebra zero_algebra() { return {0, Bilinear(0, 0, 0), {}}; }

Algebra function_algebra(std::size_t k) {
  Bilinear mult(k, k, k);
  for (std::size_t i = 0; i < k; ++i) mult(i, i, i) = 1;
  return {k, std::move(mult), Vector(k, Rational(1))};
}

Algebra truncated_poly_algebra(std::size_t order) {
  if (order == 0) throw PreconditionViolation("truncated polynomial algebra needs order >= 1");
  Bilinear mult(order, order, order);
  for (std::size_t i = 0; i < order; ++i)
    for (std::size_t j = 0; i + j < order; ++j) mult(i, j, i + j) = 1;
  return {order, std::move(mult), unit_vector(order, 0)};
}

Algebra square_zero_algebra(std::size_t generators) {
  const std::size_t n = generators + 1;
  Bilinear mult(n, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    mult(0, i, i) = 1;
    mult(i, 0, i) = 1;
  }
  return {n, std::move(mult), unit_vector(n, 0)};
}

Algebra polynomial_quotient_algebra(const Vector& lower_coefficients) {
  const std::size_t d = lower_coefficients.size();
  if (d == 0) throw PreconditionViolation("polynomial quotient needs degree >= 1");
  // Reduction of x^k for k < 2d - 1 to the basis 1..x^(d-1).
  std::vector<Vector> powers;
  for (std::size_t k = 0; k < d; ++k) powers.push_back(unit_vector(d, k));
  for (std::size_t k = d; k + 1 < 2 * d; ++k) {
    const Vector& prev = powers.back();
    Vector next(d);
    for (std::size_t i = 0; i + 1 < d; ++i) next[i + 1] = prev[i];
    for (std::size_t i = 0; i < d; ++i) next[i] -= prev[d - 1] * lower_coefficients[i];
    powers.push_back(std::move(next));
  }
  Bilinear mult(d, d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) mult.set_value(i, j, powers[i + j]);
  return {d, std::move(mult), unit_vector(d, 0)};
}

TensorProduct tensor_product(const Algebra& a, const Algebra& b) {
  const std::size_t n = a.dim, m = b.dim, nm = n * m;
  Bilinear mult(nm, nm, nm);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i2 = 0; i2 < n; ++i2) {
        for (std::size_t j2 = 0; j2 < m; ++j2) {
          for (std::size_t k = 0; k < n; ++k) {
            const Rational& ca = a.mult(i, i2, k);
            if (ca == 0) continue;
            for (std::size_t l = 0; l < m; ++l) {
              const Rational& cb = b.mult(j, j2, l);
              if (cb != 0) mult(i * m + j, i2 * m + j2, k * m + l) = ca * cb;
            }
          }
        }
      }
    }
  }
  Vector unit(nm);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) unit[i * m + j] = a.unit[i] * b.unit[j];
  Matrix left(nm, n), right(nm, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      left(i * m + j, i) = b.unit[j];
      right(i * m + j, j) = a.unit[i];
    }
  return {{nm, std::move(mult), std::move(unit)}, std::move(left), std::move(right)};
}

Matrix multiplication_map(const Algebra& a) {
  const std::size_t n = a.dim;
  Matrix m(n, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.set_column(i * n + j, a.mult.value(i, j));
  return m;
}

Subspace nilradical(const Algebra& a) {
  const std::size_t n = a.dim;
  Matrix form(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) form(i, j) = trace(a.left_operator(a.mult.value(i, j)));
  return kernel(form);
}

Report check_algebra_morphism(const Matrix& h, const Algebra& source, const Algebra& target) {
  Report report;
  if (h.rows() != target.dim || h.cols() != source.dim) {
    report.error("", "morphism matrix is " + idx(h.rows()) + "x" + idx(h.cols()) + ", expected " + idx(target.dim) +
                         "x" + idx(source.dim));
    return report;
  }
  if (h.apply(source.unit) != target.unit) report.error("", "unit not preserved");
  for (std::size_t i = 0; i < source.dim; ++i) {
    const Vector hi = h.column(i);
    for (std::size_t j = i; j < source.dim; ++j) {
      if (h.apply(source.mult.value(i, j)) != target.multiply(hi, h.column(j))) {
        report.error("", "not multiplicative on (e" + idx(i) + ", e" + idx(j) + ")", {idx(i), idx(j)});
        return report;
      }
    }
  }
  return report;
}

Module zero_module(const Algebra& a) { return {0, Bilinear(a.dim, 0, 0)}; }

Module regular_module(const Algebra& a) { return {a.dim, a.mult}; }

Module direct_sum(const Module& m1, const Module& m2) {
  assert(m1.action.left_dim() == m2.action.left_dim());
  const std::size_t n = m1.action.left_dim(), d = m1.dim + m2.dim;
  Bilinear action(n, d, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m1.dim; ++j)
      for (std::size_t k = 0; k < m1.dim; ++k) action(i, j, k) = m1.action(i, j, k);
    for (std::size_t j = 0; j < m2.dim; ++j)
      for (std::size_t k = 0; k < m2.dim; ++k) action(i, m1.dim + j, m1.dim + k) = m2.action(i, j, k);
  }
  return {d, std::move(action)};
}

Module restrict_scalars(const Module& m, const Matrix& h) {
  assert(h.rows() == m.action.left_dim());
  Bilinear action(h.cols(), m.dim, m.dim);
  for (std::size_t i = 0; i < h.cols(); ++i) {
    const Vector hi = h.column(i);
    for (std::size_t j = 0; j < m.dim; ++j) action.set_value(i, j, m.act(hi, unit_vector(m.dim, j)));
  }
  return {m.dim, std::move(action)};
}

Report validate_module(const Algebra& a, const Module& m) {
  Report report;
  if (m.action.left_dim() != a.dim || m.action.right_dim() != m.dim || m.action.out_dim() != m.dim) {
    report.error("", "module action does not match dimensions");
    return report;
  }
  for (std::size_t j = 0; j < m.dim; ++j) {
    if (m.act(a.unit, unit_vector(m.dim, j)) != unit_vector(m.dim, j)) {
      report.error("", "unit does not act as identity on w" + idx(j), {idx(j)});
      return report;
    }
  }
  for (std::size_t i = 0; i < a.dim; ++i) {
    for (std::size_t k = 0; k < a.dim; ++k) {
      const Vector ik = a.mult.value(i, k);
      for (std::size_t j = 0; j < m.dim; ++j) {
        const Vector w = unit_vector(m.dim, j);
        if (m.act(ik, w) != m.act(unit_vector(a.dim, i), m.act(unit_vector(a.dim, k), w))) {
          report.error("", "action not associative on (e" + idx(i) + ", e" + idx(k) + ", w" + idx(j) + ")",
                       {idx(i), idx(k), idx(j)});
          return report;
        }
      }
    }
  }
  return report;
}

Report check_semilinear(const Matrix& phi, const Matrix& h, const Algebra& a, const Module& m1, const Module& m2) {
  Report report;
  for (std::size_t i = 0; i < a.dim; ++i) {
    const Vector ei = unit_vector(a.dim, i);
    const Vector hi = h.column(i);
    for (std::size_t j = 0; j < m1.dim; ++j) {
      const Vector wj = unit_vector(m1.dim, j);
      if (phi.apply(m1.act(ei, wj)) != m2.act(hi, phi.column(j))) {
        report.error("", "phi(e" + idx(i) + ".w" + idx(j) + ") != h(e" + idx(i) + ").phi(w" + idx(j) + ")",
                     {idx(i), idx(j)});
        return report;
      }
    }
  }
  return report;
}

bool is_character(const Algebra& a, const Vector& functional) {
  if (functional.size() != a.dim || is_zero(functional)) return false;
  auto value = [&](const Vector& v) {
    Rational s;
    for (std::size_t i = 0; i < v.size(); ++i) s += functional[i] * v[i];
    return s;
  };
  if (value(a.unit) != 1) return false;
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = i; j < a.dim; ++j) {
      if (value(a.mult.value(i, j)) != functional[i] * functional[j]) return false;
    }
  return true;
}

std::vector<Character> characters(const Algebra& a) {
  if (a.dim == 0) return {};
  const Subspace radical = nilradical(a);
  const Quotient q = quotient_space(a.dim, radical);
  const std::size_t m = q.dim;
  // Structure constants of the reduced algebra A / nil(A).
  Bilinear reduced_mult(m, m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      reduced_mult.set_value(i, j, q.projection.apply(a.multiply(q.section.column(i), q.section.column(j))));
  const Algebra reduced(m, std::move(reduced_mult), q.projection.apply(a.unit));

  // Split Q^m into joint eigenspaces of the multiplication operators. In a
  // split reduced algebra these are the lines spanned by primitive
  // idempotents; the eigenvalues on each line form a character.
  struct Part {
    Matrix basis;  // columns span an ideal
    Vector values;
  };
  std::vector<Part> parts{{Matrix::identity(m), {}}};
  for (std::size_t k = 0; k < m; ++k) {
    const Matrix op = reduced.left_operator(unit_vector(m, k));
    std::vector<Part> refined;
    for (const auto& part : parts) {
      const std::size_t d = part.basis.cols();
      auto restricted = solve_left(part.basis.transpose(), (op * part.basis).transpose());
      if (!restricted) throw std::logic_error("eigen-part is not invariant under multiplication");
      const Matrix local = restricted->transpose();
      std::size_t covered = 0;
      for (const auto& lambda : rational_roots(minimal_polynomial(local))) {
        const Subspace eigen = kernel(local - lambda * Matrix::identity(d));
        covered += eigen.dim();
        Part next{part.basis * eigen.basis_columns(), part.values};
        next.values.push_back(lambda);
        refined.push_back(std::move(next));
      }
      if (covered < d) {
        throw NotSplit("multiplication by basis element " + idx(k) +
                       " of the reduced algebra has non-rational eigenvalues; the spectrum does not split over Q");
      }
    }
    parts = std::move(refined);
  }
  std::vector<Character> out;
  for (const auto& part : parts) {
    if (part.basis.cols() != 1) {
      throw NotSplit("reduced algebra has a factor of dimension " + idx(part.basis.cols()) + " with scalar action");
    }
    Character c{q.projection.apply_left(part.values)};
    if (!is_character(a, c.functional)) throw std::logic_error("derived functional is not a character");
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Matrix pullback_matrix(const std::vector<std::size_t>& g, std::size_t m) {
  Matrix h(g.size(), m);
  for (std::size_t p = 0; p < g.size(); ++p) h(p, g[p]) = 1;
  return h;
}

std::vector<std::vector<std::size_t>> all_point_maps(std::size_t domain, std::size_t codomain) {
  std::vector<std::vector<std::size_t>> out;
  if (codomain == 0 && domain > 0) return out;
  std::vector<std::size_t> table(domain, 0);
  while (true) {
    out.push_back(table);
    std::size_t pos = domain;
    while (pos > 0) {
      --pos;
      if (++table[pos] < codomain) break;
      table[pos] = 0;
      if (pos == 0) return out;
    }
    if (domain == 0) return out;
  }
}

std::vector<AlgebraMorphism> enumerate_unital_morphisms(std::size_t m, std::size_t k) {
  const Algebra source = function_algebra(m);
  const Algebra target = function_algebra(k);
  std::vector<AlgebraMorphism> out;
  for (const auto& g : all_point_maps(k, m)) out.push_back({source, target, pullback_matrix(g, m)});
  return out;
}

}  // namespace triadica
