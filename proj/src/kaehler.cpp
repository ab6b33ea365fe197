#include "triadica/kaehler.hpp"

#include "triadica/errors.hpp"

namespace triadica {
namespace {

Vector concat_blocks(const Vector& family, const std::vector<std::pair<std::size_t, std::size_t>>& layout,
                     const std::vector<std::size_t>& in_dims, const std::vector<const Matrix*>& maps) {
  Vector out;
  for (std::size_t k = 0; k < layout.size(); ++k) {
    const auto begin = family.begin() + static_cast<std::ptrdiff_t>(layout[k].second);
    const Vector piece = maps[k]->apply(Vector(begin, begin + static_cast<std::ptrdiff_t>(in_dims[k])));
    out.insert(out.end(), piece.begin(), piece.end());
  }
  return out;
}

}  // namespace

Vector KaehlerModule::to_omega(const Vector& xi) const {
  auto coords = ideal.coordinates(xi);
  if (!coords) throw PreconditionViolation("element is not in the ideal I");
  return quotient.projection.apply(*coords);
}

Vector KaehlerModule::lift(const Vector& omega) const {
  const Vector coords = quotient.section.apply(omega);
  Vector xi(ideal.ambient_dim());
  for (std::size_t i = 0; i < coords.size(); ++i) xi = xi + coords[i] * ideal.basis_vector(i);
  return xi;
}

KaehlerModule kaehler_module(const Algebra& a) {
  const std::size_t n = a.dim;
  KaehlerModule k{a, tensor_product(a, a), Subspace::zero(n * n), Subspace::zero(n * n), {}, 0, {}, {}};
  k.ideal = kernel(multiplication_map(a));
  k.ideal_square = product_subspace(k.ideal, k.ideal, k.tensor.algebra.mult);
  std::vector<Vector> square_in_ideal;
  for (const auto& v : k.ideal_square.basis_vectors()) square_in_ideal.push_back(*k.ideal.coordinates(v));
  k.quotient = quotient_space(k.ideal.dim(), Subspace::span(k.ideal.dim(), square_in_ideal));
  k.omega_dim = k.quotient.dim;

  k.d_matrix = Matrix(k.omega_dim, n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector e = unit_vector(n, i);
    k.d_matrix.set_column(i, k.to_omega(k.tensor.left_embedding.apply(e) - k.tensor.right_embedding.apply(e)));
  }
  k.module = Module{k.omega_dim, Bilinear(n, k.omega_dim, k.omega_dim)};
  for (std::size_t j = 0; j < k.omega_dim; ++j) {
    const Vector xi = k.lift(unit_vector(k.omega_dim, j));
    for (std::size_t i = 0; i < n; ++i) {
      const Vector ai = k.tensor.left_embedding.apply(unit_vector(n, i));
      k.module.action.set_value(i, j, k.to_omega(k.tensor.algebra.multiply(ai, xi)));
    }
  }
  return k;
}

Factorization factor_derivation(const KaehlerModule& k, const Module& m, const Matrix& derivation) {
  const Algebra& a = k.algebra;
  const std::size_t n = a.dim;
  const Report leibniz = check_leibniz(derivation, a, m);
  if (!leibniz.ok()) throw NotADerivation(leibniz.first_error().message);

  Matrix generators(k.omega_dim, n * n), values(m.dim, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Vector ai = unit_vector(n, i);
      generators.set_column(i * n + j, k.module.act(ai, k.d_matrix.column(j)));
      values.set_column(i * n + j, m.act(ai, derivation.column(j)));
    }
  auto phi = solve_left(generators, values);
  if (!phi) throw FactorizationFailed("no linear map on Omega sends the generators a d(b) to a D(b)");
  if (*phi * k.d_matrix != derivation) throw FactorizationFailed("factorization leaves a nonzero residual");
  const std::size_t r = rank(generators);
  return {std::move(*phi), r == k.omega_dim, r};
}

std::vector<Matrix> derivation_space(const Algebra& a, const Module& m) {
  const std::size_t n = a.dim, md = m.dim;
  // Unknown D(r, c) sits at position r * n + c.
  Matrix constraints(n * n * md, md * n);
  std::size_t row = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Matrix li = m.operator_of(unit_vector(n, i));
      const Matrix lj = m.operator_of(unit_vector(n, j));
      for (std::size_t r = 0; r < md; ++r, ++row) {
        for (std::size_t c = 0; c < n; ++c) constraints(row, r * n + c) += a.mult(i, j, c);
        for (std::size_t s = 0; s < md; ++s) {
          constraints(row, s * n + j) -= li(r, s);
          constraints(row, s * n + i) -= lj(r, s);
        }
      }
    }
  std::vector<Matrix> out;
  for (const auto& v : kernel(constraints).basis_vectors()) {
    Matrix d(md, n);
    for (std::size_t r = 0; r < md; ++r)
      for (std::size_t c = 0; c < n; ++c) d(r, c) = v[r * n + c];
    out.push_back(std::move(d));
  }
  return out;
}

Matrix kaehler_map(const Matrix& h, const KaehlerModule& source, const KaehlerModule& target) {
  return factor_derivation(source, restrict_scalars(target.module, h), target.d_matrix * h).phi;
}

KaehlerPresheaf kaehler_presheaf(const AlgebraPresheaf& p) {
  const auto& space = p.space();
  const std::size_t opens = space.open_count();
  KaehlerPresheaf out;
  std::vector<std::size_t> dims;
  for (std::size_t u = 0; u < opens; ++u) {
    out.modules.push_back(kaehler_module(p.algebra(u)));
    dims.push_back(out.modules.back().omega_dim);
  }
  ModulePresheaf omega{RestrictionSystem(space, dims), {}};
  std::vector<Matrix> d;
  for (std::size_t u = 0; u < opens; ++u) {
    omega.sections.push_back(out.modules[u].module);
    d.push_back(out.modules[u].d_matrix);
    for (std::size_t v = 0; v < opens; ++v) {
      if (!is_subset(space.open(v), space.open(u))) continue;
      omega.system.set_restriction(u, v, kaehler_map(p.restriction(u, v), out.modules[u], out.modules[v]));
    }
  }
  out.presheaf_triad = {p, omega, d};
  out.algebra_plus = sheafify(p);
  out.omega_plus = sheafify(p, omega, out.algebra_plus);

  std::vector<Matrix> d_plus;
  for (std::size_t u = 0; u < opens; ++u) {
    const auto& af = out.algebra_plus.families;
    const auto& mf = out.omega_plus.families;
    std::vector<std::size_t> in_dims;
    std::vector<const Matrix*> maps;
    for (const auto& [x, offset] : af.layout[u]) {
      const std::size_t mx = minimal_open(space, x);
      in_dims.push_back(p.algebra(mx).dim);
      maps.push_back(&d[mx]);
    }
    Matrix du(mf.families[u].dim(), af.families[u].dim());
    for (std::size_t i = 0; i < af.families[u].dim(); ++i) {
      auto coords = mf.families[u].coordinates(concat_blocks(af.families[u].basis_vector(i), af.layout[u], in_dims, maps));
      if (!coords) throw FactorizationFailed("differential does not preserve compatible families");
      du.set_column(i, *coords);
    }
    d_plus.push_back(std::move(du));
  }
  out.triad = {out.algebra_plus.sheaf, out.omega_plus.sheaf, std::move(d_plus)};
  return out;
}

}  // namespace triadica
