#include "triadica/sheaf.hpp"

#include <stdexcept>

#include "triadica/errors.hpp"

namespace triadica {
namespace {

// Stacks blocks vertically into one matrix with the given column count.
Matrix vstack(const std::vector<Matrix>& blocks, std::size_t cols) {
  std::size_t rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  Matrix out(rows, cols);
  std::size_t r0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (std::size_t c = 0; c < cols; ++c) out(r0 + r, c) = b(r, c);
    r0 += b.rows();
  }
  return out;
}

Vector block(const Vector& v, std::size_t offset, std::size_t len) {
  return Vector(v.begin() + static_cast<std::ptrdiff_t>(offset),
                v.begin() + static_cast<std::ptrdiff_t>(offset + len));
}

void cover_search(const std::vector<std::size_t>& candidates, const std::vector<PointSet>& sets, PointSet target,
                  std::size_t next, PointSet current, std::vector<std::size_t>& chosen,
                  std::vector<std::vector<std::size_t>>& out) {
  if (current == target) {
    // Irredundant: no member inside the union of the others.
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      PointSet others = 0;
      for (std::size_t j = 0; j < chosen.size(); ++j) {
        if (j != i) others |= sets[chosen[j]];
      }
      if (is_subset(sets[chosen[i]], others)) return;
    }
    out.push_back(chosen);
    return;
  }
  PointSet reachable = current;
  for (std::size_t i = next; i < candidates.size(); ++i) reachable |= sets[candidates[i]];
  if (reachable != target) return;
  for (std::size_t i = next; i < candidates.size(); ++i) {
    const PointSet s = sets[candidates[i]];
    if (is_subset(s, current)) continue;
    chosen.push_back(candidates[i]);
    cover_search(candidates, sets, target, i + 1, current | s, chosen, out);
    chosen.pop_back();
  }
}

}  // namespace

StalkData stalk(const RestrictionSystem& system, std::size_t x) {
  const auto& space = system.space();
  StalkData s;
  s.open = minimal_open(space, x);
  s.dim = system.dim(s.open);
  for (std::size_t u = 0; u < space.open_count(); ++u) {
    if (contains_point(space.open(u), x)) s.germ_maps.emplace_back(u, system.restriction(u, s.open));
  }
  return s;
}

AlgebraStalk stalk(const AlgebraPresheaf& p, std::size_t x) {
  auto data = stalk(p.system, x);
  return {p.algebra(data.open), std::move(data)};
}

ModuleStalk stalk(const ModulePresheaf& p, std::size_t x) {
  auto data = stalk(p.system, x);
  return {p.module(data.open), std::move(data)};
}

Report SheafCertificate::to_report(const FiniteSpace& space) const {
  Report report;
  for (const auto& w : witnesses) {
    std::vector<std::string> cover;
    for (auto c : w.cover) cover.push_back(format_set(space.open(c)));
    std::string message = w.kind == "locality"
                              ? "sections are not determined by their restrictions (rank " +
                                    std::to_string(w.image_rank) + " < " + std::to_string(w.section_dim) + ")"
                              : "gluing fails: compatible families span " + std::to_string(w.equalizer_dim) +
                                    " dimensions but sections give " + std::to_string(w.image_rank);
    report.error("open " + format_set(space.open(w.open)), message, cover);
  }
  return report;
}

std::vector<std::vector<std::size_t>> irredundant_covers(const FiniteSpace& space, std::size_t open) {
  const PointSet target = space.open(open);
  std::vector<std::vector<std::size_t>> out;
  if (target == 0) return out;
  std::vector<std::size_t> candidates;
  for (std::size_t w = 0; w < space.open_count(); ++w) {
    const PointSet s = space.open(w);
    if (s != 0 && s != target && is_subset(s, target)) candidates.push_back(w);
  }
  std::vector<std::size_t> chosen;
  cover_search(candidates, space.opens(), target, 0, 0, chosen, out);
  return out;
}

SheafCertificate check_sheaf_condition(const RestrictionSystem& system) {
  const auto& space = system.space();
  SheafCertificate cert;
  for (std::size_t u = 0; u < space.open_count(); ++u) {
    const std::size_t du = system.dim(u);
    if (space.open(u) == 0) {
      // The empty family covers the empty set; its equalizer is a point.
      if (du != 0) cert.witnesses.push_back({u, {}, "locality", du, 0, 0});
      continue;
    }
    for (const auto& cover : irredundant_covers(space, u)) {
      std::vector<std::size_t> offsets;
      std::size_t total = 0;
      std::vector<Matrix> restrictions;
      for (auto c : cover) {
        offsets.push_back(total);
        total += system.dim(c);
        restrictions.push_back(system.restriction(u, c));
      }
      const Matrix image = vstack(restrictions, du);
      std::vector<Matrix> constraint_blocks;
      for (std::size_t i = 0; i < cover.size(); ++i)
        for (std::size_t j = i + 1; j < cover.size(); ++j) {
          const std::size_t w = space.require_open(space.open(cover[i]) & space.open(cover[j]));
          const std::size_t dw = system.dim(w);
          if (dw == 0) continue;
          Matrix rows(dw, total);
          const Matrix& ri = system.restriction(cover[i], w);
          const Matrix& rj = system.restriction(cover[j], w);
          for (std::size_t r = 0; r < dw; ++r) {
            for (std::size_t c = 0; c < ri.cols(); ++c) rows(r, offsets[i] + c) += ri(r, c);
            for (std::size_t c = 0; c < rj.cols(); ++c) rows(r, offsets[j] + c) -= rj(r, c);
          }
          constraint_blocks.push_back(std::move(rows));
        }
      const std::size_t equalizer_dim = kernel(vstack(constraint_blocks, total)).dim();
      const std::size_t image_rank = rank(image);
      if (image_rank < du) {
        cert.witnesses.push_back({u, cover, "locality", du, equalizer_dim, image_rank});
      } else if (equalizer_dim != image_rank) {
        cert.witnesses.push_back({u, cover, "gluing", du, equalizer_dim, image_rank});
      }
    }
  }
  cert.is_sheaf = cert.witnesses.empty();
  return cert;
}

Sheafification sheafify(const RestrictionSystem& system) {
  const auto& space = system.space();
  const std::size_t n = space.open_count();
  std::vector<std::size_t> stalk_open(space.point_count());
  for (std::size_t x = 0; x < space.point_count(); ++x) stalk_open[x] = minimal_open(space, x);

  Sheafification out;
  std::vector<std::size_t> dims(n);
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<std::pair<std::size_t, std::size_t>> layout;
    std::size_t total = 0;
    for (auto x : points_of(space.open(u))) {
      layout.emplace_back(x, total);
      total += system.dim(stalk_open[x]);
    }
    std::vector<Matrix> constraints;
    for (const auto& [x, ox] : layout)
      for (const auto& [y, oy] : layout) {
        if (x == y || !contains_point(space.open(stalk_open[x]), y)) continue;
        const Matrix& r = system.restriction(stalk_open[x], stalk_open[y]);
        Matrix rows(r.rows(), total);
        for (std::size_t i = 0; i < r.rows(); ++i) {
          for (std::size_t c = 0; c < r.cols(); ++c) rows(i, ox + c) += r(i, c);
          rows(i, oy + i) -= 1;
        }
        constraints.push_back(std::move(rows));
      }
    out.families.push_back(kernel(vstack(constraints, total)));
    out.layout.push_back(std::move(layout));
    dims[u] = out.families.back().dim();
  }
  out.system = RestrictionSystem(space, dims);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (!is_subset(space.open(v), space.open(u))) continue;
      Matrix r(dims[v], dims[u]);
      for (std::size_t i = 0; i < dims[u]; ++i) {
        const Vector family = out.families[u].basis_vector(i);
        Vector truncated;
        std::size_t k = 0;
        for (const auto& [y, oy] : out.layout[v]) {
          while (out.layout[u][k].first != y) ++k;
          const Vector b = block(family, out.layout[u][k].second, system.dim(stalk_open[y]));
          truncated.insert(truncated.end(), b.begin(), b.end());
        }
        auto coords = out.families[v].coordinates(truncated);
        if (!coords) throw std::logic_error("restricted family is not compatible");
        r.set_column(i, *coords);
      }
      out.system.set_restriction(u, v, std::move(r));
    }
    Matrix canonical(dims[u], system.dim(u));
    for (std::size_t j = 0; j < system.dim(u); ++j) {
      Vector family;
      const Vector section = unit_vector(system.dim(u), j);
      for (const auto& [x, ox] : out.layout[u]) {
        const Vector germ = system.restriction(u, stalk_open[x]).apply(section);
        family.insert(family.end(), germ.begin(), germ.end());
      }
      auto coords = out.families[u].coordinates(family);
      if (!coords) throw std::logic_error("germ family of a section is not compatible");
      canonical.set_column(j, *coords);
    }
    out.canonical.components.push_back(std::move(canonical));
  }
  return out;
}

AlgebraSheafification sheafify(const AlgebraPresheaf& p) {
  Sheafification fam = sheafify(p.system);
  const auto& space = p.space();
  std::vector<Algebra> sections;
  std::vector<Matrix> embeddings;
  bool functional = p.embeddings.has_value();
  for (std::size_t u = 0; u < space.open_count(); ++u) {
    const Subspace& f = fam.families[u];
    const std::size_t d = f.dim();
    const auto& layout = fam.layout[u];
    auto componentwise = [&](const Vector& a, const Vector& b) {
      Vector out;
      for (const auto& [x, ox] : layout) {
        const Algebra& s = p.algebra(minimal_open(space, x));
        const Vector c = s.multiply(block(a, ox, s.dim), block(b, ox, s.dim));
        out.insert(out.end(), c.begin(), c.end());
      }
      return out;
    };
    Bilinear mult(d, d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        auto coords = f.coordinates(componentwise(f.basis_vector(i), f.basis_vector(j)));
        if (!coords) throw std::logic_error("product of compatible families is not compatible");
        mult.set_value(i, j, *coords);
      }
    Vector unit_family;
    for (const auto& [x, ox] : layout) {
      const Vector& e = p.algebra(minimal_open(space, x)).unit;
      unit_family.insert(unit_family.end(), e.begin(), e.end());
    }
    auto unit = f.coordinates(unit_family);
    if (!unit) throw std::logic_error("unit family is not compatible");
    sections.emplace_back(d, std::move(mult), std::move(*unit));

    if (functional) {
      const PointSet uset = space.open(u);
      Matrix emb(cardinality(uset), d);
      for (std::size_t i = 0; i < d; ++i) {
        const Vector family = f.basis_vector(i);
        std::size_t row = 0;
        for (const auto& [x, ox] : layout) {
          const std::size_t mx = minimal_open(space, x);
          const Vector values = (*p.embeddings)[mx].apply(block(family, ox, p.algebra(mx).dim));
          emb(row++, i) = values[position_in(space.open(mx), x)];
        }
      }
      if (kernel(emb).dim() != 0) functional = false;
      embeddings.push_back(std::move(emb));
    }
  }
  AlgebraPresheaf plus{fam.system, std::move(sections), std::nullopt};
  if (functional) plus.embeddings = std::move(embeddings);
  PresheafMorphism canonical = fam.canonical;
  return {std::move(plus), std::move(canonical), std::move(fam)};
}

ModuleSheafification sheafify(const AlgebraPresheaf& base, const ModulePresheaf& m,
                              const AlgebraSheafification& base_plus) {
  Sheafification fam = sheafify(m.system);
  const auto& space = base.space();
  std::vector<Module> sections;
  for (std::size_t u = 0; u < space.open_count(); ++u) {
    const Subspace& mf = fam.families[u];
    const Subspace& af = base_plus.families.families[u];
    const auto& mlayout = fam.layout[u];
    const auto& alayout = base_plus.families.layout[u];
    Bilinear action(af.dim(), mf.dim(), mf.dim());
    for (std::size_t i = 0; i < af.dim(); ++i) {
      const Vector a = af.basis_vector(i);
      for (std::size_t j = 0; j < mf.dim(); ++j) {
        const Vector w = mf.basis_vector(j);
        Vector out;
        for (std::size_t k = 0; k < mlayout.size(); ++k) {
          const std::size_t mx = minimal_open(space, mlayout[k].first);
          const Vector c = m.module(mx).act(block(a, alayout[k].second, base.algebra(mx).dim),
                                            block(w, mlayout[k].second, m.module(mx).dim));
          out.insert(out.end(), c.begin(), c.end());
        }
        auto coords = mf.coordinates(out);
        if (!coords) throw std::logic_error("module action leaves compatible families");
        action.set_value(i, j, *coords);
      }
    }
    sections.push_back({mf.dim(), std::move(action)});
  }
  ModulePresheaf plus{fam.system, std::move(sections)};
  PresheafMorphism canonical = fam.canonical;
  return {std::move(plus), std::move(canonical), std::move(fam)};
}

RestrictionSystem pushforward(const ContinuousMap& f, const RestrictionSystem& system) {
  if (!(f.domain() == system.space())) throw PreconditionViolation("presheaf does not live on the map's domain");
  const auto& y = f.codomain();
  std::vector<std::size_t> pre(y.open_count()), dims(y.open_count());
  for (std::size_t v = 0; v < y.open_count(); ++v) {
    pre[v] = f.preimage_open(v);
    dims[v] = system.dim(pre[v]);
  }
  RestrictionSystem out(y, dims);
  for (std::size_t v = 0; v < y.open_count(); ++v)
    for (std::size_t w = 0; w < y.open_count(); ++w) {
      if (is_subset(y.open(w), y.open(v))) out.set_restriction(v, w, system.restriction(pre[v], pre[w]));
    }
  return out;
}

AlgebraPresheaf pushforward(const ContinuousMap& f, const AlgebraPresheaf& p) {
  AlgebraPresheaf out{pushforward(f, p.system), {}, std::nullopt};
  for (std::size_t v = 0; v < f.codomain().open_count(); ++v) out.sections.push_back(p.algebra(f.preimage_open(v)));
  return out;
}

ModulePresheaf pushforward(const ContinuousMap& f, const ModulePresheaf& m) {
  ModulePresheaf out{pushforward(f, m.system), {}};
  for (std::size_t v = 0; v < f.codomain().open_count(); ++v) out.sections.push_back(m.module(f.preimage_open(v)));
  return out;
}

PresheafMorphism pushforward(const ContinuousMap& f, const PresheafMorphism& h) {
  PresheafMorphism out;
  for (std::size_t v = 0; v < f.codomain().open_count(); ++v) out.components.push_back(h.components.at(f.preimage_open(v)));
  return out;
}

SectionsOverSubset sections_over_subset(const RestrictionSystem& system, PointSet k) {
  const auto& space = system.space();
  if (!is_subset(k, space.full_set())) throw PreconditionViolation("subset has points outside the space");
  SectionsOverSubset out;
  out.open = minimal_open_superset(space, k);
  out.dim = system.dim(out.open);
  for (std::size_t v = 0; v < space.open_count(); ++v) {
    if (is_subset(k, space.open(v))) out.maps.emplace_back(v, system.restriction(v, out.open));
  }
  return out;
}

Matrix morphism_over_subset(const PresheafMorphism& h, const RestrictionSystem& source,
                            const RestrictionSystem& target, PointSet k) {
  const auto over_source = sections_over_subset(source, k);
  const auto& space = source.space();
  const Matrix& hk = h.components.at(over_source.open);
  for (const auto& [v, r] : over_source.maps) {
    const Matrix lhs = hk * r;
    const Matrix rhs = target.restriction(v, over_source.open) * h.components.at(v);
    for (std::size_t j = 0; j < lhs.cols(); ++j) {
      if (lhs.column(j) != rhs.column(j)) {
        throw DiagramTwoViolation(v, j,
                                  "h_K r^V_K != rho^V_K h_V for V = " + format_set(space.open(v)) + ", K = " +
                                      format_set(k) + " on basis section " + std::to_string(j));
      }
    }
  }
  return hk;
}

}  // namespace triadica
