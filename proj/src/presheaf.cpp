#include "triadica/presheaf.hpp"

#include <string>

#include "triadica/errors.hpp"

namespace triadica {
namespace {

std::string open_name(const FiniteSpace& space, std::size_t u) { return "open " + format_set(space.open(u)); }

std::string pair_name(const FiniteSpace& space, std::size_t u, std::size_t v) {
  return format_set(space.open(u)) + "->" + format_set(space.open(v));
}

}  // namespace

RestrictionSystem::RestrictionSystem(FiniteSpace space, std::vector<std::size_t> dims)
    : space_(std::move(space)), dims_(std::move(dims)) {
  if (dims_.size() != space_.open_count()) {
    throw DimensionMismatch("restriction system needs one dimension per open");
  }
  restrictions_.resize(dims_.size() * dims_.size());
  present_.assign(dims_.size() * dims_.size(), false);
}

bool RestrictionSystem::has_restriction(std::size_t from, std::size_t to) const { return present_.at(slot(from, to)); }

const Matrix& RestrictionSystem::restriction(std::size_t from, std::size_t to) const {
  if (!has_restriction(from, to)) {
    throw PreconditionViolation("no restriction " + pair_name(space_, from, to));
  }
  return restrictions_[slot(from, to)];
}

void RestrictionSystem::set_restriction(std::size_t from, std::size_t to, Matrix m) {
  if (!is_subset(space_.open(to), space_.open(from))) {
    throw PreconditionViolation("restriction " + pair_name(space_, from, to) + " is not along an inclusion");
  }
  if (m.rows() != dims_[to] || m.cols() != dims_[from]) {
    throw DimensionMismatch("restriction " + pair_name(space_, from, to) + " has shape " + std::to_string(m.rows()) +
                            "x" + std::to_string(m.cols()) + ", expected " + std::to_string(dims_[to]) + "x" +
                            std::to_string(dims_[from]));
  }
  restrictions_[slot(from, to)] = std::move(m);
  present_[slot(from, to)] = true;
}

void RestrictionSystem::complete() {
  const std::size_t n = dims_.size();
  for (std::size_t u = 0; u < n; ++u) {
    if (!has_restriction(u, u)) set_restriction(u, u, Matrix::identity(dims_[u]));
    if (space_.open(u) != 0) {
      auto empty = space_.index_of(0);
      if (empty && !has_restriction(u, *empty)) set_restriction(u, *empty, Matrix(dims_[*empty], dims_[u]));
    }
  }
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v) {
        if (has_restriction(u, v) || !is_subset(space_.open(v), space_.open(u))) continue;
        if (dims_[u] == 0 || dims_[v] == 0) {
          set_restriction(u, v, Matrix(dims_[v], dims_[u]));
          progress = true;
          continue;
        }
        for (std::size_t w = 0; w < n; ++w) {
          if (w == u || w == v) continue;
          if (has_restriction(u, w) && has_restriction(w, v)) {
            set_restriction(u, v, restriction(w, v) * restriction(u, w));
            progress = true;
            break;
          }
        }
      }
  }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      if (is_subset(space_.open(v), space_.open(u)) && !has_restriction(u, v)) {
        throw DimensionMismatch("missing restriction " + pair_name(space_, u, v) + " and no chain derives it");
      }
    }
}

Report check_functoriality(const RestrictionSystem& system) {
  Report report;
  const auto& space = system.space();
  const std::size_t n = space.open_count();
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (!is_subset(space.open(v), space.open(u))) continue;
      if (!system.has_restriction(u, v)) {
        report.error(pair_name(space, u, v), "missing restriction");
        continue;
      }
    }
    if (system.has_restriction(u, u) && !system.restriction(u, u).is_identity()) {
      report.error(pair_name(space, u, u), "restriction to the same open is not the identity");
    }
  }
  if (auto empty = space.index_of(0); empty && system.dim(*empty) != 0) {
    report.error(open_name(space, *empty), "sections over the empty set must be zero-dimensional");
  }
  if (!report.ok()) return report;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      if (v == u || !is_subset(space.open(v), space.open(u))) continue;
      for (std::size_t w = 0; w < n; ++w) {
        if (w == v || !is_subset(space.open(w), space.open(v))) continue;
        if (system.restriction(v, w) * system.restriction(u, v) != system.restriction(u, w)) {
          report.error(pair_name(space, u, v) + "->" + format_set(space.open(w)),
                       "restrictions do not compose", {format_set(space.open(u)), format_set(space.open(v)),
                                                       format_set(space.open(w))});
        }
      }
    }
  return report;
}

AlgebraPresheaf make_algebra_presheaf(FiniteSpace space, std::vector<Algebra> sections) {
  std::vector<std::size_t> dims;
  for (const auto& a : sections) dims.push_back(a.dim);
  return {RestrictionSystem(std::move(space), std::move(dims)), std::move(sections), std::nullopt};
}

Report validate_algebra_presheaf(const AlgebraPresheaf& p) {
  Report report;
  const auto& space = p.space();
  auto topology = check_topology(space);
  for (const auto& v : topology.violations) report.error("space", v);
  if (!topology.valid) return report;
  if (p.sections.size() != space.open_count()) {
    report.error("", "expected one algebra per open");
    return report;
  }
  for (std::size_t u = 0; u < space.open_count(); ++u) {
    if (p.sections[u].dim != p.system.dim(u)) report.error(open_name(space, u), "algebra dimension mismatch");
    report.merge(validate_algebra(p.sections[u]), open_name(space, u));
  }
  report.merge(check_functoriality(p.system));
  if (!report.ok()) return report;
  for (std::size_t u = 0; u < space.open_count(); ++u)
    for (std::size_t v = 0; v < space.open_count(); ++v) {
      if (u == v || !is_subset(space.open(v), space.open(u))) continue;
      report.merge(check_algebra_morphism(p.restriction(u, v), p.algebra(u), p.algebra(v)),
                   "restriction " + pair_name(space, u, v));
    }
  if (p.embeddings) {
    const auto& emb = *p.embeddings;
    if (emb.size() != space.open_count()) {
      report.error("embeddings", "expected one embedding per open");
      return report;
    }
    for (std::size_t u = 0; u < space.open_count(); ++u) {
      const PointSet uset = space.open(u);
      const std::string where = "embedding " + open_name(space, u);
      if (emb[u].rows() != cardinality(uset) || emb[u].cols() != p.algebra(u).dim) {
        report.error(where, "embedding has wrong shape");
        continue;
      }
      report.merge(check_algebra_morphism(emb[u], p.algebra(u), function_algebra(cardinality(uset))), where);
      if (kernel(emb[u]).dim() != 0) report.error(where, "embedding is not injective");
    }
    if (!report.ok()) return report;
    for (std::size_t u = 0; u < space.open_count(); ++u)
      for (std::size_t v = 0; v < space.open_count(); ++v) {
        if (u == v || !is_subset(space.open(v), space.open(u))) continue;
        const auto pts = points_of(space.open(v));
        Matrix coords(pts.size(), cardinality(space.open(u)));
        for (std::size_t i = 0; i < pts.size(); ++i) coords(i, position_in(space.open(u), pts[i])) = 1;
        if (emb[v] * p.restriction(u, v) != coords * emb[u]) {
          report.error("embedding " + pair_name(space, u, v), "embedding does not commute with restriction");
        }
      }
  }
  return report;
}

Report validate_module_presheaf(const AlgebraPresheaf& base, const ModulePresheaf& m) {
  Report report;
  const auto& space = base.space();
  if (!(m.system.space() == space) || m.sections.size() != space.open_count()) {
    report.error("", "module presheaf is not over the base space");
    return report;
  }
  for (std::size_t u = 0; u < space.open_count(); ++u) {
    if (m.sections[u].dim != m.system.dim(u)) report.error(open_name(space, u), "module dimension mismatch");
    report.merge(validate_module(base.algebra(u), m.sections[u]), open_name(space, u));
  }
  report.merge(check_functoriality(m.system));
  if (!report.ok()) return report;
  for (std::size_t u = 0; u < space.open_count(); ++u)
    for (std::size_t v = 0; v < space.open_count(); ++v) {
      if (u == v || !is_subset(space.open(v), space.open(u))) continue;
      report.merge(check_semilinear(m.restriction(u, v), base.restriction(u, v), base.algebra(u), m.module(u),
                                    m.module(v)),
                   "restriction " + pair_name(space, u, v));
    }
  return report;
}

AlgebraPresheaf constant_presheaf(const FiniteSpace& space, const Algebra& a) {
  std::vector<Algebra> sections;
  for (PointSet u : space.opens()) sections.push_back(u == 0 ? zero_algebra() : a);
  auto p = make_algebra_presheaf(space, std::move(sections));
  for (std::size_t u = 0; u < space.open_count(); ++u)
    for (std::size_t v = 0; v < space.open_count(); ++v) {
      if (space.open(v) != 0 && is_subset(space.open(v), space.open(u))) {
        p.system.set_restriction(u, v, Matrix::identity(a.dim));
      }
    }
  p.system.complete();
  return p;
}

AlgebraPresheaf functional_presheaf(const FiniteSpace& space) {
  std::vector<Algebra> sections;
  for (PointSet u : space.opens()) sections.push_back(function_algebra(cardinality(u)));
  auto p = make_algebra_presheaf(space, std::move(sections));
  std::vector<Matrix> embeddings;
  for (std::size_t u = 0; u < space.open_count(); ++u) {
    const PointSet uset = space.open(u);
    embeddings.push_back(Matrix::identity(cardinality(uset)));
    for (std::size_t v = 0; v < space.open_count(); ++v) {
      const PointSet vset = space.open(v);
      if (!is_subset(vset, uset)) continue;
      const auto pts = points_of(vset);
      Matrix r(pts.size(), cardinality(uset));
      for (std::size_t i = 0; i < pts.size(); ++i) r(i, position_in(uset, pts[i])) = 1;
      p.system.set_restriction(u, v, std::move(r));
    }
  }
  p.embeddings = std::move(embeddings);
  return p;
}

Algebra product_algebra(const std::vector<Algebra>& factors) {
  std::size_t total = 0;
  for (const auto& f : factors) total += f.dim;
  Bilinear mult(total, total, total);
  Vector unit(total);
  std::size_t offset = 0;
  for (const auto& f : factors) {
    for (std::size_t i = 0; i < f.dim; ++i) {
      unit[offset + i] = f.unit[i];
      for (std::size_t j = 0; j < f.dim; ++j)
        for (std::size_t k = 0; k < f.dim; ++k) mult(offset + i, offset + j, offset + k) = f.mult(i, j, k);
    }
    offset += f.dim;
  }
  return {total, std::move(mult), std::move(unit)};
}

AlgebraPresheaf pointwise_product_presheaf(const FiniteSpace& space, const std::vector<Algebra>& stalks) {
  if (stalks.size() != space.point_count()) throw DimensionMismatch("need one algebra per point");
  std::vector<Algebra> sections;
  for (PointSet u : space.opens()) {
    std::vector<Algebra> factors;
    for (auto x : points_of(u)) factors.push_back(stalks[x]);
    sections.push_back(product_algebra(factors));
  }
  auto p = make_algebra_presheaf(space, std::move(sections));
  for (std::size_t u = 0; u < space.open_count(); ++u) {
    const PointSet uset = space.open(u);
    std::vector<std::size_t> offsets;
    std::size_t running = 0;
    for (std::size_t x = 0; x < space.point_count(); ++x) {
      offsets.push_back(running);
      if (contains_point(uset, x)) running += stalks[x].dim;
    }
    for (std::size_t v = 0; v < space.open_count(); ++v) {
      const PointSet vset = space.open(v);
      if (!is_subset(vset, uset)) continue;
      Matrix r(p.system.dim(v), p.system.dim(u));
      std::size_t row = 0;
      for (auto x : points_of(vset)) {
        for (std::size_t i = 0; i < stalks[x].dim; ++i) r(row + i, offsets[x] + i) = 1;
        row += stalks[x].dim;
      }
      p.system.set_restriction(u, v, std::move(r));
    }
  }
  return p;
}

ModulePresheaf zero_module_presheaf(const AlgebraPresheaf& base) {
  const auto& space = base.space();
  ModulePresheaf m{RestrictionSystem(space, std::vector<std::size_t>(space.open_count(), 0)), {}};
  for (const auto& a : base.sections) m.sections.push_back(zero_module(a));
  m.system.complete();
  return m;
}

PresheafMorphism identity_morphism(const RestrictionSystem& system) {
  PresheafMorphism h;
  for (auto d : system.dims()) h.components.push_back(Matrix::identity(d));
  return h;
}

Report check_presheaf_morphism(const PresheafMorphism& h, const RestrictionSystem& source,
                               const RestrictionSystem& target) {
  Report report;
  const auto& space = source.space();
  if (h.components.size() != space.open_count()) {
    report.error("", "expected one component per open");
    return report;
  }
  for (std::size_t u = 0; u < space.open_count(); ++u) {
    if (h.components[u].rows() != target.dim(u) || h.components[u].cols() != source.dim(u)) {
      report.error(open_name(space, u), "component has wrong shape");
    }
  }
  if (!report.ok()) return report;
  for (std::size_t u = 0; u < space.open_count(); ++u)
    for (std::size_t v = 0; v < space.open_count(); ++v) {
      if (u == v || !is_subset(space.open(v), space.open(u))) continue;
      const Matrix lhs = h.components[v] * source.restriction(u, v);
      const Matrix rhs = target.restriction(u, v) * h.components[u];
      if (lhs != rhs) {
        for (std::size_t j = 0; j < lhs.cols(); ++j) {
          if (lhs.column(j) != rhs.column(j)) {
            report.error(pair_name(space, u, v), "morphism does not commute with restriction",
                         {format_set(space.open(u)), format_set(space.open(v)), "e" + std::to_string(j)});
            break;
          }
        }
      }
    }
  return report;
}

Report check_algebra_presheaf_morphism(const PresheafMorphism& h, const AlgebraPresheaf& source,
                                       const AlgebraPresheaf& target) {
  Report report = check_presheaf_morphism(h, source.system, target.system);
  if (!report.ok()) return report;
  const auto& space = source.space();
  for (std::size_t u = 0; u < space.open_count(); ++u) {
    report.merge(check_algebra_morphism(h.components[u], source.algebra(u), target.algebra(u)), open_name(space, u));
  }
  return report;
}

}  // namespace triadica
