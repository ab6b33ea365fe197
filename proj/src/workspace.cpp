#include "triadica/workspace.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "triadica/errors.hpp"
#include "triadica/kaehler.hpp"

namespace triadica {

namespace {

using Json = nlohmann::json;

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string child(const std::string& pointer, const std::string& key) { return pointer + "/" + escape_token(key); }
std::string child(const std::string& pointer, std::size_t index) { return pointer + "/" + std::to_string(index); }

struct Failure {
  WorkspaceIssue issue;
};

/// Byte offsets of every value in an already well-formed JSON text, keyed
/// by JSON pointer. The library parser keeps no positions, so this light
/// scan supplies them and also catches duplicate object keys.
class PositionIndex {
 public:
  explicit PositionIndex(std::string_view text) : text_(text) {
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < text.size(); ++i)
      if (text[i] == '\n') line_starts_.push_back(i + 1);
    value("");
  }

  SourceLocation locate(const std::string& pointer) const {
    SourceLocation loc{pointer, 0, 0};
    // Fall back to the nearest enclosing value that was indexed.
    std::string p = pointer;
    while (true) {
      auto it = offsets_.find(p);
      if (it != offsets_.end()) {
        fill(loc, it->second);
        return loc;
      }
      if (p.empty()) return loc;
      p.erase(p.rfind('/'));
    }
  }

  const std::optional<std::string>& duplicate() const noexcept { return duplicate_; }

 private:
  void fill(SourceLocation& loc, std::size_t offset) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    const std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
    loc.line = line;
    loc.column = offset - line_starts_[line - 1] + 1;
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }

  std::string_view string_literal() {
    const std::size_t start = pos_++;
    while (pos_ < text_.size() && text_[pos_] != '"') pos_ += text_[pos_] == '\\' ? 2 : 1;
    ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void value(const std::string& pointer) {
    skip_space();
    offsets_.emplace(pointer, pos_);
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      std::set<std::string> seen;
      while (true) {
        skip_space();
        if (text_[pos_] == '}') break;
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        const auto key = Json::parse(string_literal()).get<std::string>();
        const std::string path = child(pointer, key);
        if (!seen.insert(key).second && !duplicate_) duplicate_ = path;
        skip_space();
        ++pos_;  // ':'
        value(path);
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      std::size_t index = 0;
      while (true) {
        skip_space();
        if (text_[pos_] == ']') break;
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        value(child(pointer, index++));
      }
      ++pos_;
    } else if (c == '"') {
      string_literal();
    } else {
      while (pos_ < text_.size() && std::string_view(",}] \t\r\n").find(text_[pos_]) == std::string_view::npos) ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::size_t> line_starts_;
  std::map<std::string, std::size_t> offsets_;
  std::optional<std::string> duplicate_;
};

std::optional<std::string> find_float(const Json& v, const std::string& pointer) {
  if (v.is_number_float()) return pointer;
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it)
      if (auto hit = find_float(it.value(), child(pointer, it.key()))) return hit;
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (auto hit = find_float(v[i], child(pointer, i))) return hit;
  }
  return std::nullopt;
}

/// Splits "name arg" builder strings.
std::pair<std::string, std::string> split_builder(const std::string& text) {
  const auto space = text.find(' ');
  if (space == std::string::npos) return {text, ""};
  return {text.substr(0, space), text.substr(space + 1)};
}

class Resolver {
 public:
  Resolver(const Json& root, const PositionIndex& index) : root_(root), index_(index) {}

  Workspace run() {
    if (!root_.is_object()) fail("ParseError", "", "workspace must be a JSON object");
    if (!root_.contains("schema")) fail("ParseError", "", "missing field 'schema'");
    const Json& schema = root_["schema"];
    if (!schema.is_number_integer() || schema.get<long long>() != kWorkspaceSchema)
      fail("ParseError", "/schema", "unsupported schema version, expected 1");
    static const std::set<std::string> sections{"schema", "spaces", "algebras", "presheaves", "triads", "maps", "morphisms"};
    for (auto it = root_.begin(); it != root_.end(); ++it)
      if (!sections.count(it.key())) fail("ParseError", child("", it.key()), "unknown section '" + it.key() + "'");

    section("spaces", [&](const Json& v, const std::string& p) { ws_.spaces.emplace(current_, define_space(v, p)); });
    section("algebras", [&](const Json& v, const std::string& p) { ws_.algebras.emplace(current_, define_algebra(v, p)); });
    section("presheaves",
            [&](const Json& v, const std::string& p) { ws_.presheaves.emplace(current_, define_presheaf(v, p)); });
    section("triads", [&](const Json& v, const std::string& p) { ws_.triads.emplace(current_, define_triad(v, p)); });
    section("maps", [&](const Json& v, const std::string& p) { ws_.maps.emplace(current_, define_map(v, p)); });
    section("morphisms",
            [&](const Json& v, const std::string& p) { ws_.morphisms.emplace(current_, define_morphism(v, p)); });
    return std::move(ws_);
  }

 private:
  [[noreturn]] void fail(const std::string& kind, const std::string& pointer, const std::string& message) const {
    throw Failure{{kind, index_.locate(pointer), message}};
  }

  template <typename F>
  void section(const std::string& name, F define) {
    if (!root_.contains(name)) return;
    const std::string pointer = child("", name);
    const Json& entries = root_[name];
    if (!entries.is_object()) fail("ParseError", pointer, "section '" + name + "' must be an object of named entries");
    for (auto it = entries.begin(); it != entries.end(); ++it) {
      const std::string p = child(pointer, it.key());
      if (it.key().empty()) fail("ParseError", p, "empty name");
      if (auto used = names_.find(it.key()); used != names_.end())
        fail("ParseError", p, "name '" + it.key() + "' already used in " + used->second);
      names_.emplace(it.key(), name);
      current_ = it.key();
      try {
        define(it.value(), p);
      } catch (const Failure&) {
        throw;
      } catch (const DimensionMismatch& e) {
        fail("DimensionMismatch", p, e.what());
      } catch (const Error& e) {
        fail("ParseError", p, e.kind() + ": " + e.what());
      }
    }
  }

  // Scalars and containers.

  const Json& field(const Json& obj, const std::string& pointer, const std::string& key) const {
    if (!obj.is_object()) fail("ParseError", pointer, "expected an object");
    if (!obj.contains(key)) fail("ParseError", pointer, "missing field '" + key + "'");
    return obj[key];
  }

  /// Rejects object keys outside the allowed set.
  void keys(const Json& v, const std::string& pointer, std::initializer_list<std::string_view> allowed) const {
    if (!v.is_object()) return;
    for (auto it = v.begin(); it != v.end(); ++it)
      if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
        fail("ParseError", child(pointer, it.key()), "unknown field '" + it.key() + "'");
  }

  const Json& array(const Json& v, const std::string& pointer) const {
    if (!v.is_array()) fail("ParseError", pointer, "expected an array");
    return v;
  }

  std::string text(const Json& v, const std::string& pointer) const {
    if (!v.is_string()) fail("ParseError", pointer, "expected a string");
    return v.get<std::string>();
  }

  std::size_t natural(const Json& v, const std::string& pointer) const {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      fail("ParseError", pointer, "expected a non-negative integer");
    return v.get<std::size_t>();
  }

  std::size_t natural_arg(const std::string& arg, const std::string& pointer) const {
    std::size_t value = 0;
    const auto [end, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), value);
    if (arg.empty() || ec != std::errc() || end != arg.data() + arg.size())
      fail("ParseError", pointer, "builder argument '" + arg + "' is not a non-negative integer");
    return value;
  }

  Rational rational(const Json& v, const std::string& pointer) const {
    if (v.is_number_float()) fail("ParseError", pointer, "floating-point literals are not accepted");
    if (v.is_number_integer()) return parse_rational(v.dump());
    if (!v.is_string()) fail("ParseError", pointer, "expected a rational literal");
    try {
      return parse_rational(v.get<std::string>());
    } catch (const ParseError& e) {
      fail("ParseError", pointer, e.what());
    }
  }

  Vector vector(const Json& v, const std::string& pointer, std::size_t n) const {
    array(v, pointer);
    if (v.size() != n)
      fail("DimensionMismatch", pointer, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
    Vector out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(rational(v[i], child(pointer, i)));
    return out;
  }

  Matrix matrix(const Json& v, const std::string& pointer, std::size_t rows, std::size_t cols) const {
    array(v, pointer);
    if (v.size() != rows)
      fail("DimensionMismatch", pointer,
           "expected a " + std::to_string(rows) + "x" + std::to_string(cols) + " matrix, got " +
               std::to_string(v.size()) + " rows");
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      const Vector row = vector(v[r], child(pointer, r), cols);
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
    }
    return m;
  }

  PointSet point_set(const Json& v, const std::string& pointer, std::size_t points) const {
    array(v, pointer);
    PointSet s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::size_t x = natural(v[i], child(pointer, i));
      if (x >= points) fail("ParseError", child(pointer, i), "point " + std::to_string(x) + " out of range");
      s |= PointSet{1} << x;
    }
    return s;
  }

  std::size_t open_index(const Json& v, const std::string& pointer, const FiniteSpace& space) const {
    const PointSet s = point_set(v, pointer, space.point_count());
    auto index = space.index_of(s);
    if (!index) fail("ParseError", pointer, format_set(s) + " is not an open set");
    return *index;
  }

  /// {"open": [...], "matrix": [...]} entries; missing opens are zero.
  std::vector<Matrix> per_open_matrices(const Json& obj, const std::string& pointer, const std::string& key,
                                        const FiniteSpace& space, const std::vector<std::size_t>& rows,
                                        const std::vector<std::size_t>& cols) const {
    std::vector<Matrix> out;
    for (std::size_t u = 0; u < space.open_count(); ++u) out.emplace_back(rows[u], cols[u]);
    if (!obj.contains(key)) return out;
    const std::string p = child(pointer, key);
    const Json& list = array(obj[key], p);
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string q = child(p, i);
      keys(list[i], q, {"open", "matrix"});
      const std::size_t u = open_index(field(list[i], q, "open"), child(q, "open"), space);
      if (!seen.insert(u).second) fail("ParseError", q, "open " + format_set(space.open(u)) + " listed twice");
      out[u] = matrix(field(list[i], q, "matrix"), child(q, "matrix"), rows[u], cols[u]);
    }
    return out;
  }

  void restrictions(const Json& obj, const std::string& pointer, RestrictionSystem& system) const {
    const auto& space = system.space();
    if (obj.contains("restrictions")) {
      const std::string p = child(pointer, "restrictions");
      const Json& list = array(obj["restrictions"], p);
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string q = child(p, i);
        keys(list[i], q, {"from", "to", "matrix"});
        const std::size_t from = open_index(field(list[i], q, "from"), child(q, "from"), space);
        const std::size_t to = open_index(field(list[i], q, "to"), child(q, "to"), space);
        if (!is_subset(space.open(to), space.open(from)))
          fail("ParseError", q, format_set(space.open(to)) + " is not contained in " + format_set(space.open(from)));
        system.set_restriction(from, to,
                               matrix(field(list[i], q, "matrix"), child(q, "matrix"), system.dim(to), system.dim(from)));
      }
    }
    try {
      system.complete();
    } catch (const DimensionMismatch& e) {
      fail("DimensionMismatch", child(pointer, "restrictions"), e.what());
    }
  }

  // References: a name of an earlier entry or an inline definition object.

  template <typename T>
  const T& lookup(const std::map<std::string, T>& table, const std::string& kind, const std::string& name,
                  const std::string& pointer) const {
    auto it = table.find(name);
    if (it == table.end()) fail("UnresolvedReference", pointer, "unknown " + kind + " '" + name + "'");
    return it->second;
  }

  FiniteSpace space_ref(const Json& v, const std::string& pointer) {
    if (v.is_string()) return lookup(ws_.spaces, "space", v.get<std::string>(), pointer);
    if (!v.is_object()) fail("ParseError", pointer, "expected a space name or definition");
    return define_space(v, pointer);
  }

  Algebra algebra_ref(const Json& v, const std::string& pointer) {
    if (v.is_string()) return lookup(ws_.algebras, "algebra", v.get<std::string>(), pointer);
    if (!v.is_object()) fail("ParseError", pointer, "expected an algebra name or definition");
    return define_algebra(v, pointer);
  }

  AlgebraPresheaf presheaf_ref(const Json& v, const std::string& pointer) {
    if (v.is_string()) return lookup(ws_.presheaves, "presheaf", v.get<std::string>(), pointer);
    if (!v.is_object()) fail("ParseError", pointer, "expected a presheaf name or definition");
    return define_presheaf(v, pointer);
  }

  const DifferentialTriad& triad_name(const Json& v, const std::string& pointer) const {
    return lookup(ws_.triads, "triad", text(v, pointer), pointer);
  }

  // Definitions.

  FiniteSpace define_space(const Json& v, const std::string& pointer) {
    if (v.is_string() || (v.is_object() && v.contains("builder"))) {
      const std::string p = v.is_string() ? pointer : child(pointer, "builder");
      keys(v, pointer, {"builder"});
      const auto [name, arg] = split_builder(text(v.is_string() ? v : v["builder"], p));
      if (name == "discrete") return FiniteSpace::discrete(natural_arg(arg, p));
      if (name == "indiscrete") return FiniteSpace::indiscrete(natural_arg(arg, p));
      if (name == "sierpinski" && arg.empty()) return FiniteSpace::sierpinski();
      fail("ParseError", p, "unknown space builder '" + name + "'");
    }
    keys(v, pointer, {"points", "opens"});
    const std::size_t points = natural(field(v, pointer, "points"), child(pointer, "points"));
    if (points > kMaxPoints) fail("ParseError", child(pointer, "points"), "at most 64 points");
    const std::string p = child(pointer, "opens");
    const Json& list = array(field(v, pointer, "opens"), p);
    std::vector<PointSet> opens;
    for (std::size_t i = 0; i < list.size(); ++i) opens.push_back(point_set(list[i], child(p, i), points));
    FiniteSpace space(points, opens);
    const auto topology = check_topology(space);
    if (!topology.valid) fail("ParseError", p, "not a topology: " + topology.violations.front());
    return space;
  }

  Algebra define_algebra(const Json& v, const std::string& pointer) {
    if (v.is_string() || (v.is_object() && v.contains("builder"))) {
      const std::string p = v.is_string() ? pointer : child(pointer, "builder");
      const auto [name, arg] = split_builder(text(v.is_string() ? v : v["builder"], p));
      if (name == "polynomial_quotient") {
        keys(v, pointer, {"builder", "coefficients"});
      } else {
        keys(v, pointer, {"builder"});
      }
      if (name == "function_algebra") return function_algebra(natural_arg(arg, p));
      if (name == "truncated_poly") {
        const std::size_t order = natural_arg(arg, p);
        if (order == 0) fail("ParseError", p, "truncated_poly needs order >= 1");
        return truncated_poly_algebra(order);
      }
      if (name == "square_zero") return square_zero_algebra(natural_arg(arg, p));
      if (name == "zero" && arg.empty()) return zero_algebra();
      if (name == "polynomial_quotient" && arg.empty()) {
        const std::string q = child(pointer, "coefficients");
        const Json& c = array(field(v, pointer, "coefficients"), q);
        if (c.empty()) fail("ParseError", q, "polynomial_quotient needs degree >= 1");
        return polynomial_quotient_algebra(vector(c, q, c.size()));
      }
      fail("ParseError", p, "unknown algebra builder '" + name + "'");
    }
    keys(v, pointer, {"dim", "unit", "products"});
    const std::size_t n = natural(field(v, pointer, "dim"), child(pointer, "dim"));
    Algebra a(n, Bilinear(n, n, n), vector(field(v, pointer, "unit"), child(pointer, "unit"), n));
    const std::string p = child(pointer, "products");
    const Json& rows = array(field(v, pointer, "products"), p);
    if (rows.size() != n) fail("DimensionMismatch", p, "expected " + std::to_string(n) + " rows of products");
    for (std::size_t i = 0; i < n; ++i) {
      const Json& row = array(rows[i], child(p, i));
      if (row.size() != n) fail("DimensionMismatch", child(p, i), "expected " + std::to_string(n) + " products");
      for (std::size_t j = 0; j < n; ++j) a.mult.set_value(i, j, vector(row[j], child(child(p, i), j), n));
    }
    return a;
  }

  AlgebraPresheaf define_presheaf(const Json& v, const std::string& pointer) {
    if (!v.is_object()) fail("ParseError", pointer, "expected a presheaf definition object");
    const FiniteSpace space = space_ref(field(v, pointer, "space"), child(pointer, "space"));
    if (v.contains("builder")) {
      const std::string p = child(pointer, "builder");
      const std::string name = text(v["builder"], p);
      if (name == "constant") keys(v, pointer, {"builder", "space", "algebra"});
      if (name == "functional") keys(v, pointer, {"builder", "space"});
      if (name == "pointwise") keys(v, pointer, {"builder", "space", "algebras"});
      if (name == "constant") return constant_presheaf(space, algebra_ref(field(v, pointer, "algebra"), child(pointer, "algebra")));
      if (name == "functional") return functional_presheaf(space);
      if (name == "pointwise") {
        const std::string q = child(pointer, "algebras");
        const Json& list = array(field(v, pointer, "algebras"), q);
        if (list.size() != space.point_count())
          fail("DimensionMismatch", q, "expected one algebra per point (" + std::to_string(space.point_count()) + ")");
        std::vector<Algebra> stalks;
        for (std::size_t i = 0; i < list.size(); ++i) stalks.push_back(algebra_ref(list[i], child(q, i)));
        return pointwise_product_presheaf(space, stalks);
      }
      fail("ParseError", p, "unknown presheaf builder '" + name + "'");
    }
    keys(v, pointer, {"space", "sections", "restrictions", "embeddings"});
    std::vector<Algebra> sections(space.open_count(), zero_algebra());
    if (v.contains("sections")) {
      const std::string p = child(pointer, "sections");
      const Json& list = array(v["sections"], p);
      std::set<std::size_t> seen;
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string q = child(p, i);
        keys(list[i], q, {"open", "algebra"});
        const std::size_t u = open_index(field(list[i], q, "open"), child(q, "open"), space);
        if (!seen.insert(u).second) fail("ParseError", q, "open " + format_set(space.open(u)) + " listed twice");
        sections[u] = algebra_ref(field(list[i], q, "algebra"), child(q, "algebra"));
      }
    }
    auto presheaf = make_algebra_presheaf(space, sections);
    restrictions(v, pointer, presheaf.system);
    if (v.contains("embeddings")) {
      std::vector<std::size_t> rows, cols;
      for (std::size_t u = 0; u < space.open_count(); ++u) {
        rows.push_back(cardinality(space.open(u)));
        cols.push_back(sections[u].dim);
      }
      presheaf.embeddings = per_open_matrices(v, pointer, "embeddings", space, rows, cols);
    }
    return presheaf;
  }

  DifferentialTriad define_triad(const Json& v, const std::string& pointer) {
    if (!v.is_object()) fail("ParseError", pointer, "expected a triad definition object");
    if (v.contains("builder")) {
      const std::string p = child(pointer, "builder");
      const std::string name = text(v["builder"], p);
      keys(v, pointer, {"builder", name == "functional" ? "space" : "algebra"});
      if (name == "functional") return functional_triad(space_ref(field(v, pointer, "space"), child(pointer, "space")));
      const auto a = presheaf_ref(field(v, pointer, "algebra"), child(pointer, "algebra"));
      if (name == "kaehler") return kaehler_presheaf(a).triad;
      if (name == "zero") return zero_differential_triad(a);
      fail("ParseError", p, "unknown triad builder '" + name + "'");
    }
    keys(v, pointer, {"algebra", "omega", "d"});
    DifferentialTriad t;
    t.algebra = presheaf_ref(field(v, pointer, "algebra"), child(pointer, "algebra"));
    const auto& space = t.space();
    const std::size_t opens = space.open_count();
    std::vector<Module> modules;
    for (std::size_t u = 0; u < opens; ++u) modules.push_back(zero_module(t.algebra.algebra(u)));
    const std::string op = child(pointer, "omega");
    const Json& omega = field(v, pointer, "omega");
    if (!omega.is_object()) fail("ParseError", op, "expected an object");
    keys(omega, op, {"sections", "restrictions"});
    if (omega.contains("sections")) {
      const std::string p = child(op, "sections");
      const Json& list = array(omega["sections"], p);
      std::set<std::size_t> seen;
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string q = child(p, i);
        keys(list[i], q, {"open", "dim", "action"});
        const std::size_t u = open_index(field(list[i], q, "open"), child(q, "open"), space);
        if (!seen.insert(u).second) fail("ParseError", q, "open " + format_set(space.open(u)) + " listed twice");
        const std::size_t dim = natural(field(list[i], q, "dim"), child(q, "dim"));
        const std::size_t adim = t.algebra.algebra(u).dim;
        const std::string ap = child(q, "action");
        const Json& action = array(field(list[i], q, "action"), ap);
        if (action.size() != adim)
          fail("DimensionMismatch", ap, "expected one operator per algebra basis element (" + std::to_string(adim) + ")");
        Module m{dim, Bilinear(adim, dim, dim)};
        for (std::size_t a = 0; a < adim; ++a) {
          const Matrix op_a = matrix(action[a], child(ap, a), dim, dim);
          for (std::size_t j = 0; j < dim; ++j) m.action.set_value(a, j, op_a.column(j));
        }
        modules[u] = std::move(m);
      }
    }
    std::vector<std::size_t> omega_dims, algebra_dims;
    for (std::size_t u = 0; u < opens; ++u) {
      omega_dims.push_back(modules[u].dim);
      algebra_dims.push_back(t.algebra.algebra(u).dim);
    }
    t.omega = {RestrictionSystem(space, omega_dims), std::move(modules)};
    restrictions(omega, op, t.omega.system);
    t.d = per_open_matrices(v, pointer, "d", space, omega_dims, algebra_dims);
    return t;
  }

  ContinuousMap define_map(const Json& v, const std::string& pointer) {
    keys(v, pointer, {"domain", "codomain", "values"});
    const FiniteSpace domain = space_ref(field(v, pointer, "domain"), child(pointer, "domain"));
    const FiniteSpace codomain = space_ref(field(v, pointer, "codomain"), child(pointer, "codomain"));
    return map_values(v, pointer, domain, codomain);
  }

  ContinuousMap map_values(const Json& v, const std::string& pointer, const FiniteSpace& domain,
                           const FiniteSpace& codomain) const {
    const std::string p = child(pointer, "values");
    const Json& list = array(field(v, pointer, "values"), p);
    if (list.size() != domain.point_count())
      fail("DimensionMismatch", p, "expected one value per domain point (" + std::to_string(domain.point_count()) + ")");
    std::vector<std::size_t> values;
    for (std::size_t i = 0; i < list.size(); ++i) {
      values.push_back(natural(list[i], child(p, i)));
      if (values.back() >= codomain.point_count()) fail("ParseError", child(p, i), "value out of range");
    }
    const auto continuity = is_continuous(values, domain, codomain);
    if (!continuity.continuous)
      fail("ParseError", p, "map is not continuous: preimage of " + format_set(*continuity.witness) + " is not open");
    return ContinuousMap(domain, codomain, values);
  }

  ContinuousMap morphism_map(const Json& map, const std::string& pointer, const DifferentialTriad& source,
                             const DifferentialTriad& target) const {
    if (!map.is_string()) {
      keys(map, pointer, {"values"});
      return map_values(map, pointer, source.space(), target.space());
    }
    ContinuousMap f = lookup(ws_.maps, "map", map.get<std::string>(), pointer);
    if (!(f.domain() == source.space()) || !(f.codomain() == target.space()))
      fail("DimensionMismatch", pointer, "map spaces differ from the source and target triad spaces");
    return f;
  }

  NamedMorphism define_morphism(const Json& v, const std::string& pointer) {
    if (!v.is_object()) fail("ParseError", pointer, "expected a morphism definition object");
    if (v.contains("builder")) {
      const std::string p = child(pointer, "builder");
      const std::string name = text(v["builder"], p);
      if (name == "identity") keys(v, pointer, {"builder", "triad"});
      if (name == "constant") keys(v, pointer, {"builder", "source", "target", "point"});
      if (name == "pullback") keys(v, pointer, {"builder", "source", "target", "map"});
      if (name == "identity") {
        const std::string t = text(field(v, pointer, "triad"), child(pointer, "triad"));
        return {t, t, identity_morphism(triad_name(v["triad"], child(pointer, "triad")))};
      }
      if (name == "constant") {
        const std::string s = text(field(v, pointer, "source"), child(pointer, "source"));
        const std::string t = text(field(v, pointer, "target"), child(pointer, "target"));
        const auto& source = triad_name(v["source"], child(pointer, "source"));
        const auto& target = triad_name(v["target"], child(pointer, "target"));
        const std::size_t c = natural(field(v, pointer, "point"), child(pointer, "point"));
        if (c >= target.space().point_count()) fail("ParseError", child(pointer, "point"), "point out of range");
        return {s, t, constant_morphism(source, target, c)};
      }
      if (name == "pullback") {
        const std::string s = text(field(v, pointer, "source"), child(pointer, "source"));
        const std::string t = text(field(v, pointer, "target"), child(pointer, "target"));
        const auto& source = triad_name(v["source"], child(pointer, "source"));
        const auto& target = triad_name(v["target"], child(pointer, "target"));
        const std::string mp = child(pointer, "map");
        const ContinuousMap f = morphism_map(field(v, pointer, "map"), mp, source, target);
        const auto& y = target.space();
        std::vector<Matrix> fA = pullback_morphism(f).components, fOmega;
        for (std::size_t w = 0; w < y.open_count(); ++w) {
          const std::size_t pre = f.preimage_open(w);
          if (fA[w].rows() != source.algebra.system.dim(pre) || fA[w].cols() != target.algebra.system.dim(w))
            fail("DimensionMismatch", pointer, "pullback needs function algebras U -> Q^|U| on both triads");
          fOmega.emplace_back(source.omega.system.dim(pre), target.omega.system.dim(w));
        }
        return {s, t, TriadMorphism{f, std::move(fA), std::move(fOmega)}};
      }
      fail("ParseError", p, "unknown morphism builder '" + name + "'");
    }
    keys(v, pointer, {"source", "target", "map", "fA", "fOmega"});
    const std::string source_name = text(field(v, pointer, "source"), child(pointer, "source"));
    const std::string target_name = text(field(v, pointer, "target"), child(pointer, "target"));
    const auto& source = triad_name(v["source"], child(pointer, "source"));
    const auto& target = triad_name(v["target"], child(pointer, "target"));
    const std::optional<ContinuousMap> f =
        morphism_map(field(v, pointer, "map"), child(pointer, "map"), source, target);
    const auto& y = target.space();
    std::vector<std::size_t> a_rows, a_cols, o_rows, o_cols;
    for (std::size_t w = 0; w < y.open_count(); ++w) {
      const std::size_t pre = f->preimage_open(w);
      a_rows.push_back(source.algebra.system.dim(pre));
      a_cols.push_back(target.algebra.system.dim(w));
      o_rows.push_back(source.omega.system.dim(pre));
      o_cols.push_back(target.omega.system.dim(w));
    }
    return {source_name, target_name,
            TriadMorphism{*f, per_open_matrices(v, pointer, "fA", y, a_rows, a_cols),
                          per_open_matrices(v, pointer, "fOmega", y, o_rows, o_cols)}};
  }

  const Json& root_;
  const PositionIndex& index_;
  Workspace ws_;
  std::map<std::string, std::string> names_;
  std::string current_;
};

// Serialization.

OrderedJson point_list(PointSet s) {
  OrderedJson out = OrderedJson::array();
  for (auto x : points_of(s)) out.push_back(x);
  return out;
}

OrderedJson rational_rows(const Matrix& m) {
  OrderedJson out = OrderedJson::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    OrderedJson row = OrderedJson::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

OrderedJson rational_list(const Vector& v) {
  OrderedJson out = OrderedJson::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

template <typename T>
std::optional<std::string> name_of(const std::map<std::string, T>& table, const T& value) {
  for (const auto& [name, entry] : table)
    if (entry == value) return name;
  return std::nullopt;
}

OrderedJson restriction_list(const RestrictionSystem& system) {
  OrderedJson out = OrderedJson::array();
  const auto& space = system.space();
  for (std::size_t u = 0; u < space.open_count(); ++u)
    for (std::size_t v = 0; v < space.open_count(); ++v) {
      if (u == v || !is_subset(space.open(v), space.open(u))) continue;
      if (system.dim(u) == 0 || system.dim(v) == 0) continue;
      out.push_back({{"from", point_list(space.open(u))},
                     {"to", point_list(space.open(v))},
                     {"matrix", rational_rows(system.restriction(u, v))}});
    }
  return out;
}

OrderedJson per_open_list(const FiniteSpace& space, const std::vector<Matrix>& matrices) {
  OrderedJson out = OrderedJson::array();
  for (std::size_t u = 0; u < space.open_count(); ++u) {
    if (matrices[u].rows() == 0 || matrices[u].cols() == 0) continue;
    out.push_back({{"open", point_list(space.open(u))}, {"matrix", rational_rows(matrices[u])}});
  }
  return out;
}

OrderedJson inline_space(const FiniteSpace& space) {
  OrderedJson opens = OrderedJson::array();
  for (PointSet u : space.opens()) opens.push_back(point_list(u));
  return {{"points", space.point_count()}, {"opens", std::move(opens)}};
}

OrderedJson inline_algebra(const Algebra& a) {
  OrderedJson products = OrderedJson::array();
  for (std::size_t i = 0; i < a.dim; ++i) {
    OrderedJson row = OrderedJson::array();
    for (std::size_t j = 0; j < a.dim; ++j) row.push_back(rational_list(a.mult.value(i, j)));
    products.push_back(std::move(row));
  }
  return {{"dim", a.dim}, {"unit", rational_list(a.unit)}, {"products", std::move(products)}};
}

OrderedJson ref_space(const FiniteSpace& space, const Workspace* context) {
  if (context)
    if (auto name = name_of(context->spaces, space)) return *name;
  return inline_space(space);
}

OrderedJson ref_algebra(const Algebra& a, const Workspace* context) {
  if (context)
    if (auto name = name_of(context->algebras, a)) return *name;
  return inline_algebra(a);
}

OrderedJson inline_presheaf(const AlgebraPresheaf& p, const Workspace* context);

OrderedJson ref_presheaf(const AlgebraPresheaf& p, const Workspace* context) {
  if (context)
    if (auto name = name_of(context->presheaves, p)) return *name;
  return inline_presheaf(p, context);
}

OrderedJson inline_presheaf(const AlgebraPresheaf& p, const Workspace* context) {
  const auto& space = p.space();
  OrderedJson sections = OrderedJson::array();
  for (std::size_t u = 0; u < space.open_count(); ++u) {
    if (p.algebra(u) == zero_algebra()) continue;
    sections.push_back({{"open", point_list(space.open(u))}, {"algebra", ref_algebra(p.algebra(u), context)}});
  }
  OrderedJson out{{"space", ref_space(space, context)},
                  {"sections", std::move(sections)},
                  {"restrictions", restriction_list(p.system)}};
  if (p.embeddings) out["embeddings"] = per_open_list(space, *p.embeddings);
  return out;
}

OrderedJson inline_triad(const DifferentialTriad& t, const Workspace* context) {
  const auto& space = t.space();
  OrderedJson sections = OrderedJson::array();
  for (std::size_t u = 0; u < space.open_count(); ++u) {
    const Module& m = t.omega.module(u);
    if (m == zero_module(t.algebra.algebra(u))) continue;
    OrderedJson action = OrderedJson::array();
    for (std::size_t a = 0; a < m.action.left_dim(); ++a) {
      Matrix op(m.dim, m.dim);
      for (std::size_t j = 0; j < m.dim; ++j) op.set_column(j, m.action.value(a, j));
      action.push_back(rational_rows(op));
    }
    sections.push_back({{"open", point_list(space.open(u))}, {"dim", m.dim}, {"action", std::move(action)}});
  }
  return {{"algebra", ref_presheaf(t.algebra, context)},
          {"omega", {{"sections", std::move(sections)}, {"restrictions", restriction_list(t.omega.system)}}},
          {"d", per_open_list(space, t.d)}};
}

OrderedJson inline_map(const ContinuousMap& f, const Workspace* context) {
  return {{"domain", ref_space(f.domain(), context)},
          {"codomain", ref_space(f.codomain(), context)},
          {"values", f.values()}};
}

}  // namespace

std::string SourceLocation::to_string() const {
  std::string out = pointer.empty() ? "/" : pointer;
  if (line > 0) out += " (line " + std::to_string(line) + ":" + std::to_string(column) + ")";
  return out;
}

ParseOutcome parse_workspace_checked(std::string_view text) {
  ParseOutcome outcome;
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string message = e.what();
    if (auto colon = message.find(": "); colon != std::string::npos) message = message.substr(colon + 2);
    outcome.issue = WorkspaceIssue{"ParseError", {"", line, column}, "invalid JSON: " + message};
    return outcome;
  }
  const PositionIndex index(text);
  try {
    if (index.duplicate()) throw Failure{{"ParseError", index.locate(*index.duplicate()), "duplicate key"}};
    if (auto hit = find_float(root, ""))
      throw Failure{{"ParseError", index.locate(*hit), "floating-point literals are not accepted"}};
    outcome.workspace = Resolver(root, index).run();
  } catch (const Failure& f) {
    outcome.issue = f.issue;
  }
  return outcome;
}

Workspace parse_workspace(std::string_view text) {
  auto outcome = parse_workspace_checked(text);
  if (outcome.workspace) return std::move(*outcome.workspace);
  const auto& issue = *outcome.issue;
  const std::string message = issue.location.to_string() + ": " + issue.message;
  if (issue.kind == "UnresolvedReference") throw UnresolvedReference(message);
  if (issue.kind == "DimensionMismatch") throw DimensionMismatch(message);
  throw ParseError(message);
}

OrderedJson serialize_space(const FiniteSpace& space, const Workspace*) { return inline_space(space); }

OrderedJson serialize_algebra(const Algebra& a, const Workspace*) { return inline_algebra(a); }

OrderedJson serialize_presheaf(const AlgebraPresheaf& p, const Workspace* context) { return inline_presheaf(p, context); }

OrderedJson serialize_triad(const DifferentialTriad& t, const Workspace* context) { return inline_triad(t, context); }

OrderedJson serialize_map(const ContinuousMap& f, const Workspace* context) { return inline_map(f, context); }

OrderedJson serialize_morphism(const NamedMorphism& m, const Workspace*) {
  const auto& y = m.morphism.f.codomain();
  return {{"source", m.source},
          {"target", m.target},
          {"map", {{"values", m.morphism.f.values()}}},
          {"fA", per_open_list(y, m.morphism.fA)},
          {"fOmega", per_open_list(y, m.morphism.fOmega)}};
}

OrderedJson serialize_workspace(const Workspace& ws) {
  // Entries reference only earlier sections, so each section is written
  // against a context holding the sections before it.
  Workspace context;
  OrderedJson out{{"schema", kWorkspaceSchema}};
  auto write = [&](const char* key, const auto& table, auto&& inline_fn, auto& context_table) {
    if (table.empty()) return;
    OrderedJson entries = OrderedJson::object();
    for (const auto& [name, value] : table) entries[name] = inline_fn(value);
    out[key] = std::move(entries);
    context_table = table;
  };
  write("spaces", ws.spaces, [](const FiniteSpace& s) { return inline_space(s); }, context.spaces);
  write("algebras", ws.algebras, [](const Algebra& a) { return inline_algebra(a); }, context.algebras);
  write("presheaves", ws.presheaves, [&](const AlgebraPresheaf& p) { return inline_presheaf(p, &context); },
        context.presheaves);
  write("triads", ws.triads, [&](const DifferentialTriad& t) { return inline_triad(t, &context); }, context.triads);
  write("maps", ws.maps, [&](const ContinuousMap& f) { return inline_map(f, &context); }, context.maps);
  write("morphisms", ws.morphisms, [&](const NamedMorphism& m) { return serialize_morphism(m, &context); },
        context.morphisms);
  return out;
}

}  // namespace triadica
