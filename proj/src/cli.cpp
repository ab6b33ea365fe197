#include "triadica/cli.hpp"

#include <functional>
#include <map>
#include <sstream>

#include "triadica/errors.hpp"
#include "triadica/kaehler.hpp"

namespace triadica {

namespace {

/// Problems with the invocation itself rather than with the mathematics.
struct UsageError {
  std::string location;
  std::string message;
};

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string functional_text(const Vector& v) {
  std::vector<std::string> parts;
  for (const auto& x : v) parts.push_back(to_string(x));
  return "(" + join(parts, ", ") + ")";
}

/// Output collected while running: the merged report and workspace-format
/// fragments of everything derived.
struct Session {
  const CliRequest& request;
  const Workspace& ws;
  Report report;
  OrderedJson derived = OrderedJson::object();
  Workspace objects;

  void derive(const std::string& name, const AlgebraPresheaf& p) {
    add("presheaves", name, serialize_presheaf(p, &ws));
    objects.presheaves.emplace(name, p);
  }
  void derive(const std::string& name, const DifferentialTriad& t) {
    add("triads", name, serialize_triad(t, &ws));
    objects.triads.emplace(name, t);
  }
  void derive(const std::string& name, const ContinuousMap& f) {
    add("maps", name, serialize_map(f, &ws));
    objects.maps.emplace(name, f);
  }
  void derive(const std::string& name, const NamedMorphism& m) {
    add("morphisms", name, serialize_morphism(m, &ws));
    objects.morphisms.emplace(name, m);
  }

  void add(const std::string& section, const std::string& name, OrderedJson value) {
    if (!derived.contains(section)) derived[section] = OrderedJson::object();
    derived[section][name] = std::move(value);
  }

  void require_targets(std::size_t min, std::size_t max) const {
    const std::size_t n = request.targets.size();
    if (n < min || n > max) {
      const std::string expected = min == max ? std::to_string(min) : std::to_string(min) + " to " + std::to_string(max);
      throw UsageError{"targets", request.command + " expects " + expected + " --target names, got " + std::to_string(n)};
    }
  }

  template <typename T>
  const T& lookup(const std::map<std::string, T>& table, const std::string& name, const std::string& kind) const {
    auto it = table.find(name);
    if (it == table.end()) throw UsageError{name, "no " + kind + " named '" + name + "' in the workspace"};
    return it->second;
  }

  const DifferentialTriad& triad(const std::string& name) const { return lookup(ws.triads, name, "triad"); }
  const NamedMorphism& morphism(const std::string& name) const { return lookup(ws.morphisms, name, "morphism"); }

  /// Space by workspace name, falling back to builder text such as "discrete 3".
  FiniteSpace space(const std::string& name) const {
    if (auto it = ws.spaces.find(name); it != ws.spaces.end()) return it->second;
    const std::string doc = R"({"schema":1,"spaces":{"s":)" + nlohmann::json(name).dump() + "}}";
    auto outcome = parse_workspace_checked(doc);
    if (!outcome.workspace) throw UsageError{name, "no space named '" + name + "' and not a space builder"};
    return outcome.workspace->spaces.at("s");
  }

  /// Runs body for one target, turning library errors into findings.
  void for_target(const std::string& name, const std::function<void(Report&)>& body) {
    Report r;
    try {
      body(r);
    } catch (const UsageError&) {
      throw;
    } catch (const Error& e) {
      r.error("", e.kind() + ": " + e.what());
    }
    report.merge(r, name);
  }
};

std::vector<std::string> all_names(const Workspace& ws) {
  std::vector<std::string> out;
  for (const auto& [n, _] : ws.spaces) out.push_back(n);
  for (const auto& [n, _] : ws.algebras) out.push_back(n);
  for (const auto& [n, _] : ws.presheaves) out.push_back(n);
  for (const auto& [n, _] : ws.triads) out.push_back(n);
  for (const auto& [n, _] : ws.maps) out.push_back(n);
  for (const auto& [n, _] : ws.morphisms) out.push_back(n);
  return out;
}

Report presheaf_report(const AlgebraPresheaf& p) {
  Report r = validate_algebra_presheaf(p);
  if (r.ok()) r.merge(check_sheaf_condition(p.system).to_report(p.space()), "sheaf");
  return r;
}

void cmd_validate(Session& s) {
  const auto targets = s.request.targets.empty() ? all_names(s.ws) : s.request.targets;
  for (const auto& name : targets) {
    s.for_target(name, [&](Report& r) {
      const auto& ws = s.ws;
      if (auto it = ws.spaces.find(name); it != ws.spaces.end()) {
        for (const auto& v : check_topology(it->second).violations) r.error("", v);
      } else if (auto it = ws.algebras.find(name); it != ws.algebras.end()) {
        r.merge(validate_algebra(it->second));
      } else if (auto it = ws.presheaves.find(name); it != ws.presheaves.end()) {
        r.merge(presheaf_report(it->second));
      } else if (auto it = ws.triads.find(name); it != ws.triads.end()) {
        r.merge(validate_triad(it->second));
      } else if (auto it = ws.maps.find(name); it != ws.maps.end()) {
        r.info("", "continuous map " + join([&] {
          std::vector<std::string> v;
          for (auto x : it->second.values()) v.push_back(std::to_string(x));
          return v;
        }(), " "));
      } else if (auto it = ws.morphisms.find(name); it != ws.morphisms.end()) {
        r.merge(check_morphism(it->second.morphism, s.triad(it->second.source), s.triad(it->second.target)));
      } else {
        throw UsageError{name, "no entry named '" + name + "' in the workspace"};
      }
    });
  }
}

void describe_dims(Report& r, const std::string& what, const RestrictionSystem& system) {
  std::vector<std::string> dims;
  for (std::size_t u = 0; u < system.space().open_count(); ++u)
    dims.push_back(format_set(system.space().open(u)) + "=" + std::to_string(system.dim(u)));
  r.info("", what + " dimensions per open", dims);
}

void cmd_kaehler(Session& s) {
  s.require_targets(1, SIZE_MAX);
  for (const auto& name : s.request.targets) {
    s.for_target(name, [&](Report& r) {
      AlgebraPresheaf p;
      if (auto it = s.ws.presheaves.find(name); it != s.ws.presheaves.end()) {
        p = it->second;
      } else if (auto jt = s.ws.algebras.find(name); jt != s.ws.algebras.end()) {
        p = constant_presheaf(FiniteSpace::discrete(1), jt->second);
      } else {
        throw UsageError{name, "no presheaf or algebra named '" + name + "' in the workspace"};
      }
      const auto k = kaehler_presheaf(p);
      describe_dims(r, "Omega", k.triad.omega.system);
      r.merge(validate_triad(k.triad), "triad");
      s.derive(name + ".kaehler", k.triad);
    });
  }
}

void cmd_sheafify(Session& s) {
  s.require_targets(1, SIZE_MAX);
  for (const auto& name : s.request.targets) {
    const auto& p = s.lookup(s.ws.presheaves, name, "presheaf");
    s.for_target(name, [&](Report& r) {
      const auto plus = sheafify(p);
      r.info("", check_sheaf_condition(p.system).is_sheaf ? "already a sheaf" : "not a sheaf; sheafified");
      describe_dims(r, "sheaf", plus.sheaf.system);
      r.merge(presheaf_report(plus.sheaf), "sheaf");
      s.derive(name + ".sheafified", plus.sheaf);
    });
  }
}

void cmd_pushforward(Session& s) {
  s.require_targets(1, SIZE_MAX);
  if (!s.request.map) throw UsageError{"map", "pushforward needs --map NAME"};
  const auto& f = s.lookup(s.ws.maps, *s.request.map, "map");
  for (const auto& name : s.request.targets) {
    const auto& t = s.triad(name);
    if (!(t.space() == f.domain())) throw UsageError{name, "triad space differs from the domain of the map"};
    s.for_target(name, [&](Report& r) {
      const auto pushed = pushforward_triad(f, t);
      describe_dims(r, "algebra", pushed.algebra.system);
      r.merge(validate_triad(pushed), "triad");
      s.derive(name + ".pushforward." + *s.request.map, pushed);
    });
  }
}

void cmd_check_morphism(Session& s) {
  s.require_targets(1, SIZE_MAX);
  for (const auto& name : s.request.targets) {
    const auto& m = s.morphism(name);
    s.for_target(name, [&](Report& r) { r.merge(check_morphism(m.morphism, s.triad(m.source), s.triad(m.target))); });
  }
}

void cmd_compose(Session& s) {
  s.require_targets(2, 2);
  const std::string& gname = s.request.targets[0];
  const std::string& fname = s.request.targets[1];
  const auto& g = s.morphism(gname);
  const auto& f = s.morphism(fname);
  const std::string name = gname + ".after." + fname;
  s.for_target(name, [&](Report& r) {
    if (f.target != g.source) {
      r.error("", "not composable: '" + fname + "' ends at '" + f.target + "' but '" + gname + "' starts at '" +
                      g.source + "'");
      return;
    }
    const NamedMorphism gf{f.source, g.target, compose(g.morphism, f.morphism)};
    r.merge(check_morphism(gf.morphism, s.triad(gf.source), s.triad(gf.target)));
    s.derive(name, gf);
  });
}

void cmd_constant_morphism(Session& s) {
  s.require_targets(2, 2);
  if (!s.request.point) throw UsageError{"point", "constant-morphism needs --point C"};
  const std::string& sname = s.request.targets[0];
  const std::string& tname = s.request.targets[1];
  const auto& source = s.triad(sname);
  const auto& target = s.triad(tname);
  const std::size_t c = *s.request.point;
  if (c >= target.space().point_count()) throw UsageError{"point", "point " + std::to_string(c) + " out of range"};
  const std::string name = sname + ".constant." + std::to_string(c) + "." + tname;
  s.for_target(name, [&](Report& r) {
    const NamedMorphism m{sname, tname, constant_morphism(source, target, c)};
    r.merge(check_morphism(m.morphism, source, target));
    bool reduced = true;
    for (std::size_t v = 0; v < target.space().open_count(); ++v)
      reduced = reduced && (source.d[m.morphism.f.preimage_open(v)] * m.morphism.fA[v]).is_zero();
    if (reduced) {
      r.info("", "d_X c_A = 0 on every open");
    } else {
      r.error("", "d_X c_A does not vanish");
    }
    s.derive(name, m);
  });
}

void cmd_uniqueness(Session& s) {
  s.require_targets(2, 2);
  const auto& m1 = s.morphism(s.request.targets[0]);
  const auto& m2 = s.morphism(s.request.targets[1]);
  if (m1.source != m2.source || m1.target != m2.target)
    throw UsageError{"targets", "morphisms must share source and target triads"};
  const auto& source = s.triad(m1.source);
  const auto& target = s.triad(m1.target);
  s.for_target(join(s.request.targets, "+"), [&](Report& r) {
    if (!(m1.morphism.f == m2.morphism.f)) {
      r.error("", "morphisms lie over different maps");
      return;
    }
    const bool same_a = m1.morphism.fA == m2.morphism.fA;
    const bool same_omega = m1.morphism.fOmega == m2.morphism.fOmega;
    if (same_a) r.merge(differential_agreement_on_image(m1.morphism, m2.morphism, source, target).report, "image");
    if (same_omega) r.merge(algebra_component_uniqueness(m1.morphism, m2.morphism, source, target).report, "algebra");
    if (!same_a && !same_omega) r.info("", "f_A and f_Omega both differ; nothing to compare");
  });
}

void cmd_recover_map(Session& s) {
  s.require_targets(1, SIZE_MAX);
  for (const auto& name : s.request.targets) {
    const auto& m = s.morphism(name);
    const auto& f = m.morphism.f;
    if (!s.request.exploratory && !(f.domain().is_discrete() && f.codomain().is_discrete()))
      throw UsageError{name, "recover-map on non-discrete spaces requires --exploratory"};
    s.for_target(name, [&](Report& r) {
      const PresheafMorphism h{m.morphism.fA};
      r.merge(verify_pullback_forced(f, h));
      if (auto values = recover_map(h, f)) {
        const ContinuousMap g(f.domain(), f.codomain(), *values);
        s.derive(name + ".recovered", g);
      }
    });
  }
}

void cmd_fullness(Session& s) {
  s.require_targets(2, 2);
  const auto x = s.space(s.request.targets[0]);
  const auto y = s.space(s.request.targets[1]);
  s.for_target(join(s.request.targets, "->"), [&](Report& r) {
    const auto result = fullness_check(x, y, s.request.bound);
    r.merge(result.report);
  });
}

void cmd_spectrum(Session& s) {
  s.require_targets(1, SIZE_MAX);
  for (const auto& name : s.request.targets) {
    const auto& a = s.lookup(s.ws.algebras, name, "algebra");
    s.for_target(name, [&](Report& r) {
      const auto chars = characters(a);
      std::vector<std::string> listed;
      for (const auto& c : chars) listed.push_back(functional_text(c.functional));
      r.info("", std::to_string(chars.size()) + " characters", listed);
    });
  }
}

const std::map<std::string, void (*)(Session&)>& commands() {
  static const std::map<std::string, void (*)(Session&)> table{
      {"validate", cmd_validate},       {"kaehler", cmd_kaehler},
      {"sheafify", cmd_sheafify},       {"pushforward", cmd_pushforward},
      {"check-morphism", cmd_check_morphism}, {"compose", cmd_compose},
      {"constant-morphism", cmd_constant_morphism}, {"uniqueness", cmd_uniqueness},
      {"recover-map", cmd_recover_map}, {"fullness", cmd_fullness},
      {"spectrum", cmd_spectrum}};
  return table;
}

CliResult finish(const CliRequest& request, OrderedJson report, int exit_code) {
  CliResult out;
  out.exit_code = exit_code;
  out.output = request.human ? render_human(report) : report.dump(2) + "\n";
  out.report = std::move(report);
  return out;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, _] : commands()) v.push_back(name);
    return v;
  }();
  return names;
}

OrderedJson report_to_json(const std::string& command, const Report& report) {
  OrderedJson findings = OrderedJson::array();
  for (const auto& f : report.findings())
    findings.push_back(
        {{"severity", to_string(f.severity)}, {"location", f.location}, {"message", f.message}, {"witness", f.witness}});
  return {{"command", command}, {"status", report.status()}, {"findings", std::move(findings)}};
}

std::string render_human(const OrderedJson& report) {
  std::ostringstream out;
  out << report["command"].get<std::string>() << ": " << report["status"].get<std::string>() << "\n";
  for (const auto& f : report["findings"]) {
    out << "  [" << f["severity"].get<std::string>() << "] ";
    const auto location = f["location"].get<std::string>();
    if (!location.empty()) out << location << ": ";
    out << f["message"].get<std::string>();
    if (!f["witness"].empty()) out << " (witness: " << join(f["witness"].get<std::vector<std::string>>(), ", ") << ")";
    out << "\n";
  }
  if (report.contains("derived_artifacts")) {
    for (const auto& [section, entries] : report["derived_artifacts"].items())
      if (entries.is_object())
        for (const auto& [name, _] : entries.items()) out << "  derived " << section << " '" << name << "'\n";
  }
  return out.str();
}

CliResult run_command(const CliRequest& request) {
  auto usage = [&](const std::string& location, const std::string& message) {
    Report r;
    r.error(location, message);
    return finish(request, report_to_json(request.command, r), kExitUsage);
  };
  const auto& table = commands();
  auto command = table.find(request.command);
  if (command == table.end()) return usage("command", "unknown command '" + request.command + "'");

  Workspace ws;
  if (request.workspace_text) {
    auto outcome = parse_workspace_checked(*request.workspace_text);
    if (!outcome.workspace) {
      const auto& issue = *outcome.issue;
      return usage("workspace " + issue.location.to_string(), issue.kind + ": " + issue.message);
    }
    ws = std::move(*outcome.workspace);
  }

  Session session{request, ws, {}, OrderedJson::object(), {}};
  try {
    command->second(session);
  } catch (const UsageError& e) {
    return usage(e.location, e.message);
  } catch (const std::exception& e) {
    session.report.error("", std::string("internal error: ") + e.what());
  }
  OrderedJson report = report_to_json(request.command, session.report);
  if (!session.derived.empty()) {
    OrderedJson artifacts{{"schema", kWorkspaceSchema}};
    for (const auto& [section, entries] : session.derived.items()) artifacts[section] = entries;
    report["derived_artifacts"] = std::move(artifacts);
  }
  auto result = finish(request, std::move(report), session.report.ok() ? kExitPass : kExitFail);
  result.derived = std::move(session.objects);
  return result;
}

}  // namespace triadica
