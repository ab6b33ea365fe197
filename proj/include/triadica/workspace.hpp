#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "triadica/dtcat.hpp"

namespace triadica {

/// A morphism together with the names of the triads it connects.
struct NamedMorphism {
  std::string source;
  std::string target;
  TriadMorphism morphism;

  friend bool operator==(const NamedMorphism&, const NamedMorphism&) = default;
};

/// Fully resolved workspace document. Names are unique per kind and
/// iteration is in name order.
struct Workspace {
  std::map<std::string, FiniteSpace> spaces;
  std::map<std::string, Algebra> algebras;
  std::map<std::string, AlgebraPresheaf> presheaves;
  std::map<std::string, DifferentialTriad> triads;
  std::map<std::string, ContinuousMap> maps;
  std::map<std::string, NamedMorphism> morphisms;

  friend bool operator==(const Workspace&, const Workspace&) = default;
};

inline constexpr int kWorkspaceSchema = 1;

/// Where a parse failed: a JSON pointer into the document and the line
/// and column of the offending value (1-based, 0 when unknown).
struct SourceLocation {
  std::string pointer;
  std::size_t line = 0;
  std::size_t column = 0;

  std::string to_string() const;
};

struct WorkspaceIssue {
  /// "ParseError", "UnresolvedReference" or "DimensionMismatch".
  std::string kind;
  SourceLocation location;
  std::string message;
};

struct ParseOutcome {
  std::optional<Workspace> workspace;
  /// The first problem found; parsing stops there.
  std::optional<WorkspaceIssue> issue;
};

/// Parses and resolves a schema-1 document. Never throws.
ParseOutcome parse_workspace_checked(std::string_view text);

/// As parse_workspace_checked, throwing ParseError, UnresolvedReference or
/// DimensionMismatch with the location in the message.
Workspace parse_workspace(std::string_view text);

using OrderedJson = nlohmann::ordered_json;

/// Definitions in the workspace format. Nested objects equal to a named
/// entry of context are written as references, everything else inline.
OrderedJson serialize_space(const FiniteSpace& space, const Workspace* context = nullptr);
OrderedJson serialize_algebra(const Algebra& a, const Workspace* context = nullptr);
OrderedJson serialize_presheaf(const AlgebraPresheaf& p, const Workspace* context = nullptr);
OrderedJson serialize_triad(const DifferentialTriad& t, const Workspace* context = nullptr);
OrderedJson serialize_map(const ContinuousMap& f, const Workspace* context = nullptr);
OrderedJson serialize_morphism(const NamedMorphism& m, const Workspace* context = nullptr);

/// The whole workspace, every entry inline except cross-references by name.
OrderedJson serialize_workspace(const Workspace& ws);

}  // namespace triadica
