#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "triadica/workspace.hpp"

namespace triadica {

struct CliRequest {
  std::string command;
  /// Workspace document text; empty when no workspace was given.
  std::optional<std::string> workspace_text;
  std::vector<std::string> targets;
  std::uint64_t bound = 64;
  bool exploratory = false;
  bool human = false;
  /// Map name for pushforward.
  std::optional<std::string> map;
  /// Point for constant-morphism.
  std::optional<std::size_t> point;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct CliResult {
  int exit_code = kExitPass;
  OrderedJson report;
  /// In-memory objects behind report["derived_artifacts"], same names.
  Workspace derived;
  /// The report rendered as requested, ending in a newline.
  std::string output;
};

const std::vector<std::string>& command_names();

/// Runs one command. Never throws: failures become findings, and the exit
/// code is 0 on pass or exploratory, 1 on fail, 2 on usage or parse errors.
CliResult run_command(const CliRequest& request);

/// Report as JSON with a fixed field order.
OrderedJson report_to_json(const std::string& command, const Report& report);

std::string render_human(const OrderedJson& report);

}  // namespace triadica
