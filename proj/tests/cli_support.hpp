#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "triadica/cli.hpp"

namespace triadica::testing {

inline std::string fixture_path(const std::string& name) { return std::string(TRIADICA_FIXTURE_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

inline std::string read_fixture(const std::string& name) { return read_file(fixture_path(name)); }

/// One invocation of the exit-code contract.
struct CliCase {
  std::string file;
  std::string command;
  std::vector<std::string> targets;
  std::vector<std::string> flags;
  int expected_exit = 0;
};

inline const std::vector<CliCase>& cli_corpus() {
  static const std::vector<CliCase> cases = [] {
    std::vector<CliCase> out;
    for (const auto& c : nlohmann::json::parse(read_file(TRIADICA_CLI_CORPUS)))
      out.push_back({c["file"], c["command"], c["targets"], c["flags"], c["exit"]});
    return out;
  }();
  return cases;
}

inline CliRequest request_for(const CliCase& c) {
  CliRequest r;
  r.command = c.command;
  r.workspace_text = read_fixture(c.file);
  r.targets = c.targets;
  for (std::size_t i = 0; i < c.flags.size(); ++i) {
    if (c.flags[i] == "--exploratory") r.exploratory = true;
    if (c.flags[i] == "--human") r.human = true;
    if (c.flags[i] == "--point") r.point = std::stoul(c.flags[++i]);
    if (c.flags[i] == "--map") r.map = c.flags[++i];
    if (c.flags[i] == "--bound") r.bound = std::stoull(c.flags[++i]);
  }
  return r;
}

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

struct ProcessResult {
  int exit_code = -1;
  std::string output;
};

/// Runs the installed binary on a corpus case, capturing stdout.
inline ProcessResult run_binary(const CliCase& c) {
  std::string command =
      shell_quote(TRIADICA_BINARY) + " " + c.command + " --workspace " + shell_quote(fixture_path(c.file));
  for (const auto& t : c.targets) command += " --target " + shell_quote(t);
  for (const auto& f : c.flags) command += " " + shell_quote(f);
  command += " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot start " + command);
  ProcessResult result;
  std::array<char, 4096> buffer{};
  while (std::size_t n = std::fread(buffer.data(), 1, buffer.size(), pipe)) result.output.append(buffer.data(), n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

/// Original document with the derived fragments added under their sections.
inline std::string merged_document(const std::string& original, const OrderedJson& derived) {
  auto doc = OrderedJson::parse(original);
  for (const auto& [section, entries] : derived.items()) {
    if (!entries.is_object()) continue;
    for (const auto& [name, value] : entries.items()) doc[section][name] = value;
  }
  return doc.dump(2);
}

struct RoundTrip {
  std::size_t artifacts = 0;
  /// Artifacts whose re-parsed object, re-serialization or validation
  /// differs from the in-memory original.
  std::vector<std::string> mismatches;
};

/// Merges every derived artifact of a command into its workspace, parses
/// the result and compares each artifact with the object the command built.
inline RoundTrip derived_round_trip(const CliCase& c) {
  RoundTrip out;
  const auto result = run_command(request_for(c));
  if (!result.report.contains("derived_artifacts")) return out;
  const auto& derived = result.report["derived_artifacts"];
  const std::string original = read_fixture(c.file);
  const auto base = parse_workspace(original);
  const auto merged = parse_workspace(merged_document(original, derived));
  const auto& built = result.derived;
  auto same = [](const Report& a, const Report& b) { return report_to_json("", a) == report_to_json("", b); };
  for (const auto& [section, entries] : derived.items()) {
    if (!entries.is_object()) continue;
    for (const auto& [name, value] : entries.items()) {
      ++out.artifacts;
      bool ok = false;
      if (section == "triads") {
        const auto& t = merged.triads.at(name);
        ok = t == built.triads.at(name) && serialize_triad(t, &base) == value &&
             same(validate_triad(t), validate_triad(built.triads.at(name)));
      } else if (section == "presheaves") {
        const auto& p = merged.presheaves.at(name);
        ok = p == built.presheaves.at(name) && serialize_presheaf(p, &base) == value &&
             same(validate_algebra_presheaf(p), validate_algebra_presheaf(built.presheaves.at(name)));
      } else if (section == "maps") {
        const auto& f = merged.maps.at(name);
        ok = f == built.maps.at(name) && serialize_map(f, &base) == value;
      } else if (section == "morphisms") {
        const auto& m = merged.morphisms.at(name);
        const auto& b = built.morphisms.at(name);
        ok = m == b && serialize_morphism(m, &base) == value &&
             same(check_morphism(m.morphism, merged.triads.at(m.source), merged.triads.at(m.target)),
                  check_morphism(b.morphism, base.triads.at(b.source), base.triads.at(b.target)));
      }
      if (!ok) out.mismatches.push_back(section + "/" + name);
    }
  }
  return out;
}

}  // namespace triadica::testing
