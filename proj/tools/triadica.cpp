#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "triadica/cli.hpp"

namespace {

const std::map<std::string, std::string> kDescriptions{
    {"validate", "Validate workspace entries; presheaves also get a sheaf certificate"},
    {"kaehler", "Kaehler triad of a presheaf or of an algebra over a point"},
    {"sheafify", "Sheafification of a presheaf with stalk checks"},
    {"pushforward", "Pushforward of a triad along --map"},
    {"check-morphism", "Check the morphism conditions of a triad morphism"},
    {"compose", "Compose two morphisms, given as g then f"},
    {"constant-morphism", "Constant morphism from a triad into a functional triad at --point"},
    {"uniqueness", "Compare two morphisms: agreement on the image of d and forced f_A"},
    {"recover-map", "Recover the point map from the algebra component of a morphism"},
    {"fullness", "Count morphisms between functional triads against point maps"},
    {"spectrum", "Characters of an algebra"},
};

}  // namespace

int main(int argc, char** argv) {
  triadica::CliRequest request;
  std::string workspace_path;
  std::optional<std::size_t> point;
  bool json = false;

  CLI::App app{"Differential triads over finite spaces"};
  app.require_subcommand(1);
  for (const auto& name : triadica::command_names()) {
    auto* sub = app.add_subcommand(name, kDescriptions.at(name));
    sub->add_option("--workspace", workspace_path, "Workspace document (JSON, schema 1)");
    sub->add_option("--target", request.targets, "Named target; repeatable and ordered");
    sub->add_option("--bound", request.bound, "Enumeration bound for fullness");
    sub->add_flag("--exploratory", request.exploratory, "Allow exploratory checks on non-discrete spaces");
    sub->add_option("--map", request.map, "Map name for pushforward");
    sub->add_option("--point", point, "Point for constant-morphism");
    auto* human = sub->add_flag("--human", request.human, "Human-readable report");
    sub->add_flag("--json", json, "JSON report (default)")->excludes(human);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return triadica::kExitUsage;
  }
  request.command = app.get_subcommands().front()->get_name();
  request.point = point;

  if (!workspace_path.empty()) {
    std::ifstream in(workspace_path, std::ios::binary);
    if (!in) {
      std::cerr << "cannot read workspace '" << workspace_path << "'\n";
      return triadica::kExitUsage;
    }
    std::ostringstream text;
    text << in.rdbuf();
    request.workspace_text = text.str();
  }

  const auto result = triadica::run_command(request);
  std::cout << result.output;
  return result.exit_code;
}
