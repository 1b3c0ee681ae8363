#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace confmap::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNotConverged = 2, kSpuriousPoles = 3 };

/// Record written beside the outputs of every command. `arguments` is the
/// full argument list after the program name, so `rerun` can replay it.
struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  std::vector<std::string> inputs;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::string> outputs;
  std::string version;

  bool operator==(const RunManifest&) const = default;
};

void to_json(nlohmann::json& j, const RunManifest& m);
void from_json(const nlohmann::json& j, RunManifest& m);

std::string version_string();

/// Runs one command; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace confmap::cli
