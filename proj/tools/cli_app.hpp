#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_io.hpp"

namespace fincov::cli {

/// Exit codes.
enum Exit : int { kTrue = 0, kFalse = 1, kInputError = 2, kBudget = 3 };

struct Outcome {
  int code = kTrue;
  json result = json::object();
};

/// Per-invocation state: global flags, the inputs read (with the hash of
/// their re-serialized form) and the artifacts written.
class Context {
public:
  std::uint64_t seed = 0;
  bool trace = false;
  std::string out_dir;
  json inputs = json::array();
  json artifacts = json::array();

  FiniteSpace space(const std::string& path);
  CoverFile cover(const std::string& path, const FiniteSpace* space = nullptr);
  PreUniformity preunif(const std::string& path);
  ProductSpace product(const std::string& path);
  CertificateFile certificate(const std::string& path);
  TreeFile tree(const std::string& path);
  BasicSet basic_set(const std::string& path, const ProductSpace& product);
  /// Any other JSON input; hashed as parsed.
  json document(const std::string& path);

  /// Writes out_dir/name and records it by name.
  void emit(const std::string& name, const json& j);

private:
  void record(const std::string& path, const char* kind, const json& canonical);
};

using Handler = std::function<Outcome(Context&)>;

/// A leaf subcommand registers its options on `app` and returns its handler.
struct CommandSpec {
  const char* group;
  const char* name;
  const char* description;
  std::function<Handler(CLI::App& app)> setup;
};

std::vector<CommandSpec> space_cover_commands();
std::vector<CommandSpec> preunif_cert_commands();
std::vector<CommandSpec> game_commands();
std::vector<CommandSpec> prodcomb_commands();

// Shared option parsing.
using Files = std::shared_ptr<std::vector<std::string>>;
/// Required positional file list taking min..max entries (max -1: unbounded).
Files files(CLI::App& app, const char* name, const char* help, int min, int max = 0);
/// Sets result[key] and maps it to kTrue/kFalse.
Outcome verdict(const char* key, bool value, json result = json::object());

PointSet points_option(const std::vector<int>& points, int n, const std::string& flag);
Strategy strategy_option(Context& ctx, const FiniteSpace& space, const std::string& spec);
json covers_json(const std::vector<Cover>& covers, int n);
json sets_json(const std::vector<PointSet>& sets);

}  // namespace fincov::cli
