#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>

#include "cli_app.hpp"

using namespace fincov;
using namespace fincov::cli;

namespace {

json budget_json(const Budget& b) {
  return json{{"max_space_points", b.max_space_points},
              {"max_product_points", b.max_product_points},
              {"max_enumerated_covers", b.max_enumerated_covers},
              {"max_choice_functions", b.max_choice_functions},
              {"max_tree_nodes", b.max_tree_nodes},
              {"meet_depth", b.meet_depth}};
}

Budget parse_budget(const std::vector<std::string>& entries) {
  Budget b;
  for (const std::string& e : entries) {
    const auto eq = e.find('=');
    if (eq == std::string::npos) throw InputError("--budget: expected key=value, got " + e);
    const std::string k = e.substr(0, eq);
    long long v = 0;
    std::istringstream in(e.substr(eq + 1));
    if (!(in >> v) || !in.eof() || v < 0) throw InputError("--budget: bad value in " + e);
    if (k == "max_space_points") b.max_space_points = static_cast<int>(v);
    else if (k == "max_product_points") b.max_product_points = static_cast<int>(v);
    else if (k == "max_enumerated_covers") b.max_enumerated_covers = static_cast<std::size_t>(v);
    else if (k == "max_choice_functions") b.max_choice_functions = static_cast<std::size_t>(v);
    else if (k == "max_tree_nodes") b.max_tree_nodes = static_cast<std::size_t>(v);
    else if (k == "meet_depth") b.meet_depth = static_cast<int>(v);
    else throw InputError("--budget: unknown key " + k);
  }
  return b;
}

std::string cell(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

bool all_objects(const json& a) {
  if (a.empty()) return false;
  for (const json& e : a) {
    if (!e.is_object()) return false;
  }
  return true;
}

void render_table(std::ostream& out, const json& rows, const std::string& indent) {
  std::vector<std::string> cols;
  for (const json& r : rows) {
    for (const auto& [k, v] : r.items()) {
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
    }
  }
  std::vector<std::size_t> width(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    width[c] = cols[c].size();
    for (const json& r : rows) {
      if (r.contains(cols[c])) width[c] = std::max(width[c], cell(r.at(cols[c])).size());
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s = indent;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      s += cells[c];
      if (c + 1 < cells.size()) s += std::string(width[c] - cells[c].size() + 2, ' ');
    }
    out << s << '\n';
  };
  line(cols);
  for (const json& r : rows) {
    std::vector<std::string> cells;
    for (const std::string& c : cols) cells.push_back(r.contains(c) ? cell(r.at(c)) : "-");
    line(cells);
  }
}

void render_human(std::ostream& out, const json& report) {
  out << "command: " << report["command"].get<std::string>() << '\n';
  if (report.contains("seed")) out << "seed: " << report["seed"] << '\n';
  for (const json& in : report["inputs"]) {
    out << "input: " << cell(in["path"]) << " (" << cell(in["kind"]) << ", " << cell(in["hash"])
        << ")\n";
  }
  for (const json& a : report["artifacts"]) {
    out << "wrote: " << cell(a["path"]) << " (" << cell(a["hash"]) << ")\n";
  }
  for (const auto& [k, v] : report["result"].items()) {
    if (v.is_array() && all_objects(v)) {
      out << k << ":\n";
      render_table(out, v, "  ");
    } else if (v.is_array() && !v.empty() && v.front().is_string()) {
      std::string joined;
      for (const json& s : v) joined += (joined.empty() ? "" : ", ") + s.get<std::string>();
      out << k << ": " << joined << '\n';
    } else {
      out << k << ": " << cell(v) << '\n';
    }
  }
  if (report.contains("timing_ms")) out << "timing_ms: " << report["timing_ms"] << '\n';
  out << "exit: " << report["exit"] << '\n';
}

int exit_for(const std::exception& e) {
  if (dynamic_cast<const BudgetExceeded*>(&e) != nullptr) return kBudget;
  return kInputError;
}

bool negative_verdict(const std::exception& e) {
  return dynamic_cast<const NotInLambda*>(&e) != nullptr ||
         dynamic_cast<const NotKScattered*>(&e) != nullptr ||
         dynamic_cast<const NotNormal*>(&e) != nullptr ||
         dynamic_cast<const NotSupercomplete*>(&e) != nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covers, pre-uniformities and lambda certificates on finite spaces", "fincov"};
  app.fallthrough();
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::vector<std::string> budget_entries;
  std::string format = "human";
  bool trace = false;
  bool timing = false;
  const char* env_out = std::getenv("FINCOV_OUT_DIR");
  std::string out_dir = env_out != nullptr ? env_out : "fincov-out";
  app.add_option("--seed", seed, "seed for randomized commands")->capture_default_str();
  app.add_option("--budget", budget_entries, "enumeration caps as key=value, repeatable");
  app.add_option("--format", format, "human or json (one record per line)")
      ->check(CLI::IsMember({"human", "json"}))
      ->capture_default_str();
  app.add_flag("--trace", trace, "also write traces and per-cover certificates");
  app.add_flag("--timing", timing, "report wall time in milliseconds");
  app.add_option("--out-dir", out_dir, "artifact directory (env FINCOV_OUT_DIR)")
      ->capture_default_str();

  std::vector<CommandSpec> specs;
  for (auto list : {space_cover_commands(), preunif_cert_commands(), game_commands(),
                    prodcomb_commands()}) {
    specs.insert(specs.end(), list.begin(), list.end());
  }
  std::map<std::string, CLI::App*> groups;
  std::vector<std::pair<CLI::App*, Handler>> leaves;
  std::vector<std::string> names;
  for (const CommandSpec& s : specs) {
    CLI::App*& group = groups[s.group];
    if (group == nullptr) {
      group = app.add_subcommand(s.group, std::string(s.group) + " commands");
      group->require_subcommand(1);
    }
    CLI::App* leaf = group->add_subcommand(s.name, s.description);
    leaves.emplace_back(leaf, s.setup(*leaf));
    names.push_back(std::string(s.group) + " " + s.name);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "fincov: " << e.what() << '\n';
    return kInputError;
  }

  std::size_t chosen = 0;
  while (chosen < leaves.size() && !leaves[chosen].first->parsed()) ++chosen;

  Context ctx;
  ctx.seed = seed;
  ctx.trace = trace;
  ctx.out_dir = out_dir;

  json report = json::object();
  report["command"] = names[chosen];
  report["args"] = std::vector<std::string>(argv + 1, argv + argc);
  report["seed"] = seed;

  Outcome outcome;
  const auto start = std::chrono::steady_clock::now();
  try {
    set_budget(parse_budget(budget_entries));
    report["budget"] = budget_json(budget());
    outcome = leaves[chosen].second(ctx);
  } catch (const std::exception& e) {
    if (!negative_verdict(e)) {
      std::cerr << "fincov: " << e.what() << '\n';
      return exit_for(e);
    }
    outcome.code = kFalse;
    outcome.result = json{{"verdict", false}, {"reason", e.what()}};
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;

  report["inputs"] = ctx.inputs;
  report["artifacts"] = ctx.artifacts;
  report["result"] = outcome.result;
  report["exit"] = outcome.code;
  if (timing) {
    report["timing_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  }
  if (format == "json") {
    std::cout << report.dump() << '\n';
  } else {
    render_human(std::cout, report);
  }
  return outcome.code;
}
