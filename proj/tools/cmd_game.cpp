#include <random>

#include "cli_app.hpp"

namespace fincov::cli {

namespace {

json tree_table(const CoverTree& tree) {
  json rows = json::array();
  for (std::size_t k = 0; k < tree.size(); ++k) {
    rows.push_back(json{{"id", k}, {"parent", tree.node(k).parent},
                        {"label", to_json(tree.node(k).label)}});
  }
  return rows;
}

std::shared_ptr<std::string> class_option(CLI::App& app) {
  auto k = std::make_shared<std::string>("singletons");
  app.add_option("--class", *k, "class K: singletons, discrete or all")->capture_default_str();
  return k;
}

std::shared_ptr<std::string> strategy_flag(CLI::App& app) {
  auto s = std::make_shared<std::string>("least");
  app.add_option("--strategy", *s, "least, smallest, cover:FILE or table:FILE")
      ->capture_default_str();
  return s;
}

}  // namespace

std::vector<CommandSpec> game_commands() {
  std::vector<CommandSpec> out;

  out.push_back({"perverse", "gen", "First n standard perversities", [](CLI::App& app) -> Handler {
    auto n = std::make_shared<std::size_t>(7);
    app.add_option("-n", *n, "how many")->capture_default_str();
    return [n](Context&) {
      json shown = json::array();
      json rows = json::array();
      for (const Perversity& p : standard_perversities(*n)) {
        shown.push_back(p.str());
        rows.push_back(to_json(p));
      }
      Outcome o;
      o.result["perversities"] = shown;
      o.result["rows"] = rows;
      return o;
    };
  }});

  out.push_back({"perverse", "product", "Perverse product of trees over the product of their spaces",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "trees", "tree files, one per factor", 1, -1);
    auto n = std::make_shared<std::size_t>(7);
    auto depth = std::make_shared<std::size_t>(8);
    app.add_option("-n", *n, "standard perversities used")->capture_default_str();
    app.add_option("--depth", *depth, "predecessor budget")->capture_default_str();
    return [f, n, depth](Context& ctx) {
      std::vector<FiniteSpace> spaces;
      std::vector<CoverTree> trees;
      for (const std::string& p : *f) {
        TreeFile t = ctx.tree(p);
        spaces.push_back(t.space);
        trees.push_back(t.tree);
      }
      const ProductSpace prod = product(spaces);
      const PerverseProduct pp =
          set_theoretic_perverse_product(prod, trees, standard_perversities(*n), *depth);
      json rows = json::array();
      for (std::size_t k = 0; k < pp.nodes.size(); ++k) {
        const PerverseNode& node = pp.nodes[k];
        rows.push_back(json{{"id", k}, {"factors", node.factors}, {"levels", node.levels},
                            {"label", to_json(node.label)}, {"successors", pp.successors[k]}});
      }
      return verdict("is_tree", is_tree(pp), json{{"nodes", rows}});
    };
  }});

  out.push_back({"derive", "kderiv", "K-derivative of a subset, and its chain",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "space", "space file", 1);
    auto k = class_option(app);
    auto set = std::make_shared<std::vector<int>>();
    app.add_option("--set", *set, "subset, comma separated (default: all points)")->delimiter(',');
    return [f, k, set](Context& ctx) {
      const FiniteSpace s = ctx.space(f->front());
      const KClass kc = k_class(*k);
      const PointSet a = set->empty() ? s.carrier() : points_option(*set, s.size(), "--set");
      Outcome o;
      o.result["derivative"] = to_json(k_derivative(s, kc, a));
      try {
        o.result["chain"] = sets_json(k_derivative_chain(s, kc, a));
      } catch (const NotKScattered&) {
        o.result["scattered"] = false;
      }
      return o;
    };
  }});

  out.push_back({"derive", "ktree", "Decomposition tree, written to ktree.json",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "space", "space file", 1);
    auto k = class_option(app);
    auto depth = std::make_shared<std::size_t>(16);
    auto ambient = std::make_shared<bool>(false);
    app.add_option("--depth", *depth, "level budget")->capture_default_str();
    app.add_flag("--ambient", *ambient, "take closures and interiors in S rather than S - T");
    return [f, k, depth, ambient](Context& ctx) {
      const FiniteSpace s = ctx.space(f->front());
      const CoverTree t = decomposition_tree(
          s, k_class(*k), *depth, *ambient ? Convention::ambient : Convention::relative);
      ctx.emit("ktree.json", tree_file_json(s, t));
      Outcome o;
      o.result["depth"] = t.depth();
      o.result["nodes"] = tree_table(t);
      return o;
    };
  }});

  out.push_back({"derive", "rank", "K-rank of the space", [](CLI::App& app) -> Handler {
    Files f = files(app, "space", "space file", 1);
    auto k = class_option(app);
    return [f, k](Context& ctx) {
      const FiniteSpace s = ctx.space(f->front());
      const KClass kc = k_class(*k);
      if (!is_k_scattered(s, kc)) return verdict("scattered", false);
      return verdict("scattered", true, json{{"rank", k_rank(s, kc)}});
    };
  }});

  out.push_back({"game", "play",
                 "Play against a stationary strategy; player I is seeded or read from --moves",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "space", "space file", 1);
    auto strategy = strategy_flag(app);
    auto rounds = std::make_shared<std::size_t>(5);
    auto moves = std::make_shared<std::string>();
    app.add_option("--rounds", *rounds, "rounds to play")->capture_default_str();
    app.add_option("--moves", *moves, "file {\"moves\": [[...], ...]} of player I moves");
    return [f, strategy, rounds, moves](Context& ctx) {
      const FiniteSpace s = ctx.space(f->front());
      const Strategy phi = strategy_option(ctx, s, *strategy);
      std::vector<PointSet> scripted;
      std::size_t budget = *rounds;
      if (!moves->empty()) {
        const json m = ctx.document(*moves);
        if (!m.contains("moves") || !m.at("moves").is_array()) {
          throw InputError("moves: missing \"moves\" list");
        }
        for (const json& e : m.at("moves")) scripted.push_back(pointset_from_json(e, s.size(), "move"));
        budget = scripted.size();
      }
      std::mt19937_64 rng(ctx.seed);
      std::vector<PointSet> played;
      auto player_one = [&](std::size_t round, std::optional<PointSet> last) {
        PointSet pick;
        if (!scripted.empty()) {
          pick = scripted[round - 1];
        } else {
          const PointSet allowed = last ? *last : s.carrier();
          while (pick.empty()) pick = PointSet(rng() & allowed.bits());
        }
        played.push_back(pick);
        return pick;
      };
      json transcript = json::array();
      Outcome o;
      try {
        const GameResult g = play_game(phi, player_one, budget);
        for (std::size_t r = 0; r < g.rounds.size(); ++r) {
          transcript.push_back(json{{"round", r + 1}, {"s", to_json(g.rounds[r].s)},
                                    {"t", to_json(g.rounds[r].t)}, {"valid", true}});
        }
        o.result["rounds"] = transcript;
        o.result["cluster"] = to_json(g.cluster);
        o = verdict("ii_wins", g.ii_wins, o.result);
      } catch (const IllegalMove& e) {
        // Replay the legal prefix so the transcript shows where it broke.
        for (std::size_t r = 0; r + 1 < played.size(); ++r) {
          transcript.push_back(json{{"round", r + 1}, {"s", to_json(played[r])},
                                    {"t", to_json(phi(played[r]))}, {"valid", true}});
        }
        transcript.push_back(json{{"round", played.size()}, {"s", to_json(played.back())},
                                  {"valid", false}, {"reason", e.what()}});
        o.code = kInputError;
        o.result["rounds"] = transcript;
      }
      if (ctx.trace) ctx.emit("transcript.json", json{{"rounds", transcript}});
      return o;
    };
  }});

  out.push_back({"game", "tree", "Game tree of a strategy, written to game_tree.json",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "space", "space file", 1);
    auto strategy = strategy_flag(app);
    auto depth = std::make_shared<std::size_t>(4);
    app.add_option("--depth", *depth, "levels to expand")->capture_default_str();
    return [f, strategy, depth](Context& ctx) {
      const FiniteSpace s = ctx.space(f->front());
      const CoverTree t = game_tree(strategy_option(ctx, s, *strategy), *depth);
      ctx.emit("game_tree.json", tree_file_json(s, t));
      Outcome o;
      o.result["nodes"] = t.size();
      o.result["depth"] = t.depth();
      return o;
    };
  }});

  out.push_back({"game", "refine-subtree",
                 "Strategy subtree refining an open cover, written to refine_tree.json",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "files", "space and open cover", 2);
    auto strategy = strategy_flag(app);
    return [f, strategy](Context& ctx) {
      const FiniteSpace s = ctx.space((*f)[0]);
      const Cover g = ctx.cover((*f)[1], &s).cover;
      const RefiningSubtree r = cover_refining_subtree(strategy_option(ctx, s, *strategy), g);
      ctx.emit("refine_tree.json", tree_file_json(s, r.tree));
      json deficits = json::array();
      for (const auto& [node, missed] : r.deficits) {
        deficits.push_back(json{{"node", to_json(node)}, {"missed", to_json(missed)}});
      }
      json res = json{{"nodes", tree_table(r.tree)}, {"deficits", deficits}};
      return verdict("refines", r.deficits.empty(), res);
    };
  }});

  out.push_back({"game", "partition-complete", "Partition-completeness with its witness",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "space", "space file", 1);
    return [f](Context& ctx) {
      const FiniteSpace s = ctx.space(f->front());
      const PartitionCompleteness p = is_partition_complete(s);
      json res = json{{"exhaustive_cover", sets_json(p.exhaustive_cover.elements())},
                      {"left_open_partition", sets_json(p.left_open_partition)}};
      return verdict("partition_complete", p.partition_complete, res);
    };
  }});

  return out;
}

}  // namespace fincov::cli
