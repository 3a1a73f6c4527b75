#include <memory>
#include <set>

#include "cli_app.hpp"

namespace fincov::cli {

namespace {

// Covers from several files must live on one space.
std::vector<Cover> same_space_covers(Context& ctx, const std::vector<std::string>& paths,
                                     FiniteSpace& space) {
  std::vector<Cover> out;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    CoverFile c = ctx.cover(paths[k]);
    if (k == 0) {
      space = c.space;
    } else if (!(c.space == space)) {
      throw MismatchedCarrier(paths[k] + " is over a different space than " + paths[0]);
    }
    out.push_back(c.cover);
  }
  return out;
}

}  // namespace

std::vector<CommandSpec> space_cover_commands() {
  std::vector<CommandSpec> out;

  out.push_back({"space", "check", "Validate a space and describe it", [](CLI::App& app) -> Handler {
    Files f = files(app, "space", "space file", 1);
    return [f](Context& ctx) {
      const FiniteSpace s = ctx.space(f->front());
      std::set<PointSet> distinct(s.neighbourhoods().begin(), s.neighbourhoods().end());
      Outcome o;
      o.result["points"] = s.size();
      o.result["neighbourhoods"] = sets_json(s.neighbourhoods());
      o.result["t0"] = static_cast<int>(distinct.size()) == s.size();
      o.result["regular"] = is_regular(s);
      o.result["components"] = sets_json(components(s));
      return o;
    };
  }});

  out.push_back({"space", "product", "Product of spaces, written to product.json",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "spaces", "space files, one per factor", 1, -1);
    return [f](Context& ctx) {
      std::vector<FiniteSpace> factors;
      for (const std::string& p : *f) factors.push_back(ctx.space(p));
      const ProductSpace prod = product(factors);
      ctx.emit("product.json", to_json(prod));
      ctx.emit("product_space.json", to_json(prod.space()));
      Outcome o;
      o.result["factors"] = prod.factor_count();
      o.result["points"] = prod.space().size();
      return o;
    };
  }});

  out.push_back({"cover", "refines", "Whether U refines V", [](CLI::App& app) -> Handler {
    Files f = files(app, "covers", "U and V", 2);
    return [f](Context& ctx) {
      FiniteSpace s = discrete_space(0);
      const auto c = same_space_covers(ctx, *f, s);
      return verdict("refines", refines(c[0], c[1]));
    };
  }});

  out.push_back({"cover", "star", "Star cover of U; with V, whether U star-refines V",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "covers", "U, optionally V", 1, 2);
    return [f](Context& ctx) {
      FiniteSpace s = discrete_space(0);
      const auto c = same_space_covers(ctx, *f, s);
      Outcome o;
      o.result["star"] = to_json(star_cover(c[0]), s.size()).at("elements");
      if (c.size() == 2) {
        o.result["double_star_refines"] = double_star_refines(c[0], c[1]);
        return verdict("star_refines", star_refines(c[0], c[1]), o.result);
      }
      return o;
    };
  }});

  out.push_back({"cover", "normal", "Whether an open cover is normal", [](CLI::App& app) -> Handler {
    Files f = files(app, "cover", "cover file", 1);
    return [f](Context& ctx) {
      const CoverFile c = ctx.cover(f->front());
      const NormalityResult r = is_normal_cover(c.space, c.cover);
      json res = json::object();
      res["chain"] = covers_json(r.chain, c.space.size());
      return verdict("normal", r.normal, res);
    };
  }});

  out.push_back({"cover", "exhaustive", "Whether a cover is exhaustive",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "cover", "cover file", 1);
    return [f](Context& ctx) {
      const CoverFile c = ctx.cover(f->front());
      return verdict("exhaustive", is_exhaustive(c.space, c.cover));
    };
  }});

  out.push_back({"cover", "leftopen", "Left-open well-ordering of a partition",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "partition", "cover file holding a partition", 1);
    return [f](Context& ctx) {
      const CoverFile c = ctx.cover(f->front());
      const auto order = left_open_ordering(c.space, c.cover);
      json res = json::object();
      if (order) res["ordering"] = sets_json(*order);
      return verdict("left_open", order.has_value(), res);
    };
  }});

  out.push_back({"cover", "complete", "Whether a sequence of covers is complete",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "covers", "cover files in sequence order", 1, -1);
    return [f](Context& ctx) {
      FiniteSpace s = discrete_space(0);
      const auto c = same_space_covers(ctx, *f, s);
      return verdict("complete", is_complete_sequence(s, c));
    };
  }});

  return out;
}

}  // namespace fincov::cli
