#include "cli_app.hpp"

namespace fincov::cli {

namespace {

std::vector<std::vector<BasicSet>> families_from_json(const json& j, const ProductSpace& prod) {
  if (!j.is_array()) throw InputError("\"families\" must be a list of lists of basic sets");
  std::vector<std::vector<BasicSet>> out;
  for (const json& fam : j) {
    if (!fam.is_array()) throw InputError("each family must be a list of basic sets");
    std::vector<BasicSet> f;
    for (const json& b : fam) f.push_back(basic_set_from_json(b, prod));
    out.push_back(std::move(f));
  }
  return out;
}

const json& key(const json& j, const char* k) {
  if (!j.is_object() || !j.contains(k)) throw InputError(std::string("missing \"") + k + "\"");
  return j.at(k);
}

std::vector<int> factor_indices(const json& j, const ProductSpace& prod) {
  std::vector<int> out;
  for (const json& v : j) {
    if (!v.is_number_integer() || v.get<int>() < 0 || v.get<int>() >= prod.factor_count()) {
      throw InputError("bad factor index " + v.dump());
    }
    out.push_back(v.get<int>());
  }
  return out;
}

json blocker_json(const Blocker& b) {
  json hits = json::array();
  for (const auto& [support, index] : b.hits) {
    hits.push_back(json{{"support", support}, {"hit_by", index}});
  }
  return json{{"indices", b.indices}, {"hits", hits}};
}

}  // namespace

std::vector<CommandSpec> prodcomb_commands() {
  std::vector<CommandSpec> out;

  out.push_back({"prodcomb", "support", "Supports and realizations of basic sets",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "files", "product file, then basic-set files", 2, -1);
    return [f](Context& ctx) {
      const ProductSpace prod = ctx.product((*f)[0]);
      std::vector<BasicSet> family;
      json rows = json::array();
      for (std::size_t k = 1; k < f->size(); ++k) {
        family.push_back(ctx.basic_set((*f)[k], prod));
        const BasicSet& b = family.back();
        rows.push_back(json{{"set", b.str()}, {"support", b.support()},
                            {"realized", to_json(b.realize())}, {"open", b.is_open()}});
      }
      Outcome o;
      o.result["sets"] = rows;
      o.result["family_support"] = support_of(family);
      return o;
    };
  }});

  out.push_back({"prodcomb", "blocker",
                 "Finite blocker F(R); with --g and --e the relative form",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "product", "product file", 1);
    auto r = std::make_shared<std::vector<int>>();
    auto g = std::make_shared<std::vector<int>>();
    auto e = std::make_shared<std::vector<int>>();
    app.add_option("--set", *r, "R as product point ids, comma separated")
        ->required()->delimiter(',');
    app.add_option("--g", *g, "G as product point ids")->delimiter(',');
    app.add_option("--e", *e, "factor indices E")->delimiter(',');
    return [f, r, g, e](Context& ctx) {
      const ProductSpace prod = ctx.product(f->front());
      const int n = prod.space().size();
      const PointSet rs = points_option(*r, n, "--set");
      Outcome o;
      if (g->empty()) {
        o.result = blocker_json(finite_blocker(prod, rs));
      } else {
        o.result = blocker_json(finite_blocker_relative(
            prod, points_option(*g, n, "--g"), rs, factor_indices(json(*e), prod)));
      }
      return o;
    };
  }});

  out.push_back({"prodcomb", "lemma71", "Shared-support criterion for B1 & B2 against brute force",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "files", "product file and two basic-set files", 3);
    return [f](Context& ctx) {
      const ProductSpace prod = ctx.product((*f)[0]);
      const BasicSet b1 = ctx.basic_set((*f)[1], prod);
      const BasicSet b2 = ctx.basic_set((*f)[2], prod);
      const IntersectionVerdict v = disjoint_support_intersection(b1, b2);
      json res = json{{"nonempty", v.nonempty}, {"shared", v.shared}, {"brute_force", v.brute_force}};
      return verdict("agrees", v.agrees(), res);
    };
  }});

  out.push_back({"prodcomb", "lemma72", "Dense union of families with disjoint supports",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "files", "product file and {\"families\": [...]}", 2);
    return [f](Context& ctx) {
      const ProductSpace prod = ctx.product((*f)[0]);
      const DenseVerdict v =
          dense_union_check(families_from_json(key(ctx.document((*f)[1]), "families"), prod));
      json res = json{{"dense", v.dense}, {"closure", to_json(v.closure)}, {"escape", v.escape}};
      return verdict("holds", !v.falsified(), res);
    };
  }});

  out.push_back({"prodcomb", "lemma73", "Inclusion of G in R from covering families",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "files", "product file and {\"g\", \"r\", \"e\", \"families\"}", 2);
    return [f](Context& ctx) {
      const ProductSpace prod = ctx.product((*f)[0]);
      const json inst = ctx.document((*f)[1]);
      const int n = prod.space().size();
      const InclusionVerdict v = inclusion_lemma_check(
          prod, pointset_from_json(key(inst, "g"), n, "g"), pointset_from_json(key(inst, "r"), n, "r"),
          factor_indices(key(inst, "e"), prod), families_from_json(key(inst, "families"), prod));
      return verdict("holds", !v.falsified(), json{{"included", v.included}, {"escape", v.escape}});
    };
  }});

  out.push_back({"prodcomb", "extension-check",
                 "Regular-open extension of R against V, given R < V1 <** V",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "files", "space, R, V1, V", 4);
    return [f](Context& ctx) {
      const FiniteSpace s = ctx.space((*f)[0]);
      const Cover r = ctx.cover((*f)[1], &s).cover;
      const Cover v1 = ctx.cover((*f)[2], &s).cover;
      const Cover v = ctx.cover((*f)[3], &s).cover;
      const ExtensionVerdict e = extension_refinement_check(s, r, v1, v);
      json res = json{{"extension", sets_json(regular_open_cover_extension(s, r).elements())},
                      {"extension_refines", e.extension_refines},
                      {"directed_refines", e.directed_refines}};
      return verdict("holds", e.extension_refines && e.directed_refines, res);
    };
  }});

  out.push_back({"prodcomb", "normal-cert",
                 "Certificate that a normal cover of a product lies in lambda, "
                 "written to normal_certificate.json",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "preunifs", "factor pre-uniformity files", 1, -1);
    auto cover = std::make_shared<std::string>();
    app.add_option("--cover", *cover, "cover of the product space")->required();
    return [f, cover](Context& ctx) {
      std::vector<PreUniformity> factors;
      for (const std::string& p : *f) factors.push_back(ctx.preunif(p));
      const FiniteSpace space = product_preuniformity(factors).product.space();
      const Cover v = ctx.cover(*cover, &space).cover;
      const NormalCoverRun run = normal_cover_certificate(factors, v);
      const int n = space.size();
      const PreUniformity& mu = run.product.mu;
      ctx.emit("normal_certificate.json", to_json(mu, run.certificate));
      ctx.emit("directed_certificate.json", to_json(mu, run.directed_certificate));
      Outcome o;
      o.result["r"] = sets_json(run.r.elements());
      o.result["g"] = sets_json(run.g.elements());
      o.result["f"] = run.f;
      o.result["w_f"] = to_json(run.w_f, run.sub ? run.sub->product.space().size() : n).at("elements");
      o.result["t0_nodes"] = run.t0.size();
      o.result["end_star_sizes"] = run.end_star_sizes;
      o.result["stage_bound"] = run.stage_bound;
      const bool ok = verify_certificate(mu, run.certificate).ok &&
                      verify_certificate(mu, run.directed_certificate).ok;
      o.result["certificate_nodes"] = run.certificate.tree.size();
      return verdict("verified", ok, o.result);
    };
  }});

  return out;
}

}  // namespace fincov::cli
