#include "cli_app.hpp"

namespace fincov::cli {

namespace {

json basis_json(const PreUniformity& mu) { return covers_json(mu.basis(), mu.space().size()); }

json certificate_summary(const PreUniformity& mu, const Certificate& cert) {
  const Verdict v = verify_certificate(mu, cert);
  return json{{"nodes", cert.tree.size()}, {"depth", cert.tree.depth()}, {"verified", v.ok}};
}

}  // namespace

std::vector<CommandSpec> preunif_cert_commands() {
  std::vector<CommandSpec> out;

  out.push_back({"preunif", "member", "Whether V is a member, with the basis indices used",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "files", "pre-uniformity and cover", 2);
    return [f](Context& ctx) {
      const PreUniformity mu = ctx.preunif((*f)[0]);
      const Cover v = ctx.cover((*f)[1], &mu.space()).cover;
      const Membership m = membership(mu, v);
      return verdict("member", m.member, json{{"witness", m.witness}});
    };
  }});

  out.push_back({"preunif", "derive", "Derivative mu/nu (nu defaults to mu), written to derived.json",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "files", "mu, optionally nu", 1, 2);
    return [f](Context& ctx) {
      const PreUniformity mu = ctx.preunif((*f)[0]);
      const PreUniformity nu = f->size() == 2 ? ctx.preunif((*f)[1]) : mu;
      const Derived d = derivative_with_provenance(mu, nu);
      ctx.emit("derived.json", to_json(d.result));
      Outcome o;
      o.result["basis"] = basis_json(d.result);
      json prov = json::array();
      for (const Provenance& p : d.provenance) {
        prov.push_back(json{{"parents", p.parents}, {"choice", p.choice}});
      }
      o.result["provenance"] = prov;
      return o;
    };
  }});

  out.push_back({"preunif", "lambda",
                 "Lambda coreflection, written to lambda.json; --trace adds the trace and certificates",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "preunif", "pre-uniformity file", 1);
    auto fast = std::make_shared<bool>(false);
    app.add_flag("--fast", *fast, "iterate mu^(k)/mu^(k)");
    return [f, fast](Context& ctx) {
      const PreUniformity mu = ctx.preunif(f->front());
      const LambdaResult r = lambda_coreflection(mu, *fast);
      ctx.emit("lambda.json", to_json(r.lambda));
      Outcome o;
      o.result["stages"] = r.trace.stages.size();
      o.result["fixed_stage"] = r.trace.fixed_stage;
      o.result["basis"] = basis_json(r.lambda);
      if (ctx.trace) {
        ctx.emit("trace.json", to_json(r.trace));
        const std::vector<Certificate> certs = lambda_certificates(r);
        json summary = json::array();
        for (std::size_t k = 0; k < certs.size(); ++k) {
          ctx.emit("cert_" + std::to_string(k) + ".json", to_json(mu, certs[k]));
          json s = certificate_summary(mu, certs[k]);
          s["target"] = to_json(certs[k].target, mu.space().size()).at("elements");
          summary.push_back(s);
        }
        o.result["certificates"] = summary;
      }
      return o;
    };
  }});

  out.push_back({"preunif", "supercomplete", "Whether every open cover is a member",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "preunif", "pre-uniformity file", 1);
    auto enumerate = std::make_shared<bool>(false);
    app.add_flag("--enumerate", *enumerate, "check every reduced open cover directly");
    return [f, enumerate](Context& ctx) {
      const PreUniformity mu = ctx.preunif(f->front());
      const Supercompleteness s =
          *enumerate ? supercomplete_by_enumeration(mu) : is_supercomplete(mu);
      json res = json::object();
      if (s.counterexample) {
        res["counterexample"] = to_json(*s.counterexample, mu.space().size()).at("elements");
      }
      return verdict("supercomplete", s.supercomplete, res);
    };
  }});

  out.push_back({"preunif", "metricfine", "Metric-fine modification, written to metricfine.json",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "preunif", "pre-uniformity file", 1);
    return [f](Context& ctx) {
      const PreUniformity mf = metric_fine(ctx.preunif(f->front()));
      ctx.emit("metricfine.json", to_json(mf));
      Outcome o;
      o.result["basis"] = basis_json(mf);
      return o;
    };
  }});

  out.push_back({"preunif", "product",
                 "Product pre-uniformity, written to product_preunif.json and product.json",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "preunifs", "factor pre-uniformity files", 1, -1);
    return [f](Context& ctx) {
      std::vector<PreUniformity> factors;
      for (const std::string& p : *f) factors.push_back(ctx.preunif(p));
      const ProductPreUniformity pp = product_preuniformity(factors);
      ctx.emit("product_preunif.json", to_json(pp.mu));
      ctx.emit("product.json", to_json(pp.product));
      Outcome o;
      o.result["points"] = pp.product.space().size();
      o.result["basis_size"] = pp.mu.basis().size();
      return o;
    };
  }});

  out.push_back({"cert", "verify",
                 "Check a certificate against its own pre-uniformity or the one given first",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "files", "[preunif] certificate", 1, 2);
    return [f](Context& ctx) {
      const bool override_mu = f->size() == 2;
      std::optional<PreUniformity> mu;
      if (override_mu) mu = ctx.preunif((*f)[0]);
      const CertificateFile c = ctx.certificate(f->back());
      const Verdict v = verify_certificate(mu ? *mu : c.mu, c.cert);
      json res = json{{"nodes", c.cert.tree.size()}, {"depth", c.cert.tree.depth()}};
      if (!v.ok) {
        res["node"] = v.node;
        res["reason"] = v.reason;
      }
      return verdict("ok", v.ok, res);
    };
  }});

  out.push_back({"cert", "make",
                 "Certificate that V lies in lambda(mu), written to certificate.json",
                 [](CLI::App& app) -> Handler {
    Files f = files(app, "files", "pre-uniformity and cover", 2);
    auto direct = std::make_shared<bool>(false);
    app.add_flag("--direct", *direct, "search for the tree instead of replaying the lambda trace");
    return [f, direct](Context& ctx) {
      const PreUniformity mu = ctx.preunif((*f)[0]);
      const Cover v = ctx.cover((*f)[1], &mu.space()).cover;
      const Certificate cert = *direct ? certify_membership(mu, v)
                                       : certify_membership(lambda_coreflection(mu).trace, v);
      ctx.emit("certificate.json", to_json(mu, cert));
      Outcome o;
      o.result = certificate_summary(mu, cert);
      return o;
    };
  }});

  return out;
}

}  // namespace fincov::cli
