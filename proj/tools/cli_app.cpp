#include "cli_app.hpp"

#include <filesystem>

namespace fincov::cli {

namespace fs = std::filesystem;

namespace {

std::string dir_of(const std::string& path) { return fs::path(path).parent_path().string(); }

}  // namespace

void Context::record(const std::string& path, const char* kind, const json& canonical) {
  inputs.push_back(json{{"path", path}, {"kind", kind}, {"hash", content_hash(canonical)}});
}

FiniteSpace Context::space(const std::string& path) {
  FiniteSpace s = space_from_json(read_json(path), dir_of(path));
  record(path, "space", to_json(s));
  return s;
}

CoverFile Context::cover(const std::string& path, const FiniteSpace* space) {
  CoverFile c = cover_from_json(read_json(path), dir_of(path), space);
  record(path, "cover", cover_file_json(c.space, c.cover));
  return c;
}

PreUniformity Context::preunif(const std::string& path) {
  PreUniformity mu = preunif_from_json(read_json(path), dir_of(path));
  record(path, "preunif", to_json(mu));
  return mu;
}

ProductSpace Context::product(const std::string& path) {
  ProductSpace p = product_from_json(read_json(path), dir_of(path));
  record(path, "product", to_json(p));
  return p;
}

CertificateFile Context::certificate(const std::string& path) {
  CertificateFile c = certificate_from_json(read_json(path), dir_of(path));
  record(path, "certificate", to_json(c.mu, c.cert));
  return c;
}

TreeFile Context::tree(const std::string& path) {
  TreeFile t = tree_file_from_json(read_json(path), dir_of(path));
  record(path, "tree", tree_file_json(t.space, t.tree));
  return t;
}

BasicSet Context::basic_set(const std::string& path, const ProductSpace& product) {
  BasicSet b = basic_set_from_json(read_json(path), product);
  record(path, "basic set", to_json(b));
  return b;
}

json Context::document(const std::string& path) {
  json j = read_json(path);
  record(path, "document", j);
  return j;
}

void Context::emit(const std::string& name, const json& j) {
  write_json((fs::path(out_dir) / name).string(), j);
  artifacts.push_back(json{{"path", name}, {"hash", content_hash(j)}});
}

Files files(CLI::App& app, const char* name, const char* help, int min, int max) {
  auto f = std::make_shared<std::vector<std::string>>();
  app.add_option(name, *f, help)->required()->expected(min, max == 0 ? min : max);
  return f;
}

Outcome verdict(const char* key, bool value, json result) {
  result[key] = value;
  return {value ? kTrue : kFalse, std::move(result)};
}

PointSet points_option(const std::vector<int>& points, int n, const std::string& flag) {
  return pointset_from_json(json(points), n, flag);
}

Strategy strategy_option(Context& ctx, const FiniteSpace& space, const std::string& spec) {
  if (spec == "least") return least_point_strategy(space);
  if (spec == "smallest") return smallest_neighbourhood_strategy(space);
  if (spec.rfind("cover:", 0) == 0) {
    return strategy_from_cover(space, ctx.cover(spec.substr(6), &space).cover);
  }
  if (spec.rfind("table:", 0) == 0) {
    const json j = ctx.document(spec.substr(6));
    if (!j.contains("table") || !j.at("table").is_array()) {
      throw InputError("strategy table: missing \"table\" list");
    }
    std::map<PointSet, PointSet> table;
    for (const json& row : j.at("table")) {
      if (!row.is_object() || !row.contains("s") || !row.contains("phi")) {
        throw InputError("strategy table: rows need \"s\" and \"phi\"");
      }
      table[pointset_from_json(row.at("s"), space.size(), "strategy s")] =
          pointset_from_json(row.at("phi"), space.size(), "strategy phi");
    }
    return Strategy::from_table(space, table);
  }
  throw InputError("--strategy: expected least, smallest, cover:FILE or table:FILE, got " + spec);
}

json covers_json(const std::vector<Cover>& covers, int n) {
  json out = json::array();
  for (const Cover& c : covers) out.push_back(to_json(c, n).at("elements"));
  return out;
}

json sets_json(const std::vector<PointSet>& sets) {
  json out = json::array();
  for (PointSet s : sets) out.push_back(to_json(s));
  return out;
}

}  // namespace fincov::cli
