#include "cli_io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fincov::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kMaxListedOpens = 4096;

std::string dir_of(const std::string& path) {
  return fs::path(path).parent_path().string();
}

std::string resolve(const std::string& base, const std::string& path) {
  if (base.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base) / path).string();
}

const json& field(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(what + ": missing \"" + key + "\"");
  }
  return j.at(key);
}

int int_field(const json& j, const char* key, const std::string& what) {
  const json& v = field(j, key, what);
  if (!v.is_number_integer()) throw InputError(what + ": \"" + key + "\" is not an integer");
  return v.get<int>();
}

std::vector<PointSet> sets_from_json(const json& j, int n, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected a list of point lists");
  std::vector<PointSet> out;
  for (const json& s : j) out.push_back(pointset_from_json(s, n, what));
  return out;
}

json sets_to_json(const std::vector<PointSet>& sets) {
  json out = json::array();
  for (PointSet s : sets) out.push_back(to_json(s));
  return out;
}

// A string names a file to load; the returned base is its directory.
std::pair<json, std::string> deref(const json& j, const std::string& base) {
  if (j.is_string()) {
    const std::string path = resolve(base, j.get<std::string>());
    return {read_json(path), dir_of(path)};
  }
  return {j, base};
}

std::vector<std::size_t> indices_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an index list");
  std::vector<std::size_t> out;
  for (const json& v : j) {
    if (!v.is_number_unsigned()) throw InputError(what + ": bad index " + v.dump());
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

}  // namespace

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(1) << '\n';
}

std::string content_hash(const json& j) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json to_json(PointSet s) { return s.points(); }

PointSet pointset_from_json(const json& j, int n, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected a point list, got " + j.dump());
  PointSet s;
  for (const json& v : j) {
    if (!v.is_number_integer()) throw InputError(what + ": bad point " + v.dump());
    const int p = v.get<int>();
    if (p < 0 || p >= n) {
      throw InputError(what + ": point " + std::to_string(p) + " outside 0.." +
                       std::to_string(n - 1));
    }
    s |= PointSet::singleton(p);
  }
  return s;
}

json to_json(const FiniteSpace& space) {
  json out = json::object();
  out["points"] = space.size();
  // Counting opens first would cost as much as listing them, so bound by the
  // number of subsets instead.
  if (space.size() <= 12) {
    std::vector<PointSet> opens = space.opens();
    if (opens.size() <= kMaxListedOpens) {
      std::sort(opens.begin(), opens.end());
      out["opens"] = sets_to_json(opens);
      return out;
    }
  }
  out["neighbourhoods"] = sets_to_json(space.neighbourhoods());
  return out;
}

FiniteSpace space_from_json(const json& j0, const std::string& base0) {
  auto [j, base] = deref(j0, base0);
  const std::string what = "space";
  const int n = int_field(j, "points", what);
  if (n < 0 || n > PointSet::kMaxPoints) throw InputError("space: point count out of range");
  if (j.contains("neighbourhoods")) {
    std::vector<PointSet> nb = sets_from_json(j.at("neighbourhoods"), n, what);
    if (static_cast<int>(nb.size()) != n) {
      throw InputError("space: need one neighbourhood per point");
    }
    return FiniteSpace::from_neighbourhoods(std::move(nb));
  }
  return FiniteSpace::from_opens(n, sets_from_json(field(j, "opens", what), n, what));
}

json to_json(const ProductSpace& product) {
  json factors = json::array();
  for (const FiniteSpace& f : product.factors()) factors.push_back(to_json(f));
  return json{{"factors", factors}};
}

ProductSpace product_from_json(const json& j0, const std::string& base0) {
  auto [j, base] = deref(j0, base0);
  const json& fl = field(j, "factors", "product");
  if (!fl.is_array() || fl.empty()) throw InputError("product: \"factors\" must be a non-empty list");
  std::vector<FiniteSpace> factors;
  for (const json& f : fl) factors.push_back(space_from_json(f, base));
  return product(factors);
}

json to_json(const Cover& c, int n) {
  json out = json::object();
  if (c.over() != PointSet::full(n)) out["over"] = to_json(c.over());
  out["elements"] = sets_to_json(c.elements());
  return out;
}

json cover_file_json(const FiniteSpace& space, const Cover& c) {
  json out = json{{"space", to_json(space)}};
  out.update(to_json(c, space.size()));
  return out;
}

CoverFile cover_from_json(const json& j0, const std::string& base0, const FiniteSpace* space) {
  auto [j, base] = deref(j0, base0);
  std::optional<FiniteSpace> own;
  if (j.is_object() && j.contains("space")) {
    own = space_from_json(j.at("space"), base);
  } else if (space != nullptr) {
    own = *space;
  } else {
    throw InputError("cover: missing \"space\"");
  }
  const int n = own->size();
  const json& elements = j.is_array() ? j : field(j, "elements", "cover");
  PointSet over = own->carrier();
  if (j.is_object() && j.contains("over")) over = pointset_from_json(j.at("over"), n, "cover over");
  return {*own, Cover(over, sets_from_json(elements, n, "cover"))};
}

json to_json(const PreUniformity& mu) {
  json basis = json::array();
  for (const Cover& c : mu.basis()) basis.push_back(to_json(c, mu.space().size()));
  return json{{"space", to_json(mu.space())}, {"mode", to_string(mu.mode())}, {"basis", basis}};
}

PreUniformity preunif_from_json(const json& j0, const std::string& base0) {
  auto [j, base] = deref(j0, base0);
  const FiniteSpace space = space_from_json(field(j, "space", "preunif"), base);
  Mode mode = Mode::filter;
  if (j.contains("mode")) {
    const json& m = j.at("mode");
    if (!m.is_string() || (m != "filter" && m != "prefilter")) {
      throw InputError("preunif: mode must be \"filter\" or \"prefilter\"");
    }
    mode = mode_from_string(m.get<std::string>());
  }
  const json& bl = field(j, "basis", "preunif");
  if (!bl.is_array()) throw InputError("preunif: \"basis\" must be a list");
  std::vector<Cover> basis;
  for (const json& c : bl) basis.push_back(cover_from_json(c, base, &space).cover);
  return PreUniformity(space, std::move(basis), mode);
}

json tree_to_json(const CoverTree& tree) {
  json nodes = json::array();
  for (std::size_t k = 0; k < tree.size(); ++k) {
    const TreeNode& n = tree.node(k);
    nodes.push_back(json{{"id", k}, {"parent", n.parent}, {"label", to_json(n.label)},
                         {"witness", n.witness}});
  }
  return json{{"nodes", nodes}};
}

CoverTree tree_from_json(const json& j, int n) {
  const json& nl = field(j, "nodes", "tree");
  if (!nl.is_array() || nl.empty()) throw InputError("tree: \"nodes\" must be a non-empty list");
  std::vector<TreeNode> nodes;
  for (std::size_t k = 0; k < nl.size(); ++k) {
    const json& e = nl[k];
    const std::string what = "tree node " + std::to_string(k);
    if (int_field(e, "id", what) != static_cast<int>(k)) {
      throw InputError(what + ": ids must run 0, 1, 2, ...");
    }
    TreeNode node;
    node.parent = int_field(e, "parent", what);
    if (k == 0 ? node.parent != -1 : (node.parent < 0 || node.parent >= static_cast<int>(k))) {
      throw InputError(what + ": parent must be -1 for the root and an earlier id otherwise");
    }
    node.label = pointset_from_json(field(e, "label", what), n, what);
    if (e.contains("witness")) node.witness = indices_from_json(e.at("witness"), what);
    nodes.push_back(std::move(node));
  }
  return CoverTree(std::move(nodes));
}

json tree_file_json(const FiniteSpace& space, const CoverTree& tree) {
  json out = json{{"space", to_json(space)}};
  out["nodes"] = tree_to_json(tree).at("nodes");
  return out;
}

TreeFile tree_file_from_json(const json& j0, const std::string& base0) {
  auto [j, base] = deref(j0, base0);
  FiniteSpace space = space_from_json(field(j, "space", "tree"), base);
  CoverTree tree = tree_from_json(j, space.size());
  return {std::move(space), std::move(tree)};
}

json to_json(const PreUniformity& mu, const Certificate& cert) {
  json target = to_json(cert.target, mu.space().size());
  json out = json{{"preunif", to_json(mu)}, {"target", target}};
  out["nodes"] = tree_to_json(cert.tree).at("nodes");
  return out;
}

CertificateFile certificate_from_json(const json& j0, const std::string& base0) {
  auto [j, base] = deref(j0, base0);
  PreUniformity mu = preunif_from_json(field(j, "preunif", "certificate"), base);
  Cover target = cover_from_json(field(j, "target", "certificate"), base, &mu.space()).cover;
  CoverTree tree = tree_from_json(j, mu.space().size());
  return {std::move(mu), Certificate{std::move(tree), std::move(target)}};
}

json to_json(const BasicSet& b) {
  json support = json::object();
  for (const auto& [i, side] : b.constraints()) support[std::to_string(i)] = to_json(side);
  return json{{"support", support}};
}

BasicSet basic_set_from_json(const json& j, const ProductSpace& product) {
  const json& s = field(j, "support", "basic set");
  if (!s.is_object()) throw InputError("basic set: \"support\" must be an object");
  std::map<int, PointSet> constraints;
  for (const auto& [key, side] : s.items()) {
    int i = -1;
    std::istringstream in(key);
    if (!(in >> i) || !in.eof() || i < 0 || i >= product.factor_count()) {
      throw InputError("basic set: bad factor index \"" + key + "\"");
    }
    constraints[i] = pointset_from_json(side, product.factors()[static_cast<std::size_t>(i)].size(),
                                        "basic set side " + key);
  }
  return BasicSet(product, std::move(constraints));
}

json to_json(const DerivationTrace& trace) {
  json stages = json::array();
  for (std::size_t k = 0; k < trace.stages.size(); ++k) {
    json basis = json::array();
    for (const Cover& c : trace.stages[k].basis()) basis.push_back(to_json(c, trace.stages[k].space().size()));
    json stage = json{{"stage", k}, {"basis", basis}};
    if (k > 0) {
      json prov = json::array();
      for (const Provenance& p : trace.provenance[k - 1]) {
        prov.push_back(json{{"parents", p.parents}, {"choice", p.choice}});
      }
      stage["provenance"] = prov;
    }
    stages.push_back(stage);
  }
  const PreUniformity& mu = trace.stages.front();
  return json{{"space", to_json(mu.space())}, {"mode", to_string(mu.mode())},
              {"fast", trace.fast},         {"fixed_stage", trace.fixed_stage},
              {"stages", stages}};
}

DerivationTrace trace_from_json(const json& j0, const std::string& base0) {
  auto [j, base] = deref(j0, base0);
  const FiniteSpace space = space_from_json(field(j, "space", "trace"), base);
  const json& m = field(j, "mode", "trace");
  if (!m.is_string() || (m != "filter" && m != "prefilter")) throw InputError("trace: bad mode");
  const Mode mode = mode_from_string(m.get<std::string>());
  DerivationTrace trace;
  trace.fast = field(j, "fast", "trace").get<bool>();
  trace.fixed_stage = field(j, "fixed_stage", "trace").get<std::size_t>();
  const json& stages = field(j, "stages", "trace");
  if (!stages.is_array() || stages.empty()) throw InputError("trace: no stages");
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const std::string what = "trace stage " + std::to_string(k);
    if (int_field(stages[k], "stage", what) != static_cast<int>(k)) {
      throw InputError(what + ": stages out of order");
    }
    std::vector<Cover> basis;
    for (const json& c : field(stages[k], "basis", what)) {
      basis.push_back(cover_from_json(c, base, &space).cover);
    }
    trace.stages.emplace_back(space, std::move(basis), mode);
    if (k > 0) {
      std::vector<Provenance> prov;
      for (const json& p : field(stages[k], "provenance", what)) {
        prov.push_back({indices_from_json(field(p, "parents", what), what),
                        indices_from_json(field(p, "choice", what), what)});
      }
      trace.provenance.push_back(std::move(prov));
    }
  }
  if (trace.fixed_stage >= trace.stages.size()) throw InputError("trace: fixed_stage out of range");
  return trace;
}

json to_json(const Perversity& p) { return p.entries(); }

}  // namespace fincov::cli
