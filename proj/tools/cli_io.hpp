#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fincov/cert.hpp"
#include "fincov/cover.hpp"
#include "fincov/gamederive.hpp"
#include "fincov/preunif.hpp"
#include "fincov/prodcomb.hpp"
#include "fincov/space.hpp"

namespace fincov::cli {

using json = nlohmann::ordered_json;

/// Parses a file; InputError on a missing file or malformed JSON.
json read_json(const std::string& path);
void write_json(const std::string& path, const json& j);

/// FNV-1a over the compact dump, as 16 hex digits.
std::string content_hash(const json& j);

json to_json(PointSet s);
PointSet pointset_from_json(const json& j, int n, const std::string& what);

// Every reader resolves a string in place of an object as a path relative to
// `base`, the directory of the file that referenced it.

/// {"points": n, "opens": [...]}; large spaces use "neighbourhoods" instead.
json to_json(const FiniteSpace& space);
FiniteSpace space_from_json(const json& j, const std::string& base);

/// {"factors": [<space>, ...]}
json to_json(const ProductSpace& product);
ProductSpace product_from_json(const json& j, const std::string& base);

/// {"over"?, "elements"}; "over" only when it is not the whole n-point carrier.
json to_json(const Cover& c, int n);
/// The same with the space inlined.
json cover_file_json(const FiniteSpace& space, const Cover& c);
/// Without a "space" key the cover is read over `space`.
struct CoverFile {
  FiniteSpace space;
  Cover cover;
};
CoverFile cover_from_json(const json& j, const std::string& base,
                          const FiniteSpace* space = nullptr);

json to_json(const PreUniformity& mu);
PreUniformity preunif_from_json(const json& j, const std::string& base);

/// Nodes as {"id", "parent", "label", "witness"}.
json tree_to_json(const CoverTree& tree);
CoverTree tree_from_json(const json& j, int n);

/// Tree export: {"space": ..., "nodes": [...]}
struct TreeFile {
  FiniteSpace space;
  CoverTree tree;
};
json tree_file_json(const FiniteSpace& space, const CoverTree& tree);
TreeFile tree_file_from_json(const json& j, const std::string& base);

/// Tree plus target plus the pre-uniformity, inlined.
json to_json(const PreUniformity& mu, const Certificate& cert);
struct CertificateFile {
  PreUniformity mu;
  Certificate cert;
};
CertificateFile certificate_from_json(const json& j, const std::string& base);

/// {"support": {"i": [subset], ...}}
json to_json(const BasicSet& b);
BasicSet basic_set_from_json(const json& j, const ProductSpace& product);

json to_json(const DerivationTrace& trace);
DerivationTrace trace_from_json(const json& j, const std::string& base);

json to_json(const Perversity& p);

}  // namespace fincov::cli
