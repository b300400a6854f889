#pragma once

// JSON documents: parsing, resolution into core structures, and canonical
// serialization. A file holds either a single document or a corpus bundle;
// every document carries "kind" and "name".

#include <string>
#include <vector>

#include "json.hpp"
#include "toposforge/presheaf.hpp"
#include "toposforge/site.hpp"
#include "toposforge/smallmap.hpp"

namespace tf {

using Json = nlohmann::json;  // object keys stay sorted, which is the canonical order

struct Document {
  std::string kind;  // category | presheaf | presheaf_morphism | site | map | map_class | corpus
  std::string name;
  Json body;
};

struct Bundle {
  Json root;  // the parsed file, kept for byte-identical reserialization
  std::vector<Document> documents;

  // First document of the kind; name "" matches any. Throws InputError when absent.
  const Document& need(const std::string& kind, const std::string& name = "") const;
  const Document* find(const std::string& kind, const std::string& name = "") const;
};

Bundle parse_bundle(const std::string& text);
Bundle parse_bundle_file(const std::string& path);
std::string canonical_dump(const Json& j);
std::string serialize_bundle(const Bundle& b);

// 64-bit FNV-1a of the canonical dump, as a hex string.
std::string content_hash(const Json& j);

// -- document -> core structure (throws InputError on schema violations) --
CatRef doc_category(const Document& d);
Presheaf doc_presheaf(const Bundle& b, const Document& d);
PresheafMorphism doc_morphism(const Bundle& b, const Document& d);
Site doc_site(const Bundle& b, const Document& d);
FinFunction doc_map(const Json& j);  // {"dom":[...], "cod":[...], "map":{x:y}}
MapClass doc_map_class(const Document& d);

// -- core structure -> document body --
Json map_to_json(const FinFunction& f);
Json site_to_json(const Site& s, const std::string& category_name, const std::string& name);
Json presheaf_to_json(const Presheaf& p, const std::string& category_name,
                      const std::string& name);

}  // namespace tf
