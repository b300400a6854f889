#include "toposforge/docs.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace tf {

namespace {

const std::set<std::string> kKinds = {"category", "presheaf", "presheaf_morphism",
                                      "site",     "map",      "map_class",
                                      "corpus"};

Document read_document(const Json& j) {
  if (!j.is_object()) throw InputError("document is not a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw InputError("document lacks a string \"kind\"");
  if (!j.contains("name") || !j.at("name").is_string())
    throw InputError("document lacks a string \"name\"");
  Document d;
  d.kind = j.at("kind").get<std::string>();
  d.name = j.at("name").get<std::string>();
  if (!kKinds.count(d.kind)) throw InputError("unknown document kind \"" + d.kind + "\"");
  d.body = j;
  return d;
}

std::vector<std::string> string_array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw InputError(where + ": expected strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::map<std::string, std::string> string_table(const Json& j, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw InputError(where + ": expected string values");
    out[k] = v.get<std::string>();
  }
  return out;
}

}  // namespace

const Document* Bundle::find(const std::string& kind, const std::string& name) const {
  for (const auto& d : documents)
    if (d.kind == kind && (name.empty() || d.name == name)) return &d;
  return nullptr;
}

const Document& Bundle::need(const std::string& kind, const std::string& name) const {
  const Document* d = find(kind, name);
  if (!d)
    throw InputError("no document of kind \"" + kind + "\"" +
                     (name.empty() ? "" : " named \"" + name + "\""));
  return *d;
}

Bundle parse_bundle(const std::string& text) {
  Bundle b;
  try {
    b.root = Json::parse(text);
  } catch (const Json::exception& e) {
    throw InputError(std::string("JSON parse error: ") + e.what());
  }
  Document top = read_document(b.root);
  if (top.kind == "corpus") {
    if (!top.body.contains("documents") || !top.body.at("documents").is_array())
      throw InputError("corpus lacks a \"documents\" array");
    for (const auto& j : top.body.at("documents")) {
      Document d = read_document(j);
      if (d.kind == "corpus") throw InputError("corpora do not nest");
      b.documents.push_back(std::move(d));
    }
  } else {
    b.documents.push_back(std::move(top));
  }
  return b;
}

Bundle parse_bundle_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_bundle(ss.str());
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

std::string serialize_bundle(const Bundle& b) { return canonical_dump(b.root); }

std::string content_hash(const Json& j) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : canonical_dump(j)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

CatRef doc_category(const Document& d) {
  if (d.kind != "category") throw InputError(d.name + " is not a category document");
  FinCategory c;
  std::vector<std::string> objects = string_array(d.body.value("objects", Json::array()),
                                                  d.name + ".objects");
  c.objects = FinSet::of(objects);
  std::vector<std::string> arrow_names;
  for (const auto& obj : objects) {
    std::string id = FinCategory::id_name(obj);
    arrow_names.push_back(id);
    c.dom_[id] = obj;
    c.cod_[id] = obj;
  }
  for (const auto& a : d.body.value("arrows", Json::array())) {
    if (!a.is_object() || !a.contains("name") || !a.contains("dom") || !a.contains("cod"))
      throw InputError(d.name + ": arrows need name, dom and cod");
    std::string n = a.at("name").get<std::string>();
    arrow_names.push_back(n);
    c.dom_[n] = a.at("dom").get<std::string>();
    c.cod_[n] = a.at("cod").get<std::string>();
  }
  c.arrows = FinSet::of(arrow_names);
  for (const auto& a : c.arrows.elems) {
    if (!c.objects.contains(c.dom_.at(a)) || !c.objects.contains(c.cod_.at(a)))
      throw InputError(d.name + ": arrow " + a + " has an unknown endpoint");
  }
  // identity composites first, then the explicit table
  for (const auto& a : c.arrows.elems) {
    c.comp_[{a, FinCategory::id_name(c.dom_.at(a))}] = a;
    c.comp_[{FinCategory::id_name(c.cod_.at(a)), a}] = a;
  }
  for (const auto& t : d.body.value("compose", Json::array())) {
    std::vector<std::string> triple = string_array(t, d.name + ".compose");
    if (triple.size() != 3) throw InputError(d.name + ": compose entries are [g, f, gf]");
    c.comp_[{triple[0], triple[1]}] = triple[2];
  }
  CatVerdict v = validate_category(c);
  if (!v.ok) throw InputError(d.name + ": " + v.violations[0]);
  return std::make_shared<FinCategory>(std::move(c));
}

Presheaf doc_presheaf(const Bundle& b, const Document& d) {
  if (d.kind != "presheaf") throw InputError(d.name + " is not a presheaf document");
  CatRef base = doc_category(b.need("category", d.body.value("category", "")));
  std::map<std::string, std::vector<std::string>> values;
  Json vj = d.body.value("values", Json::object());
  for (const auto& [obj, labels] : vj.items())
    values[obj] = string_array(labels, d.name + ".values." + obj);
  std::map<std::string, std::map<std::string, std::string>> restrict;
  Json rj = d.body.value("restrict", Json::object());
  for (const auto& [arrow, table] : rj.items())
    restrict[arrow] = string_table(table, d.name + ".restrict." + arrow);
  return make_presheaf(base, values,
                       [&base, &restrict, &d](const std::string& arrow,
                                              const std::string& x) -> std::string {
                         if (base->is_identity(arrow)) return x;
                         auto ta = restrict.find(arrow);
                         if (ta == restrict.end() || !ta->second.count(x))
                           throw InputError(d.name + ": restriction of " + x + " along " +
                                            arrow + " is missing");
                         return ta->second.at(x);
                       });
}

PresheafMorphism doc_morphism(const Bundle& b, const Document& d) {
  if (d.kind != "presheaf_morphism")
    throw InputError(d.name + " is not a presheaf_morphism document");
  Presheaf dom = doc_presheaf(b, b.need("presheaf", d.body.value("dom", "")));
  Presheaf cod = doc_presheaf(b, b.need("presheaf", d.body.value("cod", "")));
  std::map<std::string, std::map<std::string, std::string>> comps;
  Json cj = d.body.value("components", Json::object());
  for (const auto& [obj, table] : cj.items())
    comps[obj] = string_table(table, d.name + ".components." + obj);
  return make_morphism(dom, cod,
                       [&comps, &d](const std::string& obj, const std::string& x) {
                         auto t = comps.find(obj);
                         if (t == comps.end() || !t->second.count(x))
                           throw InputError(d.name + ": no image for " + x + " at " + obj);
                         return t->second.at(x);
                       });
}

Site doc_site(const Bundle& b, const Document& d) {
  if (d.kind != "site") throw InputError(d.name + " is not a site document");
  Site s;
  s.base = doc_category(b.need("category", d.body.value("category", "")));
  for (const auto& cj : d.body.value("covers", Json::array())) {
    if (!cj.is_object() || !cj.contains("target"))
      throw InputError(d.name + ": covers need a target");
    CoveringFamily fam;
    fam.target = cj.at("target").get<std::string>();
    std::vector<std::pair<int, std::string>> indexed;
    for (const auto& e : cj.value("family", Json::array())) {
      if (!e.is_object() || !e.contains("index") || !e.contains("arrow"))
        throw InputError(d.name + ": family entries need index and arrow");
      indexed.emplace_back(e.at("index").get<int>(), e.at("arrow").get<std::string>());
    }
    std::sort(indexed.begin(), indexed.end());
    for (const auto& [i, a] : indexed) fam.arrows.push_back(a);
    s.covers.push_back(std::move(fam));
  }
  SiteVerdict v = validate_site(s);
  if (!v.ok) throw InputError(d.name + ": " + v.violations[0]);
  return s;
}

FinFunction doc_map(const Json& j) {
  if (!j.is_object()) throw InputError("map: expected an object");
  FinSet dom = FinSet::of(string_array(j.value("dom", Json::array()), "map.dom"));
  FinSet cod = FinSet::of(string_array(j.value("cod", Json::array()), "map.cod"));
  return FinFunction::from_map(dom, cod, string_table(j.value("map", Json::object()), "map.map"));
}

MapClass doc_map_class(const Document& d) {
  if (d.kind != "map_class") throw InputError(d.name + " is not a map_class document");
  const Json& spec = d.body.contains("spec") ? d.body.at("spec") : Json::object();
  std::string kind = spec.value("kind", "");
  if (kind == "fiber_bound") {
    if (!spec.contains("bound")) throw InputError(d.name + ": fiber_bound needs a bound");
    return MapClass::fiber_bound_class(spec.at("bound").get<std::size_t>());
  }
  if (kind == "all") return MapClass::all_maps();
  if (kind == "explicit") {
    std::vector<FinFunction> maps;
    for (const auto& m : spec.value("maps", Json::array())) maps.push_back(doc_map(m));
    return MapClass::explicit_class(std::move(maps), spec.value("up_to_iso", true));
  }
  throw InputError(d.name + ": unknown class kind \"" + kind + "\"");
}

Json map_to_json(const FinFunction& f) {
  Json j;
  j["dom"] = f.dom.elems;
  j["cod"] = f.cod.elems;
  Json table = Json::object();
  for (const auto& x : f.dom.elems) table[x] = f(x);
  j["map"] = table;
  return j;
}

Json site_to_json(const Site& s, const std::string& category_name, const std::string& name) {
  Json j;
  j["kind"] = "site";
  j["name"] = name;
  j["category"] = category_name;
  Json covers = Json::array();
  for (std::size_t n = 0; n < s.covers.size(); ++n) {
    Json cj;
    cj["name"] = "U" + std::to_string(n);
    cj["target"] = s.covers[n].target;
    Json fam = Json::array();
    for (std::size_t i = 0; i < s.covers[n].arrows.size(); ++i)
      fam.push_back(Json{{"index", i}, {"arrow", s.covers[n].arrows[i]}});
    cj["family"] = fam;
    covers.push_back(cj);
  }
  j["covers"] = covers;
  return j;
}

Json presheaf_to_json(const Presheaf& p, const std::string& category_name,
                      const std::string& name) {
  Json j;
  j["kind"] = "presheaf";
  j["name"] = name;
  j["category"] = category_name;
  Json values = Json::object();
  for (const auto& [obj, v] : p.values) values[obj] = v.elems;
  j["values"] = values;
  Json restrict = Json::object();
  for (const auto& [arrow, fn] : p.restr) {
    if (p.base->is_identity(arrow)) continue;
    Json table = Json::object();
    for (const auto& x : fn.dom.elems) table[x] = fn(x);
    restrict[arrow] = table;
  }
  j["restrict"] = restrict;
  return j;
}

}  // namespace tf
