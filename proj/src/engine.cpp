#include "toposforge/engine.hpp"

#include <chrono>
#include <sstream>

#include "toposforge/sheaf.hpp"
#include "toposforge/wpresheaf.hpp"

namespace tf {

Json Report::to_json() const {
  Json j = body;
  j["command"] = command;
  j["timing"] = Json{{"seconds", seconds}};
  return j;
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << "command: " << command << "\n";
  if (body.contains("error")) out << "error: " << body.at("error").get<std::string>() << "\n";
  if (body.contains("inputs"))
    for (const auto& [name, hash] : body.at("inputs").items())
      out << "input " << name << ": " << hash.get<std::string>() << "\n";
  if (body.contains("bounds"))
    for (const auto& [key, v] : body.at("bounds").items()) out << "bound " << key << ": " << v.dump() << "\n";
  if (body.contains("verdicts"))
    for (const auto& [key, v] : body.at("verdicts").items()) {
      out << "verdict " << key << ": ";
      if (v.is_boolean()) out << (v.get<bool>() ? "pass" : "fail");
      else out << v.dump();
      out << "\n";
    }
  if (body.contains("witnesses"))
    for (const auto& w : body.at("witnesses")) out << "witness: " << w.get<std::string>() << "\n";
  out << "time: " << seconds << "s\n";
  return out.str();
}

namespace {

void add_input(Report& r, const Document& d) { r.body["inputs"][d.name] = content_hash(d.body); }

void verdict(Report& r, bool& pass, const std::string& key, bool ok) {
  r.body["verdicts"][key] = ok;
  pass = pass && ok;
}

void witnesses(Report& r, const std::vector<std::string>& ws, std::size_t cap = 10) {
  for (std::size_t i = 0; i < ws.size() && i < cap; ++i) r.body["witnesses"].push_back(ws[i]);
  if (ws.size() > cap)
    r.body["witnesses"].push_back("(" + std::to_string(ws.size() - cap) + " more)");
}

int cmd_validate(const Bundle& b, const RunOptions&, Report& r) {
  bool pass = true;
  for (const auto& d : b.documents) {
    add_input(r, d);
    try {
      if (d.kind == "category") doc_category(d);
      else if (d.kind == "presheaf") doc_presheaf(b, d);
      else if (d.kind == "presheaf_morphism") doc_morphism(b, d);
      else if (d.kind == "site") doc_site(b, d);
      else if (d.kind == "map") doc_map(d.body);
      else if (d.kind == "map_class") doc_map_class(d);
      r.body["verdicts"][d.name] = true;
    } catch (const InputError& e) {
      r.body["verdicts"][d.name] = false;
      r.body["witnesses"].push_back(e.what());
      pass = false;
    }
  }
  return pass ? 0 : 2;
}

int cmd_gen_site(const Bundle& b, const RunOptions& opt, Report& r) {
  const Document& sd = b.need("site");
  add_input(r, sd);
  Site s = doc_site(b, sd);
  GeneratedSite gen = generate_grothendieck(s, opt.depth);
  r.body["bounds"]["depth"] = opt.depth;
  r.body["bounds"]["max_size"] = opt.max_size;
  bool pass = true;
  SiteVerdict m = check_M(gen.site);
  SiteVerdict l = check_L(gen.site);
  StrongChoice sc = check_strong_C(gen.site);
  SameSheavesVerdict same = same_sheaves(s, gen.site, opt.max_size);
  verdict(r, pass, "axiom_M", m.ok);
  verdict(r, pass, "axiom_L", l.ok);
  verdict(r, pass, "strong_C", sc.ok);
  verdict(r, pass, "same_sheaves", same.equal);
  witnesses(r, m.violations);
  witnesses(r, l.violations);
  witnesses(r, sc.failures);
  if (!same.equal) witnesses(r, {same.witness});
  r.body["site"] = site_to_json(gen.site, sd.body.value("category", ""),
                                sd.name + "_generated");
  return pass ? 0 : 1;
}

int cmd_check_sheaf(const Bundle& b, const RunOptions&, Report& r) {
  const Document& pd = b.need("presheaf");
  const Document& sd = b.need("site");
  add_input(r, pd);
  add_input(r, sd);
  Presheaf p = doc_presheaf(b, pd);
  Site s = doc_site(b, sd);
  SheafVerdict v = is_sheaf_for(p, s);
  bool pass = true;
  verdict(r, pass, "sheaf", v.sheaf);
  r.body["verdicts"]["separated"] = v.separated;
  witnesses(r, v.failures);
  return pass ? 0 : 1;
}

int cmd_sheafify(const Bundle& b, const RunOptions&, Report& r) {
  const Document& pd = b.need("presheaf");
  const Document& sd = b.need("site");
  add_input(r, pd);
  add_input(r, sd);
  Presheaf p = doc_presheaf(b, pd);
  Site s = doc_site(b, sd);
  Sheafification sh = sheafify(p, s);
  bool pass = true;
  verdict(r, pass, "output_is_sheaf", is_sheaf_for(sh.sheaf, s).sheaf);
  verdict(r, pass, "unit_natural", validate_morphism(sh.unit).ok);
  for (const auto& [obj, v] : sh.sheaf.values) r.body["sizes"][obj] = v.size();
  r.body["presheaf"] =
      presheaf_to_json(sh.sheaf, pd.body.value("category", ""), pd.name + "_sheafified");
  return pass ? 0 : 1;
}

int cmd_same_sheaves(const Bundle& b, const RunOptions& opt, Report& r) {
  const Document* first = nullptr;
  const Document* second = nullptr;
  for (const auto& d : b.documents) {
    if (d.kind != "site") continue;
    if (!first) first = &d;
    else if (!second) second = &d;
  }
  if (!first || !second) throw InputError("same-sheaves needs two site documents");
  add_input(r, *first);
  add_input(r, *second);
  SameSheavesVerdict v =
      same_sheaves(doc_site(b, *first), doc_site(b, *second), opt.max_size);
  r.body["bounds"]["max_size"] = opt.max_size;
  r.body["bounds"]["presheaves_checked"] = v.checked;
  bool pass = true;
  verdict(r, pass, "same_sheaves", v.equal);
  if (!v.equal) witnesses(r, {v.witness});
  return pass ? 0 : 1;
}

int cmd_wtype(const Bundle& b, const RunOptions& opt, Report& r) {
  const Document& md = b.need("map");
  add_input(r, md);
  Signature sig(doc_map(md.body));
  r.body["bounds"]["depth"] = opt.depth;
  Json counts = Json::array();
  for (int d = 1; d <= opt.depth; ++d) counts.push_back(wtype_count(sig, d));
  r.body["counts"] = counts;
  WEnumeration w = wtype_enumerate(sig, opt.depth);
  FinSet kleene;
  for (int d = 0; d < opt.depth; ++d) kleene = polynomial_apply(sig, kleene);
  std::vector<std::string> labels;
  for (const auto& t : w.trees) labels.push_back(t.label());
  bool pass = true;
  verdict(r, pass, "kleene_match", FinSet::of(labels) == kleene);
  r.body["verdicts"]["saturated"] = w.saturated;
  if (w.trees.size() <= 30) r.body["terms"] = labels;
  return pass ? 0 : 1;
}

int cmd_wtype_presheaf(const Bundle& b, const RunOptions& opt, Report& r) {
  const Document& md = b.need("presheaf_morphism");
  add_input(r, md);
  WPresheafContext ctx(doc_morphism(b, md));
  r.body["bounds"]["depth"] = opt.depth;
  WPresheafResult res = wtype_presheaf(ctx, opt.depth);
  bool pass = true;
  verdict(r, pass, "kleene_match", res.w == kleene_iterate(ctx, opt.depth));
  verdict(r, pass, "structure_bijective", res.structure_bijective);
  bool natural = true;
  for (const auto& [label, term] : res.term_of)
    if (!ctx.is_natural(term)) natural = false;
  verdict(r, pass, "terms_natural", natural);
  for (const auto& [obj, v] : res.w.values) r.body["sizes"][obj] = v.size();
  return pass ? 0 : 1;
}

int cmd_check_class(const Bundle& b, const RunOptions& opt, Report& r) {
  const Document& cd = b.need("map_class");
  add_input(r, cd);
  MapClass s = doc_map_class(cd);
  ProbeUniverse p(opt.probe);
  r.body["bounds"]["probe_carrier"] = opt.probe;
  r.body["bounds"]["probe_maps"] = p.maps.size();
  bool pass = true;
  StableVerdict st = check_stable(s, p);
  verdict(r, pass, "pullback_stability", st.pullback_stability.ok);
  verdict(r, pass, "descent", st.descent.ok);
  verdict(r, pass, "sum_stability", st.sum.ok);
  LocallyFullVerdict lf = check_locally_full(s, p);
  verdict(r, pass, "triangle", lf.triangle.ok);
  r.body["verdicts"]["composition"] = lf.composition.ok;
  r.body["verdicts"]["diagonal"] = lf.diagonal.ok;
  r.body["verdicts"]["triangle_split_agrees"] = lf.remark_agrees;
  ClosureVerdict cl = check_pi_w_closure(s, p);
  verdict(r, pass, "closure_sums", cl.sums.ok);
  verdict(r, pass, "closure_quotients", cl.quotients.ok);
  verdict(r, pass, "closure_pi", cl.pi.ok);
  verdict(r, pass, "closure_w", cl.w.ok);
  Representation rep = find_representation(s, p);
  verdict(r, pass, "representable", rep.ok);
  r.body["bounds"]["universal_base"] = rep.universal.pi.cod.size();
  CollectionAxiomVerdict ca = check_collection_axiom(s, p);
  verdict(r, pass, "collection_axiom", ca.quasi_pullbacks.ok);
  r.body["verdicts"]["universal_is_collection"] = ca.universal_is_collection.holds;
  for (const auto* av : {&st.pullback_stability, &st.descent, &st.sum, &lf.triangle,
                         &cl.sums, &cl.quotients, &cl.pi, &cl.w, &ca.quasi_pullbacks})
    witnesses(r, av->violations, 3);
  witnesses(r, rep.failures, 3);
  return pass ? 0 : 1;
}

int cmd_collsp(const Bundle& b, const RunOptions& opt, Report& r) {
  const Document& md = b.need("map");
  const Document& cd = b.need("map_class");
  add_input(r, md);
  add_input(r, cd);
  FinFunction f = doc_map(md.body);
  MapClass s = doc_map_class(cd);
  UniversalMap pi = find_representation(s, ProbeUniverse(opt.probe)).universal;
  CollectionSpanConstruction cc = collsp_construct(f, s, pi);
  r.body["bounds"]["probe_carrier"] = opt.probe;
  r.body["sizes"]["c"] = cc.c.size();
  r.body["sizes"]["d"] = cc.d.size();
  bool pass = true;
  verdict(r, pass, "quasi_pullback", cc.quasi_pullback);
  verdict(r, pass, "g_small", cc.g_small);
  verdict(r, pass, "collection_span", cc.span.holds);
  if (!cc.span.holds) witnesses(r, {cc.span.counterexample});
  return pass ? 0 : 1;
}

int cmd_equiv_coll_site(const Bundle& b, const RunOptions& opt, Report& r) {
  const Document& sd = b.need("site");
  const Document& cd = b.need("map_class");
  add_input(r, sd);
  add_input(r, cd);
  Site s = doc_site(b, sd);
  MapClass cls = doc_map_class(cd);
  UniversalMap pi = find_representation(cls, ProbeUniverse(opt.probe)).universal;
  Site out = equiv_collection_site(s, cls, pi);
  r.body["bounds"]["probe_carrier"] = opt.probe;
  r.body["bounds"]["max_size"] = opt.max_size;
  bool pass = true;
  verdict(r, pass, "collection_site", is_collection_site(out).holds);
  verdict(r, pass, "small_covers", has_small_covers(out, cls.predicate()));
  SameSheavesVerdict same = same_sheaves(s, out, opt.max_size);
  verdict(r, pass, "same_sheaves", same.equal);
  if (!same.equal) witnesses(r, {same.witness});
  r.body["site"] = site_to_json(out, sd.body.value("category", ""), sd.name + "_collection");
  return pass ? 0 : 1;
}

}  // namespace

RunResult run_command(const std::string& command, const Bundle& b, const RunOptions& opt) {
  RunResult res;
  res.report.command = command;
  auto start = std::chrono::steady_clock::now();
  try {
    if (command == "validate") res.exit_code = cmd_validate(b, opt, res.report);
    else if (command == "gen-site") res.exit_code = cmd_gen_site(b, opt, res.report);
    else if (command == "check-sheaf") res.exit_code = cmd_check_sheaf(b, opt, res.report);
    else if (command == "sheafify") res.exit_code = cmd_sheafify(b, opt, res.report);
    else if (command == "same-sheaves") res.exit_code = cmd_same_sheaves(b, opt, res.report);
    else if (command == "wtype") res.exit_code = cmd_wtype(b, opt, res.report);
    else if (command == "wtype-presheaf") res.exit_code = cmd_wtype_presheaf(b, opt, res.report);
    else if (command == "check-class") res.exit_code = cmd_check_class(b, opt, res.report);
    else if (command == "collsp") res.exit_code = cmd_collsp(b, opt, res.report);
    else if (command == "equiv-coll-site") res.exit_code = cmd_equiv_coll_site(b, opt, res.report);
    else throw InputError("unknown command \"" + command + "\"");
  } catch (const InputError& e) {
    res.exit_code = 2;
    res.report.body["error"] = e.what();
  } catch (const BudgetError& e) {
    res.exit_code = 2;
    res.report.body["error"] = e.what();
  }
  res.report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace tf
