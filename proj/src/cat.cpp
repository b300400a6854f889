#include "toposforge/cat.hpp"

#include <algorithm>
#include <set>

namespace tf {

std::string FinCategory::id(const std::string& obj) const {
  std::string n = id_name(obj);
  if (!arrows.contains(n)) throw InputError("missing identity arrow " + n);
  return n;
}

bool FinCategory::is_identity(const std::string& a) const {
  return a.rfind("id_", 0) == 0 && arrows.contains(a) && dom_.at(a) == cod_.at(a) &&
         a == id_name(dom_.at(a));
}

std::string FinCategory::compose(const std::string& g, const std::string& f) const {
  if (cod(f) != dom(g)) throw InputError("compose: " + g + " after " + f + " not composable");
  if (is_identity(f)) return g;
  if (is_identity(g)) return f;
  auto it = comp_.find({g, f});
  if (it == comp_.end()) throw InputError("composition table missing (" + g + "," + f + ")");
  return it->second;
}

std::vector<std::string> FinCategory::arrows_into(const std::string& obj) const {
  std::vector<std::string> out;
  for (const auto& a : arrows.elems)
    if (cod(a) == obj) out.push_back(a);
  return out;
}

std::vector<std::string> FinCategory::arrows_from(const std::string& obj) const {
  std::vector<std::string> out;
  for (const auto& a : arrows.elems)
    if (dom(a) == obj) out.push_back(a);
  return out;
}

std::vector<std::string> FinCategory::hom(const std::string& d, const std::string& c) const {
  std::vector<std::string> out;
  for (const auto& a : arrows.elems)
    if (dom(a) == d && cod(a) == c) out.push_back(a);
  return out;
}

FinFunction FinCategory::cod_function() const {
  std::map<std::string, std::string> m;
  for (const auto& a : arrows.elems) m[a] = cod(a);
  return FinFunction::from_map(arrows, objects, m);
}

FinCategory FinCategory::op() const {
  FinCategory o;
  o.objects = objects;
  o.arrows = arrows;
  o.dom_ = cod_;
  o.cod_ = dom_;
  for (const auto& [gf, c] : comp_) o.comp_[{gf.second, gf.first}] = c;
  return o;
}

FinCategory terminal_category() {
  CatPresentation p;
  p.objects = {"pt"};
  return compile_presentation(p, 4);
}

FinCategory sierpinski_category() {
  CatPresentation p;
  p.objects = {"0", "1"};
  p.generators = {{"u", "0", "1"}};
  return compile_presentation(p, 8);
}

CatVerdict validate_category(const FinCategory& c) {
  CatVerdict v;
  auto fail = [&](const std::string& msg) {
    v.ok = false;
    v.violations.push_back(msg);
  };
  for (const auto& a : c.arrows.elems) {
    if (!c.dom_.count(a) || !c.cod_.count(a)) {
      fail("arrow without dom/cod: " + a);
      continue;
    }
    if (!c.objects.contains(c.dom(a)) || !c.objects.contains(c.cod(a)))
      fail("arrow with unknown endpoint: " + a);
  }
  for (const auto& x : c.objects.elems) {
    std::string i = FinCategory::id_name(x);
    if (!c.arrows.contains(i)) {
      fail("missing identity arrow for object " + x);
      continue;
    }
    if (c.dom(i) != x || c.cod(i) != x) fail("identity arrow with wrong endpoints: " + i);
  }
  if (!v.ok) return v;
  auto comp = [&](const std::string& g, const std::string& f) -> std::string {
    try {
      return c.compose(g, f);
    } catch (const InputError& e) {
      fail(e.what());
      return "";
    }
  };
  for (const auto& f : c.arrows.elems)
    for (const auto& g : c.arrows.elems) {
      if (c.cod(f) != c.dom(g)) continue;
      std::string gf = comp(g, f);
      if (gf.empty()) continue;
      if (c.dom(gf) != c.dom(f) || c.cod(gf) != c.cod(g))
        fail("composite " + gf + " of (" + g + "," + f + ") has wrong endpoints");
    }
  if (!v.ok) return v;
  for (const auto& f : c.arrows.elems) {
    if (c.compose(f, c.id(c.dom(f))) != f) fail("right unit law fails at " + f);
    if (c.compose(c.id(c.cod(f)), f) != f) fail("left unit law fails at " + f);
  }
  for (const auto& f : c.arrows.elems)
    for (const auto& g : c.arrows.elems) {
      if (c.cod(f) != c.dom(g)) continue;
      for (const auto& h : c.arrows.elems) {
        if (c.cod(g) != c.dom(h)) continue;
        if (c.compose(h, c.compose(g, f)) != c.compose(c.compose(h, g), f))
          fail("associativity fails at (" + h + "," + g + "," + f + ")");
      }
    }
  return v;
}

namespace {

using Word = std::vector<std::string>;  // composition order, last applied first

bool word_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// Rewrites any occurrence of the larger relation side to the smaller one,
// until no rule applies. Terminates: every step decreases (length, lex).
Word normalize(Word w, const std::vector<Relation>& rels) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : rels) {
      const Word& from = word_less(r.lhs, r.rhs) ? r.rhs : r.lhs;
      const Word& to = word_less(r.lhs, r.rhs) ? r.lhs : r.rhs;
      if (from == to) continue;
      if (from.size() > w.size()) continue;
      for (std::size_t i = 0; i + from.size() <= w.size(); ++i) {
        if (std::equal(from.begin(), from.end(), w.begin() + static_cast<long>(i))) {
          Word next(w.begin(), w.begin() + static_cast<long>(i));
          next.insert(next.end(), to.begin(), to.end());
          next.insert(next.end(), w.begin() + static_cast<long>(i + from.size()), w.end());
          w = std::move(next);
          changed = true;
          break;
        }
      }
      if (changed) break;
    }
  }
  return w;
}

struct Arrow {
  Word word;        // empty for identities
  std::string obj;  // object, only meaningful for identities
};

std::string arrow_name(const Arrow& a) {
  if (a.word.empty()) return FinCategory::id_name(a.obj);
  std::string n = a.word.front();
  for (std::size_t i = 1; i < a.word.size(); ++i) n += "." + a.word[i];
  return n;
}

}  // namespace

FinCategory compile_presentation(const CatPresentation& p, std::size_t budget) {
  std::map<std::string, std::pair<std::string, std::string>> gens;  // name -> (dom, cod)
  for (const auto& g : p.generators) {
    if (gens.count(g.name) || g.name.rfind("id_", 0) == 0)
      throw InputError("bad generator name: " + g.name);
    if (std::find(p.objects.begin(), p.objects.end(), g.dom) == p.objects.end() ||
        std::find(p.objects.begin(), p.objects.end(), g.cod) == p.objects.end())
      throw InputError("generator with unknown endpoint: " + g.name);
    gens[g.name] = {g.dom, g.cod};
  }
  auto word_dom = [&](const Word& w) { return gens.at(w.back()).first; };
  auto word_cod = [&](const Word& w) { return gens.at(w.front()).second; };
  auto check_word = [&](const Word& w) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (gens.at(w[i]).first != gens.at(w[i + 1]).second)
        throw InputError("relation word not composable at " + w[i]);
  };
  for (const auto& r : p.relations) {
    check_word(r.lhs);
    check_word(r.rhs);
    if (r.lhs.empty() || r.rhs.empty())
      throw InputError("relation sides must be nonempty words");
    if (word_dom(r.lhs) != word_dom(r.rhs) || word_cod(r.lhs) != word_cod(r.rhs))
      throw InputError("relation sides have mismatched endpoints");
  }

  std::map<Word, Arrow> found;
  std::vector<Arrow> queue;
  for (const auto& x : p.objects) queue.push_back(Arrow{{}, x});
  for (const auto& g : p.generators) {
    Word w = normalize({g.name}, p.relations);
    queue.push_back(Arrow{w, ""});
  }
  std::vector<Arrow> arrows;
  auto add = [&](const Arrow& a) {
    if (a.word.empty()) {
      if (!found.count({FinCategory::id_name(a.obj)})) {
        found[{FinCategory::id_name(a.obj)}] = a;
        arrows.push_back(a);
        return true;
      }
      return false;
    }
    if (found.count(a.word)) return false;
    found[a.word] = a;
    arrows.push_back(a);
    return true;
  };
  for (const auto& a : queue) add(a);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Arrow> snapshot = arrows;
    for (const auto& f : snapshot)
      for (const auto& g : snapshot) {
        if (f.word.empty() || g.word.empty()) continue;  // identities are neutral
        if (word_cod(f.word) != word_dom(g.word)) continue;
        Word w = g.word;
        w.insert(w.end(), f.word.begin(), f.word.end());
        w = normalize(std::move(w), p.relations);
        if (w.empty()) throw InputError("relation collapses a composite to an identity");
        if (add(Arrow{w, ""})) grew = true;
        if (arrows.size() > budget)
          throw InputError("category not finite within budget (" + std::to_string(budget) + ")");
      }
  }

  FinCategory c;
  c.objects = FinSet::of(p.objects);
  std::vector<std::string> names;
  for (const auto& a : arrows) names.push_back(arrow_name(a));
  c.arrows = FinSet::of(names);
  for (const auto& a : arrows) {
    std::string n = arrow_name(a);
    if (a.word.empty()) {
      c.dom_[n] = a.obj;
      c.cod_[n] = a.obj;
    } else {
      c.dom_[n] = word_dom(a.word);
      c.cod_[n] = word_cod(a.word);
    }
  }
  for (const auto& f : arrows)
    for (const auto& g : arrows) {
      if (f.word.empty() || g.word.empty()) continue;
      if (word_cod(f.word) != word_dom(g.word)) continue;
      Word w = g.word;
      w.insert(w.end(), f.word.begin(), f.word.end());
      w = normalize(std::move(w), p.relations);
      c.comp_[{arrow_name(g), arrow_name(f)}] = arrow_name(found.at(w));
    }
  return c;
}

}  // namespace tf
