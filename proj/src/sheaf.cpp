#include "toposforge/sheaf.hpp"

#include <algorithm>
#include <set>

namespace tf {

namespace {

void require_same_base(const Presheaf& p, const Site& s, const char* where) {
  if (!(*p.base == *s.base)) throw InputError(std::string(where) + ": site and presheaf bases differ");
}

bool family_compatible(const Presheaf& p, const FinCategory& c, const CoveringFamily& u,
                       const std::vector<std::string>& xs) {
  for (std::size_t i = 0; i < u.arrows.size(); ++i)
    for (std::size_t j = 0; j < u.arrows.size(); ++j)
      for (const auto& d : c.objects.elems)
        for (const auto& beta : c.hom(d, c.dom(u.arrows[i])))
          for (const auto& gamma : c.hom(d, c.dom(u.arrows[j]))) {
            if (c.compose(u.arrows[i], beta) != c.compose(u.arrows[j], gamma)) continue;
            if (p.restrict(xs[i], beta) != p.restrict(xs[j], gamma)) return false;
          }
  return true;
}

std::vector<std::string> amalgamations(const Presheaf& p, const CoveringFamily& u,
                                       const std::vector<std::string>& xs) {
  std::vector<std::string> out;
  for (const auto& x : p.at(u.target).elems) {
    bool glues = true;
    for (std::size_t i = 0; i < u.arrows.size(); ++i)
      if (p.restrict(x, u.arrows[i]) != xs[i]) {
        glues = false;
        break;
      }
    if (glues) out.push_back(x);
  }
  return out;
}

template <typename Fn>
void for_each_family(const Presheaf& p, const FinCategory& c, const CoveringFamily& u,
                     const Fn& fn) {
  std::vector<std::vector<std::string>> pools;
  std::size_t combos = 1;
  for (const auto& a : u.arrows) {
    pools.push_back(p.at(c.dom(a)).elems);
    if (pools.back().empty()) return;
    combos *= pools.back().size();
    guard_budget(combos, "sheaf condition");
  }
  std::vector<std::size_t> pick(u.arrows.size(), 0);
  while (true) {
    std::vector<std::string> xs;
    for (std::size_t i = 0; i < pick.size(); ++i) xs.push_back(pools[i][pick[i]]);
    fn(xs);
    std::size_t i = 0;
    for (; i < pick.size(); ++i) {
      if (++pick[i] < pools[i].size()) break;
      pick[i] = 0;
    }
    if (i == pick.size()) break;
  }
}

std::string family_text(const CoveringFamily& u, const std::vector<std::string>& xs) {
  std::map<std::string, std::string> t;
  for (std::size_t i = 0; i < u.arrows.size(); ++i)
    t["i" + std::to_string(i) + ":" + u.arrows[i]] = xs[i];
  return tagged_label(u.canonical(), t);
}

}  // namespace

SheafVerdict is_sheaf_for(const Presheaf& p, const Site& s) {
  require_same_base(p, s, "is_sheaf_for");
  SheafVerdict v;
  const FinCategory& c = *s.base;
  for (const auto& u : s.covers)
    for_each_family(p, c, u, [&](const std::vector<std::string>& xs) {
      if (!family_compatible(p, c, u, xs)) return;
      std::vector<std::string> glue = amalgamations(p, u, xs);
      if (glue.size() == 1) return;
      v.sheaf = false;
      if (glue.empty())
        v.failures.push_back("no amalgamation for " + family_text(u, xs));
      else {
        v.separated = false;
        v.failures.push_back(std::to_string(glue.size()) + " amalgamations for " +
                             family_text(u, xs));
      }
    });
  return v;
}

bool is_separated(const Presheaf& p, const Site& s) { return is_sheaf_for(p, s).separated; }

bool is_locally_surjective(const PresheafMorphism& f, const Site& s) {
  require_same_base(f.cod, s, "is_locally_surjective");
  const FinCategory& c = *s.base;
  auto topology = sieve_topology_fixpoint(s);
  for (const auto& obj : c.objects.elems)
    for (const auto& y : f.cod.at(obj).elems) {
      bool hit = false;
      for (const auto& sv : topology.at(obj)) {
        bool all = true;
        for (const auto& g : sv) {
          const std::string& d = c.dom(g);
          std::string yg = f.cod.restrict(y, g);
          bool in_image = false;
          for (const auto& b : f.dom.at(d).elems)
            if (f.apply(d, b) == yg) {
              in_image = true;
              break;
            }
          if (!in_image) {
            all = false;
            break;
          }
        }
        if (all) {
          hit = true;
          break;
        }
      }
      if (!hit) return false;
    }
  return true;
}

namespace {

std::string sieve_text(const Sieve& sv) {
  std::string out = "{";
  for (std::size_t i = 0; i < sv.size(); ++i) {
    if (i) out += ",";
    out += sv[i];
  }
  return out + "}";
}

struct PlusElem {
  Sieve sieve;
  std::map<std::string, std::string> table;  // arrow in sieve -> section
  std::string key() const { return tagged_label(sieve_text(sieve), table); }
};

// Matching families on a sieve: assignments natural under precomposition.
std::vector<PlusElem> matching_families(const Presheaf& p, const FinCategory& c,
                                        const Sieve& sv) {
  std::vector<PlusElem> out;
  std::vector<std::vector<std::string>> pools;
  std::size_t combos = 1;
  for (const auto& g : sv) {
    pools.push_back(p.at(c.dom(g)).elems);
    if (pools.back().empty()) return out;
    combos *= pools.back().size();
    guard_budget(combos, "plus construction");
  }
  std::set<std::string> in_sieve(sv.begin(), sv.end());
  std::vector<std::size_t> pick(sv.size(), 0);
  while (true) {
    PlusElem e;
    e.sieve = sv;
    for (std::size_t i = 0; i < sv.size(); ++i) e.table[sv[i]] = pools[i][pick[i]];
    bool natural = true;
    for (const auto& g : sv) {
      for (const auto& h : c.arrows_into(c.dom(g))) {
        std::string gh = c.compose(g, h);
        if (p.restrict(e.table.at(g), h) != e.table.at(gh)) {
          natural = false;
          break;
        }
      }
      if (!natural) break;
    }
    if (natural) out.push_back(e);
    std::size_t i = 0;
    for (; i < pick.size(); ++i) {
      if (++pick[i] < pools[i].size()) break;
      pick[i] = 0;
    }
    if (i == pick.size()) break;
  }
  return out;
}

bool agree_on_intersection(const PlusElem& a, const PlusElem& b) {
  std::set<std::string> bs(b.sieve.begin(), b.sieve.end());
  for (const auto& g : a.sieve)
    if (bs.count(g) && a.table.at(g) != b.table.at(g)) return false;
  return true;
}

struct PlusResult {
  Presheaf object;
  PresheafMorphism unit;
};

PlusResult plus_construction(const Presheaf& p,
                             const std::map<std::string, std::vector<Sieve>>& topology) {
  const FinCategory& c = *p.base;
  // all matching families per object, grouped into germs by union-find
  std::map<std::string, std::vector<PlusElem>> elems;
  std::map<std::string, std::map<std::string, std::string>> class_of;  // obj -> key -> label
  std::map<std::string, std::vector<std::string>> labels;
  for (const auto& obj : c.objects.elems) {
    std::vector<PlusElem>& es = elems[obj];
    for (const auto& sv : topology.at(obj))
      for (auto& e : matching_families(p, c, sv)) es.push_back(std::move(e));
    std::vector<std::size_t> parent(es.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    for (std::size_t i = 0; i < es.size(); ++i)
      for (std::size_t j = i + 1; j < es.size(); ++j)
        if (agree_on_intersection(es[i], es[j])) parent[find(i)] = find(j);
    std::map<std::size_t, std::string> rep_label;
    for (std::size_t i = 0; i < es.size(); ++i) {
      std::size_t r = find(i);
      std::string k = es[i].key();
      auto it = rep_label.find(r);
      if (it == rep_label.end() || k < it->second) rep_label[r] = k;
    }
    std::set<std::string> distinct;
    for (std::size_t i = 0; i < es.size(); ++i) {
      class_of[obj][es[i].key()] = rep_label.at(find(i));
      distinct.insert(rep_label.at(find(i)));
    }
    labels[obj] = {distinct.begin(), distinct.end()};
  }
  // find the germ of a restricted family
  auto restricted_class = [&c, &p, &class_of](const PlusElem& e, const std::string& alpha) {
    PlusElem r;
    r.sieve = pullback_sieve(c, e.sieve, alpha);
    for (const auto& h : r.sieve) r.table[h] = e.table.at(c.compose(alpha, h));
    return class_of.at(c.dom(alpha)).at(r.key());
  };
  std::map<std::string, std::map<std::string, PlusElem>> by_key;
  for (const auto& [obj, es] : elems)
    for (const auto& e : es) by_key[obj].emplace(e.key(), e);
  PlusResult out;
  out.object = make_presheaf(p.base, labels,
                             [&by_key, &restricted_class, &c](const std::string& alpha,
                                                              const std::string& l) {
                               return restricted_class(by_key.at(c.cod(alpha)).at(l), alpha);
                             });
  out.unit = make_morphism(
      p, out.object, [&c, &p, &class_of](const std::string& obj, const std::string& x) {
        PlusElem e;
        e.sieve = maximal_sieve(c, obj);
        for (const auto& g : e.sieve) e.table[g] = p.restrict(x, g);
        return class_of.at(obj).at(e.key());
      });
  return out;
}

}  // namespace

Sheafification sheafify(const Presheaf& p, const Site& s) {
  require_same_base(p, s, "sheafify");
  auto topology = sieve_topology_fixpoint(s);
  PlusResult once = plus_construction(p, topology);
  PlusResult twice = plus_construction(once.object, topology);
  Sheafification out;
  out.sheaf = twice.object;
  out.unit = compose(twice.unit, once.unit);
  return out;
}

SheafSum sheaf_sum(const Presheaf& f, const Presheaf& g, const Site& s) {
  PresheafSum ps = presheaf_sum(f, g);
  Sheafification a = sheafify(ps.object, s);
  SheafSum out;
  out.object = a.sheaf;
  out.inl = compose(a.unit, ps.inl);
  out.inr = compose(a.unit, ps.inr);
  return out;
}

SheafQuotient sheaf_quotient(const PresheafMorphism& r1, const PresheafMorphism& r2,
                             const Site& s) {
  PresheafQuotient pq = presheaf_quotient(r1, r2);
  Sheafification a = sheafify(pq.object, s);
  SheafQuotient out;
  out.object = a.sheaf;
  out.proj = compose(a.unit, pq.proj);
  return out;
}

SameSheavesVerdict same_sheaves(const Site& s1, const Site& s2, std::size_t size_bound) {
  if (!(*s1.base == *s2.base)) throw InputError("same_sheaves: sites have different bases");
  SameSheavesVerdict v;
  for (const auto& p : enumerate_presheaves(s1.base, size_bound)) {
    bool a = is_sheaf_for(p, s1).sheaf;
    bool b = is_sheaf_for(p, s2).sheaf;
    ++v.checked;
    if (a != b) {
      v.equal = false;
      if (v.witness.empty()) {
        std::string sizes;
        for (const auto& obj : s1.base->objects.elems)
          sizes += " |P(" + obj + ")|=" + std::to_string(p.at(obj).size());
        v.witness = "sheaf for site " + std::string(a ? "1" : "2") + " only:" + sizes;
      }
    }
  }
  return v;
}

}  // namespace tf
