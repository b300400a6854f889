#include "toposforge/site.hpp"

#include <algorithm>
#include <set>

namespace tf {

std::string CoveringFamily::canonical() const {
  std::vector<std::string> sorted = arrows;
  std::sort(sorted.begin(), sorted.end());
  std::string out = target + "<={";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) out += ",";
    out += sorted[i];
  }
  return out + "}";
}

std::vector<std::size_t> Site::covers_of(const std::string& obj) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < covers.size(); ++i)
    if (covers[i].target == obj) out.push_back(i);
  return out;
}

SiteVerdict validate_site(const Site& s) {
  SiteVerdict v;
  for (std::size_t i = 0; i < s.covers.size(); ++i) {
    const CoveringFamily& u = s.covers[i];
    if (!s.base->objects.contains(u.target)) {
      v.violations.push_back("cover " + std::to_string(i) + ": unknown target " + u.target);
      continue;
    }
    for (const auto& a : u.arrows) {
      if (!s.base->arrows.contains(a))
        v.violations.push_back("cover " + std::to_string(i) + ": unknown arrow " + a);
      else if (s.base->cod(a) != u.target)
        v.violations.push_back("cover " + std::to_string(i) + ": arrow " + a +
                               " has codomain " + s.base->cod(a) + ", expected " + u.target);
    }
  }
  v.ok = v.violations.empty();
  return v;
}

SiteSquare site_square(const Site& s) {
  std::vector<std::string> cov_labels, branch_labels;
  std::map<std::string, std::string> phi_map, m_map, target_map;
  for (std::size_t i = 0; i < s.covers.size(); ++i) {
    std::string ul = "U" + std::to_string(i);
    cov_labels.push_back(ul);
    target_map[ul] = s.covers[i].target;
    for (std::size_t k = 0; k < s.covers[i].arrows.size(); ++k) {
      std::string bl = ul + ".i" + std::to_string(k);
      branch_labels.push_back(bl);
      phi_map[bl] = ul;
      m_map[bl] = s.covers[i].arrows[k];
    }
  }
  SiteSquare sq;
  sq.cov = FinSet::of(cov_labels);
  sq.cov_u = FinSet::of(branch_labels);
  sq.phi = FinFunction::from_map(sq.cov_u, sq.cov, phi_map);
  sq.m = FinFunction::from_map(sq.cov_u, s.base->arrows, m_map);
  sq.target = FinFunction::from_map(sq.cov, s.base->objects, target_map);
  return sq;
}

bool factors_through(const FinCategory& c, const std::string& f, const std::string& through) {
  if (c.cod(f) != c.cod(through)) return false;
  for (const auto& delta : c.hom(c.dom(f), c.dom(through)))
    if (c.compose(through, delta) == f) return true;
  return false;
}

namespace {

// Does some cover of D refine U pulled back along f, i.e. every arrow of the
// refining family composes with f into a factor of some arrow of U?
bool refining_cover(const Site& s, const CoveringFamily& u, const std::string& f,
                    std::size_t* found) {
  const FinCategory& c = *s.base;
  const std::string& d = c.dom(f);
  for (std::size_t vi : s.covers_of(d)) {
    bool all = true;
    for (const auto& beta : s.covers[vi].arrows) {
      std::string fb = c.compose(f, beta);
      bool some = false;
      for (const auto& alpha : u.arrows)
        if (factors_through(c, fb, alpha)) {
          some = true;
          break;
        }
      if (!some) {
        all = false;
        break;
      }
    }
    if (all) {
      if (found) *found = vi;
      return true;
    }
  }
  return false;
}

}  // namespace

SiteVerdict check_C(const Site& s) {
  SiteVerdict v;
  for (const auto& u : s.covers)
    for (const auto& f : s.base->arrows_into(u.target))
      if (!refining_cover(s, u, f, nullptr))
        v.violations.push_back("no cover of " + s.base->dom(f) + " refines " + u.canonical() +
                               " along " + f);
  v.ok = v.violations.empty();
  return v;
}

StrongChoice check_strong_C(const Site& s) {
  StrongChoice sc;
  for (const auto& u : s.covers)
    for (const auto& f : s.base->arrows_into(u.target)) {
      std::size_t vi = 0;
      if (refining_cover(s, u, f, &vi))
        sc.choice[u.canonical() + "|" + f] = s.covers[vi].canonical();
      else
        sc.failures.push_back("no cover of " + s.base->dom(f) + " refines " + u.canonical() +
                              " along " + f);
    }
  sc.ok = sc.failures.empty();
  return sc;
}

SiteVerdict check_M(const Site& s) {
  SiteVerdict v;
  for (const auto& obj : s.base->objects.elems) {
    bool found = false;
    for (std::size_t i : s.covers_of(obj))
      if (std::find(s.covers[i].arrows.begin(), s.covers[i].arrows.end(), s.base->id(obj)) !=
          s.covers[i].arrows.end()) {
        found = true;
        break;
      }
    if (!found) v.violations.push_back("no cover of " + obj + " contains " + s.base->id(obj));
  }
  v.ok = v.violations.empty();
  return v;
}

SiteVerdict check_L(const Site& s) {
  SiteVerdict v;
  const FinCategory& c = *s.base;
  for (const auto& u : s.covers) {
    // a cover of the domain of each arrow of u, ranging over all combinations
    std::vector<std::vector<std::size_t>> options;
    bool vacuous = false;
    std::size_t combos = 1;
    for (const auto& alpha : u.arrows) {
      options.push_back(s.covers_of(c.dom(alpha)));
      if (options.back().empty()) {
        vacuous = true;
        break;
      }
      combos *= options.back().size();
      guard_budget(combos, "check_L");
    }
    if (vacuous) continue;
    std::vector<std::size_t> pick(u.arrows.size(), 0);
    while (true) {
      std::vector<std::string> composites;
      for (std::size_t i = 0; i < u.arrows.size(); ++i)
        for (const auto& beta : s.covers[options[i][pick[i]]].arrows)
          composites.push_back(c.compose(u.arrows[i], beta));
      bool found = false;
      for (std::size_t gi : s.covers_of(u.target)) {
        bool all = true;
        for (const auto& gamma : s.covers[gi].arrows) {
          bool some = false;
          for (const auto& comp : composites)
            if (factors_through(c, gamma, comp)) {
              some = true;
              break;
            }
          if (!some) {
            all = false;
            break;
          }
        }
        if (all) {
          found = true;
          break;
        }
      }
      if (!found) {
        std::string detail = "no cover of " + u.target + " factors through the composites of " +
                             u.canonical() + " with refinements";
        for (std::size_t i = 0; i < pick.size(); ++i)
          detail += " " + s.covers[options[i][pick[i]]].canonical();
        v.violations.push_back(detail);
      }
      std::size_t i = 0;
      for (; i < pick.size(); ++i) {
        if (++pick[i] < options[i].size()) break;
        pick[i] = 0;
      }
      if (i == pick.size()) break;
    }
  }
  v.ok = v.violations.empty();
  return v;
}

CollectionSpanVerdict is_collection_span(const FinFunction& g, const FinFunction& h,
                                         const FinFunction& over, int bound,
                                         bool exclude_sections) {
  if (g.dom != h.dom) throw InputError("is_collection_span: span legs disagree on their domain");
  if (over.dom != g.cod)
    throw InputError("is_collection_span: relativization must start at the span base");
  CollectionSpanVerdict v;
  for (const auto& cv : g.cod.elems) {
    FinSet dc = FinSet::of(g.fiber(cv));
    std::size_t fb = bound < 0 ? dc.size() + 2 : static_cast<std::size_t>(bound);
    v.cover_bound = std::max(v.cover_bound, fb);
    for (std::size_t fs = 0; fs <= fb; ++fs)
      for (const auto& f : all_surjections(FinSet::canonical(fs), dc)) {
        bool covered = false;
        for (const auto& cv2 : g.cod.elems) {
          if (over(cv2) != over(cv)) continue;
          FinSet dc2 = FinSet::of(g.fiber(cv2));
          for (const auto& p : all_functions(dc2, dc)) {
            if (!p.is_surjective()) continue;
            // q with fq = p exists elementwise since f is onto; q is a section
            // of f exactly when p is the identity
            if (exclude_sections && dc2 == dc && p == FinFunction::identity(dc)) continue;
            bool over_b = true;
            for (const auto& d : dc2.elems)
              if (h(p(d)) != h(d)) {
                over_b = false;
                break;
              }
            if (!over_b) continue;
            // factor p through f elementwise; f is onto, so fibers are nonempty
            covered = true;
            break;
          }
          if (covered) break;
        }
        if (!covered) {
          v.holds = false;
          if (v.counterexample.empty())
            v.counterexample = "fiber over " + cv + " with cover " + f.describe();
        }
      }
  }
  return v;
}

CollectionSpanVerdict is_collection_site(const Site& s) {
  SiteSquare sq = site_square(s);
  return is_collection_span(sq.phi, sq.m, sq.target);
}

bool has_small_covers(const Site& s, const std::function<bool(const FinFunction&)>& small) {
  return small(site_square(s).phi);
}

std::string CovTree::describe() const {
  if (leaf) return "*";
  std::string out = "sup" + std::to_string(cover) + "(";
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) out += ",";
    out += children[i].describe();
  }
  return out + ")";
}

CoveringFamily flatten_tree(const Site& s, const CovTree& t) {
  CoveringFamily fam;
  fam.target = t.root;
  if (t.leaf) {
    fam.arrows.push_back(s.base->id(t.root));
    return fam;
  }
  const CoveringFamily& u = s.covers[t.cover];
  for (std::size_t i = 0; i < u.arrows.size(); ++i)
    for (const auto& a : flatten_tree(s, t.children[i]).arrows)
      fam.arrows.push_back(s.base->compose(u.arrows[i], a));
  return fam;
}

namespace {

std::vector<CovTree> enumerate_trees(const Site& s, const std::string& obj, int depth) {
  std::vector<CovTree> out;
  CovTree leaf;
  leaf.root = obj;
  out.push_back(leaf);
  if (depth <= 1) return out;
  for (std::size_t ci : s.covers_of(obj)) {
    const CoveringFamily& u = s.covers[ci];
    std::vector<std::vector<CovTree>> child_options;
    std::size_t combos = 1;
    for (const auto& alpha : u.arrows) {
      child_options.push_back(enumerate_trees(s, s.base->dom(alpha), depth - 1));
      combos *= child_options.back().size();
      guard_budget(combos, "generate_grothendieck");
    }
    std::vector<std::size_t> pick(u.arrows.size(), 0);
    while (true) {
      CovTree t;
      t.root = obj;
      t.leaf = false;
      t.cover = ci;
      for (std::size_t i = 0; i < pick.size(); ++i)
        t.children.push_back(child_options[i][pick[i]]);
      out.push_back(t);
      guard_budget(out.size(), "generate_grothendieck");
      std::size_t i = 0;
      for (; i < pick.size(); ++i) {
        if (++pick[i] < child_options[i].size()) break;
        pick[i] = 0;
      }
      if (i == pick.size()) break;
    }
  }
  return out;
}

}  // namespace

GeneratedSite generate_grothendieck(const Site& s, int depth) {
  if (depth < 1) throw InputError("generate_grothendieck: depth must be >= 1");
  GeneratedSite out;
  out.site.base = s.base;
  std::map<std::string, CoveringFamily> by_canonical;
  for (const auto& obj : s.base->objects.elems)
    for (const auto& t : enumerate_trees(s, obj, depth)) {
      CoveringFamily fam = flatten_tree(s, t);
      std::string key = fam.canonical();
      by_canonical.emplace(key, fam);
      out.registry[key].push_back(t);
    }
  for (const auto& [key, fam] : by_canonical) out.site.covers.push_back(fam);
  return out;
}

Sieve maximal_sieve(const FinCategory& c, const std::string& obj) {
  return c.arrows_into(obj);
}

Sieve generated_sieve(const FinCategory& c, const CoveringFamily& u) {
  std::set<std::string> arrows;
  for (const auto& f : c.arrows_into(u.target))
    for (const auto& alpha : u.arrows)
      if (factors_through(c, f, alpha)) {
        arrows.insert(f);
        break;
      }
  return Sieve(arrows.begin(), arrows.end());
}

Sieve pullback_sieve(const FinCategory& c, const Sieve& s, const std::string& f) {
  std::set<std::string> in(s.begin(), s.end());
  Sieve out;
  for (const auto& g : c.arrows_into(c.dom(f)))
    if (in.count(c.compose(f, g))) out.push_back(g);
  return out;
}

std::vector<Sieve> all_sieves(const FinCategory& c, const std::string& obj) {
  std::vector<std::string> into = c.arrows_into(obj);
  guard_budget(std::size_t(1) << std::min<std::size_t>(into.size(), 40), "all_sieves");
  std::vector<Sieve> out;
  for (std::size_t mask = 0; mask < (std::size_t(1) << into.size()); ++mask) {
    std::set<std::string> sub;
    for (std::size_t i = 0; i < into.size(); ++i)
      if (mask & (std::size_t(1) << i)) sub.insert(into[i]);
    bool closed = true;
    for (const auto& f : sub)
      for (const auto& g : c.arrows_into(c.dom(f)))
        if (!sub.count(c.compose(f, g))) {
          closed = false;
          break;
        }
    if (closed) out.emplace_back(sub.begin(), sub.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::map<std::string, std::vector<Sieve>> sieve_topology_fixpoint(const Site& s) {
  const FinCategory& c = *s.base;
  std::map<std::string, std::set<Sieve>> covering;
  std::map<std::string, std::vector<Sieve>> lattice;
  for (const auto& obj : c.objects.elems) {
    covering[obj].insert(maximal_sieve(c, obj));
    lattice[obj] = all_sieves(c, obj);
  }
  for (const auto& u : s.covers) covering[u.target].insert(generated_sieve(c, u));
  bool grew = true;
  while (grew) {
    grew = false;
    // pullback stability
    for (const auto& obj : c.objects.elems) {
      std::vector<Sieve> current(covering[obj].begin(), covering[obj].end());
      for (const auto& sv : current)
        for (const auto& f : c.arrows_into(obj))
          if (covering[c.dom(f)].insert(pullback_sieve(c, sv, f)).second) grew = true;
    }
    // local character
    for (const auto& obj : c.objects.elems)
      for (const auto& sv : lattice[obj]) {
        if (covering[obj].count(sv)) continue;
        for (const auto& r : covering[obj]) {
          bool local = true;
          for (const auto& f : r)
            if (!covering[c.dom(f)].count(pullback_sieve(c, sv, f))) {
              local = false;
              break;
            }
          if (local) {
            covering[obj].insert(sv);
            grew = true;
            break;
          }
        }
      }
  }
  std::map<std::string, std::vector<Sieve>> out;
  for (const auto& [obj, svs] : covering) out[obj] = {svs.begin(), svs.end()};
  return out;
}

}  // namespace tf
