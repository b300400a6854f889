#include "toposforge/wpresheaf.hpp"

#include <algorithm>
#include <set>

namespace tf {

std::string WPresheafContext::head_label(const std::string& a, const std::string& obj) {
  return underlying_label(a, obj);
}

WPresheafContext::WPresheafContext(PresheafMorphism f) : f_(std::move(f)), sig_(FinFunction{}) {
  CatRef base = f_.dom.base;
  const Presheaf& a_psh = f_.cod;
  const Presheaf& b_psh = f_.dom;
  std::vector<std::string> dom_labels;
  std::map<std::string, std::string> g_map;
  std::vector<std::string> cod_labels;
  for (const auto& c : base->objects.elems)
    for (const auto& a : a_psh.at(c).elems) {
      std::string head = head_label(a, c);
      cod_labels.push_back(head);
      head_parts_[head] = {a, c};
      fibers_.emplace(std::make_pair(c, a), fiber_presheaf(f_, c, a));
      for (const auto& d : base->objects.elems)
        for (const auto& beta : base->hom(d, c))
          for (const auto& b : b_psh.at(d).elems)
            if (f_.apply(d, b) == a_psh.restrict(a, beta)) {
              std::string fib = underlying_label(pair_label(beta, b), d);
              std::string l = pair_label(head, fib);
              dom_labels.push_back(l);
              g_map[l] = head;
              child_parts_[l] = ChildKey{c, a, d, beta, b};
            }
    }
  FinSet gd = FinSet::of(dom_labels);
  FinSet gc = FinSet::of(cod_labels);
  g_ = FinFunction::from_map(gd, gc, g_map);
  sig_ = Signature(g_);
}

const FiberPresheaf& WPresheafContext::fiber(const std::string& obj, const std::string& a) const {
  return fibers_.at({obj, a});
}

std::string WPresheafContext::root(const WTree& t) const {
  return head_parts_.at(t.head).second;
}

std::string WPresheafContext::head_elem(const WTree& t) const {
  return head_parts_.at(t.head).first;
}

WTree WPresheafContext::restrict_term(const WTree& t, const std::string& alpha) const {
  CatRef base = this->base();
  const std::string& c = root(t);
  if (base->cod(alpha) != c)
    throw InputError("restrict_term: arrow codomain " + base->cod(alpha) +
                     " does not match term root " + c);
  const std::string& cp = base->dom(alpha);
  std::string a2 = f_.cod.restrict(head_elem(t), alpha);
  WTree out;
  out.head = head_label(a2, cp);
  // children of T . alpha at (beta', b) are the children of T at (alpha beta', b)
  for (const auto& [key, ck] : child_parts_) {
    if (ck.obj != cp || ck.a != a2) continue;
    std::string orig = pair_label(t.head, underlying_label(
                                              pair_label(base->compose(alpha, ck.beta), ck.b),
                                              ck.child_obj));
    auto it = t.children.find(orig);
    if (it == t.children.end())
      throw InputError("restrict_term: term lacks child at " + orig);
    out.children[key] = it->second;
  }
  return out;
}

bool WPresheafContext::is_composable(const WTree& t) const {
  for (const auto& [key, child] : t.children) {
    auto it = child_parts_.find(key);
    if (it == child_parts_.end()) return false;
    if (root(child) != it->second.child_obj) return false;
    if (!is_composable(child)) return false;
  }
  return true;
}

bool WPresheafContext::is_natural(const WTree& t) const {
  if (!is_composable(t)) return false;
  CatRef base = this->base();
  for (const auto& [key, child] : t.children) {
    const ChildKey& ck = child_parts_.at(key);
    // for every gamma: E -> D, t(beta, b) . gamma = t(beta gamma, b . gamma)
    for (const auto& gamma : base->arrows.elems) {
      if (base->cod(gamma) != ck.child_obj) continue;
      WTree lhs = restrict_term(child, gamma);
      std::string other = pair_label(
          t.head, underlying_label(pair_label(base->compose(ck.beta, gamma),
                                              f_.dom.restrict(ck.b, gamma)),
                                   base->dom(gamma)));
      auto it = t.children.find(other);
      if (it == t.children.end()) return false;
      if (!(lhs == it->second)) return false;
    }
    if (!is_natural(child)) return false;
  }
  return true;
}

namespace {

// Presheaf of terms from per-object label sets, with restrict_term as action.
Presheaf terms_presheaf(const WPresheafContext& ctx,
                        const std::map<std::string, std::vector<std::string>>& labels,
                        const std::map<std::string, WTree>& term_of) {
  return make_presheaf(ctx.base(), labels,
                       [&ctx, &term_of](const std::string& alpha, const std::string& l) {
                         return ctx.restrict_term(term_of.at(l), alpha).label();
                       });
}

}  // namespace

WPresheafResult wtype_presheaf(const WPresheafContext& ctx, int depth) {
  if (depth < 1) throw InputError("wtype_presheaf: depth must be >= 1");
  CatRef base = ctx.base();
  const Presheaf& a_psh = ctx.f().cod;
  std::map<std::string, std::vector<std::string>> labels;  // cumulative, per object
  std::map<std::string, WTree> term_of;
  std::size_t prev_level_total = 0;
  bool structure_bijective = true;
  for (int h = 1; h <= depth; ++h) {
    Presheaf prev = terms_presheaf(ctx, labels, term_of);
    std::map<std::string, std::vector<std::string>> next;
    std::map<std::string, WTree> next_terms = term_of;
    std::size_t level_count = 0;
    for (const auto& c : base->objects.elems) {
      std::set<std::string> seen;
      for (const auto& a : a_psh.at(c).elems) {
        const FiberPresheaf& ba = ctx.fiber(c, a);
        for (const auto& t : enumerate_nat(ba.object, prev)) {
          WTree tree;
          tree.head = WPresheafContext::head_label(a, c);
          for (const auto& d : base->objects.elems)
            for (const auto& fe : ba.object.at(d).elems)
              tree.children[pair_label(tree.head, underlying_label(fe, d))] =
                  term_of.at(t.apply(d, fe));
          std::string l = tree.label();
          ++level_count;
          if (seen.insert(l).second) {
            next[c].push_back(l);
            next_terms.emplace(l, std::move(tree));
          } else {
            structure_bijective = false;  // S failed injectivity at this level
          }
        }
      }
      std::sort(next[c].begin(), next[c].end());
    }
    labels = std::move(next);
    term_of = std::move(next_terms);
    prev_level_total = level_count;
    guard_budget(prev_level_total, "wtype_presheaf");
  }
  WPresheafResult res;
  res.term_of = term_of;
  res.w = terms_presheaf(ctx, labels, term_of);
  // S is a bijection P_f(W_{depth-1}) -> W_depth when no label collided and
  // the counts match (surjectivity holds by construction).
  res.structure_bijective = structure_bijective;
  return res;
}

PolyPresheaf polynomial_presheaf(const WPresheafContext& ctx, const Presheaf& x) {
  CatRef base = ctx.base();
  const Presheaf& a_psh = ctx.f().cod;
  struct Elem {
    std::string a;
    PresheafMorphism t;
  };
  std::map<std::string, std::vector<std::string>> v;
  std::map<std::string, std::map<std::string, Elem>> elems;
  for (const auto& c : base->objects.elems)
    for (const auto& a : a_psh.at(c).elems) {
      const FiberPresheaf& ba = ctx.fiber(c, a);
      for (const auto& t : enumerate_nat(ba.object, x)) {
        std::map<std::string, std::string> table;
        for (const auto& d : base->objects.elems)
          for (const auto& fe : ba.object.at(d).elems)
            table[pair_label(WPresheafContext::head_label(a, c), underlying_label(fe, d))] =
                t.apply(d, fe);
        std::string l = tagged_label(WPresheafContext::head_label(a, c), table);
        v[c].push_back(l);
        elems[c].emplace(l, Elem{a, t});
      }
    }
  Presheaf object = make_presheaf(base, v, [&ctx, base, &elems](const std::string& alpha,
                                                                const std::string& l) {
    const std::string& c = base->cod(alpha);
    const std::string& d = base->dom(alpha);
    const Elem& e = elems.at(c).at(l);
    std::string a2 = ctx.f().cod.restrict(e.a, alpha);
    const FiberPresheaf& ba2 = ctx.fiber(d, a2);
    std::string head2 = WPresheafContext::head_label(a2, d);
    std::map<std::string, std::string> table;
    for (const auto& eobj : base->objects.elems)
      for (const auto& fe : ba2.object.at(eobj).elems) {
        // fe = (beta', b): evaluate the original t at (alpha beta', b)
        std::string beta = fe.substr(1, fe.find(',') - 1);
        std::string b = fe.substr(fe.find(',') + 1, fe.size() - fe.find(',') - 2);
        std::string src = pair_label(base->compose(alpha, beta), b);
        table[pair_label(head2, underlying_label(fe, eobj))] = e.t.apply(eobj, src);
      }
    return tagged_label(head2, table);
  });
  PresheafMorphism to_a = make_morphism(object, a_psh, [&elems](const std::string& o,
                                                                const std::string& l) {
    return elems.at(o).at(l).a;
  });
  return PolyPresheaf{object, to_a};
}

Presheaf kleene_iterate(const WPresheafContext& ctx, int depth) {
  Presheaf x = empty_presheaf(ctx.base());
  for (int i = 0; i < depth; ++i) x = polynomial_presheaf(ctx, x).object;
  return x;
}

MinimalityVerdict check_minimality(const WPresheafContext& ctx,
                                   const std::map<std::string, std::vector<std::string>>& candidate,
                                   int depth) {
  WPresheafResult w = wtype_presheaf(ctx, depth);
  CatRef base = ctx.base();
  const Presheaf& a_psh = ctx.f().cod;

  // One step of S applied to a label subset; only trees within the height cap
  // are reported.
  auto step = [&](const std::map<std::string, std::vector<std::string>>& cur) {
    std::map<std::string, std::set<std::string>> out;
    Presheaf prev = terms_presheaf(ctx, cur, w.term_of);
    for (const auto& c : base->objects.elems)
      for (const auto& a : a_psh.at(c).elems) {
        const FiberPresheaf& ba = ctx.fiber(c, a);
        for (const auto& t : enumerate_nat(ba.object, prev)) {
          WTree tree;
          tree.head = WPresheafContext::head_label(a, c);
          for (const auto& d : base->objects.elems)
            for (const auto& fe : ba.object.at(d).elems)
              tree.children[pair_label(tree.head, underlying_label(fe, d))] =
                  w.term_of.at(t.apply(d, fe));
          if (static_cast<int>(tree.height()) > depth) continue;
          out[c].insert(tree.label());
        }
      }
    return out;
  };

  MinimalityVerdict verdict;

  // least S-closed collection (closure of the empty subpresheaf)
  std::map<std::string, std::set<std::string>> closure;
  bool grew = true;
  while (grew) {
    grew = false;
    std::map<std::string, std::vector<std::string>> cur;
    for (const auto& obj : base->objects.elems)
      cur[obj] = {closure[obj].begin(), closure[obj].end()};
    for (auto& [obj, added] : step(cur))
      for (const auto& l : added)
        if (closure[obj].insert(l).second) grew = true;
  }
  bool closure_is_all = true;
  for (const auto& obj : base->objects.elems)
    if (closure[obj].size() != w.w.at(obj).size()) closure_is_all = false;
  verdict.minimal = closure_is_all;

  // candidate: proper S-closed subpresheaf of W?
  std::map<std::string, std::set<std::string>> cand;
  for (const auto& obj : base->objects.elems) cand[obj];
  for (const auto& [obj, ls] : candidate) cand[obj] = {ls.begin(), ls.end()};
  bool proper = false;
  for (const auto& obj : base->objects.elems) {
    for (const auto& l : cand[obj])
      if (!w.term_of.count(l)) {
        verdict.detail = "candidate label " + l + " is not a term of W";
        return verdict;
      }
    if (cand[obj].size() < w.w.at(obj).size()) proper = true;
  }
  std::map<std::string, std::vector<std::string>> cand_labels;
  for (const auto& obj : base->objects.elems)
    cand_labels[obj] = {cand[obj].begin(), cand[obj].end()};
  bool closed = true;
  try {
    // subpresheaf check: restrictions must stay inside the candidate
    terms_presheaf(ctx, cand_labels, w.term_of);
  } catch (const InputError&) {
    closed = false;
    verdict.detail = "candidate is not closed under restriction";
  }
  if (closed)
    for (const auto& [obj, produced] : step(cand_labels))
      for (const auto& l : produced)
        if (!cand[obj].count(l)) {
          closed = false;
          if (verdict.detail.empty())
            verdict.detail = "applying the structure map leaves the candidate: " + l + " at " + obj;
          break;
        }
  verdict.proper_subalgebra = closed && proper;
  return verdict;
}

}  // namespace tf
