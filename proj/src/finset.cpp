#include "toposforge/finset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace tf {

FinSet FinSet::of(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  auto dup = std::adjacent_find(labels.begin(), labels.end());
  if (dup != labels.end()) throw InputError("duplicate element label: " + *dup);
  FinSet s;
  s.elems = std::move(labels);
  return s;
}

FinSet FinSet::canonical(std::size_t n, const std::string& prefix) {
  std::vector<std::string> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i));
  return FinSet::of(std::move(v));
}

bool FinSet::contains(const std::string& x) const {
  return std::binary_search(elems.begin(), elems.end(), x);
}

int FinSet::index(const std::string& x) const {
  auto it = std::lower_bound(elems.begin(), elems.end(), x);
  if (it == elems.end() || *it != x) throw InputError("element not in set: " + x);
  return static_cast<int>(it - elems.begin());
}

FinFunction::FinFunction(FinSet d, FinSet c, std::vector<int> t)
    : dom(std::move(d)), cod(std::move(c)), table(std::move(t)) {
  if (table.size() != dom.size()) throw InputError("function table size mismatch");
  for (int v : table)
    if (v < 0 || static_cast<std::size_t>(v) >= cod.size())
      throw InputError("function table value out of range");
}

FinFunction FinFunction::from_map(FinSet d, FinSet c, const std::map<std::string, std::string>& m) {
  std::vector<int> t(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto it = m.find(d.elems[i]);
    if (it == m.end()) throw InputError("function undefined on element: " + d.elems[i]);
    t[i] = c.index(it->second);
  }
  if (m.size() != d.size())
    for (const auto& [k, v] : m)
      if (!d.contains(k)) throw InputError("function table key not in domain: " + k);
  return FinFunction(std::move(d), std::move(c), std::move(t));
}

FinFunction FinFunction::identity(const FinSet& s) {
  std::vector<int> t(s.size());
  std::iota(t.begin(), t.end(), 0);
  return FinFunction(s, s, std::move(t));
}

FinFunction FinFunction::constant(const FinSet& d, const FinSet& c, const std::string& value) {
  std::vector<int> t(d.size(), d.size() ? c.index(value) : 0);
  return FinFunction(d, c, std::move(t));
}

const std::string& FinFunction::operator()(const std::string& x) const {
  return cod.elems[static_cast<std::size_t>(table[static_cast<std::size_t>(dom.index(x))])];
}

bool FinFunction::is_injective() const {
  std::set<int> seen(table.begin(), table.end());
  return seen.size() == table.size();
}

bool FinFunction::is_surjective() const {
  std::set<int> seen(table.begin(), table.end());
  return seen.size() == cod.size();
}

std::vector<std::size_t> FinFunction::fiber_sizes() const {
  std::vector<std::size_t> sizes(cod.size(), 0);
  for (int v : table) ++sizes[static_cast<std::size_t>(v)];
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

std::vector<std::string> FinFunction::fiber(const std::string& a) const {
  int ai = cod.index(a);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i] == ai) out.push_back(dom.elems[i]);
  return out;
}

std::string FinFunction::describe() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (i) os << ",";
    os << dom.elems[i] << "->" << cod.elems[static_cast<std::size_t>(table[i])];
  }
  os << "}";
  return os.str();
}

FinFunction compose(const FinFunction& g, const FinFunction& f) {
  if (f.cod != g.dom) throw InputError("compose: cod(f) != dom(g)");
  std::vector<int> t(f.table.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    t[i] = g.table[static_cast<std::size_t>(f.table[i])];
  return FinFunction(f.dom, g.cod, std::move(t));
}

std::string pair_label(const std::string& a, const std::string& b) {
  return "(" + a + "," + b + ")";
}

std::string table_label(const std::map<std::string, std::string>& t) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [k, v] : t) {
    if (!first) os << ",";
    first = false;
    os << k << "->" << v;
  }
  os << "}";
  return os.str();
}

std::string tagged_label(const std::string& a, const std::map<std::string, std::string>& t) {
  return "(" + a + "," + table_label(t) + ")";
}

Pullback pullback(const FinFunction& f, const FinFunction& g) {
  if (f.cod != g.cod) throw InputError("pullback: codomain mismatch");
  std::vector<std::string> labels;
  std::map<std::string, std::pair<std::string, std::string>> parts;
  for (const auto& b : f.dom.elems)
    for (const auto& c : g.dom.elems)
      if (f(b) == g(c)) {
        std::string l = pair_label(b, c);
        labels.push_back(l);
        parts[l] = {b, c};
      }
  FinSet obj = FinSet::of(std::move(labels));
  std::map<std::string, std::string> m1, m2;
  for (const auto& [l, p] : parts) {
    m1[l] = p.first;
    m2[l] = p.second;
  }
  return Pullback{obj, FinFunction::from_map(obj, f.dom, m1), FinFunction::from_map(obj, g.dom, m2)};
}

ImageFactorization image_factorization(const FinFunction& f) {
  std::set<std::string> range;
  for (int v : f.table) range.insert(f.cod.elems[static_cast<std::size_t>(v)]);
  FinSet image = FinSet::of({range.begin(), range.end()});
  std::map<std::string, std::string> cov, inc;
  for (const auto& x : f.dom.elems) cov[x] = f(x);
  for (const auto& y : image.elems) inc[y] = y;
  return ImageFactorization{FinFunction::from_map(f.dom, image, cov),
                            FinFunction::from_map(image, f.cod, inc)};
}

bool is_cover(const FinFunction& f) { return f.is_surjective(); }

bool is_quasi_pullback(const Square& sq) {
  if (sq.top.dom != sq.left.dom || sq.top.cod != sq.right.dom || sq.left.cod != sq.bottom.dom ||
      sq.right.cod != sq.bottom.cod)
    throw InputError("square: boundary mismatch");
  if (compose(sq.right, sq.top) != compose(sq.bottom, sq.left))
    throw InputError("square does not commute");
  Pullback pb = pullback(sq.right, sq.bottom);
  std::set<std::string> hit;
  for (const auto& d : sq.top.dom.elems) hit.insert(pair_label(sq.top(d), sq.left(d)));
  return hit.size() == pb.object.size();
}

namespace {

int find_root(std::vector<int>& parent, int i) {
  while (parent[static_cast<std::size_t>(i)] != i) {
    parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
    i = parent[static_cast<std::size_t>(i)];
  }
  return i;
}

}  // namespace

Quotient quotient(const FinFunction& r1, const FinFunction& r2) {
  if (r1.dom != r2.dom || r1.cod != r2.cod)
    throw InputError("quotient: (r1, r2) must be a parallel pair R => X");
  const FinSet& x = r1.cod;
  // joint monicity
  std::set<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < r1.table.size(); ++i)
    if (!pairs.insert({r1.table[i], r2.table[i]}).second)
      throw InputError("quotient: relation not jointly monic");
  auto related = [&](int a, int b) { return pairs.count({a, b}) > 0; };
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!related(static_cast<int>(i), static_cast<int>(i)))
      throw InputError("quotient: relation not reflexive at " + x.elems[i]);
  for (const auto& [a, b] : pairs)
    if (!related(b, a))
      throw InputError("quotient: relation not symmetric at (" + x.elems[static_cast<std::size_t>(a)] +
                       "," + x.elems[static_cast<std::size_t>(b)] + ")");
  for (const auto& [a, b] : pairs)
    for (const auto& [c, d] : pairs)
      if (b == c && !related(a, d))
        throw InputError("quotient: relation not transitive at (" +
                         x.elems[static_cast<std::size_t>(a)] + "," +
                         x.elems[static_cast<std::size_t>(d)] + ")");
  // union-find into classes
  std::vector<int> parent(x.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& [a, b] : pairs) {
    int ra = find_root(parent, a), rb = find_root(parent, b);
    if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
  }
  std::map<int, std::string> rep;  // class root -> least label (roots are least indices)
  for (std::size_t i = 0; i < x.size(); ++i) {
    int r = find_root(parent, static_cast<int>(i));
    if (!rep.count(r)) rep[r] = x.elems[static_cast<std::size_t>(r)];
  }
  std::vector<std::string> classes;
  for (const auto& [_, l] : rep) classes.push_back(l);
  FinSet obj = FinSet::of(std::move(classes));
  std::map<std::string, std::string> proj;
  for (std::size_t i = 0; i < x.size(); ++i)
    proj[x.elems[i]] = rep[find_root(parent, static_cast<int>(i))];
  return Quotient{obj, FinFunction::from_map(x, obj, proj)};
}

std::pair<FinFunction, FinFunction> equivalence_closure(const FinFunction& r1,
                                                        const FinFunction& r2) {
  if (r1.dom != r2.dom || r1.cod != r2.cod)
    throw InputError("equivalence_closure: parallel pair expected");
  const FinSet& x = r1.cod;
  std::set<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < r1.table.size(); ++i) pairs.insert({r1.table[i], r2.table[i]});
  for (std::size_t i = 0; i < x.size(); ++i) pairs.insert({static_cast<int>(i), static_cast<int>(i)});
  bool changed = true;
  while (changed) {
    changed = false;
    std::set<std::pair<int, int>> next = pairs;
    for (const auto& [a, b] : pairs) next.insert({b, a});
    for (const auto& [a, b] : next)
      for (const auto& [c, d] : next)
        if (b == c) next.insert({a, d});
    changed = next != pairs;
    pairs = std::move(next);
  }
  std::vector<std::string> labels;
  std::map<std::string, std::pair<std::string, std::string>> parts;
  for (const auto& [a, b] : pairs) {
    const std::string& la = x.elems[static_cast<std::size_t>(a)];
    const std::string& lb = x.elems[static_cast<std::size_t>(b)];
    std::string l = pair_label(la, lb);
    labels.push_back(l);
    parts[l] = {la, lb};
  }
  FinSet r = FinSet::of(std::move(labels));
  std::map<std::string, std::string> m1, m2;
  for (const auto& [l, p] : parts) {
    m1[l] = p.first;
    m2[l] = p.second;
  }
  return {FinFunction::from_map(r, x, m1), FinFunction::from_map(r, x, m2)};
}

Sum sum(const FinSet& x, const FinSet& y) {
  std::vector<std::string> labels;
  std::map<std::string, std::string> il, ir;
  for (const auto& a : x.elems) {
    std::string l = "inl(" + a + ")";
    labels.push_back(l);
    il[l] = a;
  }
  for (const auto& b : y.elems) {
    std::string l = "inr(" + b + ")";
    labels.push_back(l);
    ir[l] = b;
  }
  FinSet obj = FinSet::of(std::move(labels));
  std::map<std::string, std::string> into_l, into_r;
  for (const auto& a : x.elems) into_l[a] = "inl(" + a + ")";
  for (const auto& b : y.elems) into_r[b] = "inr(" + b + ")";
  return Sum{obj, FinFunction::from_map(x, obj, into_l), FinFunction::from_map(y, obj, into_r)};
}

FinFunction sum_map(const FinFunction& f, const FinFunction& g) {
  Sum d = sum(f.dom, g.dom);
  Sum c = sum(f.cod, g.cod);
  std::map<std::string, std::string> m;
  for (const auto& a : f.dom.elems) m["inl(" + a + ")"] = "inl(" + f(a) + ")";
  for (const auto& b : g.dom.elems) m["inr(" + b + ")"] = "inr(" + g(b) + ")";
  return FinFunction::from_map(d.object, c.object, m);
}

namespace {

// All assignments keys -> one choice from choices[key]; invokes fn on each.
template <typename Fn>
void for_each_assignment(const std::vector<std::string>& keys,
                         const std::map<std::string, std::vector<std::string>>& choices,
                         std::map<std::string, std::string>& acc, std::size_t i, Fn&& fn) {
  if (i == keys.size()) {
    fn(acc);
    return;
  }
  for (const auto& v : choices.at(keys[i])) {
    acc[keys[i]] = v;
    for_each_assignment(keys, choices, acc, i + 1, fn);
  }
  acc.erase(keys[i]);
}

}  // namespace

PiObject pi_f(const FinFunction& f, const FinFunction& g) {
  if (g.cod != f.dom) throw InputError("pi_f: cod(g) must equal dom(f)");
  PiObject out;
  std::vector<std::string> labels;
  std::map<std::string, std::string> proj;
  for (const auto& a : f.cod.elems) {
    std::vector<std::string> fib = f.fiber(a);
    std::map<std::string, std::vector<std::string>> choices;
    for (const auto& b : fib) choices[b] = g.fiber(b);
    std::map<std::string, std::string> acc;
    for_each_assignment(fib, choices, acc, 0, [&](const std::map<std::string, std::string>& s) {
      std::string l = tagged_label(a, s);
      labels.push_back(l);
      proj[l] = a;
      out.sections[l] = s;
    });
  }
  FinSet obj = FinSet::of(std::move(labels));
  out.proj = FinFunction::from_map(obj, f.cod, proj);
  return out;
}

std::vector<PolyElem> polynomial_elements(const Signature& sig, const FinSet& x) {
  std::vector<PolyElem> out;
  for (const auto& a : sig.constructors().elems) {
    std::vector<std::string> fib = sig.arity(a);
    std::map<std::string, std::vector<std::string>> choices;
    for (const auto& b : fib) choices[b] = x.elems;
    std::map<std::string, std::string> acc;
    for_each_assignment(fib, choices, acc, 0, [&](const std::map<std::string, std::string>& t) {
      out.push_back(PolyElem{a, t});
    });
  }
  return out;
}

FinSet polynomial_apply(const Signature& sig, const FinSet& x) {
  std::vector<std::string> labels;
  for (const auto& e : polynomial_elements(sig, x)) labels.push_back(e.label());
  return FinSet::of(std::move(labels));
}

std::string WTree::label() const {
  std::map<std::string, std::string> t;
  for (const auto& [b, c] : children) t[b] = c.label();
  return tagged_label(head, t);
}

std::size_t WTree::height() const {
  std::size_t h = 0;
  for (const auto& [_, c] : children) h = std::max(h, c.height());
  return h + 1;
}

std::uint64_t wtype_count(const Signature& sig, int depth, std::uint64_t cap) {
  std::uint64_t t = 0;
  for (int d = 0; d < depth; ++d) {
    std::uint64_t next = 0;
    for (const auto& a : sig.constructors().elems) {
      std::uint64_t term = 1;
      for (std::size_t i = 0; i < sig.arity(a).size(); ++i) {
        if (t > 0 && term > cap / t) return cap;
        term *= t;
      }
      if (next > cap - std::min(term, cap)) return cap;
      next += term;
      if (next >= cap) return cap;
    }
    t = next;
  }
  return t;
}

WEnumeration wtype_enumerate(const Signature& sig, int depth) {
  if (depth < 1) throw InputError("wtype_enumerate: depth must be >= 1");
  guard_budget(wtype_count(sig, depth, enumeration_budget() + 1), "wtype_enumerate");
  std::vector<WTree> level;  // all trees of height <= d, sorted by label
  bool saturated = false;
  for (int d = 0; d < depth; ++d) {
    std::vector<std::string> prev_labels;
    std::map<std::string, const WTree*> by_label;
    for (const auto& t : level) {
      prev_labels.push_back(t.label());
      by_label[prev_labels.back()] = &t;
    }
    FinSet prev = FinSet::of(prev_labels);
    std::vector<WTree> next;
    for (const auto& e : polynomial_elements(sig, prev)) {
      WTree t;
      t.head = e.head;
      for (const auto& [b, l] : e.args) t.children[b] = *by_label.at(l);
      next.push_back(std::move(t));
    }
    std::sort(next.begin(), next.end());
    if (next.size() == level.size()) {
      saturated = true;
      break;
    }
    level = std::move(next);
  }
  return WEnumeration{std::move(level), saturated};
}

bool is_path(const Signature& sig, const Path& p) {
  if (p.nodes.empty()) return false;
  if (p.branches.size() + 1 != p.nodes.size()) return false;
  for (std::size_t i = 0; i < p.branches.size(); ++i) {
    const WTree& w = p.nodes[i];
    const std::string& b = p.branches[i];
    if (!sig.f.dom.contains(b)) return false;
    if (sig.f(b) != w.head) return false;
    auto it = w.children.find(b);
    if (it == w.children.end() || !(it->second == p.nodes[i + 1])) return false;
  }
  return true;
}

std::vector<WTree> subterms(const WTree& w) {
  std::map<std::string, WTree> seen;
  std::vector<const WTree*> stack{&w};
  while (!stack.empty()) {
    const WTree* t = stack.back();
    stack.pop_back();
    if (!seen.emplace(t->label(), *t).second) continue;
    for (const auto& [_, c] : t->children) stack.push_back(&c);
  }
  std::vector<WTree> out;
  for (const auto& [_, t] : seen) out.push_back(t);
  return out;
}

WCharacterization check_wtype_characterization(const Signature& sig, const FinSet& v,
                                               const FinFunction& m) {
  FinSet pv = polynomial_apply(sig, v);
  if (m.dom != pv || m.cod != v)
    throw InputError("check_wtype_characterization: m must be a map P_f(V) -> V");
  WCharacterization out;
  out.structure_iso = m.is_bijective();
  if (!out.structure_iso) out.detail = "structure map is not a bijection";
  // least m-closed subset of V
  std::set<std::string> closed;
  std::vector<PolyElem> elems = polynomial_elements(sig, v);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& e : elems) {
      bool ready = true;
      for (const auto& [_, val] : e.args)
        if (!closed.count(val)) {
          ready = false;
          break;
        }
      if (ready && closed.insert(m(e.label())).second) changed = true;
    }
  }
  out.no_proper_subalgebra = closed.size() == v.size();
  if (!out.no_proper_subalgebra) {
    for (const auto& x : v.elems)
      if (!closed.count(x)) {
        out.detail += (out.detail.empty() ? "" : "; ");
        out.detail += "proper subalgebra excludes " + x;
        break;
      }
  }
  out.is_wtype = out.structure_iso && out.no_proper_subalgebra;
  return out;
}

std::vector<FinFunction> all_functions(const FinSet& d, const FinSet& c) {
  std::vector<FinFunction> out;
  if (d.size() == 0) {
    out.push_back(FinFunction(d, c, {}));
    return out;
  }
  if (c.size() == 0) return out;
  guard_budget(static_cast<std::uint64_t>(
                   std::pow(static_cast<double>(c.size()), static_cast<double>(d.size()))),
               "all_functions");
  std::vector<int> t(d.size(), 0);
  while (true) {
    out.push_back(FinFunction(d, c, t));
    std::size_t i = 0;
    while (i < t.size()) {
      if (++t[i] < static_cast<int>(c.size())) break;
      t[i] = 0;
      ++i;
    }
    if (i == t.size()) break;
  }
  return out;
}

std::vector<FinFunction> all_surjections(const FinSet& d, const FinSet& c) {
  std::vector<FinFunction> out;
  for (auto& f : all_functions(d, c))
    if (f.is_surjective()) out.push_back(std::move(f));
  return out;
}

}  // namespace tf
