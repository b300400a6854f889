#include "toposforge/presheaf.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tf {

std::size_t Presheaf::total_size() const {
  std::size_t n = 0;
  for (const auto& [_, s] : values) n += s.size();
  return n;
}

PresheafVerdict validate_presheaf(const Presheaf& p) {
  PresheafVerdict v;
  auto fail = [&](const std::string& msg) {
    v.ok = false;
    v.violations.push_back(msg);
  };
  const FinCategory& c = *p.base;
  for (const auto& obj : c.objects.elems)
    if (!p.values.count(obj)) fail("no value set at object " + obj);
  for (const auto& a : c.arrows.elems) {
    if (!p.restr.count(a)) {
      fail("no restriction along " + a);
      continue;
    }
    const FinFunction& r = p.restr.at(a);
    if (r.dom != p.values.at(c.cod(a)) || r.cod != p.values.at(c.dom(a)))
      fail("restriction along " + a + " has wrong endpoints");
  }
  if (!v.ok) return v;
  for (const auto& obj : c.objects.elems)
    if (p.restr.at(c.id(obj)) != FinFunction::identity(p.values.at(obj)))
      fail("identity restriction at " + obj + " is not the identity");
  for (const auto& a : c.arrows.elems)
    for (const auto& b : c.arrows.elems) {
      if (c.cod(b) != c.dom(a)) continue;
      std::string ab = c.compose(a, b);
      if (p.restr.at(ab) != compose(p.restr.at(b), p.restr.at(a)))
        fail("functoriality fails on composite " + ab + " = " + a + "." + b);
    }
  return v;
}

PresheafVerdict validate_morphism(const PresheafMorphism& f) {
  PresheafVerdict v;
  auto fail = [&](const std::string& msg) {
    v.ok = false;
    v.violations.push_back(msg);
  };
  const FinCategory& c = *f.dom.base;
  for (const auto& obj : c.objects.elems) {
    if (!f.components.count(obj)) {
      fail("missing component at " + obj);
      continue;
    }
    const FinFunction& fc = f.components.at(obj);
    if (fc.dom != f.dom.at(obj) || fc.cod != f.cod.at(obj))
      fail("component at " + obj + " has wrong endpoints");
  }
  if (!v.ok) return v;
  for (const auto& a : c.arrows.elems) {
    const std::string& d = c.dom(a);
    const std::string& co = c.cod(a);
    if (compose(f.components.at(d), f.dom.action(a)) !=
        compose(f.cod.action(a), f.components.at(co)))
      fail("naturality fails along " + a);
  }
  return v;
}

Presheaf make_presheaf(CatRef base, const std::map<std::string, std::vector<std::string>>& values,
                       const std::function<std::string(const std::string&, const std::string&)>&
                           action) {
  Presheaf p;
  p.base = base;
  for (const auto& obj : base->objects.elems) {
    auto it = values.find(obj);
    p.values[obj] = FinSet::of(it == values.end() ? std::vector<std::string>{} : it->second);
  }
  for (const auto& a : base->arrows.elems) {
    std::map<std::string, std::string> m;
    for (const auto& x : p.values.at(base->cod(a)).elems) m[x] = action(a, x);
    p.restr[a] = FinFunction::from_map(p.values.at(base->cod(a)), p.values.at(base->dom(a)), m);
  }
  return p;
}

PresheafMorphism make_morphism(Presheaf dom, Presheaf cod,
                               const std::function<std::string(const std::string&,
                                                               const std::string&)>& f) {
  PresheafMorphism m;
  m.dom = std::move(dom);
  m.cod = std::move(cod);
  for (const auto& obj : m.dom.base->objects.elems) {
    std::map<std::string, std::string> t;
    for (const auto& x : m.dom.at(obj).elems) t[x] = f(obj, x);
    m.components[obj] = FinFunction::from_map(m.dom.at(obj), m.cod.at(obj), t);
  }
  return m;
}

Presheaf empty_presheaf(CatRef base) {
  return make_presheaf(base, {}, [](const std::string&, const std::string& x) { return x; });
}

Presheaf terminal_presheaf(CatRef base) {
  std::map<std::string, std::vector<std::string>> v;
  for (const auto& obj : base->objects.elems) v[obj] = {"*"};
  return make_presheaf(base, v, [](const std::string&, const std::string&) { return "*"; });
}

Presheaf constant_presheaf(CatRef base, const FinSet& s) {
  std::map<std::string, std::vector<std::string>> v;
  for (const auto& obj : base->objects.elems) v[obj] = s.elems;
  return make_presheaf(base, v, [](const std::string&, const std::string& x) { return x; });
}

Presheaf yoneda(CatRef base, const std::string& obj) {
  std::map<std::string, std::vector<std::string>> v;
  for (const auto& d : base->objects.elems) v[d] = base->hom(d, obj);
  return make_presheaf(base, v, [base](const std::string& delta, const std::string& beta) {
    return base->compose(beta, delta);
  });
}

PresheafMorphism identity_morphism(const Presheaf& p) {
  return make_morphism(p, p, [](const std::string&, const std::string& x) { return x; });
}

PresheafMorphism compose(const PresheafMorphism& g, const PresheafMorphism& f) {
  if (!(f.cod == g.dom)) throw InputError("presheaf compose: cod(f) != dom(g)");
  PresheafMorphism m;
  m.dom = f.dom;
  m.cod = g.cod;
  for (const auto& [obj, fc] : f.components) m.components[obj] = compose(g.components.at(obj), fc);
  return m;
}

PresheafPullback presheaf_pullback(const PresheafMorphism& f, const PresheafMorphism& g) {
  if (!(f.cod == g.cod)) throw InputError("presheaf pullback: codomain mismatch");
  std::map<std::string, std::vector<std::string>> v;
  std::map<std::string, std::map<std::string, std::pair<std::string, std::string>>> parts;
  for (const auto& obj : f.dom.base->objects.elems) {
    Pullback pb = pullback(f.components.at(obj), g.components.at(obj));
    v[obj] = pb.object.elems;
    for (const auto& e : pb.object.elems) parts[obj][e] = {pb.proj1(e), pb.proj2(e)};
  }
  const Presheaf& pd = f.dom;
  const Presheaf& qd = g.dom;
  Presheaf obj = make_presheaf(
      f.dom.base, v, [&](const std::string& a, const std::string& e) {
        const auto& [b, c] = parts.at(pd.base->cod(a)).at(e);
        return pair_label(pd.restrict(b, a), qd.restrict(c, a));
      });
  PresheafMorphism p1 = make_morphism(obj, pd, [&](const std::string& o, const std::string& e) {
    return parts.at(o).at(e).first;
  });
  PresheafMorphism p2 = make_morphism(obj, qd, [&](const std::string& o, const std::string& e) {
    return parts.at(o).at(e).second;
  });
  return PresheafPullback{obj, p1, p2};
}

PresheafProduct presheaf_product(const Presheaf& p, const Presheaf& q) {
  Presheaf t = terminal_presheaf(p.base);
  auto bang = [&](const Presheaf& x) {
    return make_morphism(x, t, [](const std::string&, const std::string&) { return "*"; });
  };
  PresheafPullback pb = presheaf_pullback(bang(p), bang(q));
  return PresheafProduct{pb.object, pb.proj1, pb.proj2};
}

PresheafSum presheaf_sum(const Presheaf& p, const Presheaf& q) {
  if (p.base != q.base && !(*p.base == *q.base))
    throw InputError("presheaf sum: mismatched bases");
  std::map<std::string, std::vector<std::string>> v;
  for (const auto& obj : p.base->objects.elems) {
    for (const auto& x : p.at(obj).elems) v[obj].push_back("inl(" + x + ")");
    for (const auto& x : q.at(obj).elems) v[obj].push_back("inr(" + x + ")");
  }
  Presheaf obj = make_presheaf(p.base, v, [&](const std::string& a, const std::string& e) {
    if (e.rfind("inl(", 0) == 0)
      return "inl(" + p.restrict(e.substr(4, e.size() - 5), a) + ")";
    return "inr(" + q.restrict(e.substr(4, e.size() - 5), a) + ")";
  });
  PresheafMorphism inl = make_morphism(p, obj, [](const std::string&, const std::string& x) {
    return "inl(" + x + ")";
  });
  PresheafMorphism inr = make_morphism(q, obj, [](const std::string&, const std::string& x) {
    return "inr(" + x + ")";
  });
  return PresheafSum{obj, inl, inr};
}

Presheaf presheaf_equalizer(const PresheafMorphism& f, const PresheafMorphism& g) {
  if (!(f.dom == g.dom) || !(f.cod == g.cod))
    throw InputError("equalizer: parallel pair expected");
  std::map<std::string, std::vector<std::string>> v;
  for (const auto& obj : f.dom.base->objects.elems)
    for (const auto& x : f.dom.at(obj).elems)
      if (f.apply(obj, x) == g.apply(obj, x)) v[obj].push_back(x);
  const Presheaf& pd = f.dom;
  return make_presheaf(f.dom.base, v, [&](const std::string& a, const std::string& x) {
    return pd.restrict(x, a);
  });
}

PresheafImage presheaf_image(const PresheafMorphism& f) {
  std::map<std::string, std::vector<std::string>> v;
  for (const auto& obj : f.dom.base->objects.elems) {
    std::set<std::string> range;
    for (const auto& x : f.dom.at(obj).elems) range.insert(f.apply(obj, x));
    v[obj] = {range.begin(), range.end()};
  }
  const Presheaf& qd = f.cod;
  Presheaf obj = make_presheaf(f.dom.base, v, [&](const std::string& a, const std::string& y) {
    return qd.restrict(y, a);
  });
  PresheafMorphism cover = make_morphism(f.dom, obj, [&](const std::string& o,
                                                         const std::string& x) {
    return f.apply(o, x);
  });
  PresheafMorphism mono =
      make_morphism(obj, f.cod, [](const std::string&, const std::string& y) { return y; });
  return PresheafImage{obj, cover, mono};
}

PresheafQuotient presheaf_quotient(const PresheafMorphism& r1, const PresheafMorphism& r2) {
  if (!(r1.dom == r2.dom) || !(r1.cod == r2.cod))
    throw InputError("presheaf quotient: parallel pair expected");
  std::map<std::string, Quotient> qs;
  std::map<std::string, std::vector<std::string>> v;
  for (const auto& obj : r1.dom.base->objects.elems) {
    qs[obj] = quotient(r1.components.at(obj), r2.components.at(obj));
    v[obj] = qs[obj].object.elems;
  }
  Presheaf obj = make_presheaf(r1.cod.base, v, [&](const std::string& a, const std::string& cls) {
    // classes are labeled by representatives; restrict the representative
    return qs.at(r1.cod.base->dom(a)).proj(r1.cod.restrict(cls, a));
  });
  // well-definedness: all members of a class restrict into the same class
  const Presheaf& x = r1.cod;
  for (const auto& a : x.base->arrows.elems) {
    const std::string& cobj = x.base->cod(a);
    const std::string& dobj = x.base->dom(a);
    for (const auto& e : x.at(cobj).elems) {
      std::string via_class = obj.restrict(qs.at(cobj).proj(e), a);
      std::string direct = qs.at(dobj).proj(x.restrict(e, a));
      if (via_class != direct)
        throw InputError("quotient restriction not well-defined along " + a);
    }
  }
  PresheafMorphism proj = make_morphism(x, obj, [&](const std::string& o, const std::string& e) {
    return qs.at(o).proj(e);
  });
  return PresheafQuotient{obj, proj};
}

bool is_pointwise_epi(const PresheafMorphism& f) {
  for (const auto& [_, c] : f.components)
    if (!c.is_surjective()) return false;
  return true;
}

bool is_pointwise_mono(const PresheafMorphism& f) {
  for (const auto& [_, c] : f.components)
    if (!c.is_injective()) return false;
  return true;
}

std::vector<PresheafMorphism> enumerate_nat(const Presheaf& p, const Presheaf& q) {
  const std::vector<std::string>& objs = p.base->objects.elems;
  std::vector<PresheafMorphism> out;
  std::map<std::string, FinFunction> acc;
  // arrows checkable once both endpoint components are assigned
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == objs.size()) {
      PresheafMorphism m;
      m.dom = p;
      m.cod = q;
      m.components = acc;
      out.push_back(std::move(m));
      return;
    }
    const std::string& obj = objs[i];
    std::set<std::string> assigned(objs.begin(), objs.begin() + static_cast<long>(i + 1));
    for (const auto& comp : all_functions(p.at(obj), q.at(obj))) {
      acc[obj] = comp;
      bool ok = true;
      for (const auto& a : p.base->arrows.elems) {
        if (!assigned.count(p.base->dom(a)) || !assigned.count(p.base->cod(a))) continue;
        if (p.base->dom(a) != obj && p.base->cod(a) != obj) continue;
        if (compose(acc.at(p.base->dom(a)), p.action(a)) !=
            compose(q.action(a), acc.at(p.base->cod(a)))) {
          ok = false;
          break;
        }
      }
      if (ok) go(i + 1);
    }
    acc.erase(obj);
  };
  go(0);
  return out;
}

namespace {

// Full table of a natural transformation n: R -> Q, keyed by underlying labels.
std::map<std::string, std::string> nat_table(const PresheafMorphism& n) {
  std::map<std::string, std::string> t;
  for (const auto& [obj, comp] : n.components)
    for (const auto& x : comp.dom.elems) t[underlying_label(x, obj)] = comp(x);
  return t;
}

}  // namespace

Presheaf exponential(const Presheaf& p, const Presheaf& q) {
  CatRef base = p.base;
  // per object C: natural transformations y(C) x P -> Q, plus the product
  // presheaves needed to evaluate restrictions
  std::map<std::string, PresheafProduct> prods;
  std::map<std::string, std::vector<PresheafMorphism>> nats;
  std::map<std::string, std::vector<std::string>> v;
  std::map<std::string, std::map<std::string, const PresheafMorphism*>> by_label;
  for (const auto& c : base->objects.elems) {
    prods.emplace(c, presheaf_product(yoneda(base, c), p));
    nats[c] = enumerate_nat(prods.at(c).object, q);
    for (const auto& n : nats.at(c)) v[c].push_back(table_label(nat_table(n)));
    std::sort(v[c].begin(), v[c].end());
    for (const auto& n : nats.at(c)) by_label[c][table_label(nat_table(n))] = &n;
  }
  return make_presheaf(base, v, [base, prods = std::move(prods),
                                 by_label = std::move(by_label)](const std::string& alpha,
                                                                const std::string& label) {
    const std::string& c = base->cod(alpha);
    const std::string& d = base->dom(alpha);
    const PresheafMorphism& n = *by_label.at(c).at(label);
    // restricted transformation: (beta': E -> D, x) -> n_E(alpha beta', x)
    std::map<std::string, std::string> t;
    for (const auto& e : base->objects.elems) {
      for (const auto& pe : prods.at(d).object.at(e).elems) {
        std::string beta = prods.at(d).proj1.apply(e, pe);
        std::string x = prods.at(d).proj2.apply(e, pe);
        std::string src = pair_label(base->compose(alpha, beta), x);
        t[underlying_label(pe, e)] = n.apply(e, src);
      }
    }
    return table_label(t);
  });
}

FiberPresheaf fiber_presheaf(const PresheafMorphism& f, const std::string& obj,
                             const std::string& a) {
  CatRef base = f.dom.base;
  if (!f.cod.at(obj).contains(a)) throw InputError("fiber_presheaf: element not in A(" + obj + ")");
  std::map<std::string, std::vector<std::string>> v;
  std::map<std::string, std::map<std::string, std::pair<std::string, std::string>>> parts;
  for (const auto& d : base->objects.elems)
    for (const auto& beta : base->hom(d, obj))
      for (const auto& b : f.dom.at(d).elems)
        if (f.apply(d, b) == f.cod.restrict(a, beta)) {
          std::string l = pair_label(beta, b);
          v[d].push_back(l);
          parts[d][l] = {beta, b};
        }
  const Presheaf& bp = f.dom;
  Presheaf object = make_presheaf(base, v, [&, base](const std::string& delta,
                                                     const std::string& e) {
    const auto& [beta, b] = parts.at(base->cod(delta)).at(e);
    return pair_label(base->compose(beta, delta), bp.restrict(b, delta));
  });
  PresheafMorphism to_b = make_morphism(object, f.dom, [&](const std::string& d,
                                                           const std::string& e) {
    return parts.at(d).at(e).second;
  });
  return FiberPresheaf{object, to_b, obj, a};
}

PresheafPi pi_presheaf(const PresheafMorphism& f, const PresheafMorphism& x) {
  if (!(x.cod == f.dom)) throw InputError("pi_presheaf: cod(x) must equal dom(f)");
  CatRef base = f.dom.base;
  struct Elem {
    std::string a;
    std::map<std::string, std::string> table;  // underlying fiber label -> X element
  };
  std::map<std::string, std::vector<std::string>> v;
  std::map<std::string, std::map<std::string, Elem>> elems;  // obj -> label -> data
  for (const auto& c : base->objects.elems)
    for (const auto& a : f.cod.at(c).elems) {
      FiberPresheaf ba = fiber_presheaf(f, c, a);
      for (const auto& s : enumerate_nat(ba.object, x.dom)) {
        if (!(compose(x, s) == ba.to_b)) continue;  // must be a section of x over B_a
        std::map<std::string, std::string> t = nat_table(s);
        std::string l = tagged_label(a, t);
        v[c].push_back(l);
        elems[c][l] = Elem{a, std::move(t)};
      }
    }
  Presheaf object = make_presheaf(base, v, [base, f, elems](const std::string& alpha,
                                                            const std::string& label) {
    const std::string& c = base->cod(alpha);
    const std::string& d = base->dom(alpha);
    const Elem& e = elems.at(c).at(label);
    std::string a2 = f.cod.restrict(e.a, alpha);
    FiberPresheaf ba2 = fiber_presheaf(f, d, a2);
    std::map<std::string, std::string> t;
    for (const auto& eobj : base->objects.elems)
      for (const auto& fe : ba2.object.at(eobj).elems) {
        // fe = (beta': E -> D, b); the restricted section evaluates the
        // original at (alpha beta', b)
        std::string beta = fe.substr(1, fe.find(',') - 1);
        std::string b = fe.substr(fe.find(',') + 1, fe.size() - fe.find(',') - 2);
        std::string src = pair_label(base->compose(alpha, beta), b);
        t[underlying_label(fe, eobj)] = e.table.at(underlying_label(src, eobj));
      }
    return tagged_label(a2, t);
  });
  PresheafMorphism proj = make_morphism(object, f.cod, [elems](const std::string& o,
                                                               const std::string& l) {
    return elems.at(o).at(l).a;
  });
  return PresheafPi{object, proj};
}

std::string underlying_label(const std::string& x, const std::string& obj) {
  return "(" + x + "|" + obj + ")";
}

Underlying underlying(const Presheaf& p) {
  std::vector<std::string> labels;
  std::map<std::string, std::string> to_base;
  for (const auto& [obj, s] : p.values)
    for (const auto& x : s.elems) {
      labels.push_back(underlying_label(x, obj));
      to_base[labels.back()] = obj;
    }
  FinSet u = FinSet::of(std::move(labels));
  return Underlying{u, FinFunction::from_map(u, p.base->objects, to_base)};
}

FinFunction underlying_morphism(const PresheafMorphism& f) {
  Underlying d = underlying(f.dom);
  Underlying c = underlying(f.cod);
  std::map<std::string, std::string> m;
  for (const auto& [obj, comp] : f.components)
    for (const auto& x : comp.dom.elems)
      m[underlying_label(x, obj)] = underlying_label(comp(x), obj);
  return FinFunction::from_map(d.object, c.object, m);
}

bool presheaves_isomorphic(const Presheaf& p, const Presheaf& q) {
  for (const auto& [obj, s] : p.values)
    if (s.size() != q.at(obj).size()) return false;
  for (const auto& n : enumerate_nat(p, q)) {
    bool iso = true;
    for (const auto& [_, c] : n.components)
      if (!c.is_bijective()) {
        iso = false;
        break;
      }
    if (iso) return true;
  }
  return false;
}

namespace {

// Canonical key up to iso: minimum serialization over pointwise permutations.
std::string canonical_key(const Presheaf& p) {
  std::vector<std::string> objs;
  std::vector<std::vector<std::vector<int>>> perms;  // per object, all permutations
  for (const auto& [obj, s] : p.values) {
    objs.push_back(obj);
    std::vector<int> idx(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) idx[i] = static_cast<int>(i);
    std::vector<std::vector<int>> ps;
    std::sort(idx.begin(), idx.end());
    do {
      ps.push_back(idx);
    } while (std::next_permutation(idx.begin(), idx.end()));
    perms.push_back(std::move(ps));
  }
  std::string best;
  std::vector<std::size_t> pick(objs.size(), 0);
  while (true) {
    // relabel: element i at obj k becomes perm[i]
    std::ostringstream os;
    for (std::size_t k = 0; k < objs.size(); ++k)
      os << objs[k] << ":" << p.values.at(objs[k]).size() << ";";
    for (const auto& [a, r] : p.restr) {
      std::size_t kc = static_cast<std::size_t>(
          std::find(objs.begin(), objs.end(), p.base->cod(a)) - objs.begin());
      std::size_t kd = static_cast<std::size_t>(
          std::find(objs.begin(), objs.end(), p.base->dom(a)) - objs.begin());
      const auto& pc = perms[kc][pick[kc]];
      const auto& pd = perms[kd][pick[kd]];
      std::vector<int> relabeled(r.table.size());
      for (std::size_t i = 0; i < r.table.size(); ++i)
        relabeled[static_cast<std::size_t>(pc[i])] = pd[static_cast<std::size_t>(r.table[i])];
      os << a << ":";
      for (int t : relabeled) os << t << ",";
      os << ";";
    }
    std::string key = os.str();
    if (best.empty() || key < best) best = key;
    std::size_t k = 0;
    while (k < pick.size()) {
      if (++pick[k] < perms[k].size()) break;
      pick[k] = 0;
      ++k;
    }
    if (k == pick.size()) break;
  }
  return best;
}

}  // namespace

std::vector<Presheaf> enumerate_presheaves(CatRef base, std::size_t max_size) {
  const std::vector<std::string>& objs = base->objects.elems;
  std::vector<std::string> nonid;
  for (const auto& a : base->arrows.elems)
    if (!base->is_identity(a)) nonid.push_back(a);

  std::vector<Presheaf> out;
  std::set<std::string> seen;
  std::vector<std::size_t> sizes(objs.size(), 0);
  while (true) {
    // value sets for this size vector
    std::map<std::string, FinSet> values;
    for (std::size_t k = 0; k < objs.size(); ++k)
      values[objs[k]] = FinSet::canonical(sizes[k], objs[k] + "#");
    // choose restrictions for non-identity arrows
    std::vector<std::vector<FinFunction>> choices;
    bool possible = true;
    for (const auto& a : nonid) {
      choices.push_back(all_functions(values.at(base->cod(a)), values.at(base->dom(a))));
      if (choices.back().empty()) possible = false;
    }
    if (possible) {
      std::vector<std::size_t> pick(nonid.size(), 0);
      while (true) {
        Presheaf p;
        p.base = base;
        p.values = values;
        for (const auto& [obj, s] : values) p.restr[base->id(obj)] = FinFunction::identity(s);
        for (std::size_t k = 0; k < nonid.size(); ++k) p.restr[nonid[k]] = choices[k][pick[k]];
        bool functorial = true;
        for (const auto& a : base->arrows.elems) {
          for (const auto& b : base->arrows.elems) {
            if (base->cod(b) != base->dom(a)) continue;
            if (p.restr.at(base->compose(a, b)) != compose(p.restr.at(b), p.restr.at(a))) {
              functorial = false;
              break;
            }
          }
          if (!functorial) break;
        }
        if (functorial && seen.insert(canonical_key(p)).second) out.push_back(p);
        std::size_t k = 0;
        while (k < pick.size()) {
          if (++pick[k] < choices[k].size()) break;
          pick[k] = 0;
          ++k;
        }
        if (k == pick.size()) break;
        guard_budget(out.size() + 1, "enumerate_presheaves");
      }
    }
    std::size_t k = 0;
    while (k < sizes.size()) {
      if (++sizes[k] <= max_size) break;
      sizes[k] = 0;
      ++k;
    }
    if (k == sizes.size()) break;
  }
  return out;
}

}  // namespace tf
