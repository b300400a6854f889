#pragma once

// Presheaves of finite sets on a finitely presented category, with the
// pointwise pretopos structure, exponentials and dependent products.

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "toposforge/cat.hpp"
#include "toposforge/finset.hpp"

namespace tf {

struct Presheaf {
  CatRef base;
  std::map<std::string, FinSet> values;          // object -> P(C)
  std::map<std::string, FinFunction> restr;      // arrow a -> P(cod a) -> P(dom a)

  const FinSet& at(const std::string& obj) const { return values.at(obj); }
  const FinFunction& action(const std::string& arrow) const { return restr.at(arrow); }
  // x . a for x in P(cod a).
  std::string restrict(const std::string& x, const std::string& arrow) const {
    return restr.at(arrow)(x);
  }
  std::size_t total_size() const;

  bool operator==(const Presheaf& o) const {
    return values == o.values && restr == o.restr;
  }
};

struct PresheafMorphism {
  Presheaf dom;
  Presheaf cod;
  std::map<std::string, FinFunction> components;  // object -> f_C

  const FinFunction& at(const std::string& obj) const { return components.at(obj); }
  std::string apply(const std::string& obj, const std::string& x) const {
    return components.at(obj)(x);
  }
  bool operator==(const PresheafMorphism& o) const {
    return dom == o.dom && cod == o.cod && components == o.components;
  }
};

struct PresheafVerdict {
  bool ok = true;
  std::vector<std::string> violations;
};
PresheafVerdict validate_presheaf(const Presheaf& p);
PresheafVerdict validate_morphism(const PresheafMorphism& f);

Presheaf empty_presheaf(CatRef base);
Presheaf terminal_presheaf(CatRef base);
Presheaf constant_presheaf(CatRef base, const FinSet& s);
Presheaf yoneda(CatRef base, const std::string& obj);

// Builds a presheaf from per-object element labels and a label-level action.
Presheaf make_presheaf(CatRef base, const std::map<std::string, std::vector<std::string>>& values,
                       const std::function<std::string(const std::string& arrow,
                                                       const std::string& elem)>& action);
PresheafMorphism make_morphism(Presheaf dom, Presheaf cod,
                               const std::function<std::string(const std::string& obj,
                                                               const std::string& elem)>& f);

PresheafMorphism identity_morphism(const Presheaf& p);
PresheafMorphism compose(const PresheafMorphism& g, const PresheafMorphism& f);

// -- pointwise limits and colimits --
struct PresheafPullback {
  Presheaf object;
  PresheafMorphism proj1, proj2;
};
PresheafPullback presheaf_pullback(const PresheafMorphism& f, const PresheafMorphism& g);

struct PresheafProduct {
  Presheaf object;
  PresheafMorphism proj1, proj2;
};
PresheafProduct presheaf_product(const Presheaf& p, const Presheaf& q);

struct PresheafSum {
  Presheaf object;
  PresheafMorphism inl, inr;
};
PresheafSum presheaf_sum(const Presheaf& p, const Presheaf& q);

Presheaf presheaf_equalizer(const PresheafMorphism& f, const PresheafMorphism& g);

struct PresheafImage {
  Presheaf object;
  PresheafMorphism cover, mono;
};
PresheafImage presheaf_image(const PresheafMorphism& f);

struct PresheafQuotient {
  Presheaf object;
  PresheafMorphism proj;
};
// (r1, r2): R => P must be a pointwise equivalence relation whose quotient
// restrictions are well defined (checked).
PresheafQuotient presheaf_quotient(const PresheafMorphism& r1, const PresheafMorphism& r2);

bool is_pointwise_epi(const PresheafMorphism& f);
bool is_pointwise_mono(const PresheafMorphism& f);

// All natural transformations P -> Q (components enumerated with naturality
// pruning); deterministic order.
std::vector<PresheafMorphism> enumerate_nat(const Presheaf& p, const Presheaf& q);

// Exponential Q^P with Q^P(C) = Nat(y(C) x P, Q), elements labeled by their
// full table {(D,(beta,x))->q}.
Presheaf exponential(const Presheaf& p, const Presheaf& q);

// Fiber presheaf of f: B -> A at a in A(C):
//   B_a(D) = {(beta: D -> C, b in B(D)) | f(b) = a . beta},  (beta,b).delta = (beta delta, b.delta)
// Elements are labeled "(beta,b)". Also returns the projection to B.
struct FiberPresheaf {
  Presheaf object;
  PresheafMorphism to_b;  // (beta, b) -> b
  std::string at_obj;     // C
  std::string at_elem;    // a
};
FiberPresheaf fiber_presheaf(const PresheafMorphism& f, const std::string& obj,
                             const std::string& a);

// Dependent product along f: B -> A of x: X -> B. Elements over C are pairs
// (a, s) with s: B_a -> X a natural section of x.
struct PresheafPi {
  Presheaf object;
  PresheafMorphism proj;  // -> A
};
PresheafPi pi_presheaf(const PresheafMorphism& f, const PresheafMorphism& x);

struct Underlying {
  FinSet object;        // labels "(x|C)"
  FinFunction to_base;  // -> objects of the base
};
Underlying underlying(const Presheaf& p);
std::string underlying_label(const std::string& x, const std::string& obj);
// |f|: |P| -> |Q| over C0.
FinFunction underlying_morphism(const PresheafMorphism& f);

// True iff some natural iso P -> Q exists.
bool presheaves_isomorphic(const Presheaf& p, const Presheaf& q);

// All presheaves on base with canonical value labels and |P(C)| <= max_size,
// deduplicated up to isomorphism; deterministic order.
std::vector<Presheaf> enumerate_presheaves(CatRef base, std::size_t max_size);

}  // namespace tf
