#pragma once

// W-types in presheaf categories: terms over the induced base map, the
// composability and naturality filters, and the presheaf W with its
// structure isomorphism.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toposforge/presheaf.hpp"

namespace tf {

// Holds the data induced by a presheaf morphism f: B -> A that the term
// calculus needs: the underlying signature g and the fiber presheaves B_a.
class WPresheafContext {
 public:
  explicit WPresheafContext(PresheafMorphism f);

  const PresheafMorphism& f() const { return f_; }
  CatRef base() const { return f_.dom.base; }

  // g: Sigma_{(a,C) in |A|} |B_a| -> |A|, whose fiber over (a|C) is |B_a|.
  const FinFunction& induced_base_map() const { return g_; }
  const Signature& signature() const { return sig_; }

  // Fiber presheaf of a in A(C).
  const FiberPresheaf& fiber(const std::string& obj, const std::string& a) const;

  // Terms are WTrees over g: heads "(a|C)", children keyed by "((beta,b)|D)".
  std::string root(const WTree& t) const;           // the C of the head
  std::string head_elem(const WTree& t) const;      // the a of the head
  static std::string head_label(const std::string& a, const std::string& obj);

  // T . alpha for alpha: C' -> C with C = root(T).
  WTree restrict_term(const WTree& t, const std::string& alpha) const;

  bool is_composable(const WTree& t) const;
  bool is_natural(const WTree& t) const;

 private:
  PresheafMorphism f_;
  FinFunction g_;
  Signature sig_;
  std::map<std::pair<std::string, std::string>, FiberPresheaf> fibers_;  // (C, a)
  std::map<std::string, std::pair<std::string, std::string>> head_parts_;  // label -> (a, C)
  // g-domain label -> (C, a, D, beta, b)
  struct ChildKey {
    std::string obj, a, child_obj, beta, b;
  };
  std::map<std::string, ChildKey> child_parts_;
};

struct WPresheafResult {
  Presheaf w;  // W(C) = natural terms of height <= depth rooted at C
  std::map<std::string, WTree> term_of;  // element label -> term
  // Structure map S: P_f(W_{depth-1}) -> W_depth level bijection data.
  bool structure_bijective = false;
};

// Natural terms of height <= depth with restrict_term as the action.
WPresheafResult wtype_presheaf(const WPresheafContext& ctx, int depth);

// Polynomial functor on presheaves: P_f(X)(C) = {(a, t) | a in A(C), t: B_a -> X}.
struct PolyPresheaf {
  Presheaf object;
  PresheafMorphism to_a;  // (a, t) -> a
};
PolyPresheaf polynomial_presheaf(const WPresheafContext& ctx, const Presheaf& x);

// depth-fold iterate of polynomial_presheaf starting at the empty presheaf.
// The element encodings coincide with term labels, so the comparison with
// wtype_presheaf is label-for-label.
Presheaf kleene_iterate(const WPresheafContext& ctx, int depth);

struct MinimalityVerdict {
  bool minimal = false;          // least S-closed subpresheaf equals the candidate
  bool proper_subalgebra = false;  // candidate is S-closed but misses part of W
  std::string detail;
};
// candidate: per object, a subset of wtype_presheaf(ctx, depth) labels.
MinimalityVerdict check_minimality(const WPresheafContext& ctx,
                                   const std::map<std::string, std::vector<std::string>>& candidate,
                                   int depth);

}  // namespace tf
