#pragma once

// Finite sets and functions: the ambient desk-scale ΠW-pretopos.
// All composite elements (pairs, classes, sections, trees) carry canonical
// lexicographic labels so outputs are reproducible bit-for-bit.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toposforge/common.hpp"

namespace tf {

struct FinSet {
  std::vector<std::string> elems;  // sorted, pairwise distinct

  FinSet() = default;
  // Sorts the labels; throws InputError on duplicates.
  static FinSet of(std::vector<std::string> labels);
  static FinSet empty() { return FinSet{}; }
  // Canonical n-element set {e0, ..., e(n-1)}.
  static FinSet canonical(std::size_t n, const std::string& prefix = "e");

  std::size_t size() const { return elems.size(); }
  bool contains(const std::string& x) const;
  int index(const std::string& x) const;  // throws InputError if absent

  bool operator==(const FinSet&) const = default;
};

struct FinFunction {
  FinSet dom;
  FinSet cod;
  std::vector<int> table;  // dom index -> cod index

  FinFunction() = default;
  FinFunction(FinSet d, FinSet c, std::vector<int> t);
  static FinFunction from_map(FinSet d, FinSet c, const std::map<std::string, std::string>& m);
  static FinFunction identity(const FinSet& s);
  // Constant map (cod must be nonempty unless dom is empty).
  static FinFunction constant(const FinSet& d, const FinSet& c, const std::string& value);

  const std::string& operator()(const std::string& x) const;
  int apply_index(int i) const { return table[static_cast<std::size_t>(i)]; }

  bool is_injective() const;
  bool is_surjective() const;
  bool is_bijective() const { return is_injective() && is_surjective(); }

  // Multiset of fiber sizes, sorted ascending; an iso invariant of the map.
  std::vector<std::size_t> fiber_sizes() const;
  // Elements of the fiber over a cod element (in dom order).
  std::vector<std::string> fiber(const std::string& a) const;

  std::string describe() const;  // "{x->y, ...}: {dom} -> {cod}"

  bool operator==(const FinFunction&) const = default;
};

// g after f; throws InputError unless cod(f) = dom(g).
FinFunction compose(const FinFunction& g, const FinFunction& f);

struct Square {
  FinFunction top;     // D -> B
  FinFunction left;    // D -> C
  FinFunction right;   // B -> A
  FinFunction bottom;  // C -> A
};

// -- label builders (shared canonical encodings) --
std::string pair_label(const std::string& a, const std::string& b);
std::string table_label(const std::map<std::string, std::string>& t);  // "{k->v,...}" sorted
std::string tagged_label(const std::string& a, const std::map<std::string, std::string>& t);

struct Pullback {
  FinSet object;       // {(b,c) | f(b) = g(c)}
  FinFunction proj1;   // -> dom(f)
  FinFunction proj2;   // -> dom(g)
};
Pullback pullback(const FinFunction& f, const FinFunction& g);

struct ImageFactorization {
  FinFunction cover;  // dom(f) ->> image
  FinFunction mono;   // image >-> cod(f)
};
ImageFactorization image_factorization(const FinFunction& f);

bool is_cover(const FinFunction& f);

// True iff the induced map D -> B x_A C is surjective.
// Throws InputError when the square does not commute or has mismatched boundaries.
bool is_quasi_pullback(const Square& sq);

struct Quotient {
  FinSet object;     // equivalence classes, labeled by least representatives
  FinFunction proj;  // X ->> X/R
};
// (r1, r2): R => X must present a jointly monic equivalence relation.
Quotient quotient(const FinFunction& r1, const FinFunction& r2);

// Closes the relation presented by (r1, r2) under reflexivity/symmetry/transitivity.
// Returns the closure as the set of pairs (x, y) with projections.
std::pair<FinFunction, FinFunction> equivalence_closure(const FinFunction& r1,
                                                        const FinFunction& r2);

struct Sum {
  FinSet object;
  FinFunction inl;
  FinFunction inr;
};
Sum sum(const FinSet& x, const FinSet& y);
FinFunction sum_map(const FinFunction& f, const FinFunction& g);  // f+g between tagged sums

// Dependent product along f: B -> A of g: X -> B.
struct PiObject {
  FinFunction proj;  // Pi_f(X) -> A
  // Element label -> the section it encodes (fiber element of B -> element of X).
  std::map<std::string, std::map<std::string, std::string>> sections;
};
PiObject pi_f(const FinFunction& f, const FinFunction& g);

struct Signature {
  FinFunction f;  // B -> A
  explicit Signature(FinFunction fn) : f(std::move(fn)) {}
  const FinSet& constructors() const { return f.cod; }
  std::vector<std::string> arity(const std::string& a) const { return f.fiber(a); }
};

struct PolyElem {
  std::string head;                         // a in A
  std::map<std::string, std::string> args;  // fiber element -> X element
  std::string label() const { return tagged_label(head, args); }
};
// P_f(X) = Sigma_{a in A} X^{B_a}, with canonical element labels.
FinSet polynomial_apply(const Signature& sig, const FinSet& x);
std::vector<PolyElem> polynomial_elements(const Signature& sig, const FinSet& x);

struct WTree {
  std::string head;                       // element of A
  std::map<std::string, WTree> children;  // fiber element -> subtree
  std::string label() const;              // same encoding as polynomial_apply labels
  std::size_t height() const;             // leaves have height 1
  bool operator==(const WTree&) const = default;
  bool operator<(const WTree& o) const { return label() < o.label(); }
};

struct WEnumeration {
  std::vector<WTree> trees;  // all trees of height <= depth, sorted by label
  bool saturated = false;    // true when the enumeration is the full (finite) W-type
};
// All well-founded terms of height <= depth. Levels whose predicted size exceeds
// size_cap are not materialized (throws BudgetError).
WEnumeration wtype_enumerate(const Signature& sig, int depth);

// Predicted |W_d| by the counting recursion t_{d+1} = sum_a t_d^{|B_a|}; saturates
// at cap to avoid overflow.
std::uint64_t wtype_count(const Signature& sig, int depth,
                          std::uint64_t cap = 10'000'000ULL);

struct Path {
  std::vector<WTree> nodes;            // w_0, ..., w_n
  std::vector<std::string> branches;   // b_0, ..., b_{n-1}
};
bool is_path(const Signature& sig, const Path& p);

std::vector<WTree> subterms(const WTree& w);

struct WCharacterization {
  bool structure_iso = false;          // m is a bijection
  bool no_proper_subalgebra = false;   // least m-closed subset is all of V
  bool is_wtype = false;
  std::string detail;
};
// m must be a FinFunction P_f(V) -> V (dom labels matching polynomial_apply(sig, V)).
WCharacterization check_wtype_characterization(const Signature& sig, const FinSet& v,
                                               const FinFunction& m);

// All functions from d to c (tables in lexicographic order).
std::vector<FinFunction> all_functions(const FinSet& d, const FinSet& c);
std::vector<FinFunction> all_surjections(const FinSet& d, const FinSet& c);

}  // namespace tf
