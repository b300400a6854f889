#pragma once

// Internal sites on a finite category: covering families, the axioms (C),
// (M) and (L), collection spans, depth-truncated generation of an equivalent
// Grothendieck site, and a covering-sieve fixpoint that serves as an
// independent oracle for sheaf equivalence.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "toposforge/cat.hpp"

namespace tf {

struct CoveringFamily {
  std::string target;
  std::vector<std::string> arrows;  // indexed by position; cod(arrow) = target

  // Sorted arrow multiset with the target; families with equal canonical
  // form impose the same sheaf condition.
  std::string canonical() const;
};

struct Site {
  CatRef base;
  std::vector<CoveringFamily> covers;

  std::vector<std::size_t> covers_of(const std::string& obj) const;  // indices
};

struct SiteVerdict {
  bool ok = true;
  std::vector<std::string> violations;
};
SiteVerdict validate_site(const Site& s);

// The covering-family square: phi indexes branches by family, m picks the
// arrow, target sends a family to the object it covers.
struct SiteSquare {
  FinSet cov;     // one label per family, "U<n>"
  FinSet cov_u;   // one label per branch, "U<n>.i<k>"
  FinFunction phi;     // cov_u -> cov
  FinFunction m;       // cov_u -> C1
  FinFunction target;  // cov -> C0
};
SiteSquare site_square(const Site& s);

// True iff some delta with through o delta = f exists.
bool factors_through(const FinCategory& c, const std::string& f, const std::string& through);

SiteVerdict check_C(const Site& s);

struct StrongChoice {
  bool ok = true;
  // "(cover canonical)|f" -> canonical form of the chosen refining family
  std::map<std::string, std::string> choice;
  std::vector<std::string> failures;
};
StrongChoice check_strong_C(const Site& s);

SiteVerdict check_M(const Site& s);
SiteVerdict check_L(const Site& s);

struct CollectionSpanVerdict {
  bool holds = true;
  std::size_t cover_bound = 0;  // largest |F| enumerated
  std::string counterexample;
};
// Span g: D -> C, h: D -> B relativized over A by over: C -> A. For every
// fiber D_c and surjection F onto it with |F| <= bound (default |D_c| + 2),
// some fiber D_c' in the same A-slice must cover D_c over B through F.
// With exclude_sections the identity self-cover is not accepted, modelling a
// setting where the factorization cannot be produced by splitting the cover.
CollectionSpanVerdict is_collection_span(const FinFunction& g, const FinFunction& h,
                                         const FinFunction& over, int bound = -1,
                                         bool exclude_sections = false);

CollectionSpanVerdict is_collection_site(const Site& s);

bool has_small_covers(const Site& s, const std::function<bool(const FinFunction&)>& small);

// Truncated tree of iterated covers rooted at an object.
struct CovTree {
  std::string root;
  bool leaf = true;
  std::size_t cover = 0;          // index into the source site's covers
  std::vector<CovTree> children;  // one per arrow of that cover

  std::string describe() const;
};

// The covering family a tree flattens to: a leaf gives {id_root}, a node
// composes each of its cover's arrows with the families of its subtrees.
CoveringFamily flatten_tree(const Site& s, const CovTree& t);

struct GeneratedSite {
  Site site;
  // family canonical form -> every tree of height <= depth flattening to it
  std::map<std::string, std::vector<CovTree>> registry;
};
// All covering trees of height <= depth per object, deduplicated by the
// canonical form of their families.
GeneratedSite generate_grothendieck(const Site& s, int depth);

// A sieve on C, kept as the sorted set of its arrows (all with codomain C,
// closed under precomposition).
using Sieve = std::vector<std::string>;

Sieve maximal_sieve(const FinCategory& c, const std::string& obj);
Sieve generated_sieve(const FinCategory& c, const CoveringFamily& u);
// f: D -> C, sieve on C; the result is a sieve on D.
Sieve pullback_sieve(const FinCategory& c, const Sieve& s, const std::string& f);
// All sieves on obj (downward-closed arrow subsets).
std::vector<Sieve> all_sieves(const FinCategory& c, const std::string& obj);

// Least Grothendieck topology containing the covers: per object, the sieves
// that are covering. Closed under pullback and local character; contains the
// maximal sieves.
std::map<std::string, std::vector<Sieve>> sieve_topology_fixpoint(const Site& s);

}  // namespace tf
