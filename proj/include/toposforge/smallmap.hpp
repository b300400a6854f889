#pragma once

// Classes of small maps over a finite probe universe: the stability and
// local-fullness axioms, closure under the pretopos constructions,
// representability, the collection axiom, the collection-span construction
// and the equivalent collection site, plus the classes they induce on
// presheaves and sheaves.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "toposforge/presheaf.hpp"
#include "toposforge/sheaf.hpp"
#include "toposforge/site.hpp"

namespace tf {

struct MapClass {
  enum class Kind { fiber_bound, all, explicit_list };
  Kind kind = Kind::all;
  std::size_t bound = 0;
  std::vector<FinFunction> maps;
  // Explicit classes match members by fiber-size multiset by default; with
  // literal matching only the listed maps themselves belong.
  bool up_to_iso = true;

  bool contains(const FinFunction& f) const;
  std::function<bool(const FinFunction&)> predicate() const;

  static MapClass fiber_bound_class(std::size_t k);
  static MapClass all_maps();
  static MapClass explicit_class(std::vector<FinFunction> ms, bool up_to_iso = true);
};

// All subsets of a labeled carrier and all functions among them; the finite
// fragment over which the axiom quantifiers range.
struct ProbeUniverse {
  std::vector<FinSet> sets;
  std::vector<FinFunction> maps;

  explicit ProbeUniverse(std::size_t carrier);
};

struct AxiomVerdict {
  bool ok = true;
  std::vector<std::string> violations;
};

struct StableVerdict {
  AxiomVerdict pullback_stability;  // S1
  AxiomVerdict descent;             // S2
  AxiomVerdict sum;                 // S3
  bool ok() const { return pullback_stability.ok && descent.ok && sum.ok; }
};
StableVerdict check_stable(const MapClass& s, const ProbeUniverse& p);

struct LocallyFullVerdict {
  AxiomVerdict triangle;     // S4
  AxiomVerdict composition;  // S4a
  AxiomVerdict diagonal;     // S4b
  bool remark_applies = false;  // identities small and S1 holds
  bool remark_agrees = true;    // S4 equals S4a and S4b together
  bool ok() const { return triangle.ok; }
};
LocallyFullVerdict check_locally_full(const MapClass& s, const ProbeUniverse& p);

struct ClosureVerdict {
  AxiomVerdict sums;
  AxiomVerdict quotients;
  AxiomVerdict pi;
  AxiomVerdict w;
  bool ok() const { return sums.ok && quotients.ok && pi.ok && w.ok; }
};
ClosureVerdict check_pi_w_closure(const MapClass& s, const ProbeUniverse& p);

struct UniversalMap {
  FinFunction pi;  // E -> U, one fiber per small fiber size
};

struct Representation {
  bool ok = true;
  UniversalMap universal;
  std::vector<std::string> failures;
};
// Builds pi from the fiber sizes occurring among small probe maps and checks
// that every small map is classified by a double pullback with an epi base.
Representation find_representation(const MapClass& s, const ProbeUniverse& p);

struct CollectionAxiomVerdict {
  AxiomVerdict quasi_pullbacks;
  // reformulation: the universal small map is a collection map
  CollectionSpanVerdict universal_is_collection;
  bool ok() const { return quasi_pullbacks.ok && universal_is_collection.holds; }
};
// With exclude_sections the search may not complete a square by splitting the
// given epi, which is how every instance is solved under external choice.
CollectionAxiomVerdict check_collection_axiom(const MapClass& s, const ProbeUniverse& p,
                                              bool exclude_sections = false);

// A collection map needs no relativization; it is a collection span whose
// second leg carries no constraint.
CollectionSpanVerdict is_collection_map(const FinFunction& g, int bound = -1);

struct CollectionSpanConstruction {
  FinSet c;           // triples (a, u, p) with p a cover of the fiber over a
  FinSet d;           // pairs of a triple and a point of E_u
  FinFunction g;      // d -> c
  FinFunction h;      // d -> dom f
  FinFunction to_a;   // c -> cod f
  bool quasi_pullback = false;
  bool g_small = false;
  CollectionSpanVerdict span;  // (g, h) as a collection span over cod f
};
// Builds the span of all universal-fiber covers of the fibers of f;
// throws InputError when f is not small.
CollectionSpanConstruction collsp_construct(const FinFunction& f, const MapClass& s,
                                            const UniversalMap& pi);

// Reindexes the site's covers by the fibers of the universal map, composing
// arrows through the refining cover; the result is a collection site with
// the same sheaves.
Site equiv_collection_site(const Site& site, const MapClass& s, const UniversalMap& pi);

// Pointwise smallness for presheaf morphisms: the total map over the objects
// must belong to the base class.
struct PresheafMapClass {
  MapClass base_class;
  CatRef base;
  bool cod_small = true;  // the codomain map of the base category is small
  std::string warning;

  bool contains(const PresheafMorphism& f) const;
};
PresheafMapClass induce_presheaf_class(const MapClass& s, CatRef base);
// Same membership; records the site so probes can be restricted to sheaves.
struct SheafMapClass {
  PresheafMapClass pointwise;
  Site site;

  bool contains(const PresheafMorphism& f) const { return pointwise.contains(f); }
};
SheafMapClass induce_sheaf_class(const MapClass& s, const Site& site);

struct PresheafProbe {
  CatRef base;
  std::vector<Presheaf> presheaves;
  std::vector<PresheafMorphism> maps;
};
PresheafProbe presheaf_probe(CatRef base, std::size_t max_size);
// Only sheaves for the site and the maps between them.
PresheafProbe sheaf_probe(const Site& site, std::size_t max_size);

StableVerdict check_stable_presheaf(const PresheafMapClass& s, const PresheafProbe& p);
LocallyFullVerdict check_locally_full_presheaf(const PresheafMapClass& s,
                                               const PresheafProbe& p);

}  // namespace tf
