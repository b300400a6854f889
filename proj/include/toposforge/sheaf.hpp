#pragma once

// Sheaf conditions for internal sites, sheafification through the plus
// construction over the covering-sieve lattice, local surjectivity, and
// sums and quotients computed in presheaves and then sheafified.

#include <map>
#include <string>
#include <vector>

#include "toposforge/presheaf.hpp"
#include "toposforge/site.hpp"

namespace tf {

struct SheafVerdict {
  bool sheaf = true;
  bool separated = true;
  // one entry per failing (cover, compatible family) instance
  std::vector<std::string> failures;
};

// Unique-amalgamation condition over every cover and every compatible family.
// Compatibility quantifies over all factorization pairs between branches.
SheafVerdict is_sheaf_for(const Presheaf& p, const Site& s);
bool is_separated(const Presheaf& p, const Site& s);

// Every section of the codomain must, after restriction along some covering
// sieve, land in the image of f.
bool is_locally_surjective(const PresheafMorphism& f, const Site& s);

struct Sheafification {
  Presheaf sheaf;
  PresheafMorphism unit;  // P -> aP
};
// Plus construction applied twice: elements are germs of matching families on
// covering sieves, two families identified when they agree on the
// intersection of their sieves.
Sheafification sheafify(const Presheaf& p, const Site& s);

struct SheafSum {
  Presheaf object;
  PresheafMorphism inl, inr;
};
SheafSum sheaf_sum(const Presheaf& f, const Presheaf& g, const Site& s);

struct SheafQuotient {
  Presheaf object;
  PresheafMorphism proj;
};
SheafQuotient sheaf_quotient(const PresheafMorphism& r1, const PresheafMorphism& r2,
                             const Site& s);

struct SameSheavesVerdict {
  bool equal = true;
  std::size_t checked = 0;
  std::string witness;  // a presheaf description separating the sites
};
// Exhaustive comparison of the two sheaf subcategories over presheaves with
// values of size <= size_bound, up to isomorphism.
SameSheavesVerdict same_sheaves(const Site& s1, const Site& s2, std::size_t size_bound);

}  // namespace tf
