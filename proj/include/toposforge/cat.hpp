#pragma once

// Finitely presented internal categories. Identities are explicit arrows
// named id_<object> so that the site square's cod map is total.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "toposforge/finset.hpp"

namespace tf {

struct FinCategory;
using CatRef = std::shared_ptr<const FinCategory>;

struct FinCategory {
  FinSet objects;
  FinSet arrows;
  std::map<std::string, std::string> dom_;  // arrow -> object
  std::map<std::string, std::string> cod_;
  std::map<std::pair<std::string, std::string>, std::string> comp_;  // (g, f) -> g.f

  static std::string id_name(const std::string& obj) { return "id_" + obj; }

  const std::string& dom(const std::string& a) const { return dom_.at(a); }
  const std::string& cod(const std::string& a) const { return cod_.at(a); }
  std::string id(const std::string& obj) const;
  bool is_identity(const std::string& a) const;
  // g after f; throws InputError when not composable or the table lacks the pair.
  std::string compose(const std::string& g, const std::string& f) const;

  std::vector<std::string> arrows_into(const std::string& obj) const;
  std::vector<std::string> arrows_from(const std::string& obj) const;
  std::vector<std::string> hom(const std::string& d, const std::string& c) const;

  // dom/cod maps and cod as a FinFunction (used by the site square).
  FinFunction cod_function() const;

  FinCategory op() const;

  bool operator==(const FinCategory&) const = default;
};

// One-object category with only the identity.
FinCategory terminal_category();
// Poset 0 -> 1 with the single non-identity arrow named "u".
FinCategory sierpinski_category();

struct CatVerdict {
  bool ok = true;
  std::vector<std::string> violations;
};
CatVerdict validate_category(const FinCategory& c);

struct Generator {
  std::string name;
  std::string dom;
  std::string cod;
};
// A relation equates two composable generator words; words are written in
// composition order, last applied first (["g","f"] means g after f).
struct Relation {
  std::vector<std::string> lhs;
  std::vector<std::string> rhs;
};
struct CatPresentation {
  std::vector<std::string> objects;
  std::vector<Generator> generators;
  std::vector<Relation> relations;
};

// Closes the presentation under composition, rewriting words to canonical
// normal forms via the relations. Throws InputError when more than `budget`
// arrows appear ("category not finite within budget").
FinCategory compile_presentation(const CatPresentation& p, std::size_t budget);

}  // namespace tf
