#pragma once

#include <map>
#include <string>
#include <variant>

#include "ldcalc/rdf_model.hpp"

namespace ldc {

// Name variables range over names, literal variables over literals.
enum class Sort { Name, Literal };

struct Var {
  Sort sort = Sort::Name;
  std::string id;

  friend auto operator<=>(const Var&, const Var&) = default;
  friend bool operator==(const Var&, const Var&) = default;
};

// A position in a pattern: either a concrete term or a variable.
using Slot = std::variant<Term, Var>;

inline bool is_var(const Slot& s) { return std::holds_alternative<Var>(s); }

// Simultaneous, well-sorted map from variables to ground terms.
using Substitution = std::map<Var, Term>;

// Throws SortError if a variable of one sort is mapped to a term of the other.
void check_sorts(const Substitution& s);

// Slot after applying a substitution.
Slot apply(const Substitution& s, const Slot& slot);

std::string to_string(const Var& v);
std::string to_string(const Slot& s);

}  // namespace ldc
