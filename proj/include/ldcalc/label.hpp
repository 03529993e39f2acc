#pragma once

#include <string>
#include <set>
#include <string_view>
#include <vector>

#include "ldcalc/rdf_model.hpp"

namespace ldc {

// Transition labels. Triples and extruded names are kept sorted, so two
// labels equal as multisets compare equal as values.
struct Label {
  enum class Kind { Unit, Input, Output };

  Kind kind = Kind::Unit;
  std::vector<Name> extruded;  // Output only
  std::vector<Triple> triples;

  static Label unit() { return Label{}; }
  // An empty multiset gives the unit label.
  static Label input(std::vector<Triple> triples);
  static Label output(std::vector<Name> extruded, std::vector<Triple> triples);

  bool is_unit() const { return kind == Kind::Unit; }
  bool is_input() const { return kind == Kind::Input; }
  bool is_output() const { return kind == Kind::Output; }

  friend bool operator==(const Label&, const Label&) = default;
};

bool operator<(const Label& a, const Label& b);

std::set<Name> free_names(const Label& l);

// `--unit--`, `--in: t1 (x) t2--`, `--out[a,b]: t1 (x) t2--`.
std::string to_string(const Label& l);
// Throws ParseError.
Label parse_label(std::string_view text);

}  // namespace ldc
