#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "ldcalc/rdf_model.hpp"
#include "ldcalc/syntax.hpp"

namespace ldc {

// Parameters of the bounded semantics. Every verdict the library produces
// is relative to (universe, iter_bound, exploration depth).
struct EvalConfig {
  AliasTable alias;
  // Extra select candidates; names and literals of the process are added.
  std::set<Term> universe;
  // Total number of dereliction copies available to one query per step,
  // shared by all bangs in that query.
  unsigned iter_bound = 2;
  // Prefix for names extruded on output labels.
  std::string fresh_prefix = "_:x";
  std::size_t state_cap = 50000;
  // Record derivation trees alongside results.
  bool trace = false;
};

// Select candidates for one process.
struct Pool {
  std::vector<Name> names;
  std::vector<Literal> literals;
};

// cfg.universe, the alias table's names, and every name and literal of p.
Pool make_pool(const EvalConfig& cfg, const Process& p);

// Throws Error if the alias table mentions a reserved bound-name or
// extrusion prefix.
void validate(const EvalConfig& cfg);

}  // namespace ldc
