#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ldcalc/config.hpp"
#include "ldcalc/constraints.hpp"
#include "ldcalc/syntax.hpp"

namespace ldc {

// Desk-scale parameters shared by the randomized suites.
struct DeskParams {
  std::vector<Name> names{Name("n0"), Name("n1"), Name("n2"), Name("n3")};
  std::vector<Literal> literals{Literal(std::string("ab")), Literal(std::int64_t{3})};
  unsigned max_store = 3;
  unsigned query_depth = 3;
  unsigned iter_bound = 2;
  unsigned depth = 3;

  // Universe = names and literals above.
  EvalConfig config() const;
};

struct QueryShape {
  bool bangs = true;
  bool selects = true;
  bool filters = true;
  bool continuations = true;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed, DeskParams params = {});

  std::mt19937_64& rng() { return rng_; }
  const DeskParams& params() const { return params_; }

  std::size_t below(std::size_t n);
  bool chance(double p);

  Name name();
  Literal literal();
  Term term();
  Triple triple();
  std::vector<Triple> store();
  // Random alias table over the pool names.
  AliasTable alias();

  // Closed query of the given depth.
  QueryPtr query(unsigned depth, const QueryShape& shape = {});
  // Closed constraint over the given variables, which stay free.
  ConstraintPtr constraint(const std::vector<Var>& vars, unsigned depth = 2);
  // Closed process: store, one or two queries, sometimes a scope. Asks
  // are biased towards the generated store so that commitments occur.
  ProcessPtr process(const QueryShape& shape = {});
  // A small process usable as a continuation; mentions in-scope variables.
  ProcessPtr continuation(const std::vector<Var>& vars);

  // Query under a list of in-scope variables.
  QueryPtr open_query(unsigned depth, std::vector<Var>& vars, const QueryShape& shape);

 private:
  Slot name_slot(const std::vector<Var>& vars);
  Slot object_slot(const std::vector<Var>& vars);
  Pattern pattern(const std::vector<Var>& vars);

  std::mt19937_64 rng_;
  DeskParams params_;
  // Stored triples of the process being built; asks lean towards them.
  std::vector<Triple> hints_;
  unsigned fresh_ = 0;
};

}  // namespace ldc
