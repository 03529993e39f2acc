#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ldcalc/config.hpp"
#include "ldcalc/label.hpp"
#include "ldcalc/lts.hpp"
#include "ldcalc/syntax.hpp"

namespace ldc {

struct StateSpace {
  std::vector<ProcessPtr> states;  // normal forms
  // Outgoing edges of expanded states; empty and meaningless otherwise.
  std::vector<std::vector<std::pair<Label, std::size_t>>> edges;
  std::vector<bool> expanded;
  std::vector<unsigned> distance;
  // Some reachable state was left unexpanded.
  bool truncated = false;

  std::optional<std::size_t> find(const Process& p) const;

 private:
  friend class Explorer;
  std::map<std::string, std::size_t> index_;
};

// Breadth-first exploration up to `depth` steps from each root. A state at
// the depth limit is still expanded when all its successors are already
// known. Throws StateExplosion beyond cfg.state_cap states.
StateSpace explore(const std::vector<ProcessPtr>& roots, const EvalConfig& cfg, unsigned depth);

// Hennessy-Milner formulae over transition labels.
struct Formula {
  enum class Kind { True, Not, And, Diamond };
  Kind kind = Kind::True;
  Label label;                    // Diamond
  std::vector<Formula> children;  // Not: 1, And: any, Diamond: 1
};

std::string to_string(const Formula& f);
// Checks the formula by computing transitions on demand.
bool models(const ProcessPtr& p, const Formula& f, const EvalConfig& cfg);

enum class Verdict { Bisimilar, Distinguished, Inconclusive };

const char* to_string(Verdict v);

struct BisimResult {
  Verdict verdict = Verdict::Inconclusive;
  // Distinguished: a formula true of the left process and false of the
  // right one, and the attacker's label sequence that it follows.
  std::optional<Formula> witness;
  std::vector<Label> path;
  std::size_t states = 0;
  bool truncated = false;
  // Parameters the verdict is relative to.
  std::size_t pool_size = 0;
  unsigned iter_bound = 0;
  unsigned depth = 0;
};

std::string to_string(const BisimResult& r);

BisimResult bisimilar(const ProcessPtr& p, const ProcessPtr& q, const EvalConfig& cfg,
                      unsigned depth);
// Each side explored under its own configuration; selects on both sides
// range over the union of both universes and the terms of p and q.
BisimResult bisimilar(const ProcessPtr& p, const EvalConfig& cfg_p, const ProcessPtr& q,
                      const EvalConfig& cfg_q, unsigned depth);

// U <= V iff U (+) V ~ V.
BisimResult query_leq(const QueryPtr& u, const QueryPtr& v, const EvalConfig& cfg,
                      unsigned depth);

// Parallel components put next to the compared processes.
struct Context {
  std::vector<ProcessPtr> components;
};

std::string to_string(const Context& c);
ProcessPtr plug(const Context& c, const ProcessPtr& p);

// Searches parallel contexts of up to `budget` stored triples, drawn from
// the asks and stores of p and q instantiated over the pool (at most 16
// candidates), for one in which the two processes' reduction behaviour
// differs. Observations up to `budget` reduction steps are compared; an
// observation is the stored-triple multiset (bound names blurred, names
// identified within alias cycles) together with the successors'
// observations. Refutation only: nullopt proves nothing.
std::optional<Context> contextual_counterexample(const ProcessPtr& p, const ProcessPtr& q,
                                                 const EvalConfig& cfg, unsigned budget);

}  // namespace ldc
