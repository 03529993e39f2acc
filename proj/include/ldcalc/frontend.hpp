#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldcalc/config.hpp"
#include "ldcalc/equivalence.hpp"
#include "ldcalc/algebra.hpp"
#include "ldcalc/syntax.hpp"

namespace ldc {

inline constexpr int kFormatVersion = 1;

// Store, alias table and bounded-semantics parameters for one CLI run.
struct Workspace {
  std::vector<Triple> store;
  AliasTable alias;
  std::vector<Term> extras;
  unsigned iter_bound = 2;
  unsigned depth = 3;

  // Universe = store terms and extras; each process adds its own terms.
  EvalConfig config() const;
  // The process composed with the stored triples.
  ProcessPtr attach(const ProcessPtr& p) const;
  // Names and literals a select may pick for p.
  Pool pool_for(const ProcessPtr& p) const;
};

// Reads a whole file; throws Error if it cannot be opened.
std::string read_file(const std::string& path);
// Comma-separated terms in concrete syntax.
std::vector<Term> parse_pool(const std::string& text);

// Report texts; each begins with the format-version header.
std::string eval_report(const Workspace& ws, const ProcessPtr& p);
// Follows n commitments, choosing among successors with the seeded generator.
std::string step_report(const Workspace& ws, const ProcessPtr& p, unsigned n, std::uint64_t seed);
std::string lts_report(const Workspace& ws, const ProcessPtr& p);
std::string equiv_report(const std::string& command, const BisimResult& r);
std::string rewrite_report(const std::string& goal, const RewriteReport& r);

// 0 bisimilar, 1 distinguished, 2 inconclusive.
int exit_code(const BisimResult& r);

}  // namespace ldc
