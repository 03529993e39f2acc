#pragma once

#include <vector>

#include "ldcalc/config.hpp"
#include "ldcalc/derivation.hpp"
#include "ldcalc/syntax.hpp"

namespace ldc {

struct Commitment {
  ProcessPtr source;  // normal form
  ProcessPtr target;  // normal form
  DerivationPtr trace;  // set when cfg.trace
};

// All one-step commitments of p, one per congruence class of targets,
// sorted by target. Throws OpenProcess if p has a free variable.
std::vector<Commitment> commitments(const ProcessPtr& p, const EvalConfig& cfg);

// Targets of commitments(p, cfg).
std::vector<ProcessPtr> successors(const ProcessPtr& p, const EvalConfig& cfg);

bool reduces(const ProcessPtr& p, const ProcessPtr& q, const EvalConfig& cfg);

// Throws OpenProcess naming a free variable of p, if any.
void require_closed(const Process& p);

}  // namespace ldc
