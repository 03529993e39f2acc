#pragma once

#include <string_view>
#include <vector>

#include "ldcalc/constraints.hpp"
#include "ldcalc/rdf_model.hpp"
#include "ldcalc/syntax.hpp"

namespace ldc {

// One `s p o .` per line, `#` comments. Throws ParseError, or
// LiteralInSubject for a literal in subject or predicate position.
std::vector<Triple> parse_store(std::string_view text);

// Closed queries and processes. Derived forms are expanded while parsing.
// Throws ParseError or UnboundVariable.
QueryPtr parse_query(std::string_view text);
ProcessPtr parse_process(std::string_view text);

// A process, or failing that a query wrapped as a process.
ProcessPtr parse_program(std::string_view text);

// Constraint over the given variables (bare `?x` resolves by id).
ConstraintPtr parse_constraint(std::string_view text, const std::vector<Var>& vars = {});

// A single term in concrete syntax.
Term parse_term(std::string_view text);

}  // namespace ldc
