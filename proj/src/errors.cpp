#include "ldcalc/errors.hpp"

namespace ldc {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

UnboundVariable::UnboundVariable(const std::string& variable, std::size_t line,
                                 std::size_t column)
    : ParseError("unbound variable " + variable, line, column), variable_(variable) {}

}  // namespace ldc
