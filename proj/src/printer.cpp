#include "ldcalc/syntax.hpp"

namespace ldc {

namespace {

void print(const Query& q, std::string& out);
void print(const Process& p, std::string& out);

void print(const Query& q, std::string& out) {
  switch (q.kind()) {
    case QueryKind::Ask:
      out += "ask ";
      out += to_string(q.pattern());
      return;
    case QueryKind::Filter:
      out += "filter (";
      out += to_string(*q.constraint());
      out += ')';
      return;
    case QueryKind::Choice:
    case QueryKind::Tensor:
      out += '(';
      print(*q.left(), out);
      out += q.kind() == QueryKind::Choice ? " + " : " & ";
      print(*q.right(), out);
      out += ')';
      return;
    case QueryKind::SelectName:
    case QueryKind::SelectLiteral:
      out += "select ";
      out += to_string(q.var());
      out += " { ";
      print(*q.body(), out);
      out += " }";
      return;
    case QueryKind::Bang:
      out += "bang { ";
      print(*q.body(), out);
      out += " }";
      return;
    case QueryKind::Then:
      out += '(';
      print(*q.left(), out);
      out += " then { ";
      print(*q.continuation(), out);
      out += " })";
      return;
  }
}

// Parallel composition is printed as a right-nested chain without
// parentheses; a left operand that is itself a Par gets parenthesised.
void print(const Process& p, std::string& out) {
  switch (p.kind()) {
    case ProcessKind::Nothing:
      out += "nil";
      return;
    case ProcessKind::Par:
      if (p.left()->kind() == ProcessKind::Par) {
        out += '(';
        print(*p.left(), out);
        out += ')';
      } else {
        print(*p.left(), out);
      }
      out += " || ";
      print(*p.right(), out);
      return;
    case ProcessKind::Scope:
      out += "new ";
      out += to_string(p.bound());
      out += " { ";
      print(*p.body(), out);
      out += " }";
      return;
    case ProcessKind::Query:
      out += "query { ";
      print(*p.as_query(), out);
      out += " }";
      return;
    case ProcessKind::Stored:
      out += "data ";
      out += to_string(p.triple());
      return;
  }
}

}  // namespace

std::string to_string(const Query& q) {
  std::string out;
  print(q, out);
  return out;
}

std::string to_string(const Process& p) {
  std::string out;
  print(p, out);
  return out;
}

}  // namespace ldc
