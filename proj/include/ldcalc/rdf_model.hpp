#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ldc {

// An interned URI-like identifier. Equality is identity of the interned
// string; ordering is by content so that canonical forms do not depend on
// interning order.
class Name {
 public:
  Name();
  explicit Name(std::string_view id);

  const std::string& str() const { return *id_; }

  friend bool operator==(const Name& a, const Name& b) { return a.id_ == b.id_; }
  friend bool operator<(const Name& a, const Name& b) {
    return a.id_ != b.id_ && *a.id_ < *b.id_;
  }
  friend bool operator!=(const Name& a, const Name& b) { return !(a == b); }

  std::size_t hash() const { return std::hash<const void*>{}(id_); }

 private:
  const std::string* id_;
};

// String or integer data value. A string never equals an integer.
class Literal {
 public:
  using Value = std::variant<std::string, std::int64_t>;

  explicit Literal(std::string s) : value_(std::move(s)) {}
  explicit Literal(std::int64_t n) : value_(n) {}

  bool is_string() const { return std::holds_alternative<std::string>(value_); }
  bool is_integer() const { return std::holds_alternative<std::int64_t>(value_); }
  const std::string& as_string() const { return std::get<std::string>(value_); }
  std::int64_t as_integer() const { return std::get<std::int64_t>(value_); }
  const Value& value() const { return value_; }

  friend bool operator==(const Literal& a, const Literal& b) { return a.value_ == b.value_; }
  friend bool operator!=(const Literal& a, const Literal& b) { return !(a == b); }
  // Integers order before strings.
  friend bool operator<(const Literal& a, const Literal& b);

 private:
  Value value_;
};

class Term {
 public:
  Term(Name n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  Term(Literal l) : value_(std::move(l)) {}  // NOLINT(google-explicit-constructor)

  bool is_name() const { return std::holds_alternative<Name>(value_); }
  bool is_literal() const { return std::holds_alternative<Literal>(value_); }
  const Name& name() const { return std::get<Name>(value_); }
  const Literal& literal() const { return std::get<Literal>(value_); }

  friend bool operator==(const Term& a, const Term& b) { return a.value_ == b.value_; }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  // Names order before literals.
  friend bool operator<(const Term& a, const Term& b) { return a.value_ < b.value_; }

 private:
  std::variant<Name, Literal> value_;
};

// Literals may only occur in object position; the field types enforce it.
struct Triple {
  Name subject;
  Name predicate;
  Term object;

  friend bool operator==(const Triple& a, const Triple& b) {
    return a.subject == b.subject && a.predicate == b.predicate && a.object == b.object;
  }
  friend bool operator!=(const Triple& a, const Triple& b) { return !(a == b); }
  friend bool operator<(const Triple& a, const Triple& b);
};

using NamePair = std::pair<Name, Name>;

// A finite set of alias assumptions a <= b. The preorder it induces is the
// reflexive-transitive closure, computed once on first use. Instances are
// immutable; `with` returns an extended copy.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::vector<NamePair> assumptions);

  const std::set<NamePair>& assumptions() const { return assumptions_; }
  AliasTable with(const Name& smaller, const Name& larger) const;

  // Every name mentioned by some assumption.
  std::set<Name> names() const;

  bool leq(const Name& a, const Name& b) const;
  // {b | b <= a}, always containing a itself.
  std::vector<Name> downset(const Name& a) const;
  // {b | a <= b}, always containing a itself.
  std::vector<Name> upset(const Name& a) const;

 private:
  struct Closure {
    std::once_flag once;
    std::set<NamePair> pairs;  // non-reflexive part of the closure
  };
  const std::set<NamePair>& closed() const;

  std::set<NamePair> assumptions_;
  std::shared_ptr<Closure> closure_ = std::make_shared<Closure>();
};

bool name_leq(const AliasTable& table, const Name& a, const Name& b);
bool triple_leq(const AliasTable& table, const Triple& c, const Triple& d);

// The closure restricted to the names of the assumptions plus `universe`.
std::set<NamePair> closure(const AliasTable& table, const std::set<Name>& universe = {});

// All triples below / above `t` under the pointwise preorder. Literal
// objects stay fixed.
std::vector<Triple> triple_downset(const AliasTable& table, const Triple& t);
std::vector<Triple> triple_upset(const AliasTable& table, const Triple& t);

// Alias file: one `<name> <= <name>` per line, `#` comments, blank lines
// ignored. Throws ParseError.
AliasTable parse_alias(std::string_view text);

// Concrete syntax for terms: bare names where unambiguous, `<...>` otherwise;
// strings quoted with backslash escapes; integers in decimal.
std::string to_string(const Name& n);
std::string to_string(const Literal& l);
std::string to_string(const Term& t);
// `s p o` in concrete syntax, without a trailing dot.
std::string to_string(const Triple& t);
// True if `id` can be written without angle brackets.
bool is_bare_name(std::string_view id);
// Reserved words of the query and process syntax.
bool is_keyword(std::string_view id);

}  // namespace ldc

template <>
struct std::hash<ldc::Name> {
  std::size_t operator()(const ldc::Name& n) const noexcept { return n.hash(); }
};
