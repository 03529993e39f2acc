#include "ldcalc/rdf_model.hpp"

#include <map>
#include <tuple>
#include <unordered_set>

#include "ldcalc/errors.hpp"

namespace ldc {

namespace {

struct InternTable {
  std::mutex mutex;
  std::unordered_set<std::string> strings;
};

InternTable& intern_table() {
  static InternTable table;
  return table;
}

const std::string* intern(std::string_view s) {
  auto& table = intern_table();
  std::lock_guard<std::mutex> lock(table.mutex);
  return &*table.strings.emplace(s).first;
}

}  // namespace

Name::Name() {
  static const std::string* const empty = intern("");
  id_ = empty;
}
Name::Name(std::string_view id) : id_(intern(id)) {}

bool operator<(const Literal& a, const Literal& b) {
  if (a.is_integer() != b.is_integer()) return a.is_integer();
  if (a.is_integer()) return a.as_integer() < b.as_integer();
  return a.as_string() < b.as_string();
}

bool operator<(const Triple& a, const Triple& b) {
  if (a.subject != b.subject) return a.subject < b.subject;
  if (a.predicate != b.predicate) return a.predicate < b.predicate;
  return a.object < b.object;
}

AliasTable::AliasTable(std::vector<NamePair> assumptions)
    : assumptions_(assumptions.begin(), assumptions.end()) {}

AliasTable AliasTable::with(const Name& smaller, const Name& larger) const {
  std::vector<NamePair> pairs(assumptions_.begin(), assumptions_.end());
  pairs.emplace_back(smaller, larger);
  return AliasTable(std::move(pairs));
}

std::set<Name> AliasTable::names() const {
  std::set<Name> out;
  for (const auto& [a, b] : assumptions_) {
    out.insert(a);
    out.insert(b);
  }
  return out;
}

const std::set<NamePair>& AliasTable::closed() const {
  std::call_once(closure_->once, [this] {
    std::map<Name, std::set<Name>> succ;
    for (const auto& [a, b] : assumptions_) succ[a].insert(b);
    // Depth-first reachability from every source.
    for (const auto& [source, _] : succ) {
      std::vector<Name> stack{source};
      std::set<Name> seen;
      while (!stack.empty()) {
        Name n = stack.back();
        stack.pop_back();
        auto it = succ.find(n);
        if (it == succ.end()) continue;
        for (const auto& m : it->second) {
          if (seen.insert(m).second) stack.push_back(m);
        }
      }
      for (const auto& m : seen) {
        if (m != source) closure_->pairs.emplace(source, m);
      }
    }
  });
  return closure_->pairs;
}

bool AliasTable::leq(const Name& a, const Name& b) const {
  return a == b || closed().count({a, b}) > 0;
}

std::vector<Name> AliasTable::downset(const Name& a) const {
  std::vector<Name> out{a};
  for (const auto& [x, y] : closed()) {
    if (y == a) out.push_back(x);
  }
  return out;
}

std::vector<Name> AliasTable::upset(const Name& a) const {
  std::vector<Name> out{a};
  for (const auto& [x, y] : closed()) {
    if (x == a) out.push_back(y);
  }
  return out;
}

bool name_leq(const AliasTable& table, const Name& a, const Name& b) { return table.leq(a, b); }

bool triple_leq(const AliasTable& table, const Triple& c, const Triple& d) {
  if (!table.leq(c.subject, d.subject) || !table.leq(c.predicate, d.predicate)) return false;
  if (c.object.is_literal() || d.object.is_literal()) return c.object == d.object;
  return table.leq(c.object.name(), d.object.name());
}

std::set<NamePair> closure(const AliasTable& table, const std::set<Name>& universe) {
  std::set<Name> names = table.names();
  names.insert(universe.begin(), universe.end());
  std::set<NamePair> out;
  for (const auto& a : names) {
    for (const auto& b : names) {
      if (table.leq(a, b)) out.emplace(a, b);
    }
  }
  return out;
}

namespace {

template <typename Expand>
std::vector<Triple> pointwise(const Triple& t, Expand expand) {
  std::vector<Triple> out;
  auto subjects = expand(t.subject);
  auto predicates = expand(t.predicate);
  std::vector<Term> objects;
  if (t.object.is_literal()) {
    objects.push_back(t.object);
  } else {
    for (const auto& n : expand(t.object.name())) objects.emplace_back(n);
  }
  for (const auto& s : subjects) {
    for (const auto& p : predicates) {
      for (const auto& o : objects) out.push_back(Triple{s, p, o});
    }
  }
  return out;
}

}  // namespace

std::vector<Triple> triple_downset(const AliasTable& table, const Triple& t) {
  return pointwise(t, [&](const Name& n) { return table.downset(n); });
}

std::vector<Triple> triple_upset(const AliasTable& table, const Triple& t) {
  return pointwise(t, [&](const Name& n) { return table.upset(n); });
}

AliasTable parse_alias(std::string_view text) {
  std::vector<NamePair> pairs;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::vector<std::pair<std::string_view, std::size_t>> words;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      if (i >= line.size()) break;
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
      words.emplace_back(line.substr(start, i - start), start + 1);
    }
    if (words.empty()) continue;
    if (words.size() != 3 || words[1].first != "<=") {
      throw ParseError("expected `<name> <= <name>`", line_no, words.front().second);
    }
    auto strip = [&](std::pair<std::string_view, std::size_t> w) {
      std::string_view s = w.first;
      if (s.size() >= 2 && s.front() == '<' && s.back() == '>') s = s.substr(1, s.size() - 2);
      if (s.empty() || s.front() == '"' || s.front() == '?') {
        throw ParseError("alias assumptions relate names only", line_no, w.second);
      }
      return Name(s);
    };
    pairs.emplace_back(strip(words[0]), strip(words[2]));
  }
  return AliasTable(std::move(pairs));
}

}  // namespace ldc

namespace ldc {

bool is_keyword(std::string_view id) {
  static const std::set<std::string_view> keywords = {
      "ask",  "filter", "select", "bang", "then", "optional", "limit", "true",
      "false", "len",   "nil",    "new",  "data", "query"};
  return keywords.count(id) > 0;
}

bool is_bare_name(std::string_view id) {
  if (id.empty() || is_keyword(id)) return false;
  bool numeric = true;
  for (std::size_t i = 0; i < id.size(); ++i) {
    char c = id[i];
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '_' || c == ':' || c == '.' || c == '/' || c == '#' || c == '-';
    if (!ok) return false;
    if (!((c >= '0' && c <= '9') || (i == 0 && c == '-'))) numeric = false;
  }
  if (numeric) return false;
  return id.back() != '.';
}

std::string to_string(const Name& n) {
  if (is_bare_name(n.str())) return n.str();
  return "<" + n.str() + ">";
}

std::string to_string(const Literal& l) {
  if (l.is_integer()) return std::to_string(l.as_integer());
  std::string out = "\"";
  for (char c : l.as_string()) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string to_string(const Term& t) {
  return t.is_name() ? to_string(t.name()) : to_string(t.literal());
}

std::string to_string(const Triple& t) {
  return to_string(t.subject) + " " + to_string(t.predicate) + " " + to_string(t.object);
}

}  // namespace ldc
