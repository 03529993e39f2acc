#include "ldcalc/label.hpp"

#include <algorithm>

#include "ldcalc/errors.hpp"
#include "ldcalc/parser.hpp"

namespace ldc {

Label Label::input(std::vector<Triple> triples) {
  if (triples.empty()) return unit();
  std::sort(triples.begin(), triples.end());
  return Label{Kind::Input, {}, std::move(triples)};
}

Label Label::output(std::vector<Name> extruded, std::vector<Triple> triples) {
  if (triples.empty()) return unit();
  std::sort(extruded.begin(), extruded.end());
  std::sort(triples.begin(), triples.end());
  return Label{Kind::Output, std::move(extruded), std::move(triples)};
}

bool operator<(const Label& a, const Label& b) { return to_string(a) < to_string(b); }

std::set<Name> free_names(const Label& l) {
  std::set<Name> out;
  for (const auto& t : l.triples) {
    out.insert(t.subject);
    out.insert(t.predicate);
    if (t.object.is_name()) out.insert(t.object.name());
  }
  for (const auto& a : l.extruded) out.erase(a);
  return out;
}

std::string to_string(const Label& l) {
  if (l.is_unit()) return "--unit--";
  std::string out = "--";
  if (l.is_input()) {
    out += "in: ";
  } else {
    out += "out[";
    for (std::size_t i = 0; i < l.extruded.size(); ++i) {
      if (i) out += ',';
      out += to_string(l.extruded[i]);
    }
    out += "]: ";
  }
  for (std::size_t i = 0; i < l.triples.size(); ++i) {
    if (i) out += " (x) ";
    out += to_string(l.triples[i]);
  }
  return out + "--";
}

namespace {

std::vector<Triple> parse_triples(std::string_view body) {
  std::vector<Triple> out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t sep = body.find(" (x) ", pos);
    std::string_view piece =
        body.substr(pos, sep == std::string_view::npos ? std::string_view::npos : sep - pos);
    auto store = parse_store(std::string(piece) + " .");
    if (store.size() != 1) throw ParseError("expected one triple per label factor", 1, pos + 1);
    out.push_back(store.front());
    if (sep == std::string_view::npos) break;
    pos = sep + 5;
  }
  return out;
}

}  // namespace

Label parse_label(std::string_view text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.remove_suffix(1);
  if (text == "--unit--") return Label::unit();
  if (text.size() < 4 || text.substr(0, 2) != "--" || text.substr(text.size() - 2) != "--") {
    throw ParseError("a label is delimited by --", 1, 1);
  }
  std::string_view inner = text.substr(2, text.size() - 4);
  if (inner.rfind("in: ", 0) == 0) return Label::input(parse_triples(inner.substr(4)));
  if (inner.rfind("out[", 0) == 0) {
    std::size_t close = inner.find("]: ");
    if (close == std::string_view::npos) throw ParseError("expected ]: after extruded names", 1, 3);
    std::vector<Name> names;
    std::string_view list = inner.substr(4, close - 4);
    std::size_t pos = 0;
    while (!list.empty() && pos <= list.size()) {
      std::size_t comma = list.find(',', pos);
      std::string_view n =
          list.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
      Term t = parse_term(n);
      if (!t.is_name()) throw ParseError("extruded names must be names", 1, 5 + pos);
      names.push_back(t.name());
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return Label::output(std::move(names), parse_triples(inner.substr(close + 3)));
  }
  throw ParseError("unknown label form", 1, 3);
}

}  // namespace ldc
