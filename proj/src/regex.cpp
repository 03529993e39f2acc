#include "ldcalc/regex.hpp"

#include <set>

#include "ldcalc/errors.hpp"

namespace ldc {

std::vector<char32_t> decode_utf8(std::string_view text) {
  std::vector<char32_t> out;
  std::size_t i = 0;
  while (i < text.size()) {
    auto byte = static_cast<unsigned char>(text[i]);
    std::size_t extra = byte < 0x80            ? 0
                        : (byte >> 5) == 0x6   ? 1
                        : (byte >> 4) == 0xE   ? 2
                        : (byte >> 3) == 0x1E  ? 3
                                               : 0;
    char32_t cp = extra == 0 ? byte : byte & (0x3F >> extra);
    bool ok = i + extra < text.size();
    for (std::size_t k = 1; ok && k <= extra; ++k) {
      auto next = static_cast<unsigned char>(text[i + k]);
      ok = (next & 0xC0) == 0x80;
      cp = (cp << 6) | (next & 0x3F);
    }
    if (!ok) {
      out.push_back(byte);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

struct Regex::Node {
  enum class Kind { Empty, Char, Any, Concat, Alt, Star };
  Kind kind = Kind::Empty;
  char32_t ch = 0;
  std::vector<std::shared_ptr<const Node>> children;
};

namespace {

using NodePtr = std::shared_ptr<const Regex::Node>;

}  // namespace

// Recursive-descent parser over codepoints.
class RegexParser {
 public:
  using Node = Regex::Node;
  explicit RegexParser(std::vector<char32_t> cps) : cps_(std::move(cps)) {}

  std::shared_ptr<const Node> parse() {
    auto n = alternation();
    if (pos_ != cps_.size()) throw Error("regex: unexpected ')'");
    return n;
  }

 private:
  std::shared_ptr<const Node> alternation() {
    std::vector<std::shared_ptr<const Node>> branches{concatenation()};
    while (pos_ < cps_.size() && cps_[pos_] == U'|') {
      ++pos_;
      branches.push_back(concatenation());
    }
    if (branches.size() == 1) return branches.front();
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Alt;
    n->children = std::move(branches);
    return n;
  }

  std::shared_ptr<const Node> concatenation() {
    std::vector<std::shared_ptr<const Node>> parts;
    while (pos_ < cps_.size() && cps_[pos_] != U'|' && cps_[pos_] != U')') {
      auto atom_node = atom();
      while (pos_ < cps_.size() && cps_[pos_] == U'*') {
        ++pos_;
        auto star = std::make_shared<Node>();
        star->kind = Node::Kind::Star;
        star->children = {atom_node};
        atom_node = star;
      }
      parts.push_back(atom_node);
    }
    auto n = std::make_shared<Node>();
    if (parts.empty()) return n;
    if (parts.size() == 1) return parts.front();
    n->kind = Node::Kind::Concat;
    n->children = std::move(parts);
    return n;
  }

  std::shared_ptr<const Node> atom() {
    char32_t c = cps_[pos_++];
    auto n = std::make_shared<Node>();
    switch (c) {
      case U'(': {
        auto inner = alternation();
        if (pos_ >= cps_.size() || cps_[pos_] != U')') throw Error("regex: missing ')'");
        ++pos_;
        return inner;
      }
      case U'*':
        throw Error("regex: '*' without operand");
      case U'.':
        n->kind = Node::Kind::Any;
        return n;
      case U'\\':
        if (pos_ >= cps_.size()) throw Error("regex: trailing backslash");
        c = cps_[pos_++];
        [[fallthrough]];
      default:
        n->kind = Node::Kind::Char;
        n->ch = c;
        return n;
    }
  }

  std::vector<char32_t> cps_;
  std::size_t pos_ = 0;
};

namespace {

// Set of end positions reachable by matching `node` from each start position.
std::set<std::size_t> step(const Regex::Node& node, const std::vector<char32_t>& text,
                           const std::set<std::size_t>& starts) {
  using Kind = Regex::Node::Kind;
  std::set<std::size_t> out;
  switch (node.kind) {
    case Kind::Empty:
      return starts;
    case Kind::Char:
      for (auto s : starts) {
        if (s < text.size() && text[s] == node.ch) out.insert(s + 1);
      }
      return out;
    case Kind::Any:
      for (auto s : starts) {
        if (s < text.size()) out.insert(s + 1);
      }
      return out;
    case Kind::Concat: {
      std::set<std::size_t> cur = starts;
      for (const auto& child : node.children) cur = step(*child, text, cur);
      return cur;
    }
    case Kind::Alt:
      for (const auto& child : node.children) {
        auto part = step(*child, text, starts);
        out.insert(part.begin(), part.end());
      }
      return out;
    case Kind::Star: {
      out = starts;
      std::set<std::size_t> frontier = starts;
      while (!frontier.empty()) {
        std::set<std::size_t> next;
        for (auto p : step(*node.children.front(), text, frontier)) {
          if (out.insert(p).second) next.insert(p);
        }
        frontier = std::move(next);
      }
      return out;
    }
  }
  return out;
}

}  // namespace

Regex Regex::compile(std::string_view pattern) {
  RegexParser parser(decode_utf8(pattern));
  return Regex(std::string(pattern), parser.parse());
}

bool Regex::full_match(std::string_view text) const {
  auto cps = decode_utf8(text);
  return step(*root_, cps, {0}).count(cps.size()) > 0;
}

}  // namespace ldc
