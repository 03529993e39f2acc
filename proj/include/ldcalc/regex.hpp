#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ldc {

// Decodes UTF-8 into codepoints; malformed bytes decode as themselves.
std::vector<char32_t> decode_utf8(std::string_view text);

// A minimal regular expression dialect: literal characters, `.`, postfix
// `*`, alternation `|` and grouping `( )`. A backslash escapes the next
// character. Matching is anchored at both ends and works on codepoints.
class Regex {
 public:
  // Throws ldc::Error on a malformed pattern.
  static Regex compile(std::string_view pattern);

  bool full_match(std::string_view text) const;
  const std::string& pattern() const { return pattern_; }

  struct Node;

 private:
  Regex(std::string pattern, std::shared_ptr<const Node> root)
      : pattern_(std::move(pattern)), root_(std::move(root)) {}

  std::string pattern_;
  std::shared_ptr<const Node> root_;
};

}  // namespace ldc
