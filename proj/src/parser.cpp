#include "ldcalc/parser.hpp"

#include <charconv>
#include <optional>

#include "ldcalc/errors.hpp"

namespace ldc {

namespace {

enum class Tok { Word, Iri, String, Integer, Variable, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, col;
};

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == ':' || c == '.' || c == '/' || c == '#' || c == '-';
}

bool is_digits(std::string_view s) {
  std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t{Tok::End, "", line_, col_};
      if (pos_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (c == '"') {
        t.kind = Tok::String;
        t.text = lex_string();
      } else if (c == '<' && peek(1) != '=') {
        t.kind = Tok::Iri;
        advance();
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '>' && text_[pos_] != '\n') advance();
        if (pos_ >= text_.size() || text_[pos_] != '>') fail("unterminated <...>", t);
        t.text = std::string(text_.substr(start, pos_ - start));
        advance();
        if (t.text.empty()) fail("empty name", t);
      } else if (c == '?') {
        t.kind = Tok::Variable;
        advance();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                text_[pos_] == ':')) {
          advance();
        }
        t.text = std::string(text_.substr(start, pos_ - start));
        if (t.text.empty()) fail("expected variable name after ?", t);
      } else if (is_name_char(c) && !(c == '.' && !is_name_char(peek(1)))) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_name_char(text_[pos_])) advance();
        // A trailing dot terminates a statement rather than the name.
        while (pos_ > start + 1 && text_[pos_ - 1] == '.') {
          --pos_;
          --col_;
        }
        t.text = std::string(text_.substr(start, pos_ - start));
        t.kind = is_digits(t.text) ? Tok::Integer : Tok::Word;
      } else {
        t.kind = Tok::Punct;
        static const char* two[] = {"||", "&&", "<=", "=="};
        for (const char* op : two) {
          if (text_.substr(pos_, 2) == op) {
            t.text = op;
            advance();
            advance();
            break;
          }
        }
        if (t.text.empty()) {
          static const std::string_view one = "{}()+&^!~.,";
          if (one.find(c) == std::string_view::npos) {
            fail(std::string("unexpected character '") + c + "'", t);
          }
          t.text = std::string(1, c);
          advance();
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg, const Token& at) {
    throw ParseError(msg, at.line, at.col);
  }

  char peek(std::size_t k) const {
    return pos_ + k < text_.size() ? text_[pos_ + k] : '\0';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  std::string lex_string() {
    Token at{Tok::String, "", line_, col_};
    advance();
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_];
      if (c == '\n') fail("unterminated string", at);
      if (c == '\\') {
        advance();
        if (pos_ >= text_.size()) break;
        switch (text_[pos_]) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail("unknown escape", at);
        }
      } else {
        out += c;
      }
      advance();
    }
    if (pos_ >= text_.size()) fail("unterminated string", at);
    advance();
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(Lexer(text).run()) {}

  bool at_end() const { return cur().kind == Tok::End; }

  void expect_end() {
    if (!at_end()) fail("unexpected '" + cur().text + "'");
  }

  // ---- terms

  Slot slot() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Word:
        if (is_keyword(t.text)) fail("keyword '" + t.text + "' used as a name");
        ++i_;
        return Term(Name(t.text));
      case Tok::Iri:
        ++i_;
        return Term(Name(t.text));
      case Tok::String:
        ++i_;
        return Term(Literal(t.text));
      case Tok::Integer: {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc()) fail("integer out of range");
        ++i_;
        return Term(Literal(v));
      }
      case Tok::Variable:
        ++i_;
        return resolve(t);
      default:
        fail("expected a term");
    }
  }

  Pattern pattern(bool literal_is_error_kind) {
    std::size_t line = cur().line, col = cur().col;
    Slot s = slot();
    std::size_t pline = cur().line, pcol = cur().col;
    Slot p = slot();
    Slot o = slot();
    check_name_position(s, line, col, literal_is_error_kind);
    check_name_position(p, pline, pcol, literal_is_error_kind);
    return Pattern{s, p, o};
  }

  // ---- constraints

  ConstraintPtr constraint() {
    const Token& t = cur();
    if (t.kind == Tok::Word && t.text == "true") {
      ++i_;
      return Constraint::truth();
    }
    if (t.kind == Tok::Word && t.text == "false") {
      ++i_;
      return Constraint::falsity();
    }
    if (is_punct("!")) {
      ++i_;
      expect("(");
      auto c = constraint();
      expect(")");
      return Constraint::neg(c);
    }
    if (is_punct("(")) {
      ++i_;
      auto c = constraint();
      while (is_punct("&&") || is_punct("||")) {
        bool conj = cur().text == "&&";
        ++i_;
        auto d = constraint();
        c = conj ? Constraint::conj(c, d) : Constraint::disj(c, d);
      }
      expect(")");
      return c;
    }
    if (t.kind == Tok::Word && t.text == "len") {
      ++i_;
      expect("(");
      Slot x = slot();
      expect(")");
      expect("<=");
      if (cur().kind != Tok::Integer) fail("expected an integer bound");
      Slot n = slot();
      return Constraint::len_leq(x, std::get<Term>(n).literal().as_integer());
    }
    Slot lhs = slot();
    if (is_punct("~")) {
      ++i_;
      if (cur().kind != Tok::String) fail("expected a quoted pattern");
      std::string pat = cur().text;
      std::size_t line = cur().line, col = cur().col;
      ++i_;
      try {
        return Constraint::regex(lhs, pat);
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(e.what(), line, col);
      }
    }
    if (is_punct("<=")) {
      ++i_;
      return Constraint::num_leq(lhs, slot());
    }
    if (is_punct("==")) {
      ++i_;
      return Constraint::eq(lhs, slot());
    }
    fail("expected a constraint operator");
  }

  // ---- queries

  QueryPtr choice() {
    QueryPtr q = tensor();
    while (is_punct("+")) {
      ++i_;
      q = Query::choice(q, tensor());
    }
    return q;
  }

  QueryPtr tensor() {
    QueryPtr q = postfix();
    while (is_punct("&")) {
      ++i_;
      q = Query::tensor(q, postfix());
    }
    return q;
  }

  QueryPtr postfix() {
    QueryPtr q = primary();
    for (;;) {
      if (is_word("then")) {
        ++i_;
        expect("{");
        ProcessPtr p = process();
        expect("}");
        q = Query::then(q, p);
      } else if (is_word("limit")) {
        ++i_;
        q = expand_limit(q, natural());
      } else if (is_punct("^")) {
        ++i_;
        q = expand_exponent(q, natural());
      } else {
        return q;
      }
    }
  }

  QueryPtr primary() {
    if (is_word("ask")) {
      ++i_;
      return Query::ask(pattern(false));
    }
    if (is_word("filter")) {
      ++i_;
      expect("(");
      auto c = constraint();
      expect(")");
      return Query::filter(c);
    }
    if (is_word("select")) {
      ++i_;
      if (cur().kind != Tok::Variable) fail("expected a variable after select");
      Var v = declare(cur().text);
      ++i_;
      expect("{");
      scope_.push_back(v);
      QueryPtr body = choice();
      scope_.pop_back();
      expect("}");
      return Query::select(v, body);
    }
    if (is_word("bang") || is_word("optional")) {
      bool bang = cur().text == "bang";
      ++i_;
      expect("{");
      QueryPtr body = choice();
      expect("}");
      return bang ? Query::bang(body) : optional(body);
    }
    if (is_punct("(")) {
      ++i_;
      QueryPtr q = choice();
      expect(")");
      return q;
    }
    fail("expected a query");
  }

  // ---- processes

  ProcessPtr process() {
    std::vector<ProcessPtr> parts{pprimary()};
    while (is_punct("||")) {
      ++i_;
      parts.push_back(pprimary());
    }
    return Process::par_all(parts);
  }

  ProcessPtr pprimary() {
    if (is_word("nil")) {
      ++i_;
      return Process::nothing();
    }
    if (is_word("new")) {
      ++i_;
      Slot s = slot();
      if (is_var(s) || !std::get<Term>(s).is_name()) fail_prev("expected a name after new");
      expect("{");
      ProcessPtr body = process();
      expect("}");
      return Process::scope(std::get<Term>(s).name(), body);
    }
    if (is_word("data")) {
      ++i_;
      return Process::stored(pattern(true));
    }
    if (is_word("query")) {
      ++i_;
      expect("{");
      QueryPtr q = choice();
      expect("}");
      return Process::query(q);
    }
    if (is_punct("(")) {
      ++i_;
      ProcessPtr p = process();
      expect(")");
      return p;
    }
    fail("expected a process");
  }

  // ---- stores

  std::vector<Triple> store() {
    std::vector<Triple> out;
    while (!at_end()) {
      Pattern p = pattern(true);
      if (!is_ground(p)) fail_prev("variables are not allowed in a store");
      expect(".");
      out.push_back(ground_triple(p));
    }
    return out;
  }

  std::vector<Var> scope_;

 private:
  const Token& cur() const { return toks_[i_]; }

  bool is_punct(const char* p) const { return cur().kind == Tok::Punct && cur().text == p; }
  bool is_word(const char* w) const { return cur().kind == Tok::Word && cur().text == w; }

  void expect(const char* p) {
    if (!is_punct(p)) fail(std::string("expected '") + p + "'");
    ++i_;
  }

  unsigned natural() {
    if (cur().kind != Tok::Integer || cur().text[0] == '-') fail("expected a natural number");
    unsigned v = 0;
    auto [p, ec] = std::from_chars(cur().text.data(), cur().text.data() + cur().text.size(), v);
    if (ec != std::errc()) fail("number out of range");
    ++i_;
    return v;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, cur().line, cur().col);
  }
  [[noreturn]] void fail_prev(const std::string& msg) const {
    const Token& t = toks_[i_ > 0 ? i_ - 1 : 0];
    throw ParseError(msg, t.line, t.col);
  }

  static Var declare(const std::string& text) {
    if (text.rfind("n:", 0) == 0) return Var{Sort::Name, text.substr(2)};
    if (text.rfind("l:", 0) == 0) return Var{Sort::Literal, text.substr(2)};
    return Var{Sort::Name, text};
  }

  Var resolve(const Token& t) const {
    Var wanted = declare(t.text);
    bool explicit_sort = t.text.rfind("n:", 0) == 0 || t.text.rfind("l:", 0) == 0;
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->id != wanted.id) continue;
      if (explicit_sort && it->sort != wanted.sort) {
        throw ParseError("variable ?" + t.text + " used with the wrong sort", t.line, t.col);
      }
      return *it;
    }
    throw UnboundVariable("?" + t.text, t.line, t.col);
  }

  static void check_name_position(const Slot& s, std::size_t line, std::size_t col,
                                  bool literal_is_error_kind) {
    if (const Term* t = std::get_if<Term>(&s); t && t->is_literal()) {
      if (literal_is_error_kind) {
        throw LiteralInSubject("literals may only appear as the object", line, col);
      }
      throw ParseError("literals may only appear as the object", line, col);
    }
    if (const Var* v = std::get_if<Var>(&s); v && v->sort == Sort::Literal) {
      throw ParseError("literal variable ?l:" + v->id + " outside object position", line, col);
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

namespace {

// "line:col: message" to "message".
std::string strip_position(const char* what) {
  std::string_view w(what);
  std::size_t colon = w.find(": ");
  return std::string(colon == std::string_view::npos ? w : w.substr(colon + 2));
}

}  // namespace

std::vector<Triple> parse_store(std::string_view text) {
  // One triple per line: each line is parsed alone so errors stay on it.
  std::vector<Triple> out;
  std::size_t line = 0, pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view one = text.substr(pos, end - pos);
    ++line;
    pos = end + 1;
    try {
      auto triples = Parser(one).store();
      if (triples.size() > 1) throw ParseError("one triple per line", 1, one.find('.') + 2);
      out.insert(out.end(), triples.begin(), triples.end());
    } catch (const LiteralInSubject& e) {
      throw LiteralInSubject(strip_position(e.what()), line, e.column());
    } catch (const UnboundVariable& e) {
      throw ParseError(strip_position(e.what()), line, e.column());
    } catch (const ParseError& e) {
      throw ParseError(strip_position(e.what()), line, e.column());
    }
  }
  return out;
}

QueryPtr parse_query(std::string_view text) {
  Parser p(text);
  QueryPtr q = p.choice();
  p.expect_end();
  return q;
}

ProcessPtr parse_process(std::string_view text) {
  Parser p(text);
  ProcessPtr out = p.process();
  p.expect_end();
  return out;
}

ProcessPtr parse_program(std::string_view text) {
  try {
    return parse_process(text);
  } catch (const ParseError& as_process) {
    try {
      return Process::query(parse_query(text));
    } catch (const ParseError& as_query) {
      if (as_query.line() > as_process.line() ||
          (as_query.line() == as_process.line() && as_query.column() > as_process.column())) {
        throw;
      }
      throw as_process;
    }
  }
}

ConstraintPtr parse_constraint(std::string_view text, const std::vector<Var>& vars) {
  Parser p(text);
  p.scope_ = vars;
  ConstraintPtr c = p.constraint();
  p.expect_end();
  return c;
}

Term parse_term(std::string_view text) {
  Parser p(text);
  Slot s = p.slot();
  p.expect_end();
  return std::get<Term>(s);
}

}  // namespace ldc
