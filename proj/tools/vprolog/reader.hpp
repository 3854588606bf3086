// Copyright 2026 The Verdict Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Tokenizer and operator-precedence parser for Prolog text.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "term.hpp"

namespace vprolog {

enum class OpType { XFX, XFY, YFX, FY, FX, XF, YF };

struct OpDef {
  int priority = 0;
  OpType type = OpType::XFX;
};

class OpTable {
 public:
  OpTable() {
    for (auto n : {":-", "-->"}) add(1200, OpType::XFX, n);
    for (auto n : {":-", "?-"}) add(1200, OpType::FX, n);
    for (auto n : {";", "|"}) add(1100, OpType::XFY, n);
    add(1105, OpType::XFY, "|");
    for (auto n : {"->", "*->"}) add(1050, OpType::XFY, n);
    add(1000, OpType::XFY, ",");
    add(990, OpType::XFX, ":=");
    add(900, OpType::FY, "\\+");
    for (auto n : {"=", "\\=", "==", "\\==", "@<", "@>", "@=<", "@>=", "=..", "is", "=:=", "=\\=",
                   "<", ">", "=<", ">=", ">:<", ":<", "as"})
      add(700, OpType::XFX, n);
    add(600, OpType::XFY, ":");
    for (auto n : {"+", "-", "/\\", "\\/", "xor"}) add(500, OpType::YFX, n);
    add(500, OpType::FX, "?");
    for (auto n : {"*", "/", "//", "rem", "mod", "div", "<<", ">>", "divmod", "rdiv"})
      add(400, OpType::YFX, n);
    add(200, OpType::XFX, "**");
    add(200, OpType::XFY, "^");
    for (auto n : {"-", "+", "\\"}) add(200, OpType::FY, n);
    add(100, OpType::YFX, ".");
    add(1, OpType::FX, "$");
    for (auto n : {"dynamic", "discontiguous", "initialization", "meta_predicate", "module_transparent",
                   "multifile", "public", "thread_local", "table"})
      add(1150, OpType::FX, n);
  }

  void add(int priority, OpType type, std::string_view name) {
    AtomId a = atom(name);
    auto& slot = (type == OpType::FY || type == OpType::FX)   ? prefix_[a]
                 : (type == OpType::XF || type == OpType::YF) ? postfix_[a]
                                                              : infix_[a];
    slot = OpDef{priority, type};
    if (priority == 0) {
      if (type == OpType::FY || type == OpType::FX) prefix_.erase(a);
      else if (type == OpType::XF || type == OpType::YF) postfix_.erase(a);
      else infix_.erase(a);
    }
  }

  const OpDef* prefix(AtomId a) const { return find(prefix_, a); }
  const OpDef* infix(AtomId a) const { return find(infix_, a); }
  const OpDef* postfix(AtomId a) const { return find(postfix_, a); }
  bool is_op(AtomId a) const { return prefix(a) || infix(a) || postfix(a); }

  template <typename F>
  void for_each(F&& f) const {
    for (auto& [a, d] : prefix_) f(a, d);
    for (auto& [a, d] : infix_) f(a, d);
    for (auto& [a, d] : postfix_) f(a, d);
  }

 private:
  static const OpDef* find(const std::map<AtomId, OpDef>& m, AtomId a) {
    auto it = m.find(a);
    return it == m.end() ? nullptr : &it->second;
  }
  std::map<AtomId, OpDef> prefix_, infix_, postfix_;
};

enum class DoubleQuotes { Codes, Chars, Atom, String };

struct ReadFlags {
  DoubleQuotes double_quotes = DoubleQuotes::String;
};

struct SyntaxError : std::runtime_error {
  SyntaxError(const std::string& what, int line) : std::runtime_error(what), line(line) {}
  int line;
};

inline bool is_symbol_char(char c) {
  switch (c) {
    case '+': case '-': case '*': case '/': case '\\': case '^': case '<': case '>':
    case '=': case '~': case ':': case '.': case '?': case '@': case '#': case '&':
    case '$':
      return true;
    default:
      return false;
  }
}
inline bool is_alnum_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}
inline bool is_lower_start(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_var_start(char c) { return (c >= 'A' && c <= 'Z') || c == '_'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_layout(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

// Appends the UTF-8 encoding of a code point.
inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Decodes one UTF-8 code point starting at s[i]; advances i.
inline std::uint32_t next_utf8(std::string_view s, std::size_t& i) {
  auto c = static_cast<unsigned char>(s[i++]);
  if (c < 0x80) return c;
  int extra = c >= 0xF0 ? 3 : c >= 0xE0 ? 2 : c >= 0xC0 ? 1 : 0;
  std::uint32_t cp = c & (0x3F >> extra);
  for (int k = 0; k < extra && i < s.size(); ++k)
    cp = (cp << 6) | (static_cast<unsigned char>(s[i++]) & 0x3F);
  return cp;
}

inline std::vector<std::uint32_t> utf8_codes(std::string_view s) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < s.size();) out.push_back(next_utf8(s, i));
  return out;
}

inline std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (char c : s)
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  return n;
}

enum class Tok { Atom, Var, Int, Float, Str, BackQ, Punct, OpenCT, End, Eof };

struct Token {
  Tok kind = Tok::Eof;
  std::string text;  // atom name, var name, string body, punct
  BigInt ival;
  double fval = 0.0;
  bool layout_before = false;
  bool quoted = false;
  int line = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : s_(src) {}

  int line() const { return line_; }
  bool at_eof() {
    skip_layout();
    return pos_ >= s_.size();
  }

  Token next() {
    Token t;
    t.layout_before = skip_layout();
    t.line = line_;
    if (pos_ >= s_.size()) {
      t.kind = Tok::Eof;
      return t;
    }
    char c = s_[pos_];
    if (is_digit(c)) return number(t);
    if (is_var_start(c)) {
      std::size_t b = pos_;
      while (pos_ < s_.size() && is_alnum_char(s_[pos_])) ++pos_;
      t.kind = Tok::Var;
      t.text = std::string(s_.substr(b, pos_ - b));
      return t;
    }
    if (is_lower_start(c)) {
      std::size_t b = pos_;
      while (pos_ < s_.size() && is_alnum_char(s_[pos_])) ++pos_;
      t.kind = Tok::Atom;
      t.text = std::string(s_.substr(b, pos_ - b));
      return t;
    }
    if (c == '\'') {
      ++pos_;
      t.kind = Tok::Atom;
      t.quoted = true;
      t.text = quoted('\'');
      return t;
    }
    if (c == '"') {
      ++pos_;
      t.kind = Tok::Str;
      t.text = quoted('"');
      return t;
    }
    if (c == '`') {
      ++pos_;
      t.kind = Tok::BackQ;
      t.text = quoted('`');
      return t;
    }
    if (c == '(' ) {
      ++pos_;
      t.kind = t.layout_before ? Tok::Punct : Tok::OpenCT;
      t.text = "(";
      return t;
    }
    if (c == ')' || c == '[' || c == ']' || c == '{' || c == '}' || c == ',' || c == '|') {
      ++pos_;
      if (c == '|' && pos_ < s_.size() && s_[pos_] == '|') {
        ++pos_;
        t.kind = Tok::Atom;
        t.text = "||";
        return t;
      }
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      return t;
    }
    if (c == '!' || c == ';') {
      ++pos_;
      t.kind = Tok::Atom;
      t.text = std::string(1, c);
      return t;
    }
    if (c == '.' && (pos_ + 1 >= s_.size() || is_layout(s_[pos_ + 1]) || s_[pos_ + 1] == '%')) {
      ++pos_;
      t.kind = Tok::End;
      return t;
    }
    if (is_symbol_char(c)) {
      std::size_t b = pos_;
      while (pos_ < s_.size() && is_symbol_char(s_[pos_])) ++pos_;
      t.kind = Tok::Atom;
      t.text = std::string(s_.substr(b, pos_ - b));
      return t;
    }
    throw SyntaxError(std::string("illegal character `") + c + "`", line_);
  }

  // Skips to just past the next end token; used for error recovery.
  void skip_clause() {
    while (pos_ < s_.size()) {
      try {
        Token t = next();
        if (t.kind == Tok::End || t.kind == Tok::Eof) return;
      } catch (const SyntaxError&) {
        ++pos_;
      }
    }
  }

  std::size_t pos() const { return pos_; }
  std::string_view rest() const { return s_.substr(pos_); }

 private:
  bool skip_layout() {
    bool any = false;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (is_layout(c)) {
        if (c == '\n') ++line_;
        ++pos_;
        any = true;
      } else if (c == '%') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
        any = true;
      } else if (c == '/' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '*') {
        pos_ += 2;
        while (pos_ + 1 < s_.size() && !(s_[pos_] == '*' && s_[pos_ + 1] == '/')) {
          if (s_[pos_] == '\n') ++line_;
          ++pos_;
        }
        if (pos_ + 1 >= s_.size()) throw SyntaxError("unterminated block comment", line_);
        pos_ += 2;
        any = true;
      } else {
        break;
      }
    }
    return any;
  }

  // Reads an escape sequence after a backslash; returns false for a line
  // continuation.
  bool escape(std::string& out) {
    if (pos_ >= s_.size()) throw SyntaxError("unterminated escape", line_);
    char c = s_[pos_++];
    switch (c) {
      case 'n': out += '\n'; return true;
      case 't': out += '\t'; return true;
      case 'r': out += '\r'; return true;
      case 'a': out += '\a'; return true;
      case 'b': out += '\b'; return true;
      case 'f': out += '\f'; return true;
      case 'v': out += '\v'; return true;
      case 'e': out += '\x1b'; return true;
      case 's': out += ' '; return true;
      case '0': case '1': case '2': case '3': case '4': case '5': case '6': case '7': {
        std::uint32_t v = static_cast<std::uint32_t>(c - '0');
        while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '7') v = v * 8 + static_cast<std::uint32_t>(s_[pos_++] - '0');
        if (pos_ < s_.size() && s_[pos_] == '\\') ++pos_;
        append_utf8(out, v);
        return true;
      }
      case 'x': {
        std::uint32_t v = 0;
        while (pos_ < s_.size() && std::isxdigit(static_cast<unsigned char>(s_[pos_]))) {
          char h = s_[pos_++];
          v = v * 16 + static_cast<std::uint32_t>(is_digit(h) ? h - '0' : (std::tolower(h) - 'a' + 10));
        }
        if (pos_ < s_.size() && s_[pos_] == '\\') ++pos_;
        append_utf8(out, v);
        return true;
      }
      case 'u': case 'U': {
        int n = c == 'u' ? 4 : 8;
        std::uint32_t v = 0;
        for (int k = 0; k < n && pos_ < s_.size(); ++k) {
          char h = s_[pos_++];
          v = v * 16 + static_cast<std::uint32_t>(is_digit(h) ? h - '0' : (std::tolower(h) - 'a' + 10));
        }
        append_utf8(out, v);
        return true;
      }
      case '\n':
        ++line_;
        return false;
      case '\\': case '\'': case '"': case '`':
        out += c;
        return true;
      default:
        throw SyntaxError(std::string("undefined escape sequence \\") + c, line_);
    }
  }

  std::string quoted(char q) {
    std::string out;
    while (true) {
      if (pos_ >= s_.size()) throw SyntaxError("unterminated quoted", line_);
      char c = s_[pos_++];
      if (c == q) {
        if (pos_ < s_.size() && s_[pos_] == q) {
          out += q;
          ++pos_;
          continue;
        }
        return out;
      }
      if (c == '\\') {
        escape(out);
        continue;
      }
      if (c == '\n') ++line_;
      out += c;
    }
  }

  std::string digits(bool (*ok)(char)) {
    std::string d;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (ok(c)) {
        d += c;
        ++pos_;
      } else if (c == '_' && pos_ + 1 < s_.size() && ok(s_[pos_ + 1]) && !d.empty()) {
        ++pos_;
      } else {
        break;
      }
    }
    return d;
  }

  Token number(Token& t) {
    t.kind = Tok::Int;
    if (s_[pos_] == '0' && pos_ + 1 < s_.size()) {
      char k = s_[pos_ + 1];
      if (k == '\'') {
        pos_ += 2;
        if (pos_ >= s_.size()) throw SyntaxError("end of file in character code", line_);
        std::string out;
        if (s_[pos_] == '\\') {
          ++pos_;
          if (!escape(out)) throw SyntaxError("bad character code", line_);
          std::size_t i = 0;
          t.ival = next_utf8(out, i);
        } else if (s_[pos_] == '\'' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '\'') {
          pos_ += 2;
          t.ival = '\'';
        } else {
          t.ival = next_utf8(s_, pos_);
        }
        return t;
      }
      auto radix = [&](int base, bool (*ok)(char)) {
        pos_ += 2;
        std::string d = digits(ok);
        if (d.empty()) throw SyntaxError("illegal number", line_);
        BigInt v = 0;
        for (char c : d) v = v * base + (is_digit(c) ? c - '0' : std::tolower(c) - 'a' + 10);
        t.ival = v;
        return t;
      };
      if (k == 'x' && pos_ + 2 < s_.size() && std::isxdigit(static_cast<unsigned char>(s_[pos_ + 2])))
        return radix(16, [](char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; });
      if (k == 'o' && pos_ + 2 < s_.size() && s_[pos_ + 2] >= '0' && s_[pos_ + 2] <= '7')
        return radix(8, [](char c) { return c >= '0' && c <= '7'; });
      if (k == 'b' && pos_ + 2 < s_.size() && (s_[pos_ + 2] == '0' || s_[pos_ + 2] == '1'))
        return radix(2, [](char c) { return c == '0' || c == '1'; });
    }
    std::string d = digits(is_digit);
    bool is_float = false;
    std::string text = d;
    if (pos_ + 1 < s_.size() && s_[pos_] == '.' && is_digit(s_[pos_ + 1])) {
      ++pos_;
      text += '.';
      text += digits(is_digit);
      is_float = true;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      std::string e = "e";
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) e += s_[pos_++];
      if (pos_ < s_.size() && is_digit(s_[pos_])) {
        text += e + digits(is_digit);
        is_float = true;
      } else {
        pos_ = save;
      }
    }
    if (is_float && s_.substr(pos_, 3) == "Inf") {
      pos_ += 3;
      t.kind = Tok::Float;
      t.fval = std::numeric_limits<double>::infinity();
      return t;
    }
    if (is_float && s_.substr(pos_, 3) == "NaN") {
      pos_ += 3;
      t.kind = Tok::Float;
      t.fval = std::numeric_limits<double>::quiet_NaN();
      return t;
    }
    if (is_float) {
      t.kind = Tok::Float;
      t.fval = std::strtod(text.c_str(), nullptr);
      return t;
    }
    t.ival = BigInt(d);
    return t;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

struct ReadResult {
  Term term;  // None at end of file
  std::vector<std::pair<std::string, Term>> var_names;
  std::vector<std::string> singletons;
};

class Parser {
 public:
  Parser(std::string_view src, const OpTable& ops, const ReadFlags& flags)
      : lex_(src), ops_(ops), flags_(flags) {}

  // Reads the next clause; term is None at end of input.
  ReadResult read() {
    vars_.clear();
    var_counts_.clear();
    advance();
    if (tok_.kind == Tok::Eof) return {};
    Term t = parse(1200);
    if (tok_.kind != Tok::End) error("operator expected");
    ReadResult r;
    r.term = std::move(t);
    for (auto& [n, v] : vars_) {
      r.var_names.emplace_back(n, v);
      if (var_counts_[n] == 1 && n[0] != '_') r.singletons.push_back(n);
    }
    return r;
  }

  void recover() {
    if (!at_end_) lex_.skip_clause();
    at_end_ = false;
  }
  int line() const { return lex_.line(); }
  std::size_t pos() const { return lex_.pos(); }

 private:
  [[noreturn]] void error(const std::string& what) {
    at_end_ = tok_.kind == Tok::End;
    throw SyntaxError(what, tok_.line);
  }

  void advance() {
    at_end_ = false;
    tok_ = lex_.next();
  }

  bool is_name(const Token& t) const { return t.kind == Tok::Atom; }

  bool is_term_start(const Token& t) const {
    switch (t.kind) {
      case Tok::Atom: case Tok::Var: case Tok::Int: case Tok::Float: case Tok::Str:
      case Tok::BackQ: case Tok::OpenCT:
        return true;
      case Tok::Punct:
        return t.text == "(" || t.text == "[" || t.text == "{";
      default:
        return false;
    }
  }

  Term make_var(const std::string& name) {
    if (name == "_") return Term::make_var();
    ++var_counts_[name];
    for (auto& [n, v] : vars_)
      if (n == name) return v;
    Term v = Term::make_var();
    vars_.emplace_back(name, v);
    return v;
  }

  Term make_string_term(const std::string& s, DoubleQuotes mode) {
    switch (mode) {
      case DoubleQuotes::String:
        return Term::make_string(s);
      case DoubleQuotes::Atom:
        return Term::make_atom(s);
      case DoubleQuotes::Codes: {
        std::vector<Term> items;
        for (auto cp : utf8_codes(s)) items.push_back(Term::make_int(cp));
        return make_list(std::move(items));
      }
      case DoubleQuotes::Chars: {
        std::vector<Term> items;
        for (std::size_t i = 0; i < s.size();) {
          std::size_t b = i;
          next_utf8(s, i);
          items.push_back(Term::make_atom(s.substr(b, i - b)));
        }
        return make_list(std::move(items));
      }
    }
    return {};
  }

  // Arguments of a compound or list elements: terms at 999 separated by ','.
  std::vector<Term> arglist() {
    std::vector<Term> args;
    args.push_back(parse(999));
    while (tok_.kind == Tok::Punct && tok_.text == ",") {
      advance();
      args.push_back(parse(999));
    }
    return args;
  }

  void expect(const char* p) {
    if (!(tok_.kind == Tok::Punct && tok_.text == p)) error(std::string("expected `") + p + "`");
    advance();
  }

  // Parses a primary term; sets `prec` to its priority.
  Term primary(int max_prec, int& prec) {
    prec = 0;
    Token t = tok_;
    switch (t.kind) {
      case Tok::Int:
        advance();
        return Term::make_integer(t.ival);
      case Tok::Float:
        advance();
        return Term::make_float(t.fval);
      case Tok::Var:
        advance();
        return make_var(t.text);
      case Tok::Str:
        advance();
        return make_string_term(t.text, flags_.double_quotes);
      case Tok::BackQ:
        advance();
        return make_string_term(t.text, DoubleQuotes::Codes);
      case Tok::Punct:
      case Tok::OpenCT:
        if (t.text == "(") {
          advance();
          Term inner = parse(1200);
          expect(")");
          return inner;
        }
        if (t.text == "[") {
          advance();
          if (tok_.kind == Tok::Punct && tok_.text == "]") {
            advance();
            return name_term(std::string("[]"), max_prec, prec);
          }
          std::vector<Term> items = arglist();
          Term tail = Term::make_atom(std_atoms().nil);
          if (tok_.kind == Tok::Punct && tok_.text == "|") {
            advance();
            tail = parse(999);
          }
          expect("]");
          return make_list(std::move(items), std::move(tail));
        }
        if (t.text == "{") {
          advance();
          if (tok_.kind == Tok::Punct && tok_.text == "}") {
            advance();
            return name_term(std::string("{}"), max_prec, prec);
          }
          Term inner = parse(1200);
          expect("}");
          return Term::make_compound(std_atoms().curly, {std::move(inner)});
        }
        if (t.text == "," ) error("unexpected comma");
        if (t.text == "|") {
          advance();
          return name_term("|", max_prec, prec);
        }
        error("unexpected `" + t.text + "`");
      case Tok::Atom:
        advance();
        return name_term(t.text, max_prec, prec, t.quoted);
      case Tok::End:
        error("unexpected end of clause");
      case Tok::Eof:
        error("unexpected end of file");
    }
    error("unexpected token");
  }

  Term name_term(const std::string& name, int max_prec, int& prec, bool quoted = false) {
    AtomId a = atom(name);
    if (tok_.kind == Tok::OpenCT) {
      advance();
      std::vector<Term> args = arglist();
      expect(")");
      return Term::make_compound(a, std::move(args));
    }
    if (name == "-" && !quoted && !tok_.layout_before && (tok_.kind == Tok::Int || tok_.kind == Tok::Float)) {
      Token n = tok_;
      advance();
      if (n.kind == Tok::Int) return Term::make_integer(-n.ival);
      return Term::make_float(-n.fval);
    }
    const OpDef* pre = quoted ? nullptr : ops_.prefix(a);
    if (pre) {
      // Operator as an atom when nothing that could be an operand follows.
      bool operand_follows = is_term_start(tok_);
      if (operand_follows && tok_.kind == Tok::Atom && !tok_.quoted) {
        AtomId nx = atom(tok_.text);
        if ((ops_.infix(nx) || ops_.postfix(nx)) && !ops_.prefix(nx)) {
          // `- = x`: treat `-` as an atom unless the infix reading is impossible.
          Lexer peek = lex_;
          Token after = peek.next();
          if (!is_term_start(after) || after.kind == Tok::OpenCT) operand_follows = true;
          else operand_follows = false;
          if (tok_.kind == Tok::Atom && after.kind == Tok::OpenCT) operand_follows = true;
        }
      }
      if (operand_follows) {
        int p = pre->priority;
        int arg_max = pre->type == OpType::FY ? p : p - 1;
        if (p > max_prec) {
          p = 999;
          arg_max = 999;
        }
        Term arg = parse(arg_max);
        prec = p;
        return Term::make_compound(a, {std::move(arg)});
      }
      prec = std::min(pre->priority, max_prec);
      return Term::make_atom(a);
    }
    if (!quoted && ops_.is_op(a)) {
      int p = 0;
      if (auto* d = ops_.infix(a)) p = std::max(p, d->priority);
      if (auto* d = ops_.postfix(a)) p = std::max(p, d->priority);
      prec = p > max_prec ? 0 : p;
    }
    return Term::make_atom(a);
  }

  Term parse(int max_prec) {
    int left_prec = 0;
    Term left = primary(max_prec, left_prec);
    while (true) {
      AtomId a;
      bool name_tok = false;
      if (tok_.kind == Tok::Atom && !tok_.quoted) {
        a = atom(tok_.text);
        name_tok = true;
      } else if (tok_.kind == Tok::Atom && tok_.quoted) {
        a = atom(tok_.text);
        name_tok = true;
      } else if (tok_.kind == Tok::Punct && (tok_.text == "," || tok_.text == "|")) {
        a = atom(tok_.text);
      } else {
        break;
      }
      (void)name_tok;
      const OpDef* in = ops_.infix(a);
      if (in) {
        int p = in->priority;
        int lmax = in->type == OpType::YFX ? p : p - 1;
        int rmax = in->type == OpType::XFY ? p : p - 1;
        if (p <= max_prec && left_prec <= lmax) {
          advance();
          Term right = parse(rmax);
          if (a == std_atoms().bar) a = std_atoms().semicolon;
          left = Term::make_compound(a, {std::move(left), std::move(right)});
          left_prec = p;
          continue;
        }
      }
      const OpDef* post = ops_.postfix(a);
      if (post) {
        int p = post->priority;
        int lmax = post->type == OpType::YF ? p : p - 1;
        if (p <= max_prec && left_prec <= lmax) {
          advance();
          left = Term::make_compound(a, {std::move(left)});
          left_prec = p;
          continue;
        }
      }
      break;
    }
    return left;
  }

  Lexer lex_;
  const OpTable& ops_;
  const ReadFlags& flags_;
  Token tok_;
  bool at_end_ = false;
  std::vector<std::pair<std::string, Term>> vars_;
  std::map<std::string, int> var_counts_;
};

}  // namespace vprolog
