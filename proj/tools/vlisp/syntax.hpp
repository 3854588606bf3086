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

// Reader and printer.

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "object.hpp"

namespace vlisp {

struct ReaderError : LispError {
  explicit ReaderError(const std::string& m) : LispError(m, "READER-ERROR") {}
};

struct EndOfInput {};

inline const char* char_names[][2] = {
    {"Space", " "}, {"Newline", "\n"}, {"Tab", "\t"}, {"Return", "\r"},
    {"Linefeed", "\n"}, {"Backspace", "\b"}, {"Page", "\f"}, {"Null", "\0"},
};

class Reader {
 public:
  explicit Reader(std::string_view src) : s_(src) {}

  // Next datum, or nullopt at end of input.
  std::optional<Val> next() {
    skip();
    if (pos_ >= s_.size()) return std::nullopt;
    return read();
  }

  std::size_t pos() const { return pos_; }

 private:
  void skip() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (c == '#' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '|') {
        int depth = 1;
        pos_ += 2;
        while (pos_ < s_.size() && depth > 0) {
          if (s_.compare(pos_, 2, "|#") == 0) {
            --depth;
            pos_ += 2;
          } else if (s_.compare(pos_, 2, "#|") == 0) {
            ++depth;
            pos_ += 2;
          } else {
            ++pos_;
          }
        }
        if (depth > 0) throw ReaderError("unterminated block comment");
      } else {
        break;
      }
    }
  }

  static bool delimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '"' ||
           c == '\'' || c == ';' || c == '`' || c == ',';
  }

  Val read() {
    skip();
    if (pos_ >= s_.size()) throw ReaderError("end of file");
    char c = s_[pos_];
    switch (c) {
      case '(': {
        ++pos_;
        std::vector<Val> items;
        Val tail;
        while (true) {
          skip();
          if (pos_ >= s_.size()) throw ReaderError("end of file inside list");
          if (s_[pos_] == ')') {
            ++pos_;
            break;
          }
          if (s_[pos_] == '.' && pos_ + 1 < s_.size() && delimiter(s_[pos_ + 1]) && !items.empty()) {
            ++pos_;
            tail = read();
            skip();
            if (pos_ >= s_.size() || s_[pos_] != ')') throw ReaderError("bad dotted list");
            ++pos_;
            break;
          }
          items.push_back(read());
        }
        return list(std::move(items), std::move(tail));
      }
      case ')':
        ++pos_;
        throw ReaderError("unmatched close parenthesis");
      case '\'':
        ++pos_;
        return list({sym("QUOTE"), read()});
      case '`':
        ++pos_;
        return list({sym("QUASIQUOTE"), read()});
      case ',':
        ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '@') {
          ++pos_;
          return list({sym("UNQUOTE-SPLICING"), read()});
        }
        return list({sym("UNQUOTE"), read()});
      case '"': {
        ++pos_;
        std::string out;
        while (true) {
          if (pos_ >= s_.size()) throw ReaderError("unterminated string");
          char d = s_[pos_++];
          if (d == '"') break;
          if (d == '\\') {
            if (pos_ >= s_.size()) throw ReaderError("unterminated string");
            d = s_[pos_++];
          }
          out += d;
        }
        return str(std::move(out));
      }
      case '#':
        return read_dispatch();
      default:
        return read_atom();
    }
  }

  Val read_dispatch() {
    ++pos_;
    if (pos_ >= s_.size()) throw ReaderError("end of file after #");
    char d = s_[pos_++];
    switch (d) {
      case '\'':
        return list({sym("FUNCTION"), read()});
      case '\\': {
        std::size_t start = pos_;
        if (pos_ < s_.size()) ++pos_;
        while (pos_ < s_.size() && !delimiter(s_[pos_])) ++pos_;
        std::string_view tok = s_.substr(start, pos_ - start);
        if (tok.size() == 1) return Val::chr(static_cast<unsigned char>(tok[0]));
        for (auto& [name, ch] : char_names) {
          std::string lower(name);
          if (tok.size() == lower.size()) {
            bool same = true;
            for (std::size_t i = 0; i < tok.size(); ++i)
              if (std::tolower(static_cast<unsigned char>(tok[i])) !=
                  std::tolower(static_cast<unsigned char>(lower[i])))
                same = false;
            if (same) return Val::chr(static_cast<unsigned char>(ch[0]));
          }
        }
        // Multi-byte UTF-8 character.
        return Val::chr(static_cast<unsigned char>(tok[0]));
      }
      case '(': {
        --pos_;
        Val items = read();
        auto* v = new VectorObj();
        for (auto& x : to_vector(items)) v->items.push_back(x);
        return Val::adopt(v);
      }
      case 'x': case 'X': return read_radix(16);
      case 'b': case 'B': return read_radix(2);
      case 'o': case 'O': return read_radix(8);
      case '+': case '-': {
        // Feature expressions: only :sbcl and :common-lisp are present.
        Val feature = read();
        Val form = read();
        std::string name = is_symbol(feature) ? symbol_of(feature)->name : "";
        bool present = name == ":SBCL" || name == ":COMMON-LISP" || name == ":ANSI-CL";
        if (present == (d == '+')) return form;
        skip();
        return read();
      }
      case '.':
        fail("#. is not supported", "READER-ERROR");
      default:
        throw ReaderError(std::string("unsupported dispatch #") + d);
    }
  }

  Val read_radix(int radix) {
    std::size_t start = pos_;
    while (pos_ < s_.size() && !delimiter(s_[pos_])) ++pos_;
    std::string tok(s_.substr(start, pos_ - start));
    bool neg = !tok.empty() && tok[0] == '-';
    if (!tok.empty() && (tok[0] == '-' || tok[0] == '+')) tok.erase(0, 1);
    BigInt v = 0;
    if (tok.empty()) throw ReaderError("bad radix number");
    for (char c : tok) {
      int d = std::isdigit(static_cast<unsigned char>(c)) ? c - '0'
                                                          : std::tolower(static_cast<unsigned char>(c)) - 'a' + 10;
      if (d < 0 || d >= radix) throw ReaderError("bad radix number");
      v = v * radix + d;
    }
    return make_int(neg ? BigInt(-v) : v);
  }

  Val read_atom() {
    std::size_t start = pos_;
    std::string name;
    bool escaped = false;
    while (pos_ < s_.size() && !delimiter(s_[pos_])) {
      char c = s_[pos_];
      if (c == '|') {
        escaped = true;
        ++pos_;
        while (pos_ < s_.size() && s_[pos_] != '|') name += s_[pos_++];
        if (pos_ >= s_.size()) throw ReaderError("unterminated |symbol|");
        ++pos_;
        continue;
      }
      if (c == '\\' && pos_ + 1 < s_.size()) {
        escaped = true;
        name += s_[pos_ + 1];
        pos_ += 2;
        continue;
      }
      name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      ++pos_;
    }
    std::string_view raw = s_.substr(start, pos_ - start);
    if (!escaped) {
      if (auto n = parse_number(raw)) return *n;
      if (name == "NIL") return Val();
      if (name == "T") return T();
      // Package prefixes are dropped: cl:car -> CAR, sb-ext:exit -> EXIT.
      auto colon = name.find(':');
      if (colon != std::string::npos && colon > 0) {
        std::size_t after = name.find_first_not_of(':', colon);
        name = name.substr(after == std::string::npos ? name.size() : after);
      }
      if (name.empty()) throw ReaderError("bad token");
    }
    return sym(name);
  }

 public:
  static std::optional<Val> parse_number(std::string_view t) {
    if (t.empty()) return std::nullopt;
    std::size_t i = 0;
    bool neg = false;
    if (t[0] == '+' || t[0] == '-') {
      neg = t[0] == '-';
      i = 1;
    }
    std::size_t digits_start = i;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
    std::size_t int_digits = i - digits_start;
    // Integer, optionally with a trailing decimal point.
    if (int_digits > 0 && (i == t.size() || (i + 1 == t.size() && t[i] == '.'))) {
      BigInt v(std::string(t.substr(digits_start, int_digits)));
      return make_int(neg ? BigInt(-v) : v);
    }
    // Ratio.
    if (int_digits > 0 && i < t.size() && t[i] == '/') {
      std::size_t ds = ++i;
      while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
      if (i != t.size() || i == ds) return std::nullopt;
      BigInt n(std::string(t.substr(digits_start, int_digits)));
      BigInt d(std::string(t.substr(ds)));
      if (d == 0) throw ReaderError("division by zero in ratio");
      return make_rational(Rational(neg ? BigInt(-n) : n, d));
    }
    // Float: digits [. digits] [exponent]
    std::size_t frac = 0;
    if (i < t.size() && t[i] == '.') {
      ++i;
      while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i, ++frac;
    }
    if (int_digits + frac == 0) return std::nullopt;
    std::string text(t.substr(0, i));
    if (i < t.size()) {
      char e = static_cast<char>(std::tolower(static_cast<unsigned char>(t[i])));
      if (e != 'e' && e != 'd' && e != 'f' && e != 's' && e != 'l') return std::nullopt;
      ++i;
      std::size_t es = i;
      if (i < t.size() && (t[i] == '+' || t[i] == '-')) ++i;
      std::size_t ed = i;
      while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
      if (i != t.size() || i == ed) return std::nullopt;
      text += "e";
      text += std::string(t.substr(es));
    } else if (frac == 0) {
      return std::nullopt;
    }
    if (text[0] == '+') text.erase(0, 1);
    if (text.back() == '.') text += '0';
    return Val::flo(std::strtod(text.c_str(), nullptr));
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

inline std::string format_float(double d) {
  if (std::isnan(d)) return "NAN";
  if (std::isinf(d)) return d > 0 ? "INFINITY" : "-INFINITY";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, res.ptr);
  double mag = std::fabs(d);
  if (mag != 0.0 && (mag >= 1e7 || mag < 1e-3)) {
    res = std::to_chars(buf, buf + sizeof buf, d, std::chars_format::scientific);
    s.assign(buf, res.ptr);
    auto e = s.find('e');
    std::string mant = s.substr(0, e);
    std::string exp = s.substr(e + 1);
    if (mant.find('.') == std::string::npos) mant += ".0";
    if (exp[0] == '+') exp.erase(0, 1);
    std::size_t z = exp[0] == '-' ? 1 : 0;
    while (exp.size() > z + 1 && exp[z] == '0') exp.erase(z, 1);
    return mant + "e" + exp;
  }
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos) s += ".0";
  return s;
}

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

inline std::string char_name(std::uint32_t c) {
  switch (c) {
    case ' ': return "Space";
    case '\n': return "Newline";
    case '\t': return "Tab";
    case '\r': return "Return";
    case 0: return "Nul";
    default: break;
  }
  std::string s;
  append_utf8(s, c);
  return s;
}

inline bool symbol_needs_bars(const std::string& n) {
  if (n.empty()) return true;
  if (Reader::parse_number(n)) return true;
  for (char c : n) {
    if (std::islower(static_cast<unsigned char>(c)) || std::isspace(static_cast<unsigned char>(c)) ||
        c == '(' || c == ')' || c == '"' || c == '\'' || c == ';' || c == '|' || c == '`' ||
        c == ',')
      return true;
  }
  return false;
}

inline void print(std::string& out, const Val& v, bool escape);

inline void print_list(std::string& out, const Val& v, bool escape) {
  if (consp(cdr(v)) && cdr(cdr(v)).nil() && car(v).is(Kind::Symbol)) {
    const std::string& head = car(v).as<Symbol>()->name;
    const char* prefix = head == "QUOTE" ? "'" : head == "FUNCTION" ? "#'" : nullptr;
    if (prefix) {
      out += prefix;
      print(out, car(cdr(v)), escape);
      return;
    }
  }
  out += '(';
  const Val* cur = &v;
  bool first = true;
  while (consp(*cur)) {
    if (!first) out += ' ';
    first = false;
    print(out, car(*cur), escape);
    cur = &cdr(*cur);
  }
  if (!cur->nil()) {
    out += " . ";
    print(out, *cur, escape);
  }
  out += ')';
}

inline void print(std::string& out, const Val& v, bool escape) {
  switch (v.tag()) {
    case Tag::Nil:
      out += "NIL";
      return;
    case Tag::Int:
      out += std::to_string(v.fixnum());
      return;
    case Tag::Float:
      out += format_float(v.flonum());
      return;
    case Tag::Char:
      if (escape) {
        out += "#\\" + char_name(v.character());
      } else {
        append_utf8(out, v.character());
      }
      return;
    case Tag::Obj:
      break;
  }
  switch (v.obj()->kind) {
    case Kind::Symbol: {
      const std::string& n = v.as<Symbol>()->name;
      if (escape && !v.as<Symbol>()->keyword && symbol_needs_bars(n)) {
        out += '|' + n + '|';
      } else if (!escape && v.as<Symbol>()->keyword && n.size() > 1 && n[0] == ':') {
        out += n.substr(1);
      } else {
        out += n;
      }
      return;
    }
    case Kind::Cons:
      print_list(out, v, escape);
      return;
    case Kind::String:
      if (escape) {
        out += '"';
        for (char c : v.as<String>()->s) {
          if (c == '"' || c == '\\') out += '\\';
          out += c;
        }
        out += '"';
      } else {
        out += v.as<String>()->s;
      }
      return;
    case Kind::Big:
      out += v.as<Big>()->v.str();
      return;
    case Kind::Ratio: {
      const Rational& r = v.as<Ratio>()->v;
      out += boost::multiprecision::numerator(r).str() + "/" +
             boost::multiprecision::denominator(r).str();
      return;
    }
    case Kind::Function: {
      auto* f = v.as<Function>();
      out += f->builtin ? "#<FUNCTION " + f->name + ">"
                        : "#<FUNCTION " + (f->name.empty() ? std::string("(LAMBDA)") : f->name) + ">";
      return;
    }
    case Kind::Hash:
      out += "#<HASH-TABLE :COUNT " + std::to_string(v.as<HashObj>()->map.size()) + ">";
      return;
    case Kind::Vector: {
      auto* vec = v.as<VectorObj>();
      out += "#(";
      for (std::size_t i = 0; i < vec->active(); ++i) {
        if (i) out += ' ';
        print(out, vec->items[i], escape);
      }
      out += ')';
      return;
    }
    case Kind::Struct: {
      auto* s = v.as<StructObj>();
      out += "#S(" + s->type->name;
      for (std::size_t i = 0; i < s->slots.size(); ++i) {
        out += " :" + s->type->slots[i]->name + " ";
        print(out, s->slots[i], escape);
      }
      out += ')';
      return;
    }
    case Kind::Env:
      out += "#<ENVIRONMENT>";
      return;
  }
}

inline std::string to_string(const Val& v, bool escape) {
  std::string s;
  print(s, v, escape);
  return s;
}

}  // namespace vlisp
