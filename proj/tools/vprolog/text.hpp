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

// Conversions between Prolog text representations, number parsing, error
// message rendering and format/2.

#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "arith.hpp"
#include "machine.hpp"

namespace vprolog {

// Text of an atom, string, number, code list or char list.
inline std::optional<std::string> text_of(const Term& raw) {
  const Term& t = deref(raw);
  switch (t.tag()) {
    case Tag::Atom:
      return atom_name(t.atom_id());
    case Tag::Str:
      return t.string_value();
    case Tag::Int:
    case Tag::Big:
      return format_integer(t);
    case Tag::Float:
      return format_float(t.float_value());
    case Tag::Cmp: {
      if (!is_cons(t)) return std::nullopt;
      std::string out;
      Term cur = t;
      while (is_cons(cur)) {
        const Term& h = deref(cur.arg(0));
        if (h.is_int() && h.int_value() >= 0 && h.int_value() <= 0x10FFFF) {
          append_utf8(out, static_cast<std::uint32_t>(h.int_value()));
        } else if (h.is_atom() && utf8_length(atom_name(h.atom_id())) == 1) {
          out += atom_name(h.atom_id());
        } else {
          return std::nullopt;
        }
        cur = deref(cur.arg(1));
      }
      if (!is_nil(cur)) return std::nullopt;
      return out;
    }
    default:
      return std::nullopt;
  }
}

// Text of a code or char list; [] is the empty text here, not the atom '[]'.
inline std::optional<std::string> list_text_of(const Term& raw) {
  if (is_nil(deref(raw))) return std::string();
  return text_of(raw);
}

inline std::string require_text(const Term& raw, std::string_view type = "atom") {
  const Term& t = deref(raw);
  if (t.is_var()) Machine::instantiation_error();
  if (is_nil(t)) return "[]";
  auto s = text_of(t);
  if (!s) Machine::type_error(type, t);
  return *s;
}

inline Term codes_term(std::string_view s) {
  std::vector<Term> items;
  for (auto cp : utf8_codes(s)) items.push_back(Term::make_int(cp));
  return make_list(std::move(items));
}

inline std::vector<std::string> utf8_chars(std::string_view s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t b = i;
    next_utf8(s, i);
    out.emplace_back(s.substr(b, i - b));
  }
  return out;
}

inline Term chars_term(std::string_view s) {
  std::vector<Term> items;
  for (auto& c : utf8_chars(s)) items.push_back(Term::make_atom(c));
  return make_list(std::move(items));
}

// Parses Prolog number syntax, allowing leading layout and a sign.
inline std::optional<Term> parse_number(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && is_layout(s[i])) ++i;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
    neg = s[i] == '-';
    ++i;
  }
  if (i >= s.size() || !is_digit(s[i])) {
    if (s.substr(i) == "inf" || s.substr(i) == "infinite")
      return Term::make_float(neg ? -std::numeric_limits<double>::infinity()
                                  : std::numeric_limits<double>::infinity());
    if (s.substr(i) == "nan") return Term::make_float(std::numeric_limits<double>::quiet_NaN());
    return std::nullopt;
  }
  try {
    Lexer lex(s.substr(i));
    Token t = lex.next();
    if (lex.pos() != s.size() - i) return std::nullopt;
    if (t.kind == Tok::Int) return Term::make_integer(neg ? BigInt(-t.ival) : t.ival);
    if (t.kind == Tok::Float) return Term::make_float(neg ? -t.fval : t.fval);
  } catch (const SyntaxError&) {
  }
  return std::nullopt;
}

inline std::string describe_error(Machine& m, const Term& raw) {
  Term t = deref(raw);
  if (t.is_compound() && t.functor() == std_atoms().error && t.arity() == 2) {
    Term f = deref(t.arg(0));
    Term ctx = deref(t.arg(1));
    std::string prefix;
    if (ctx.is_compound() && atom_name(ctx.functor()) == "context" && ctx.arity() == 2) {
      Term where = deref(ctx.arg(0));
      if (!where.is_var()) prefix = m.to_text(where, true) + ": ";
    }
    std::string fname = f.is_callable() ? atom_name(f.name_id()) : "";
    if (fname == "existence_error" && f.arity() == 2 && deref(f.arg(0)).is_atom(atom("procedure")))
      return prefix + "Unknown procedure: " + m.to_text(f.arg(1), true);
    if (fname == "type_error" && f.arity() == 2)
      return prefix + "Type error: `" + m.to_text(f.arg(0)) + "' expected, found `" +
             m.to_text(f.arg(1), true) + "'";
    if (fname == "domain_error" && f.arity() == 2)
      return prefix + "Domain error: `" + m.to_text(f.arg(0)) + "' expected, found `" +
             m.to_text(f.arg(1), true) + "'";
    if (fname == "instantiation_error") return prefix + "Arguments are not sufficiently instantiated";
    if (fname == "evaluation_error" && f.arity() == 1)
      return prefix + "Arithmetic: evaluation error: " + m.to_text(f.arg(0));
    if (fname == "syntax_error" && f.arity() == 1) return prefix + "Syntax error: " + m.to_text(f.arg(0));
    if (fname == "permission_error" && f.arity() == 3)
      return prefix + "No permission to " + m.to_text(f.arg(0)) + " " + m.to_text(f.arg(1)) + " `" +
             m.to_text(f.arg(2), true) + "'";
    if (fname == "resource_error") return prefix + "Not enough resources: " + m.to_text(f.arg(0));
    if (fname == "representation_error")
      return prefix + "Cannot represent due to `" + m.to_text(f.arg(0)) + "'";
    if (fname == "format" && f.arity() == 1) return prefix + "Format error: " + m.to_text(f.arg(0));
    if (fname == "existence_error" && f.arity() == 2)
      return prefix + m.to_text(f.arg(0)) + " `" + m.to_text(f.arg(1), true) + "' does not exist";
    return prefix + "Unknown error term: " + m.to_text(f, true);
  }
  return "Unhandled exception: Unknown message: " + m.to_text(t, true);
}

[[noreturn]] inline void format_error(const std::string& msg) {
  Machine::throw_error(Term::make_compound("format", {Term::make_string(msg)}));
}

inline std::string group_digits(const std::string& digits, int group, char sep) {
  std::string out;
  int n = static_cast<int>(digits.size());
  for (int i = 0; i < n; ++i) {
    out += digits[static_cast<std::size_t>(i)];
    int left = n - 1 - i;
    if (left > 0 && left % group == 0) out += sep;
  }
  return out;
}

// format/2 directive interpreter.
inline std::string run_format(Machine& m, const std::string& fmt, std::vector<Term> args) {
  std::string out;
  std::size_t line_start = 0;
  std::size_t segment_start = 0;
  std::vector<std::pair<std::size_t, char>> fills;
  std::size_t next_arg = 0;
  auto take = [&]() -> Term {
    if (next_arg >= args.size()) format_error("not enough arguments");
    return deref(args[next_arg++]);
  };
  auto column_stop = [&](std::size_t target) {
    std::size_t col = out.size() - line_start;
    if (col < target) {
      std::size_t pad = target - col;
      if (fills.empty()) {
        out.append(pad, ' ');
      } else {
        // Distribute padding over fill points, extra to the last.
        std::size_t per = pad / fills.size(), extra = pad % fills.size();
        for (std::size_t k = fills.size(); k-- > 0;) {
          std::size_t n = per + (k == fills.size() - 1 ? extra : 0);
          out.insert(fills[k].first, n, fills[k].second);
        }
      }
    }
    segment_start = out.size();
    fills.clear();
  };
  for (std::size_t i = 0; i < fmt.size(); ++i) {
    char c = fmt[i];
    if (c != '~') {
      out += c;
      if (c == '\n') {
        line_start = out.size();
        segment_start = out.size();
        fills.clear();
      }
      continue;
    }
    if (++i >= fmt.size()) format_error("truncated format specification");
    std::optional<std::int64_t> num;
    char fill_char = ' ';
    if (fmt[i] == '*') {
      Term a = take();
      if (!a.is_int()) format_error("* expects an integer argument");
      num = a.int_value();
      ++i;
    } else if (fmt[i] == '`') {
      if (i + 1 >= fmt.size()) format_error("truncated format specification");
      fill_char = fmt[i + 1];
      num = static_cast<unsigned char>(fill_char);
      i += 2;
    } else {
      std::int64_t v = 0;
      bool any = false;
      while (i < fmt.size() && is_digit(fmt[i])) {
        v = v * 10 + (fmt[i] - '0');
        ++i;
        any = true;
      }
      if (any) num = v;
    }
    if (i >= fmt.size()) format_error("truncated format specification");
    char d = fmt[i];
    switch (d) {
      case 'w':
        out += m.to_text(take());
        break;
      case 'p':
      case 'q':
        out += m.to_text(take(), true);
        break;
      case 'a': {
        Term a = take();
        if (a.is_var()) Machine::instantiation_error();
        auto s = text_of(a);
        if (!s) format_error("~a expects an atomic argument");
        out += *s;
        break;
      }
      case 'd':
      case 'D': {
        Term a = take();
        if (!a.is_integer()) {
          if (a.is_var()) Machine::instantiation_error();
          format_error("~d expects an integer argument");
        }
        std::string s = format_integer(a);
        bool neg = s[0] == '-';
        if (neg) s.erase(0, 1);
        std::string frac;
        std::int64_t k = num.value_or(0);
        if (k > 0) {
          if (static_cast<std::int64_t>(s.size()) <= k) s.insert(0, static_cast<std::size_t>(k) - s.size() + 1, '0');
          frac = s.substr(s.size() - static_cast<std::size_t>(k));
          s.erase(s.size() - static_cast<std::size_t>(k));
        }
        if (d == 'D') s = group_digits(s, 3, ',');
        out += (neg ? "-" : "") + s + (frac.empty() ? "" : "." + frac);
        break;
      }
      case 'f':
      case 'e':
      case 'g': {
        Term a = take();
        if (a.is_var()) Machine::instantiation_error();
        Term v = eval(a);
        int prec = static_cast<int>(num.value_or(6));
        if (d == 'f' && v.is_integer()) {
          // Exact for integers of any size.
          std::string s = format_integer(v);
          out += s;
          if (prec > 0) out += "." + std::string(static_cast<std::size_t>(prec), '0');
          break;
        }
        char spec[16];
        std::snprintf(spec, sizeof spec, "%%.%d%c", prec, d);
        std::vector<char> buf(static_cast<std::size_t>(prec) + 400);
        std::snprintf(buf.data(), buf.size(), spec, to_float(v));
        out += buf.data();
        break;
      }
      case 'n':
        for (std::int64_t k = 0; k < num.value_or(1); ++k) out += '\n';
        line_start = out.size();
        segment_start = out.size();
        fills.clear();
        break;
      case 'c': {
        Term a = take();
        if (!a.is_int()) format_error("~c expects a character code");
        for (std::int64_t k = 0; k < num.value_or(1); ++k) append_utf8(out, static_cast<std::uint32_t>(a.int_value()));
        break;
      }
      case 'r':
      case 'R': {
        Term a = take();
        if (!a.is_integer()) format_error("~r expects an integer argument");
        int base = static_cast<int>(num.value_or(8));
        if (base < 2 || base > 36) format_error("radix out of range");
        BigInt v = a.to_big();
        bool neg = v < 0;
        if (neg) v = -v;
        std::string s;
        const char* digs = d == 'r' ? "0123456789abcdefghijklmnopqrstuvwxyz" : "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
        if (v == 0) s = "0";
        while (v > 0) {
          s += digs[static_cast<int>(v % base)];
          v /= base;
        }
        if (neg) s += '-';
        out.append(s.rbegin(), s.rend());
        break;
      }
      case 's': {
        Term a = take();
        auto s = text_of(a);
        if (!s) format_error("~s expects a string or list of codes");
        out += *s;
        break;
      }
      case 'i':
        take();
        break;
      case '~':
        out += '~';
        break;
      case 't':
        fills.emplace_back(out.size(), num ? static_cast<char>(*num) : fill_char);
        break;
      case '|':
        column_stop(num ? static_cast<std::size_t>(*num) : out.size() - line_start);
        break;
      case '+': {
        std::size_t seg_col = segment_start - line_start;
        column_stop(seg_col + static_cast<std::size_t>(num.value_or(8)));
        break;
      }
      default:
        format_error(std::string("unknown directive ~") + d);
    }
  }
  if (next_arg < args.size()) format_error("too many arguments");
  return out;
}

}  // namespace vprolog
