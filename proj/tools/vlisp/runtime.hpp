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

// format, printing, types, symbols, control builtins, the Lisp-level
// prelude and the script loader.

#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "loop.hpp"
#include "sequences.hpp"

namespace vlisp {

// ---------------------------------------------------------------------------
// Types

inline std::string type_name_of(const Val& v) {
  switch (v.tag()) {
    case Tag::Nil: return "NULL";
    case Tag::Int: return "FIXNUM";
    case Tag::Float: return "DOUBLE-FLOAT";
    case Tag::Char: return "CHARACTER";
    case Tag::Obj: break;
  }
  switch (v.obj()->kind) {
    case Kind::Symbol: return v.as<Symbol>()->keyword ? "KEYWORD" : "SYMBOL";
    case Kind::Cons: return "CONS";
    case Kind::String: return "STRING";
    case Kind::Big: return "BIGNUM";
    case Kind::Ratio: return "RATIO";
    case Kind::Function: return "FUNCTION";
    case Kind::Hash: return "HASH-TABLE";
    case Kind::Vector: return "VECTOR";
    case Kind::Struct: return v.as<StructObj>()->type->name;
    case Kind::Env: return "ENVIRONMENT";
  }
  return "T";
}

inline bool typep(Interp& m, const Val& v, const Val& type) {
  if (consp(type)) {
    std::string head = symbol_of(car(type))->name;
    auto args = to_vector(cdr(type));
    if (head == "OR") {
      for (const auto& t : args)
        if (typep(m, v, t)) return true;
      return false;
    }
    if (head == "AND") {
      for (const auto& t : args)
        if (!typep(m, v, t)) return false;
      return true;
    }
    if (head == "NOT") return !typep(m, v, args.at(0));
    if (head == "MEMBER") {
      for (const auto& t : args)
        if (eql(v, t)) return true;
      return false;
    }
    if (head == "EQL") return eql(v, args.at(0));
    if (head == "INTEGER" || head == "REAL" || head == "FLOAT" || head == "RATIONAL" || head == "NUMBER") {
      if (!typep(m, v, sym(head))) return false;
      auto bound = [&](std::size_t i, bool lower) {
        if (i >= args.size() || (is_symbol(args[i]) && symbol_of(args[i])->name == "*")) return true;
        Val b = args[i];
        bool exclusive = consp(b);
        if (exclusive) b = car(b);
        int c = num_compare(v, b);
        if (lower) return exclusive ? c > 0 : c >= 0;
        return exclusive ? c < 0 : c <= 0;
      };
      return bound(0, true) && bound(1, false);
    }
    return typep(m, v, car(type));
  }
  std::string t = symbol_of(type)->name;
  if (t == "T") return true;
  if (t == "NIL") return false;
  if (t == "NULL") return v.nil();
  if (t == "INTEGER") return is_integer(v);
  if (t == "FIXNUM") return v.is_fix();
  if (t == "BIGNUM") return v.is(Kind::Big);
  if (t == "RATIO") return v.is(Kind::Ratio);
  if (t == "RATIONAL") return is_rational(v);
  if (t == "FLOAT" || t == "DOUBLE-FLOAT" || t == "SINGLE-FLOAT" || t == "SHORT-FLOAT" || t == "LONG-FLOAT")
    return v.is_float();
  if (t == "NUMBER" || t == "REAL") return is_number(v);
  if (t == "CHARACTER" || t == "BASE-CHAR" || t == "STANDARD-CHAR") return v.is_char();
  if (t == "STRING" || t == "SIMPLE-STRING" || t == "BASE-STRING") return v.is(Kind::String);
  if (t == "SYMBOL") return is_symbol(v);
  if (t == "KEYWORD") return v.is(Kind::Symbol) && v.as<Symbol>()->keyword;
  if (t == "BOOLEAN") return v.nil() || (v.is(Kind::Symbol) && v.as<Symbol>() == T_sym());
  if (t == "LIST") return v.nil() || consp(v);
  if (t == "CONS") return consp(v);
  if (t == "ATOM") return !consp(v);
  if (t == "VECTOR" || t == "SIMPLE-VECTOR" || t == "ARRAY" || t == "SIMPLE-ARRAY")
    return v.is(Kind::Vector) || (t != "SIMPLE-VECTOR" && v.is(Kind::String));
  if (t == "SEQUENCE") return is_sequence(v);
  if (t == "HASH-TABLE") return v.is(Kind::Hash);
  if (t == "FUNCTION") return v.is(Kind::Function);
  if (t == "STRUCTURE-OBJECT") return v.is(Kind::Struct);
  if (v.is(Kind::Struct)) return v.as<StructObj>()->type->name == t;
  if (m.struct_types.count(t)) return false;
  fail("unknown type specifier " + t, "SIMPLE-ERROR");
}

// ---------------------------------------------------------------------------
// format

class Formatter {
 public:
  Formatter(Interp& m, std::vector<Val> args) : m_(m), args_(std::move(args)) {}

  std::string run(std::string_view ctl) {
    std::string out;
    exec(ctl, out);
    return out;
  }

 private:
  struct Directive {
    std::vector<std::optional<Val>> params;
    bool colon = false, at = false;
    char ch = 0;
    std::size_t begin = 0, end = 0;  // span in the control string
  };

  struct Escape {};  // ~^ with nothing left

  Val next_arg() {
    if (pos_ >= args_.size()) fail("format: not enough arguments", "FORMAT-ERROR");
    return args_[pos_++];
  }
  bool has_args() const { return pos_ < args_.size(); }

  Directive parse(std::string_view ctl, std::size_t& i) {
    Directive d;
    d.begin = i;
    ++i;  // '~'
    for (;;) {
      if (i >= ctl.size()) fail("format: truncated directive", "FORMAT-ERROR");
      char c = ctl[i];
      if (c == '\'') {
        d.params.emplace_back(Val::chr(static_cast<unsigned char>(ctl[i + 1])));
        i += 2;
      } else if (c == 'v' || c == 'V') {
        d.params.emplace_back(next_arg());
        ++i;
      } else if (c == '#') {
        d.params.emplace_back(Val::fix(static_cast<std::int64_t>(args_.size() - pos_)));
        ++i;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+') {
        std::size_t j = i + 1;
        while (j < ctl.size() && std::isdigit(static_cast<unsigned char>(ctl[j]))) ++j;
        d.params.emplace_back(Val::fix(std::stoll(std::string(ctl.substr(i, j - i)))));
        i = j;
      } else if (c == ',') {
        if (d.params.empty() || (i > 0 && ctl[i - 1] == ',') || ctl[i - 1] == '~') d.params.emplace_back();
        ++i;
        continue;
      } else {
        break;
      }
      if (i < ctl.size() && ctl[i] == ',') {
        ++i;
        if (i < ctl.size() && ctl[i] == ',') d.params.emplace_back();
      }
    }
    while (i < ctl.size() && (ctl[i] == ':' || ctl[i] == '@')) {
      if (ctl[i] == ':') d.colon = true;
      else d.at = true;
      ++i;
    }
    if (i >= ctl.size()) fail("format: truncated directive", "FORMAT-ERROR");
    d.ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ctl[i])));
    ++i;
    d.end = i;
    return d;
  }

  std::int64_t param(const Directive& d, std::size_t k, std::int64_t dflt) {
    if (k < d.params.size() && d.params[k] && d.params[k]->is_fix()) return d.params[k]->fixnum();
    return dflt;
  }
  char char_param(const Directive& d, std::size_t k, char dflt) {
    if (k < d.params.size() && d.params[k] && d.params[k]->is_char())
      return static_cast<char>(d.params[k]->character());
    return dflt;
  }

  // Finds the directive closing a ~X ... ~Y group, collecting ~; separators.
  std::size_t find_close(std::string_view ctl, std::size_t i, char close, std::vector<std::size_t>& seps,
                         Directive& closer) {
    int depth = 0;
    std::size_t saved = pos_;
    while (i < ctl.size()) {
      if (ctl[i] != '~') {
        ++i;
        continue;
      }
      std::size_t at = i;
      // Parse without consuming arguments for v parameters.
      std::size_t j = i + 1;
      while (j < ctl.size() && (std::isdigit(static_cast<unsigned char>(ctl[j])) || ctl[j] == ',' ||
                                ctl[j] == ':' || ctl[j] == '@' || ctl[j] == '#' || ctl[j] == 'v' ||
                                ctl[j] == 'V' || ctl[j] == '-' || ctl[j] == '+' || ctl[j] == '\'')) {
        if (ctl[j] == '\'') ++j;
        ++j;
      }
      if (j >= ctl.size()) break;
      char c = static_cast<char>(std::toupper(static_cast<unsigned char>(ctl[j])));
      if (c == '{' || c == '[' || c == '(' || c == '<') ++depth;
      if ((c == '}' || c == ']' || c == ')' || c == '>') && depth > 0) {
        --depth;
      } else if (c == close && depth == 0) {
        std::size_t k = at;
        closer = parse(ctl, k);
        pos_ = saved;
        return at;
      } else if (c == ';' && depth == 0) {
        seps.push_back(at);
      }
      i = j + 1;
    }
    pos_ = saved;
    fail(std::string("format: missing ~") + close, "FORMAT-ERROR");
  }

  static void pad(std::string& out, const std::string& s, std::int64_t mincol, char padchar, bool left) {
    std::string fill(s.size() < static_cast<std::size_t>(std::max<std::int64_t>(mincol, 0))
                         ? static_cast<std::size_t>(mincol) - s.size()
                         : 0,
                     padchar);
    out += left ? fill + s : s + fill;
  }

  static std::string group_digits(const std::string& digits, char comma, int interval) {
    std::string sign, body = digits;
    if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
      sign = body.substr(0, 1);
      body = body.substr(1);
    }
    std::string out;
    int n = 0;
    for (auto it = body.rbegin(); it != body.rend(); ++it) {
      if (n > 0 && n % interval == 0) out.push_back(comma);
      out.push_back(*it);
      ++n;
    }
    std::reverse(out.begin(), out.end());
    return sign + out;
  }

  static std::string radix_string(const Val& v, int radix) {
    BigInt x = to_big(v);
    bool neg = x < 0;
    if (neg) x = -x;
    if (x == 0) return "0";
    std::string s;
    while (x > 0) {
      int d = static_cast<int>(x % radix);
      s.push_back(static_cast<char>(d < 10 ? '0' + d : 'A' + d - 10));
      x /= radix;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
  }

  static std::string fixed(double x, std::int64_t digits) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.*f", static_cast<int>(std::clamp<std::int64_t>(digits, 0, 60)), x);
    return buf;
  }

  void integer_directive(const Directive& d, std::string& out, int radix) {
    Val v = next_arg();
    if (!is_integer(v)) {
      pad(out, to_string(v, false), param(d, 0, 0), ' ', true);
      return;
    }
    std::string s = radix_string(v, radix);
    if (d.at && sign_of(v) >= 0) s = "+" + s;
    if (d.colon) s = group_digits(s, char_param(d, 2, ','), static_cast<int>(param(d, 3, 3)));
    pad(out, s, param(d, 0, 0), char_param(d, 1, ' '), true);
  }

  void exec(std::string_view ctl, std::string& out) {
    std::size_t i = 0;
    while (i < ctl.size()) {
      char c = ctl[i];
      if (c != '~') {
        out.push_back(c);
        ++i;
        continue;
      }
      Directive d = parse(ctl, i);
      switch (d.ch) {
        case 'A':
        case 'S': {
          Val v = next_arg();
          std::string s = (d.colon && v.nil()) ? "()" : to_string(v, d.ch == 'S');
          pad(out, s, param(d, 0, 0), char_param(d, 3, ' '), d.at);
          break;
        }
        case 'D': integer_directive(d, out, 10); break;
        case 'B': integer_directive(d, out, 2); break;
        case 'O': integer_directive(d, out, 8); break;
        case 'X': integer_directive(d, out, 16); break;
        case 'R': {
          if (d.params.empty() || !d.params[0]) {
            out += to_string(next_arg(), false);
          } else {
            Directive shifted = d;
            shifted.params.erase(shifted.params.begin());
            integer_directive(shifted, out, static_cast<int>(param(d, 0, 10)));
          }
          break;
        }
        case 'F': {
          Val v = next_arg();
          if (!is_number(v)) {
            out += to_string(v, false);
            break;
          }
          double x = to_double(v);
          std::int64_t w = param(d, 0, -1), digits = param(d, 1, -1);
          std::string s;
          if (digits >= 0) {
            s = fixed(x, digits);
          } else if (w >= 0) {
            // Width only: as many decimals as fit.
            std::string whole = fixed(x, 0);
            std::int64_t room = w - static_cast<std::int64_t>(whole.size()) - 1;
            s = fixed(x, std::max<std::int64_t>(room, 1));
          } else {
            s = format_float(x);
            if (s.find('e') != std::string::npos) s = fixed(x, 1);
          }
          if (d.at && x >= 0) s = "+" + s;
          pad(out, s, w, char_param(d, 3, ' '), true);
          break;
        }
        case 'E': {
          Val v = next_arg();
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.*e", static_cast<int>(param(d, 1, 6)), to_double(need_number(v)));
          out += buf;
          break;
        }
        case 'G': out += to_string(next_arg(), false); break;
        case '$': {
          Val v = next_arg();
          std::string s = fixed(to_double(need_number(v)), param(d, 0, 2));
          std::int64_t mindig = param(d, 1, 1);
          std::size_t dot = s.find('.');
          std::size_t intlen = dot == std::string::npos ? s.size() : dot;
          bool neg = !s.empty() && s[0] == '-';
          if (static_cast<std::int64_t>(intlen - (neg ? 1 : 0)) < mindig)
            s.insert(neg ? 1 : 0, static_cast<std::size_t>(mindig) - (intlen - (neg ? 1 : 0)), '0');
          if (d.at && !neg) s = "+" + s;
          pad(out, s, param(d, 2, 0), char_param(d, 3, ' '), true);
          break;
        }
        case 'C': {
          Val v = need_char(next_arg());
          if (d.colon) {
            out += char_name(v.character());
          } else if (d.at) {
            out += to_string(v, true);
          } else {
            append_utf8(out, v.character());
          }
          break;
        }
        case '%': out.append(static_cast<std::size_t>(param(d, 0, 1)), '\n'); break;
        case '&': {
          bool fresh = out.empty() ? m_.at_line_start() : out.back() == '\n';
          std::int64_t n = param(d, 0, 1);
          if (n > 0) out.append(static_cast<std::size_t>(fresh ? n - 1 : n), '\n');
          break;
        }
        case '~': out.append(static_cast<std::size_t>(param(d, 0, 1)), '~'); break;
        case '|': out.append(static_cast<std::size_t>(param(d, 0, 1)), '\f'); break;
        case '\n':
          if (!d.colon)
            while (i < ctl.size() && (ctl[i] == ' ' || ctl[i] == '\t')) ++i;
          if (d.at) out.push_back('\n');
          break;
        case 'T': {
          std::int64_t col = param(d, 0, 1);
          std::size_t line_start = out.rfind('\n');
          std::size_t cur = line_start == std::string::npos ? out.size() : out.size() - line_start - 1;
          if (d.at) {
            out.append(static_cast<std::size_t>(col), ' ');
          } else if (static_cast<std::int64_t>(cur) < col) {
            out.append(static_cast<std::size_t>(col) - cur, ' ');
          } else {
            out.push_back(' ');
          }
          break;
        }
        case 'P': {
          Val v;
          if (d.colon) {
            if (pos_ == 0) fail("format: ~:P with no previous argument", "FORMAT-ERROR");
            v = args_[pos_ - 1];
          } else {
            v = next_arg();
          }
          bool one = v.is_fix() && v.fixnum() == 1;
          out += d.at ? (one ? "y" : "ies") : (one ? "" : "s");
          break;
        }
        case '*': {
          std::int64_t n = param(d, 0, d.at ? 0 : 1);
          if (d.at) {
            pos_ = static_cast<std::size_t>(n);
          } else if (d.colon) {
            pos_ = pos_ >= static_cast<std::size_t>(n) ? pos_ - static_cast<std::size_t>(n) : 0;
          } else {
            pos_ = std::min(args_.size(), pos_ + static_cast<std::size_t>(n));
          }
          break;
        }
        case '?': {
          Val sub = next_arg();
          if (d.at) {
            out += Formatter(m_, {}).run(sub.as<String>()->s);  // rarely used; args not shared
          } else {
            Val sub_args = next_arg();
            out += Formatter(m_, to_vector(sub_args)).run(sub.as<String>()->s);
          }
          break;
        }
        case '^':
          if (!has_args()) throw Escape{};
          break;
        case '{': {
          std::vector<std::size_t> seps;
          Directive closer;
          std::size_t close = find_close(ctl, i, '}', seps, closer);
          std::string_view body = ctl.substr(i, close - i);
          i = closer.end;
          std::int64_t limit = param(d, 0, INT64_MAX);
          bool at_least_once = closer.colon;
          if (body.empty()) {
            Val b = next_arg();
            body = b.as<String>()->s;
          }
          auto run_body = [&](std::vector<Val> items, bool sublists) {
            Formatter inner(m_, std::move(items));
            std::int64_t n = 0;
            while ((inner.has_args() || (at_least_once && n == 0)) && n < limit) {
              if (sublists) {
                Formatter each(m_, to_vector(inner.next_arg()));
                try {
                  each.exec(body, out);
                } catch (Escape&) {
                }
              } else {
                std::size_t before = inner.pos_;
                try {
                  inner.exec(body, out);
                } catch (Escape&) {
                  break;
                }
                if (inner.pos_ == before && !inner.has_args()) break;
                if (inner.pos_ == before) fail("format: ~{ body consumes no arguments", "FORMAT-ERROR");
              }
              ++n;
            }
            return inner.pos_;
          };
          if (d.at) {
            std::vector<Val> rest(args_.begin() + static_cast<std::ptrdiff_t>(pos_), args_.end());
            std::size_t used = run_body(std::move(rest), d.colon);
            pos_ += used;
          } else {
            run_body(to_vector(next_arg()), d.colon);
          }
          break;
        }
        case '[': {
          std::vector<std::size_t> seps;
          Directive closer;
          std::size_t close = find_close(ctl, i, ']', seps, closer);
          std::vector<std::string_view> clauses;
          std::size_t start = i;
          bool default_last = false;
          for (std::size_t s : seps) {
            clauses.push_back(ctl.substr(start, s - start));
            std::size_t k = s;
            Directive sep = parse(ctl, k);
            if (sep.colon) default_last = true;
            start = k;
          }
          clauses.push_back(ctl.substr(start, close - start));
          i = closer.end;
          if (d.at) {
            Val v = next_arg();
            if (v.truthy()) {
              --pos_;
              exec(clauses[0], out);
            }
          } else if (d.colon) {
            Val v = next_arg();
            exec(clauses.size() > 1 ? clauses[v.truthy() ? 1 : 0] : clauses[0], out);
          } else {
            std::int64_t n = d.params.empty() || !d.params[0] ? to_index(next_arg()) : param(d, 0, 0);
            if (n >= 0 && static_cast<std::size_t>(n) < clauses.size() - (default_last ? 1 : 0)) {
              exec(clauses[static_cast<std::size_t>(n)], out);
            } else if (default_last) {
              exec(clauses.back(), out);
            }
          }
          break;
        }
        case '(': {
          std::vector<std::size_t> seps;
          Directive closer;
          std::size_t close = find_close(ctl, i, ')', seps, closer);
          std::string inner;
          exec(ctl.substr(i, close - i), inner);
          i = closer.end;
          bool word_start = true, first = true;
          for (auto& ch : inner) {
            auto u = static_cast<unsigned char>(ch);
            if (d.colon && d.at) {
              ch = static_cast<char>(std::toupper(u));
            } else if (d.colon) {
              ch = static_cast<char>(word_start ? std::toupper(u) : std::tolower(u));
            } else if (d.at) {
              ch = static_cast<char>(first && std::isalpha(u) ? std::toupper(u) : std::tolower(u));
              if (std::isalpha(u)) first = false;
            } else {
              ch = static_cast<char>(std::tolower(u));
            }
            word_start = !std::isalnum(u);
          }
          out += inner;
          break;
        }
        case '<': {
          // Justification is approximated by emitting the segments in order.
          std::vector<std::size_t> seps;
          Directive closer;
          std::size_t close = find_close(ctl, i, '>', seps, closer);
          std::string inner;
          exec(ctl.substr(i, close - i), inner);
          i = closer.end;
          pad(out, inner, param(d, 0, 0), ' ', !d.colon);
          break;
        }
        default:
          fail(std::string("format: unsupported directive ~") + d.ch, "FORMAT-ERROR");
      }
    }
  }

  Interp& m_;
  std::vector<Val> args_;
  std::size_t pos_ = 0;
};

inline std::string format_to_string(Interp& m, const std::string& ctl, std::vector<Val> args) {
  return Formatter(m, std::move(args)).run(ctl);
}

// ---------------------------------------------------------------------------
// Output

// A stream argument is ignored unless it is NIL (meaning standard output
// for the print family) or a string capture bound by with-output-to-string.
VL_BUILTIN(bi_format) {
  if (!a[1].is(Kind::String) && !a[1].is(Kind::Function))
    fail("format control is not a string", "TYPE-ERROR");
  std::vector<Val> args(a.begin() + 2, a.end());
  std::string s = format_to_string(m, a[1].as<String>()->s, std::move(args));
  if (a[0].nil()) return str(std::move(s));
  m.write(s);
  return Val();
}
VL_BUILTIN(bi_princ) {
  m.write(to_string(a[0], false));
  return a[0];
}
VL_BUILTIN(bi_prin1) {
  m.write(to_string(a[0], true));
  return a[0];
}
VL_BUILTIN(bi_print) {
  m.write("\n" + to_string(a[0], true) + " ");
  return a[0];
}
VL_BUILTIN(bi_pprint) {
  m.write("\n" + to_string(a[0], true));
  return Val();
}
VL_BUILTIN(bi_write) {
  bool escape = true;
  for (std::size_t i = 1; i + 1 < a.size(); i += 2)
    if (require_symbol(a[i])->name == ":ESCAPE") escape = a[i + 1].truthy();
  m.write(to_string(a[0], escape));
  return a[0];
}
VL_BUILTIN(bi_terpri) {
  m.write("\n");
  return Val();
}
VL_BUILTIN(bi_fresh_line) {
  if (m.at_line_start()) return Val();
  m.write("\n");
  return T();
}
VL_BUILTIN(bi_write_string) {
  m.write(string_designator(a[0]));
  return a[0];
}
VL_BUILTIN(bi_write_line) {
  m.write(string_designator(a[0]) + "\n");
  return a[0];
}
VL_BUILTIN(bi_write_char) {
  std::string s;
  append_utf8(s, need_char(a[0]).character());
  m.write(s);
  return a[0];
}
VL_BUILTIN(bi_finish_output) {
  if (m.captures.empty()) std::fflush(stdout);
  return Val();
}
VL_BUILTIN(bi_princ_to_string) { return str(to_string(a[0], false)); }
VL_BUILTIN(bi_prin1_to_string) { return str(to_string(a[0], true)); }
VL_BUILTIN(bi_read_from_string) {
  std::string s = string_designator(a[0]);
  Reader r(s);
  auto v = r.next();
  if (!v) fail("end of file on string input", "END-OF-FILE");
  return set_values(m, {*v, Val::fix(static_cast<std::int64_t>(r.pos()))});
}
VL_BUILTIN(bi_read_line) { return set_values(m, {Val(), T()}); }

// ---------------------------------------------------------------------------
// Symbols, evaluation and control

VL_BUILTIN(bi_symbol_name) { return str(require_symbol(a[0])->name); }
VL_BUILTIN(bi_symbolp) { return boolean(is_symbol(a[0])); }
VL_BUILTIN(bi_keywordp) { return boolean(a[0].is(Kind::Symbol) && a[0].as<Symbol>()->keyword); }
VL_BUILTIN(bi_functionp) { return boolean(a[0].is(Kind::Function)); }
VL_BUILTIN(bi_intern) { return sym(string_designator(a[0])); }
VL_BUILTIN(bi_make_symbol) {
  auto* s = new Symbol(string_designator(a[0]));
  s->rc = 1u << 30;  // uninterned symbols live as long as the process
  return Val::adopt(s);
}
VL_BUILTIN(bi_gensym) {
  std::string prefix = a.empty() ? "G" : string_designator(a[0]);
  auto* s = new Symbol(prefix + std::to_string(m.gensym_counter++));
  s->rc = 1u << 30;
  return Val::adopt(s);
}
VL_BUILTIN(bi_symbol_value) { return m.lookup_var(require_symbol(a[0]), Val()); }
VL_BUILTIN(bi_set) {
  m.set_var(require_symbol(a[0]), a[1], Val());
  return a[1];
}
VL_BUILTIN(bi_boundp) { return boolean(require_symbol(a[0])->bound); }
VL_BUILTIN(bi_fboundp) { return boolean(require_symbol(a[0])->function.truthy()); }
VL_BUILTIN(bi_symbol_function) { return m.lookup_function(require_symbol(a[0]), Val()); }
VL_BUILTIN(bi_get) {
  Symbol* s = require_symbol(a[0]);
  for (Val c = s->plist; consp(c) && consp(cdr(c)); c = cdr(cdr(c)))
    if (eql(car(c), a[1])) return car(cdr(c));
  return a.size() > 2 ? a[2] : Val();
}
VL_BUILTIN(bi_put) {  // (symbol indicator value)
  Symbol* s = require_symbol(a[0]);
  for (Val c = s->plist; consp(c) && consp(cdr(c)); c = cdr(cdr(c)))
    if (eql(car(c), a[1])) {
      cdr(c).as<Cons>()->car = a[2];
      return a[2];
    }
  s->plist = cons(a[1], cons(a[2], s->plist));
  return a[2];
}
VL_BUILTIN(bi_type_of) { return sym(type_name_of(a[0])); }
VL_BUILTIN(bi_typep) { return boolean(typep(m, a[0], a[1])); }
VL_BUILTIN(bi_eval) { return m.eval(a[0], Val()); }
VL_BUILTIN(bi_macroexpand_1) {
  bool expanded;
  Val r = m.macroexpand_1(a[0], Val(), expanded);
  return set_values(m, {r, boolean(expanded)});
}
VL_BUILTIN(bi_macroexpand) {
  bool expanded = true, any = false;
  Val r = a[0];
  while (expanded) {
    r = m.macroexpand_1(r, Val(), expanded);
    any = any || expanded;
  }
  return set_values(m, {r, boolean(any)});
}
VL_BUILTIN(bi_funcall) {
  std::vector<Val> args(a.begin() + 1, a.end());
  Val r = m.apply(a[0], args);
  m.mv_fresh = m.mv_set;
  return r;
}
VL_BUILTIN(bi_apply) {
  std::vector<Val> args(a.begin() + 1, a.end() - 1);
  for (Val c = a.back(); consp(c); c = cdr(c)) args.push_back(car(c));
  Val r = m.apply(a[0], args);
  m.mv_fresh = m.mv_set;
  return r;
}
VL_BUILTIN(bi_values) { return set_values(m, a); }
VL_BUILTIN(bi_values_list) { return set_values(m, to_vector(a[0])); }
VL_BUILTIN(bi_identity) { return a[0]; }

inline std::string condition_message(Interp& m, std::vector<Val>& a, std::string& type) {
  if (a[0].is(Kind::String)) {
    std::vector<Val> args(a.begin() + 1, a.end());
    return format_to_string(m, a[0].as<String>()->s, std::move(args));
  }
  if (is_symbol(a[0])) {
    type = symbol_of(a[0])->name;
    for (std::size_t i = 1; i + 1 < a.size(); i += 2) {
      if (require_symbol(a[i])->name == ":FORMAT-CONTROL" && a[i + 1].is(Kind::String)) {
        std::vector<Val> args;
        for (std::size_t j = 1; j + 1 < a.size(); j += 2)
          if (symbol_of(a[j])->name == ":FORMAT-ARGUMENTS") args = to_vector(a[j + 1]);
        return format_to_string(m, a[i + 1].as<String>()->s, std::move(args));
      }
    }
    return "Condition of type " + type + " was signalled.";
  }
  return to_string(a[0], false);
}
VL_BUILTIN(bi_error) {
  std::string type = "SIMPLE-ERROR";
  std::string msg = condition_message(m, a, type);
  LispError e(msg, type);
  e.condition = a[0].is(Kind::String) || is_symbol(a[0]) ? str(msg) : a[0];
  throw e;
}
VL_BUILTIN(bi_warn) {
  std::string type = "WARNING";
  std::string msg = condition_message(m, a, type);
  std::fprintf(stderr, "WARNING: %s\n", msg.c_str());
  return Val();
}
VL_BUILTIN(bi_exit) {
  int code = 0;
  for (std::size_t i = 0; i + 1 < a.size(); i += 2)
    if (require_symbol(a[i])->name == ":CODE") code = static_cast<int>(a[i + 1].fixnum());
  if (a.size() == 1 && a[0].is_fix()) code = static_cast<int>(a[0].fixnum());
  throw ExitRequest{code};
}
VL_BUILTIN(bi_sleep) {
  double s = to_double(need_number(a[0]));
  std::this_thread::sleep_for(std::chrono::duration<double>(std::max(0.0, s)));
  return Val();
}
VL_BUILTIN(bi_get_internal_real_time) {
  auto now = std::chrono::steady_clock::now().time_since_epoch();
  return Val::fix(std::chrono::duration_cast<std::chrono::microseconds>(now).count());
}
VL_BUILTIN(bi_condition_message) { return str(to_string(a[0], false)); }

// Definitions that are simplest to express in Lisp itself.
inline constexpr const char* kPrelude = R"lisp(
(defun complement (f) (lambda (&rest args) (not (apply f args))))
(defun constantly (v) (lambda (&rest args) (declare (ignore args)) v))
(defun last-elt (l) (car (last l)))
(defun string-join (parts sep)
  (with-output-to-string (s)
    (loop for p in parts for first = t then nil
          do (unless first (write-string sep s)) (write-string p s))))
(defun alexandria-iota (n &key (start 0) (step 1))
  (loop for i below n collect (+ start (* i step))))
(defun split-string (string &optional (sep #\Space))
  (loop with start = 0
        for pos = (position sep string :start start)
        collect (subseq string start pos)
        while pos do (setf start (1+ pos))))
)lisp";

inline void install_runtime(Interp& m) {
  install_numbers(m);
  install_sequences(m);
  m.def_builtin("FORMAT", bi_format, 2);
  m.def_builtin("PRINC", bi_princ, 1, 2);
  m.def_builtin("PRIN1", bi_prin1, 1, 2);
  m.def_builtin("PRINT", bi_print, 1, 2);
  m.def_builtin("PPRINT", bi_pprint, 1, 2);
  m.def_builtin("WRITE", bi_write, 1);
  m.def_builtin("TERPRI", bi_terpri, 0, 1);
  m.def_builtin("FRESH-LINE", bi_fresh_line, 0, 1);
  m.def_builtin("WRITE-STRING", bi_write_string, 1, 2);
  m.def_builtin("WRITE-LINE", bi_write_line, 1, 2);
  m.def_builtin("WRITE-CHAR", bi_write_char, 1, 2);
  m.def_builtin("FINISH-OUTPUT", bi_finish_output, 0, 1);
  m.def_builtin("FORCE-OUTPUT", bi_finish_output, 0, 1);
  m.def_builtin("PRINC-TO-STRING", bi_princ_to_string, 1, 1);
  m.def_builtin("PRIN1-TO-STRING", bi_prin1_to_string, 1, 1);
  m.def_builtin("WRITE-TO-STRING", bi_prin1_to_string, 1);
  m.def_builtin("READ-FROM-STRING", bi_read_from_string, 1);
  m.def_builtin("READ-LINE", bi_read_line, 0);
  m.def_builtin("SYMBOL-NAME", bi_symbol_name, 1, 1);
  m.def_builtin("SYMBOLP", bi_symbolp, 1, 1);
  m.def_builtin("KEYWORDP", bi_keywordp, 1, 1);
  m.def_builtin("FUNCTIONP", bi_functionp, 1, 1);
  m.def_builtin("INTERN", bi_intern, 1, 2);
  m.def_builtin("MAKE-SYMBOL", bi_make_symbol, 1, 1);
  m.def_builtin("GENSYM", bi_gensym, 0, 1);
  m.def_builtin("SYMBOL-VALUE", bi_symbol_value, 1, 1);
  m.def_builtin("SET", bi_set, 2, 2);
  m.def_builtin("BOUNDP", bi_boundp, 1, 1);
  m.def_builtin("FBOUNDP", bi_fboundp, 1, 1);
  m.def_builtin("SYMBOL-FUNCTION", bi_symbol_function, 1, 1);
  m.def_builtin("FDEFINITION", bi_symbol_function, 1, 1);
  m.def_builtin("GET", bi_get, 2, 3);
  m.def_builtin("PUT", bi_put, 3, 3);
  m.def_builtin("TYPE-OF", bi_type_of, 1, 1);
  m.def_builtin("TYPEP", bi_typep, 2, 2);
  m.def_builtin("EVAL", bi_eval, 1, 1);
  m.def_builtin("MACROEXPAND-1", bi_macroexpand_1, 1, 2);
  m.def_builtin("MACROEXPAND", bi_macroexpand, 1, 2);
  m.def_builtin("FUNCALL", bi_funcall, 1);
  m.def_builtin("APPLY", bi_apply, 2);
  m.def_builtin("VALUES", bi_values, 0);
  m.def_builtin("VALUES-LIST", bi_values_list, 1, 1);
  m.def_builtin("IDENTITY", bi_identity, 1, 1);
  m.def_builtin("ERROR", bi_error, 1);
  m.def_builtin("CERROR", bi_error, 2);
  m.def_builtin("SIGNAL", bi_error, 1);
  m.def_builtin("WARN", bi_warn, 1);
  m.def_builtin("EXIT", bi_exit, 0);
  m.def_builtin("QUIT", bi_exit, 0);
  m.def_builtin("SLEEP", bi_sleep, 1, 1);
  m.def_builtin("GET-INTERNAL-REAL-TIME", bi_get_internal_real_time, 0, 0);
  m.def_builtin("GET-INTERNAL-RUN-TIME", bi_get_internal_real_time, 0, 0);
  m.def_builtin("SIMPLE-CONDITION-FORMAT-CONTROL", bi_condition_message, 1, 1);
  for (const char* name : {"*STANDARD-OUTPUT*", "*TRACE-OUTPUT*", "*ERROR-OUTPUT*"}) {
    Symbol* s = intern(name);
    s->value = T();
    s->bound = true;
    s->special = true;
  }
  Symbol* units = intern("INTERNAL-TIME-UNITS-PER-SECOND");
  units->value = Val::fix(1000000);
  units->bound = true;
  units->constant = true;
  Symbol* pi = intern("PI");
  pi->value = Val::flo(3.141592653589793);
  pi->bound = true;
  pi->constant = true;
  for (const char* name : {"MOST-POSITIVE-FIXNUM", "MOST-NEGATIVE-FIXNUM"}) {
    Symbol* s = intern(name);
    s->value = Val::fix(name[5] == 'P' ? 4611686018427387903LL : -4611686018427387904LL);
    s->bound = true;
    s->constant = true;
  }

  Reader r(kPrelude);
  while (auto form = r.next()) m.eval(*form, Val());
}

// Reads and evaluates every top-level form of a source file.
inline void load_source(Interp& m, const std::string& text) {
  Reader r(text);
  while (auto form = r.next()) m.eval(*form, Val());
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("file does not exist: " + path, "FILE-ERROR");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

VL_BUILTIN(bi_load) {
  load_source(m, read_file(string_designator(a[0])));
  return T();
}

inline void install_all(Interp& m) {
  install_runtime(m);
  m.def_builtin("LOAD", bi_load, 1);
}

}  // namespace vlisp
