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

// Term output: write/1, writeq/1, print/1 and write_canonical/1.

#pragma once

#include <charconv>
#include <cmath>
#include <string>

#include "reader.hpp"
#include "term.hpp"

namespace vprolog {

struct WriteOptions {
  bool quoted = false;
  bool ignore_ops = false;
  bool number_vars = true;
};

inline std::string format_float(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, res.ptr);
  auto e = s.find('e');
  std::string mant = e == std::string::npos ? s : s.substr(0, e);
  std::string exp = e == std::string::npos ? "" : s.substr(e + 1);
  if (mant.find('.') == std::string::npos) mant += ".0";
  if (exp.empty()) return mant;
  bool neg = exp[0] == '-';
  std::size_t i = (exp[0] == '-' || exp[0] == '+') ? 1 : 0;
  while (i + 1 < exp.size() && exp[i] == '0') ++i;
  return mant + "e" + (neg ? "-" : "") + exp.substr(i);
}

inline std::string format_integer(const Term& t) {
  return t.is_int() ? std::to_string(t.int_value()) : t.big_value().str();
}

enum class AtomClass { Letter, Symbol, Solo, Other };

inline AtomClass classify_atom(const std::string& s) {
  if (s.empty()) return AtomClass::Other;
  if (s == "[]" || s == "!" || s == ";" || s == "{}" || s == ",") return AtomClass::Solo;
  if (is_lower_start(s[0])) {
    for (char c : s)
      if (!is_alnum_char(c)) return AtomClass::Other;
    return AtomClass::Letter;
  }
  for (char c : s)
    if (!is_symbol_char(c)) return AtomClass::Other;
  return AtomClass::Symbol;
}

inline std::string quote_text(const std::string& s, char q) {
  std::string out(1, q);
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\a': out += "\\a"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\v': out += "\\v"; break;
      case '\0': out += "\\0\\"; break;
      default:
        if (c == q) {
          out += '\\';
          out += c;
        } else {
          out += c;
        }
    }
  }
  out += q;
  return out;
}

inline std::string atom_text(AtomId a, bool quoted) {
  const std::string& s = atom_name(a);
  if (!quoted) return s;
  auto cls = classify_atom(s);
  if (cls == AtomClass::Letter || cls == AtomClass::Symbol) return s;
  if (cls == AtomClass::Solo && s != ",") return s;
  return quote_text(s, '\'');
}

class Writer {
 public:
  Writer(const OpTable& ops, WriteOptions opts) : ops_(ops), opts_(opts) {}

  std::string write(const Term& t) {
    out_.clear();
    emit(t, 1200);
    return std::move(out_);
  }

 private:
  void put(const std::string& s) {
    // Keep adjacent tokens from fusing: symbol chars next to symbol chars,
    // alphanumerics next to alphanumerics.
    if (!out_.empty() && !s.empty()) {
      char a = out_.back(), b = s.front();
      bool fuse = (is_alnum_char(a) && is_alnum_char(b)) || (is_symbol_char(a) && is_symbol_char(b)) ||
                  (a == ',' && false);
      if (fuse) out_ += ' ';
    }
    out_ += s;
  }

  void emit_atom(AtomId a, int max_prec) {
    std::string s = atom_text(a, opts_.quoted);
    if (max_prec < 1200 && ops_.is_op(a)) {
      int p = 0;
      if (auto* d = ops_.prefix(a)) p = std::max(p, d->priority);
      if (auto* d = ops_.infix(a)) p = std::max(p, d->priority);
      if (auto* d = ops_.postfix(a)) p = std::max(p, d->priority);
      if (p > max_prec) {
        put("(");
        out_ += s;
        out_ += ")";
        return;
      }
    }
    put(s);
  }

  void emit(const Term& raw, int max_prec) {
    const Term& t = deref(raw);
    switch (t.tag()) {
      case Tag::None:
        put("<none>");
        return;
      case Tag::Var:
        put("_G" + std::to_string(var_node(t)->stamp));
        return;
      case Tag::Local:
        put("_L" + std::to_string(t.local_index()));
        return;
      case Tag::Int:
      case Tag::Big: {
        std::string s = format_integer(t);
        if (s[0] == '-' && !out_.empty() && is_symbol_char(out_.back())) out_ += ' ';
        put(s);
        return;
      }
      case Tag::Float: {
        std::string s = format_float(t.float_value());
        if (s[0] == '-' && !out_.empty() && is_symbol_char(out_.back())) out_ += ' ';
        put(s);
        return;
      }
      case Tag::Atom:
        emit_atom(t.atom_id(), max_prec);
        return;
      case Tag::Str:
        put(opts_.quoted ? quote_text(t.string_value(), '"') : t.string_value());
        return;
      case Tag::Cmp:
        emit_compound(t, max_prec);
        return;
    }
  }

  void emit_list(const Term& t) {
    put("[");
    emit(t.arg(0), 999);
    Term tail = deref(t.arg(1));
    while (is_cons(tail)) {
      out_ += ",";
      emit(tail.arg(0), 999);
      tail = deref(tail.arg(1));
    }
    if (!is_nil(tail)) {
      out_ += "|";
      emit(tail, 999);
    }
    out_ += "]";
  }

  void emit_compound(const Term& t, int max_prec) {
    const Std& S = std_atoms();
    AtomId f = t.functor();
    std::uint32_t n = t.arity();
    if (f == S.dot && n == 2) {
      emit_list(t);
      return;
    }
    if (opts_.number_vars && n == 1 && f == atom("$VAR")) {
      const Term& a = deref(t.arg(0));
      if (a.is_int()) {
        std::int64_t i = a.int_value();
        std::string name(1, static_cast<char>('A' + i % 26));
        if (i >= 26) name += std::to_string(i / 26);
        put(name);
        return;
      }
    }
    if (!opts_.ignore_ops) {
      if (f == S.curly && n == 1) {
        put("{");
        emit(t.arg(0), 1200);
        out_ += "}";
        return;
      }
      if (n == 2) {
        if (const OpDef* d = ops_.infix(f)) {
          int p = d->priority;
          int lp = d->type == OpType::YFX ? p : p - 1;
          int rp = d->type == OpType::XFY ? p : p - 1;
          bool paren = p > max_prec;
          if (paren) put("(");
          emit(t.arg(0), lp);
          const std::string& name = atom_name(f);
          if (f == S.comma) {
            out_ += ",";
          } else {
            auto cls = classify_atom(name);
            if (cls == AtomClass::Letter || name == "->" || name == ":-" || name == "-->") {
              out_ += " ";
              out_ += atom_text(f, opts_.quoted);
              out_ += " ";
            } else {
              put(atom_text(f, opts_.quoted));
            }
          }
          emit(t.arg(1), rp);
          if (paren) out_ += ")";
          return;
        }
      }
      if (n == 1) {
        if (const OpDef* d = ops_.prefix(f); d && f != S.minus && f != S.plus) {
          emit_prefix(t, *d, max_prec);
          return;
        }
        if (const OpDef* d = ops_.prefix(f)) {
          emit_prefix(t, *d, max_prec);
          return;
        }
        if (const OpDef* d = ops_.postfix(f)) {
          int p = d->priority;
          int ap = d->type == OpType::YF ? p : p - 1;
          bool paren = p > max_prec;
          if (paren) put("(");
          emit(t.arg(0), ap);
          put(atom_text(f, opts_.quoted));
          if (paren) out_ += ")";
          return;
        }
      }
    }
    put(atom_text(f, opts_.quoted));
    out_ += "(";
    for (std::uint32_t i = 0; i < n; ++i) {
      if (i) out_ += ",";
      emit(t.arg(i), 999);
    }
    out_ += ")";
  }

  void emit_prefix(const Term& t, const OpDef& d, int max_prec) {
    AtomId f = t.functor();
    int p = d.priority;
    int ap = d.type == OpType::FY ? p : p - 1;
    const Term& a = deref(t.arg(0));
    bool paren = p > max_prec;
    if (paren) put("(");
    put(atom_text(f, opts_.quoted));
    bool arg_is_op_atom = a.is_atom() && ops_.is_op(a.atom_id());
    if (a.is_number() && (f == std_atoms().minus || f == std_atoms().plus)) {
      out_ += " ";
    } else if (classify_atom(atom_name(f)) == AtomClass::Letter) {
      out_ += " ";
    }
    if (arg_is_op_atom || (a.is_compound() && ops_.infix(a.name_id()) && a.arity() == 2 &&
                           ops_.infix(a.name_id())->priority > ap)) {
      out_ += "(";
      emit(a, 1200);
      out_ += ")";
    } else {
      emit(a, ap);
    }
    if (paren) out_ += ")";
  }

  const OpTable& ops_;
  WriteOptions opts_;
  std::string out_;
};

}  // namespace vprolog
