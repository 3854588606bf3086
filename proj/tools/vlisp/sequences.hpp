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

// Lists, generic sequence functions, strings, characters, hash tables and
// arrays. Strings hold bytes; characters index them one byte at a time.

#pragma once

#include <algorithm>
#include <cctype>

#include "numbers.hpp"

namespace vlisp {

// ---------------------------------------------------------------------------
// Sequence plumbing

inline bool is_sequence(const Val& v) {
  return v.nil() || consp(v) || v.is(Kind::Vector) || v.is(Kind::String);
}

inline const Val& need_sequence(const Val& v) {
  if (!is_sequence(v)) fail("The value " + to_string(v, true) + " is not of type SEQUENCE", "TYPE-ERROR");
  return v;
}

inline std::size_t seq_length(const Val& s) {
  if (s.nil()) return 0;
  if (consp(s)) return list_length(s);
  if (s.is(Kind::Vector)) return s.as<VectorObj>()->active();
  if (s.is(Kind::String)) return s.as<String>()->s.size();
  need_sequence(s);
  return 0;
}

inline Val nthcdr_val(std::int64_t n, const Val& l) {
  Val cur = l;
  for (std::int64_t i = 0; i < n && consp(cur); ++i) cur = cdr(cur);
  return consp(cur) || n <= 0 ? cur : Val();
}

inline Val seq_elt(const Val& s, std::size_t i) {
  if (s.is(Kind::Vector)) {
    auto* v = s.as<VectorObj>();
    if (i >= v->active()) fail("index " + std::to_string(i) + " out of bounds", "TYPE-ERROR");
    return v->items[i];
  }
  if (s.is(Kind::String)) {
    const auto& str_ = s.as<String>()->s;
    if (i >= str_.size()) fail("index " + std::to_string(i) + " out of bounds", "TYPE-ERROR");
    return Val::chr(static_cast<unsigned char>(str_[i]));
  }
  Val c = nthcdr_val(static_cast<std::int64_t>(i), need_sequence(s));
  if (!consp(c)) fail("index " + std::to_string(i) + " out of bounds", "TYPE-ERROR");
  return car(c);
}

inline std::vector<Val> seq_items(const Val& s) {
  if (s.nil()) return {};
  if (consp(s)) return to_vector(s);
  if (s.is(Kind::Vector)) {
    auto* v = s.as<VectorObj>();
    return {v->items.begin(), v->items.begin() + static_cast<std::ptrdiff_t>(v->active())};
  }
  if (s.is(Kind::String)) {
    std::vector<Val> out;
    for (unsigned char c : s.as<String>()->s) out.push_back(Val::chr(c));
    return out;
  }
  need_sequence(s);
  return {};
}

inline Val make_vector(std::vector<Val> items) {
  auto* v = new VectorObj();
  v->items = std::move(items);
  return Val::adopt(v);
}

inline std::string chars_to_string(const std::vector<Val>& items) {
  std::string out;
  for (const auto& c : items) {
    if (!c.is_char()) fail("The value " + to_string(c, true) + " is not of type CHARACTER", "TYPE-ERROR");
    out.push_back(static_cast<char>(c.character()));
  }
  return out;
}

// A sequence of the same kind as `like` holding `items`.
inline Val seq_like(const Val& like, std::vector<Val> items) {
  if (like.is(Kind::Vector)) return make_vector(std::move(items));
  if (like.is(Kind::String)) return str(chars_to_string(items));
  return list(std::move(items));
}

inline Val seq_of_type(const Val& type, std::vector<Val> items) {
  std::string t = is_symbol(type) ? symbol_of(type)->name : (consp(type) ? symbol_of(car(type))->name : "");
  if (t == "STRING" || t == "SIMPLE-STRING" || t == "BASE-STRING") return str(chars_to_string(items));
  if (t == "VECTOR" || t == "SIMPLE-VECTOR" || t == "ARRAY") return make_vector(std::move(items));
  if (t == "LIST" || t == "CONS") return list(std::move(items));
  if (t == "NIL" && type.nil()) return Val();
  fail("unsupported sequence type " + to_string(type, true), "TYPE-ERROR");
}

struct SeqArgs {
  Val test, test_not, key, initial_value;
  bool has_initial = false, from_end = false;
  std::size_t start = 0;
  std::optional<std::size_t> end;
  std::optional<std::int64_t> count;
};

inline SeqArgs parse_seq_args(const std::vector<Val>& a, std::size_t from) {
  SeqArgs s;
  if ((a.size() - std::min(from, a.size())) % 2 != 0) fail("odd number of keyword arguments", "PROGRAM-ERROR");
  for (std::size_t i = from; i + 1 < a.size(); i += 2) {
    std::string k = require_symbol(a[i])->name;
    const Val& v = a[i + 1];
    if (k == ":TEST") s.test = v;
    else if (k == ":TEST-NOT") s.test_not = v;
    else if (k == ":KEY") s.key = v;
    else if (k == ":INITIAL-VALUE") {
      s.initial_value = v;
      s.has_initial = true;
    } else if (k == ":FROM-END") s.from_end = v.truthy();
    else if (k == ":START" || k == ":START1") s.start = static_cast<std::size_t>(to_index(v));
    else if (k == ":END" || k == ":END1") {
      if (v.truthy()) s.end = static_cast<std::size_t>(to_index(v));
    } else if (k == ":COUNT") {
      if (v.truthy()) s.count = v.fixnum();
    }
  }
  return s;
}

inline Val keyed(Interp& m, const SeqArgs& s, const Val& x) {
  return s.key.truthy() ? m.funcall(s.key, {x}) : x;
}

inline bool test_match(Interp& m, const SeqArgs& s, const Val& item, const Val& x) {
  Val kx = keyed(m, s, x);
  if (s.test_not.truthy()) return !m.funcall(s.test_not, {item, kx}).truthy();
  if (s.test.truthy()) return m.funcall(s.test, {item, kx}).truthy();
  return eql(item, kx);
}

inline std::size_t range_end(const SeqArgs& s, std::size_t n) {
  std::size_t e = s.end ? *s.end : n;
  if (e > n || s.start > e) fail("bounding indices out of range", "TYPE-ERROR");
  return e;
}

// ---------------------------------------------------------------------------
// Lists

VL_BUILTIN(bi_car) {
  if (a[0].nil()) return Val();
  if (!consp(a[0])) fail("The value " + to_string(a[0], true) + " is not of type LIST", "TYPE-ERROR");
  return car(a[0]);
}
VL_BUILTIN(bi_cdr) {
  if (a[0].nil()) return Val();
  if (!consp(a[0])) fail("The value " + to_string(a[0], true) + " is not of type LIST", "TYPE-ERROR");
  return cdr(a[0]);
}

// c[ad]{2,4}r accessors; the path string is read right to left.
template <char... Path>
Val bi_cxr(Interp& m, std::vector<Val>& a) {
  constexpr char path[] = {Path..., 0};
  Val cur = a[0];
  for (int i = static_cast<int>(sizeof...(Path)) - 1; i >= 0; --i) {
    std::vector<Val> one{cur};
    cur = path[i] == 'A' ? bi_car(m, one) : bi_cdr(m, one);
  }
  return cur;
}

VL_BUILTIN(bi_cons) { return cons(a[0], a[1]); }
VL_BUILTIN(bi_list) { return list(a); }
VL_BUILTIN(bi_list_star) {
  Val tail = a.back();
  a.pop_back();
  return list(a, tail);
}
template <int N>
Val bi_nth_fixed(Interp&, std::vector<Val>& a) {
  Val c = nthcdr_val(N, a[0]);
  return consp(c) ? car(c) : Val();
}
VL_BUILTIN(bi_nth) {
  Val c = nthcdr_val(to_index(a[0]), a[1]);
  return consp(c) ? car(c) : Val();
}
VL_BUILTIN(bi_nthcdr) { return nthcdr_val(to_index(a[0]), a[1]); }
VL_BUILTIN(bi_last) {
  std::size_t n = a.size() > 1 ? static_cast<std::size_t>(to_index(a[1])) : 1;
  std::size_t len = list_length(a[0]);
  return nthcdr_val(static_cast<std::int64_t>(len > n ? len - n : 0), a[0]);
}
VL_BUILTIN(bi_butlast) {
  std::size_t n = a.size() > 1 ? static_cast<std::size_t>(to_index(a[1])) : 1;
  auto items = to_vector(a[0]);
  items.resize(items.size() > n ? items.size() - n : 0);
  return list(std::move(items));
}
VL_BUILTIN(bi_append) {
  if (a.empty()) return Val();
  Val tail = a.back();
  std::vector<Val> items;
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    for (Val c = a[i]; consp(c); c = cdr(c)) items.push_back(car(c));
  return list(std::move(items), tail);
}
VL_BUILTIN(bi_nconc) {
  Val result;
  Val last;
  for (auto& x : a) {
    if (x.nil()) continue;
    if (result.nil()) {
      result = x;
    } else {
      last.as<Cons>()->cdr = x;
    }
    if (!consp(x)) break;
    last = x;
    while (consp(cdr(last))) last = cdr(last);
  }
  return result;
}
VL_BUILTIN(bi_reverse) {
  auto items = seq_items(need_sequence(a[0]));
  std::reverse(items.begin(), items.end());
  return seq_like(a[0], std::move(items));
}
VL_BUILTIN(bi_length) { return Val::fix(static_cast<std::int64_t>(seq_length(need_sequence(a[0])))); }
VL_BUILTIN(bi_copy_list) { return list(to_vector(a[0])); }
inline Val copy_tree(const Val& v) {
  if (!consp(v)) return v;
  return cons(copy_tree(car(v)), copy_tree(cdr(v)));
}
VL_BUILTIN(bi_copy_tree) { return copy_tree(a[0]); }
VL_BUILTIN(bi_make_list) {
  SeqArgs none;
  Val init;
  for (std::size_t i = 1; i + 1 < a.size(); i += 2)
    if (require_symbol(a[i])->name == ":INITIAL-ELEMENT") init = a[i + 1];
  std::vector<Val> items(static_cast<std::size_t>(to_index(a[0])), init);
  return list(std::move(items));
}
VL_BUILTIN(bi_member) {
  SeqArgs s = parse_seq_args(a, 2);
  for (Val c = a[1]; consp(c); c = cdr(c))
    if (test_match(m, s, a[0], car(c))) return c;
  return Val();
}
VL_BUILTIN(bi_member_if) {
  SeqArgs s = parse_seq_args(a, 2);
  for (Val c = a[1]; consp(c); c = cdr(c))
    if (m.funcall(a[0], {keyed(m, s, car(c))}).truthy()) return c;
  return Val();
}
VL_BUILTIN(bi_assoc) {
  SeqArgs s = parse_seq_args(a, 2);
  for (Val c = a[1]; consp(c); c = cdr(c))
    if (consp(car(c)) && test_match(m, s, a[0], car(car(c)))) return car(c);
  return Val();
}
VL_BUILTIN(bi_assoc_if) {
  for (Val c = a[1]; consp(c); c = cdr(c))
    if (consp(car(c)) && m.funcall(a[0], {car(car(c))}).truthy()) return car(c);
  return Val();
}
VL_BUILTIN(bi_rassoc) {
  SeqArgs s = parse_seq_args(a, 2);
  for (Val c = a[1]; consp(c); c = cdr(c))
    if (consp(car(c)) && test_match(m, s, a[0], cdr(car(c)))) return car(c);
  return Val();
}
VL_BUILTIN(bi_acons) { return cons(cons(a[0], a[1]), a[2]); }
VL_BUILTIN(bi_pairlis) {
  auto k = to_vector(a[0]), v = to_vector(a[1]);
  Val out = a.size() > 2 ? a[2] : Val();
  for (std::size_t i = 0; i < k.size() && i < v.size(); ++i) out = cons(cons(k[i], v[i]), out);
  return out;
}
VL_BUILTIN(bi_getf) {
  for (Val c = a[0]; consp(c) && consp(cdr(c)); c = cdr(cdr(c)))
    if (eql(car(c), a[1])) return car(cdr(c));
  return a.size() > 2 ? a[2] : Val();
}
VL_BUILTIN(bi_adjoin) {
  SeqArgs s = parse_seq_args(a, 2);
  Val item = keyed(m, s, a[0]);
  for (Val c = a[1]; consp(c); c = cdr(c))
    if (test_match(m, s, item, car(c))) return a[1];
  return cons(a[0], a[1]);
}

template <int Op>  // 0 union, 1 intersection, 2 set-difference, 3 subsetp
Val bi_setop(Interp& m, std::vector<Val>& a) {
  SeqArgs s = parse_seq_args(a, 2);
  auto in = [&](const Val& x, const Val& l) {
    Val kx = keyed(m, s, x);
    for (Val c = l; consp(c); c = cdr(c))
      if (test_match(m, s, kx, car(c))) return true;
    return false;
  };
  std::vector<Val> out;
  if (Op == 3) {
    for (Val c = a[0]; consp(c); c = cdr(c))
      if (!in(car(c), a[1])) return Val();
    return T();
  }
  for (Val c = a[0]; consp(c); c = cdr(c)) {
    bool hit = in(car(c), a[1]);
    if ((Op == 1 && hit) || (Op == 2 && !hit) || (Op == 0 && !hit)) out.push_back(car(c));
  }
  if (Op == 0)
    for (Val c = a[1]; consp(c); c = cdr(c)) out.push_back(car(c));
  return list(std::move(out));
}

VL_BUILTIN(bi_listp) { return boolean(a[0].nil() || consp(a[0])); }
VL_BUILTIN(bi_consp) { return boolean(consp(a[0])); }
VL_BUILTIN(bi_atom) { return boolean(!consp(a[0])); }
VL_BUILTIN(bi_null) { return boolean(a[0].nil()); }
VL_BUILTIN(bi_endp) {
  if (!a[0].nil() && !consp(a[0])) fail("endp on a non-list", "TYPE-ERROR");
  return boolean(a[0].nil());
}
VL_BUILTIN(bi_eq) {
  if (a[0].is_obj() && a[1].is_obj()) return boolean(a[0].obj() == a[1].obj());
  return boolean(a[0].identical(a[1]));
}
VL_BUILTIN(bi_eql) { return boolean(eql(a[0], a[1])); }
VL_BUILTIN(bi_equal) { return boolean(equal(a[0], a[1])); }

inline bool equalp(const Val& x, const Val& y) {
  if (is_number(x) && is_number(y)) return num_equal(x, y);
  if (x.is_char() && y.is_char())
    return std::tolower(static_cast<int>(x.character())) == std::tolower(static_cast<int>(y.character()));
  if (x.is(Kind::String) && y.is(Kind::String)) {
    const auto &p = x.as<String>()->s, &q = y.as<String>()->s;
    return p.size() == q.size() && std::equal(p.begin(), p.end(), q.begin(), [](char c, char d) {
             return std::tolower(static_cast<unsigned char>(c)) == std::tolower(static_cast<unsigned char>(d));
           });
  }
  if (consp(x) && consp(y)) return equalp(car(x), car(y)) && equalp(cdr(x), cdr(y));
  if (x.is(Kind::Vector) && y.is(Kind::Vector)) {
    auto p = seq_items(x), q = seq_items(y);
    if (p.size() != q.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (!equalp(p[i], q[i])) return false;
    return true;
  }
  if (x.is(Kind::Struct) && y.is(Kind::Struct)) {
    auto *p = x.as<StructObj>(), *q = y.as<StructObj>();
    if (p->type != q->type) return false;
    for (std::size_t i = 0; i < p->slots.size(); ++i)
      if (!equalp(p->slots[i], q->slots[i])) return false;
    return true;
  }
  return eql(x, y);
}
VL_BUILTIN(bi_equalp) { return boolean(equalp(a[0], a[1])); }
VL_BUILTIN(bi_not) { return boolean(a[0].nil()); }

// ---------------------------------------------------------------------------
// Mapping

inline std::vector<std::vector<Val>> spread_args(const std::vector<Val>& a, std::size_t from, bool lists) {
  std::vector<std::vector<Val>> cols;
  for (std::size_t i = from; i < a.size(); ++i) cols.push_back(lists ? to_vector(a[i]) : seq_items(a[i]));
  return cols;
}

inline std::size_t min_len(const std::vector<std::vector<Val>>& cols) {
  std::size_t n = SIZE_MAX;
  for (const auto& c : cols) n = std::min(n, c.size());
  return cols.empty() ? 0 : n;
}

VL_BUILTIN(bi_mapcar) {
  auto cols = spread_args(a, 1, true);
  std::size_t n = min_len(cols);
  std::vector<Val> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Val> args;
    for (auto& c : cols) args.push_back(c[i]);
    out.push_back(m.apply(a[0], args));
  }
  return list(std::move(out));
}
VL_BUILTIN(bi_mapc) {
  auto cols = spread_args(a, 1, true);
  std::size_t n = min_len(cols);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Val> args;
    for (auto& c : cols) args.push_back(c[i]);
    m.apply(a[0], args);
  }
  return a.size() > 1 ? a[1] : Val();
}
VL_BUILTIN(bi_mapcan) {
  Val lists = bi_mapcar(m, a);
  std::vector<Val> parts = to_vector(lists);
  return bi_nconc(m, parts);
}
VL_BUILTIN(bi_maplist) {
  std::vector<Val> tails(a.begin() + 1, a.end());
  std::vector<Val> out;
  for (;;) {
    for (const auto& t : tails)
      if (!consp(t)) return list(std::move(out));
    std::vector<Val> args = tails;
    out.push_back(m.apply(a[0], args));
    for (auto& t : tails) t = cdr(t);
  }
}
VL_BUILTIN(bi_map) {
  auto cols = spread_args(a, 2, false);
  std::size_t n = min_len(cols);
  std::vector<Val> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Val> args;
    for (auto& c : cols) args.push_back(c[i]);
    out.push_back(m.apply(a[1], args));
  }
  if (a[0].nil()) return Val();
  return seq_of_type(a[0], std::move(out));
}
VL_BUILTIN(bi_map_into) {
  auto cols = spread_args(a, 2, false);
  std::size_t n = std::min(min_len(cols), seq_length(a[0]));
  if (cols.empty()) n = seq_length(a[0]);
  std::vector<Val> items = seq_items(a[0]);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Val> args;
    for (auto& c : cols) args.push_back(c[i]);
    items[i] = m.apply(a[1], args);
  }
  if (a[0].is(Kind::Vector)) {
    auto* v = a[0].as<VectorObj>();
    for (std::size_t i = 0; i < n; ++i) v->items[i] = items[i];
    return a[0];
  }
  if (consp(a[0])) {
    Val c = a[0];
    for (std::size_t i = 0; i < n; ++i, c = cdr(c)) c.as<Cons>()->car = items[i];
    return a[0];
  }
  return seq_like(a[0], std::move(items));
}
template <int Mode>  // 0 every, 1 some, 2 notany, 3 notevery
Val bi_quantifier(Interp& m, std::vector<Val>& a) {
  auto cols = spread_args(a, 1, false);
  std::size_t n = min_len(cols);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Val> args;
    for (auto& c : cols) args.push_back(c[i]);
    Val r = m.apply(a[0], args);
    if (Mode == 0 && !r.truthy()) return Val();
    if (Mode == 1 && r.truthy()) return r;
    if (Mode == 2 && r.truthy()) return Val();
    if (Mode == 3 && !r.truthy()) return T();
  }
  return boolean(Mode == 0 || Mode == 2);
}

// ---------------------------------------------------------------------------
// Sequence functions

VL_BUILTIN(bi_elt) { return seq_elt(a[0], static_cast<std::size_t>(to_index(a[1]))); }
VL_BUILTIN(bi_subseq) {
  auto items = seq_items(need_sequence(a[0]));
  std::size_t start = static_cast<std::size_t>(to_index(a[1]));
  std::size_t end = a.size() > 2 && a[2].truthy() ? static_cast<std::size_t>(to_index(a[2])) : items.size();
  if (end > items.size() || start > end)
    fail("The bounding indices " + std::to_string(start) + " and " + std::to_string(end) +
             " are bad for a sequence of length " + std::to_string(items.size()),
         "TYPE-ERROR");
  if (a[0].is(Kind::String)) return str(a[0].as<String>()->s.substr(start, end - start));
  return seq_like(a[0], {items.begin() + static_cast<std::ptrdiff_t>(start),
                         items.begin() + static_cast<std::ptrdiff_t>(end)});
}
VL_BUILTIN(bi_copy_seq) { return seq_like(a[0], seq_items(need_sequence(a[0]))); }
VL_BUILTIN(bi_concatenate) {
  if (is_symbol(a[0]) && (symbol_of(a[0])->name == "STRING" || symbol_of(a[0])->name == "SIMPLE-STRING")) {
    std::string out;
    for (std::size_t i = 1; i < a.size(); ++i) {
      if (a[i].is(Kind::String)) {
        out += a[i].as<String>()->s;
      } else {
        out += chars_to_string(seq_items(need_sequence(a[i])));
      }
    }
    return str(std::move(out));
  }
  std::vector<Val> items;
  for (std::size_t i = 1; i < a.size(); ++i) {
    auto part = seq_items(need_sequence(a[i]));
    items.insert(items.end(), part.begin(), part.end());
  }
  return seq_of_type(a[0], std::move(items));
}

enum class Pred { Item, If, IfNot };

template <Pred P>
bool seq_hit(Interp& m, const SeqArgs& s, const Val& needle, const Val& x) {
  if constexpr (P == Pred::Item) return test_match(m, s, needle, x);
  else if constexpr (P == Pred::If) return m.funcall(needle, {keyed(m, s, x)}).truthy();
  else return !m.funcall(needle, {keyed(m, s, x)}).truthy();
}

template <Pred P>
Val bi_find(Interp& m, std::vector<Val>& a) {
  SeqArgs s = parse_seq_args(a, 2);
  auto items = seq_items(need_sequence(a[1]));
  std::size_t end = range_end(s, items.size());
  Val found;
  for (std::size_t i = s.start; i < end; ++i) {
    if (seq_hit<P>(m, s, a[0], items[i])) {
      found = items[i];
      if (!s.from_end) return found;
    }
  }
  return found;
}
template <Pred P>
Val bi_position(Interp& m, std::vector<Val>& a) {
  SeqArgs s = parse_seq_args(a, 2);
  auto items = seq_items(need_sequence(a[1]));
  std::size_t end = range_end(s, items.size());
  Val found;
  for (std::size_t i = s.start; i < end; ++i) {
    if (seq_hit<P>(m, s, a[0], items[i])) {
      found = Val::fix(static_cast<std::int64_t>(i));
      if (!s.from_end) return found;
    }
  }
  return found;
}
template <Pred P>
Val bi_count(Interp& m, std::vector<Val>& a) {
  SeqArgs s = parse_seq_args(a, 2);
  auto items = seq_items(need_sequence(a[1]));
  std::size_t end = range_end(s, items.size());
  std::int64_t n = 0;
  for (std::size_t i = s.start; i < end; ++i)
    if (seq_hit<P>(m, s, a[0], items[i])) ++n;
  return Val::fix(n);
}
template <Pred P>
Val bi_remove(Interp& m, std::vector<Val>& a) {
  SeqArgs s = parse_seq_args(a, 2);
  auto items = seq_items(need_sequence(a[1]));
  std::size_t end = range_end(s, items.size());
  std::vector<bool> drop(items.size(), false);
  std::int64_t budget = s.count ? *s.count : INT64_MAX;
  if (s.from_end) {
    for (std::size_t i = end; i-- > s.start && budget > 0;)
      if (seq_hit<P>(m, s, a[0], items[i])) {
        drop[i] = true;
        --budget;
      }
  } else {
    for (std::size_t i = s.start; i < end && budget > 0; ++i)
      if (seq_hit<P>(m, s, a[0], items[i])) {
        drop[i] = true;
        --budget;
      }
  }
  std::vector<Val> out;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (!drop[i]) out.push_back(items[i]);
  return seq_like(a[1], std::move(out));
}
template <Pred P>
Val bi_substitute(Interp& m, std::vector<Val>& a) {
  SeqArgs s = parse_seq_args(a, 3);
  auto items = seq_items(need_sequence(a[2]));
  for (auto& x : items)
    if (seq_hit<P>(m, s, a[1], x)) x = a[0];
  return seq_like(a[2], std::move(items));
}
VL_BUILTIN(bi_remove_duplicates) {
  SeqArgs s = parse_seq_args(a, 1);
  auto items = seq_items(need_sequence(a[0]));
  std::vector<Val> out;
  // Keeps the last occurrence unless :from-end is given.
  if (s.from_end) {
    for (const auto& x : items) {
      Val kx = keyed(m, s, x);
      bool dup = false;
      for (const auto& y : out)
        if (test_match(m, s, kx, y)) dup = true;
      if (!dup) out.push_back(x);
    }
  } else {
    for (std::size_t i = 0; i < items.size(); ++i) {
      Val kx = keyed(m, s, items[i]);
      bool dup = false;
      for (std::size_t j = i + 1; j < items.size() && !dup; ++j)
        if (test_match(m, s, kx, items[j])) dup = true;
      if (!dup) out.push_back(items[i]);
    }
  }
  return seq_like(a[0], std::move(out));
}
VL_BUILTIN(bi_reduce) {
  SeqArgs s = parse_seq_args(a, 2);
  auto items = seq_items(need_sequence(a[1]));
  std::size_t end = range_end(s, items.size());
  std::vector<Val> xs;
  for (std::size_t i = s.start; i < end; ++i) xs.push_back(keyed(m, s, items[i]));
  if (s.from_end) std::reverse(xs.begin(), xs.end());
  if (xs.empty()) return s.has_initial ? s.initial_value : m.funcall(a[0], {});
  Val acc;
  std::size_t i = 0;
  if (s.has_initial) {
    acc = s.initial_value;
  } else {
    acc = xs[0];
    i = 1;
  }
  for (; i < xs.size(); ++i) acc = s.from_end ? m.funcall(a[0], {xs[i], acc}) : m.funcall(a[0], {acc, xs[i]});
  return acc;
}
VL_BUILTIN(bi_sort) {
  SeqArgs s = parse_seq_args(a, 2);
  auto items = seq_items(need_sequence(a[0]));
  Val pred = a[1];
  std::stable_sort(items.begin(), items.end(), [&](const Val& x, const Val& y) {
    return m.funcall(pred, {keyed(m, s, x), keyed(m, s, y)}).truthy();
  });
  if (a[0].is(Kind::Vector)) {
    auto* v = a[0].as<VectorObj>();
    std::copy(items.begin(), items.end(), v->items.begin());
    return a[0];
  }
  return seq_like(a[0], std::move(items));
}
VL_BUILTIN(bi_search) {
  SeqArgs s = parse_seq_args(a, 2);
  auto needle = seq_items(need_sequence(a[0]));
  auto hay = seq_items(need_sequence(a[1]));
  if (needle.size() > hay.size()) return Val();
  Val found;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < needle.size() && ok; ++j) ok = test_match(m, s, keyed(m, s, needle[j]), hay[i + j]);
    if (ok) {
      found = Val::fix(static_cast<std::int64_t>(i));
      if (!s.from_end) return found;
    }
  }
  return found;
}
VL_BUILTIN(bi_mismatch) {
  SeqArgs s = parse_seq_args(a, 2);
  auto p = seq_items(need_sequence(a[0])), q = seq_items(need_sequence(a[1]));
  std::size_t n = std::min(p.size(), q.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!test_match(m, s, keyed(m, s, p[i]), q[i])) return Val::fix(static_cast<std::int64_t>(i));
  if (p.size() == q.size()) return Val();
  return Val::fix(static_cast<std::int64_t>(n));
}
VL_BUILTIN(bi_fill) {
  SeqArgs s = parse_seq_args(a, 2);
  std::size_t n = seq_length(a[0]);
  std::size_t end = range_end(s, n);
  if (a[0].is(Kind::Vector)) {
    for (std::size_t i = s.start; i < end; ++i) a[0].as<VectorObj>()->items[i] = a[1];
  } else if (a[0].is(Kind::String)) {
    for (std::size_t i = s.start; i < end; ++i) a[0].as<String>()->s[i] = static_cast<char>(a[1].character());
  } else {
    Val c = nthcdr_val(static_cast<std::int64_t>(s.start), a[0]);
    for (std::size_t i = s.start; i < end; ++i, c = cdr(c)) c.as<Cons>()->car = a[1];
  }
  return a[0];
}
VL_BUILTIN(bi_coerce) {
  std::string t = is_symbol(a[1]) ? symbol_of(a[1])->name : (consp(a[1]) ? symbol_of(car(a[1]))->name : "");
  if (t == "FLOAT" || t == "DOUBLE-FLOAT" || t == "SINGLE-FLOAT" || t == "REAL")
    return Val::flo(to_double(need_number(a[0])));
  if (t == "CHARACTER") {
    if (a[0].is(Kind::String) && a[0].as<String>()->s.size() == 1)
      return Val::chr(static_cast<unsigned char>(a[0].as<String>()->s[0]));
    if (a[0].is_char()) return a[0];
    fail("cannot coerce to CHARACTER", "TYPE-ERROR");
  }
  if (t == "T") return a[0];
  return seq_of_type(a[1], seq_items(need_sequence(a[0])));
}

// ---------------------------------------------------------------------------
// Characters and strings

inline const Val& need_char(const Val& v) {
  if (!v.is_char()) fail("The value " + to_string(v, true) + " is not of type CHARACTER", "TYPE-ERROR");
  return v;
}
inline std::string string_designator(const Val& v) {
  if (v.is(Kind::String)) return v.as<String>()->s;
  if (is_symbol(v)) return symbol_of(v)->name;
  if (v.is_char()) {
    std::string s;
    append_utf8(s, v.character());
    return s;
  }
  fail("The value " + to_string(v, true) + " is not a string designator", "TYPE-ERROR");
}

VL_BUILTIN(bi_char_code) { return Val::fix(need_char(a[0]).character()); }
VL_BUILTIN(bi_code_char) { return Val::chr(static_cast<std::uint32_t>(to_index(a[0]))); }
VL_BUILTIN(bi_char_upcase) { return Val::chr(static_cast<std::uint32_t>(std::toupper(static_cast<int>(need_char(a[0]).character())))); }
VL_BUILTIN(bi_char_downcase) { return Val::chr(static_cast<std::uint32_t>(std::tolower(static_cast<int>(need_char(a[0]).character())))); }
template <int (*F)(int)>
Val bi_char_class(Interp&, std::vector<Val>& a) {
  std::uint32_t c = need_char(a[0]).character();
  return boolean(c < 128 && F(static_cast<int>(c)));
}
VL_BUILTIN(bi_digit_char_p) {
  std::uint32_t c = need_char(a[0]).character();
  int radix = a.size() > 1 ? static_cast<int>(to_index(a[1])) : 10;
  int d = -1;
  if (c >= '0' && c <= '9') d = static_cast<int>(c - '0');
  else if (c >= 'a' && c <= 'z') d = static_cast<int>(c - 'a') + 10;
  else if (c >= 'A' && c <= 'Z') d = static_cast<int>(c - 'A') + 10;
  return d >= 0 && d < radix ? Val::fix(d) : Val();
}
VL_BUILTIN(bi_digit_char) {
  std::int64_t d = to_index(a[0]);
  std::int64_t radix = a.size() > 1 ? to_index(a[1]) : 10;
  if (d >= radix) return Val();
  return Val::chr(static_cast<std::uint32_t>(d < 10 ? '0' + d : 'A' + d - 10));
}
template <int Op, bool Fold>  // 0 = 1 /= 2 < 3 > 4 <= 5 >=
Val bi_char_cmp(Interp&, std::vector<Val>& a) {
  auto key = [](const Val& v) {
    std::uint32_t c = need_char(v).character();
    return Fold && c < 128 ? static_cast<std::uint32_t>(std::tolower(static_cast<int>(c))) : c;
  };
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    auto x = key(a[i]), y = key(a[i + 1]);
    bool ok = Op == 0 ? x == y : Op == 1 ? x != y : Op == 2 ? x < y : Op == 3 ? x > y : Op == 4 ? x <= y : x >= y;
    if (!ok) return Val();
  }
  return T();
}

VL_BUILTIN(bi_string) { return str(string_designator(a[0])); }
template <int Mode>  // 0 upcase, 1 downcase, 2 capitalize
Val bi_string_case(Interp&, std::vector<Val>& a) {
  std::string s = string_designator(a[0]);
  bool word_start = true;
  for (auto& c : s) {
    auto uc = static_cast<unsigned char>(c);
    if (Mode == 0) c = static_cast<char>(std::toupper(uc));
    else if (Mode == 1) c = static_cast<char>(std::tolower(uc));
    else {
      c = static_cast<char>(word_start ? std::toupper(uc) : std::tolower(uc));
      word_start = !std::isalnum(uc);
    }
  }
  return str(std::move(s));
}
template <int Op, bool Fold>
Val bi_string_cmp(Interp&, std::vector<Val>& a) {
  std::string x = string_designator(a[0]), y = string_designator(a[1]);
  SeqArgs s1, s2;
  for (std::size_t i = 2; i + 1 < a.size(); i += 2) {
    std::string k = require_symbol(a[i])->name;
    if (k == ":START1") s1.start = static_cast<std::size_t>(to_index(a[i + 1]));
    if (k == ":END1" && a[i + 1].truthy()) s1.end = static_cast<std::size_t>(to_index(a[i + 1]));
    if (k == ":START2") s2.start = static_cast<std::size_t>(to_index(a[i + 1]));
    if (k == ":END2" && a[i + 1].truthy()) s2.end = static_cast<std::size_t>(to_index(a[i + 1]));
  }
  x = x.substr(s1.start, range_end(s1, x.size()) - s1.start);
  y = y.substr(s2.start, range_end(s2, y.size()) - s2.start);
  if (Fold) {
    for (auto& c : x) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (auto& c : y) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  int c = x.compare(y);
  std::size_t mismatch = 0;
  while (mismatch < x.size() && mismatch < y.size() && x[mismatch] == y[mismatch]) ++mismatch;
  Val pos = Val::fix(static_cast<std::int64_t>(mismatch + s1.start));
  switch (Op) {
    case 0: return boolean(c == 0);
    case 1: return c != 0 ? pos : Val();
    case 2: return c < 0 ? pos : Val();
    case 3: return c > 0 ? pos : Val();
    case 4: return c <= 0 ? pos : Val();
    default: return c >= 0 ? pos : Val();
  }
}
template <int Side>  // 0 both, 1 left, 2 right
Val bi_string_trim(Interp&, std::vector<Val>& a) {
  std::string bag;
  if (a[0].is(Kind::String)) {
    bag = a[0].as<String>()->s;
  } else {
    bag = chars_to_string(seq_items(a[0]));
  }
  std::string s = string_designator(a[1]);
  std::size_t b = 0, e = s.size();
  if (Side != 2)
    while (b < e && bag.find(s[b]) != std::string::npos) ++b;
  if (Side != 1)
    while (e > b && bag.find(s[e - 1]) != std::string::npos) --e;
  return str(s.substr(b, e - b));
}
VL_BUILTIN(bi_make_string) {
  char fill = ' ';
  for (std::size_t i = 1; i + 1 < a.size(); i += 2)
    if (require_symbol(a[i])->name == ":INITIAL-ELEMENT") fill = static_cast<char>(need_char(a[i + 1]).character());
  return str(std::string(static_cast<std::size_t>(to_index(a[0])), fill));
}
VL_BUILTIN(bi_char) {
  if (!a[0].is(Kind::String)) fail("char on a non-string", "TYPE-ERROR");
  return seq_elt(a[0], static_cast<std::size_t>(to_index(a[1])));
}
VL_BUILTIN(bi_parse_integer) {
  std::string s = string_designator(a[0]);
  SeqArgs sa = parse_seq_args(a, 1);
  int radix = 10;
  bool junk = false;
  for (std::size_t i = 1; i + 1 < a.size(); i += 2) {
    std::string k = require_symbol(a[i])->name;
    if (k == ":RADIX") radix = static_cast<int>(to_index(a[i + 1]));
    if (k == ":JUNK-ALLOWED") junk = a[i + 1].truthy();
  }
  std::size_t end = range_end(sa, s.size()), i = sa.start;
  while (i < end && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  bool neg = false;
  if (i < end && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  BigInt v = 0;
  std::size_t digits = 0;
  while (i < end) {
    char c = s[i];
    int d = std::isdigit(static_cast<unsigned char>(c)) ? c - '0'
            : std::isalpha(static_cast<unsigned char>(c)) ? std::tolower(static_cast<unsigned char>(c)) - 'a' + 10
                                                          : 99;
    if (d >= radix) break;
    v = v * radix + d;
    ++digits;
    ++i;
  }
  std::size_t stop = i;
  while (i < end && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  if (!junk && (digits == 0 || i != end))
    fail("junk in string \"" + s + "\"", "PARSE-ERROR");
  Val pos = Val::fix(static_cast<std::int64_t>(junk ? stop : i));
  if (digits == 0) return set_values(m, {Val(), pos});
  return set_values(m, {make_int(neg ? BigInt(-v) : v), pos});
}

// ---------------------------------------------------------------------------
// Hash tables

inline HashObj* need_hash(const Val& v) {
  if (!v.is(Kind::Hash)) fail("The value " + to_string(v, true) + " is not of type HASH-TABLE", "TYPE-ERROR");
  return v.as<HashObj>();
}
VL_BUILTIN(bi_make_hash_table) {
  auto* h = new HashObj();
  Val hv = Val::adopt(h);
  for (std::size_t i = 0; i + 1 < a.size(); i += 2) {
    if (require_symbol(a[i])->name != ":TEST") continue;
    std::string t = a[i + 1].is(Kind::Function) ? a[i + 1].as<Function>()->name : symbol_of(a[i + 1])->name;
    h->test = t == "EQ" ? 0 : t == "EQL" ? 1 : t == "EQUAL" ? 2 : t == "EQUALP" ? 3 : 1;
  }
  return hv;
}
VL_BUILTIN(bi_gethash) {
  auto* h = need_hash(a[1]);
  auto it = h->map.find(a[0]);
  if (it == h->map.end()) return set_values(m, {a.size() > 2 ? a[2] : Val(), Val()});
  return set_values(m, {it->second, T()});
}
VL_BUILTIN(bi_sethash) {
  auto* h = need_hash(a[1]);
  auto [it, fresh] = h->map.insert_or_assign(a[0], a[2]);
  if (fresh) h->order.push_back(a[0]);
  return a[2];
}
VL_BUILTIN(bi_remhash) {
  auto* h = need_hash(a[1]);
  auto it = h->map.find(a[0]);
  if (it == h->map.end()) return Val();
  HashObj::Eq same{h};
  h->order.erase(std::find_if(h->order.begin(), h->order.end(), [&](const Val& k) { return same(k, a[0]); }));
  h->map.erase(it);
  return T();
}
VL_BUILTIN(bi_clrhash) {
  auto* h = need_hash(a[0]);
  h->map.clear();
  h->order.clear();
  return a[0];
}
VL_BUILTIN(bi_hash_count) { return Val::fix(static_cast<std::int64_t>(need_hash(a[0])->map.size())); }
VL_BUILTIN(bi_maphash) {
  auto* h = need_hash(a[1]);
  Val keep = a[1];
  std::vector<Val> keys = h->order;
  for (const auto& k : keys) {
    auto it = h->map.find(k);
    if (it == h->map.end()) continue;
    m.funcall(a[0], {it->first, it->second});
  }
  return Val();
}
VL_BUILTIN(bi_hash_table_p) { return boolean(a[0].is(Kind::Hash)); }

// ---------------------------------------------------------------------------
// Arrays

inline std::size_t row_major(const VectorObj* v, const std::vector<Val>& idx) {
  if (v->dims.empty()) {
    if (idx.size() != 1) fail("wrong number of subscripts", "TYPE-ERROR");
    auto i = static_cast<std::size_t>(to_index(idx[0]));
    if (i >= v->items.size()) fail("Invalid index " + std::to_string(i), "TYPE-ERROR");
    return i;
  }
  if (idx.size() != v->dims.size()) fail("wrong number of subscripts", "TYPE-ERROR");
  std::size_t off = 0;
  for (std::size_t d = 0; d < idx.size(); ++d) {
    auto i = static_cast<std::size_t>(to_index(idx[d]));
    if (i >= v->dims[d]) fail("Invalid index " + std::to_string(i), "TYPE-ERROR");
    off = off * v->dims[d] + i;
  }
  return off;
}

inline Val vector_ref(const Val& v, const std::vector<Val>& idx) {
  if (v.is(Kind::String)) {
    if (idx.size() != 1) fail("wrong number of subscripts", "TYPE-ERROR");
    return seq_elt(v, static_cast<std::size_t>(to_index(idx[0])));
  }
  if (!v.is(Kind::Vector)) fail("The value " + to_string(v, true) + " is not of type ARRAY", "TYPE-ERROR");
  auto* vo = v.as<VectorObj>();
  return vo->items[row_major(vo, idx)];
}

inline void vector_set(const Val& v, const std::vector<Val>& idx, const Val& x) {
  if (v.is(Kind::String)) {
    auto& s = v.as<String>()->s;
    auto i = static_cast<std::size_t>(to_index(idx.at(0)));
    if (i >= s.size()) fail("Invalid index " + std::to_string(i), "TYPE-ERROR");
    s[i] = static_cast<char>(need_char(x).character());
    return;
  }
  if (!v.is(Kind::Vector)) fail("The value " + to_string(v, true) + " is not of type ARRAY", "TYPE-ERROR");
  auto* vo = v.as<VectorObj>();
  vo->items[row_major(vo, idx)] = x;
}

VL_BUILTIN(bi_vector) { return make_vector(a); }
VL_BUILTIN(bi_make_array) {
  std::vector<std::size_t> dims;
  if (consp(a[0]) || a[0].nil()) {
    for (Val c = a[0]; consp(c); c = cdr(c)) dims.push_back(static_cast<std::size_t>(to_index(car(c))));
  } else {
    dims.push_back(static_cast<std::size_t>(to_index(a[0])));
  }
  Val init, contents;
  bool has_contents = false, adjustable = false, is_char = false;
  std::int64_t fill = -1;
  for (std::size_t i = 1; i + 1 < a.size(); i += 2) {
    std::string k = require_symbol(a[i])->name;
    if (k == ":INITIAL-ELEMENT") init = a[i + 1];
    if (k == ":INITIAL-CONTENTS") {
      contents = a[i + 1];
      has_contents = true;
    }
    if (k == ":ADJUSTABLE") adjustable = a[i + 1].truthy();
    if (k == ":FILL-POINTER") fill = a[i + 1].is_fix() ? a[i + 1].fixnum() : (a[i + 1].truthy() ? 0 : -1);
    if (k == ":ELEMENT-TYPE" && is_symbol(a[i + 1]) &&
        (symbol_of(a[i + 1])->name == "CHARACTER" || symbol_of(a[i + 1])->name == "BASE-CHAR"))
      is_char = true;
  }
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  if (total > (std::size_t{1} << 28)) fail("array too large", "STORAGE-CONDITION");
  if (is_char && dims.size() == 1 && fill < 0 && !adjustable) {
    char c = init.is_char() ? static_cast<char>(init.character()) : ' ';
    if (has_contents) return str(chars_to_string(seq_items(contents)));
    return str(std::string(total, c));
  }
  auto* v = new VectorObj();
  Val vv = Val::adopt(v);
  v->items.assign(total, init);
  if (dims.size() != 1) v->dims = dims;
  v->adjustable = adjustable;
  v->fill = fill;
  if (has_contents) {
    std::vector<Val> flat;
    std::function<void(const Val&, std::size_t)> walk = [&](const Val& x, std::size_t depth) {
      if (depth == dims.size()) {
        flat.push_back(x);
        return;
      }
      for (const auto& e : seq_items(x)) walk(e, depth + 1);
    };
    walk(contents, 0);
    if (flat.size() != total) fail("initial-contents does not match the dimensions", "TYPE-ERROR");
    v->items = std::move(flat);
  }
  return vv;
}
VL_BUILTIN(bi_aref) {
  std::vector<Val> idx(a.begin() + 1, a.end());
  return vector_ref(a[0], idx);
}
VL_BUILTIN(bi_set_aref) {  // (value array &rest indices)
  std::vector<Val> idx(a.begin() + 2, a.end());
  vector_set(a[1], idx, a[0]);
  return a[0];
}
inline VectorObj* need_vector(const Val& v) {
  if (!v.is(Kind::Vector)) fail("The value " + to_string(v, true) + " is not of type VECTOR", "TYPE-ERROR");
  return v.as<VectorObj>();
}
VL_BUILTIN(bi_vector_push) {
  auto* v = need_vector(a[1]);
  if (v->fill < 0) fail("vector has no fill pointer", "TYPE-ERROR");
  if (static_cast<std::size_t>(v->fill) >= v->items.size()) return Val();
  v->items[static_cast<std::size_t>(v->fill)] = a[0];
  return Val::fix(v->fill++);
}
VL_BUILTIN(bi_vector_push_extend) {
  auto* v = need_vector(a[1]);
  if (v->fill < 0) fail("vector has no fill pointer", "TYPE-ERROR");
  if (static_cast<std::size_t>(v->fill) >= v->items.size()) v->items.resize(v->items.size() * 2 + 1);
  v->items[static_cast<std::size_t>(v->fill)] = a[0];
  return Val::fix(v->fill++);
}
VL_BUILTIN(bi_vector_pop) {
  auto* v = need_vector(a[0]);
  if (v->fill <= 0) fail("nothing left to pop", "TYPE-ERROR");
  return v->items[static_cast<std::size_t>(--v->fill)];
}
VL_BUILTIN(bi_array_dimensions) {
  if (a[0].is(Kind::String)) return list({Val::fix(static_cast<std::int64_t>(a[0].as<String>()->s.size()))});
  auto* v = need_vector(a[0]);
  if (v->dims.empty()) return list({Val::fix(static_cast<std::int64_t>(v->items.size()))});
  std::vector<Val> out;
  for (auto d : v->dims) out.push_back(Val::fix(static_cast<std::int64_t>(d)));
  return list(std::move(out));
}
VL_BUILTIN(bi_array_dimension) {
  std::vector<Val> one{a[0]};
  Val dims = bi_array_dimensions(m, one);
  Val c = nthcdr_val(to_index(a[1]), dims);
  if (!consp(c)) fail("axis out of range", "TYPE-ERROR");
  return car(c);
}
VL_BUILTIN(bi_array_total_size) {
  if (a[0].is(Kind::String)) return Val::fix(static_cast<std::int64_t>(a[0].as<String>()->s.size()));
  return Val::fix(static_cast<std::int64_t>(need_vector(a[0])->items.size()));
}
VL_BUILTIN(bi_fill_pointer) { return Val::fix(need_vector(a[0])->fill); }
VL_BUILTIN(bi_vectorp) { return boolean(a[0].is(Kind::Vector) || a[0].is(Kind::String)); }
VL_BUILTIN(bi_stringp) { return boolean(a[0].is(Kind::String)); }
VL_BUILTIN(bi_characterp) { return boolean(a[0].is_char()); }

inline void install_sequences(Interp& m) {
  m.def_builtin("CAR", bi_car, 1, 1);
  m.def_builtin("CDR", bi_cdr, 1, 1);
  m.def_builtin("FIRST", bi_car, 1, 1);
  m.def_builtin("REST", bi_cdr, 1, 1);
  m.def_builtin("CAAR", bi_cxr<'A', 'A'>, 1, 1);
  m.def_builtin("CADR", bi_cxr<'A', 'D'>, 1, 1);
  m.def_builtin("CDAR", bi_cxr<'D', 'A'>, 1, 1);
  m.def_builtin("CDDR", bi_cxr<'D', 'D'>, 1, 1);
  m.def_builtin("CADDR", bi_cxr<'A', 'D', 'D'>, 1, 1);
  m.def_builtin("CDDDR", bi_cxr<'D', 'D', 'D'>, 1, 1);
  m.def_builtin("CAADR", bi_cxr<'A', 'A', 'D'>, 1, 1);
  m.def_builtin("CDADR", bi_cxr<'D', 'A', 'D'>, 1, 1);
  m.def_builtin("CADAR", bi_cxr<'A', 'D', 'A'>, 1, 1);
  m.def_builtin("CDDAR", bi_cxr<'D', 'D', 'A'>, 1, 1);
  m.def_builtin("CAAAR", bi_cxr<'A', 'A', 'A'>, 1, 1);
  m.def_builtin("CDAAR", bi_cxr<'D', 'A', 'A'>, 1, 1);
  m.def_builtin("CADDDR", bi_cxr<'A', 'D', 'D', 'D'>, 1, 1);
  m.def_builtin("CDDDDR", bi_cxr<'D', 'D', 'D', 'D'>, 1, 1);
  m.def_builtin("SECOND", bi_nth_fixed<1>, 1, 1);
  m.def_builtin("THIRD", bi_nth_fixed<2>, 1, 1);
  m.def_builtin("FOURTH", bi_nth_fixed<3>, 1, 1);
  m.def_builtin("FIFTH", bi_nth_fixed<4>, 1, 1);
  m.def_builtin("SIXTH", bi_nth_fixed<5>, 1, 1);
  m.def_builtin("SEVENTH", bi_nth_fixed<6>, 1, 1);
  m.def_builtin("EIGHTH", bi_nth_fixed<7>, 1, 1);
  m.def_builtin("NINTH", bi_nth_fixed<8>, 1, 1);
  m.def_builtin("TENTH", bi_nth_fixed<9>, 1, 1);
  m.def_builtin("CONS", bi_cons, 2, 2);
  m.def_builtin("LIST", bi_list, 0);
  m.def_builtin("LIST*", bi_list_star, 1);
  m.def_builtin("NTH", bi_nth, 2, 2);
  m.def_builtin("NTHCDR", bi_nthcdr, 2, 2);
  m.def_builtin("LAST", bi_last, 1, 2);
  m.def_builtin("BUTLAST", bi_butlast, 1, 2);
  m.def_builtin("NBUTLAST", bi_butlast, 1, 2);
  m.def_builtin("APPEND", bi_append, 0);
  m.def_builtin("NCONC", bi_nconc, 0);
  m.def_builtin("REVERSE", bi_reverse, 1, 1);
  m.def_builtin("NREVERSE", bi_reverse, 1, 1);
  m.def_builtin("LENGTH", bi_length, 1, 1);
  m.def_builtin("LIST-LENGTH", bi_length, 1, 1);
  m.def_builtin("COPY-LIST", bi_copy_list, 1, 1);
  m.def_builtin("COPY-TREE", bi_copy_tree, 1, 1);
  m.def_builtin("MAKE-LIST", bi_make_list, 1);
  m.def_builtin("MEMBER", bi_member, 2);
  m.def_builtin("MEMBER-IF", bi_member_if, 2);
  m.def_builtin("ASSOC", bi_assoc, 2);
  m.def_builtin("ASSOC-IF", bi_assoc_if, 2);
  m.def_builtin("RASSOC", bi_rassoc, 2);
  m.def_builtin("ACONS", bi_acons, 3, 3);
  m.def_builtin("PAIRLIS", bi_pairlis, 2, 3);
  m.def_builtin("GETF", bi_getf, 2, 3);
  m.def_builtin("ADJOIN", bi_adjoin, 2);
  m.def_builtin("UNION", bi_setop<0>, 2);
  m.def_builtin("INTERSECTION", bi_setop<1>, 2);
  m.def_builtin("SET-DIFFERENCE", bi_setop<2>, 2);
  m.def_builtin("SUBSETP", bi_setop<3>, 2);
  m.def_builtin("LISTP", bi_listp, 1, 1);
  m.def_builtin("CONSP", bi_consp, 1, 1);
  m.def_builtin("ATOM", bi_atom, 1, 1);
  m.def_builtin("NULL", bi_null, 1, 1);
  m.def_builtin("NOT", bi_not, 1, 1);
  m.def_builtin("ENDP", bi_endp, 1, 1);
  m.def_builtin("EQ", bi_eq, 2, 2);
  m.def_builtin("EQL", bi_eql, 2, 2);
  m.def_builtin("EQUAL", bi_equal, 2, 2);
  m.def_builtin("EQUALP", bi_equalp, 2, 2);
  m.def_builtin("MAPCAR", bi_mapcar, 2);
  m.def_builtin("MAPC", bi_mapc, 2);
  m.def_builtin("MAPCAN", bi_mapcan, 2);
  m.def_builtin("MAPLIST", bi_maplist, 2);
  m.def_builtin("MAP", bi_map, 3);
  m.def_builtin("MAP-INTO", bi_map_into, 2);
  m.def_builtin("EVERY", bi_quantifier<0>, 2);
  m.def_builtin("SOME", bi_quantifier<1>, 2);
  m.def_builtin("NOTANY", bi_quantifier<2>, 2);
  m.def_builtin("NOTEVERY", bi_quantifier<3>, 2);
  m.def_builtin("ELT", bi_elt, 2, 2);
  m.def_builtin("SUBSEQ", bi_subseq, 2, 3);
  m.def_builtin("COPY-SEQ", bi_copy_seq, 1, 1);
  m.def_builtin("CONCATENATE", bi_concatenate, 1);
  m.def_builtin("FIND", bi_find<Pred::Item>, 2);
  m.def_builtin("FIND-IF", bi_find<Pred::If>, 2);
  m.def_builtin("FIND-IF-NOT", bi_find<Pred::IfNot>, 2);
  m.def_builtin("POSITION", bi_position<Pred::Item>, 2);
  m.def_builtin("POSITION-IF", bi_position<Pred::If>, 2);
  m.def_builtin("POSITION-IF-NOT", bi_position<Pred::IfNot>, 2);
  m.def_builtin("COUNT", bi_count<Pred::Item>, 2);
  m.def_builtin("COUNT-IF", bi_count<Pred::If>, 2);
  m.def_builtin("COUNT-IF-NOT", bi_count<Pred::IfNot>, 2);
  m.def_builtin("REMOVE", bi_remove<Pred::Item>, 2);
  m.def_builtin("REMOVE-IF", bi_remove<Pred::If>, 2);
  m.def_builtin("REMOVE-IF-NOT", bi_remove<Pred::IfNot>, 2);
  m.def_builtin("DELETE", bi_remove<Pred::Item>, 2);
  m.def_builtin("DELETE-IF", bi_remove<Pred::If>, 2);
  m.def_builtin("DELETE-IF-NOT", bi_remove<Pred::IfNot>, 2);
  m.def_builtin("SUBSTITUTE", bi_substitute<Pred::Item>, 3);
  m.def_builtin("SUBSTITUTE-IF", bi_substitute<Pred::If>, 3);
  m.def_builtin("REMOVE-DUPLICATES", bi_remove_duplicates, 1);
  m.def_builtin("DELETE-DUPLICATES", bi_remove_duplicates, 1);
  m.def_builtin("REDUCE", bi_reduce, 2);
  m.def_builtin("SORT", bi_sort, 2);
  m.def_builtin("STABLE-SORT", bi_sort, 2);
  m.def_builtin("SEARCH", bi_search, 2);
  m.def_builtin("MISMATCH", bi_mismatch, 2);
  m.def_builtin("FILL", bi_fill, 2);
  m.def_builtin("COERCE", bi_coerce, 2, 2);
  m.def_builtin("CHAR-CODE", bi_char_code, 1, 1);
  m.def_builtin("CHAR-INT", bi_char_code, 1, 1);
  m.def_builtin("CODE-CHAR", bi_code_char, 1, 1);
  m.def_builtin("CHAR-UPCASE", bi_char_upcase, 1, 1);
  m.def_builtin("CHAR-DOWNCASE", bi_char_downcase, 1, 1);
  m.def_builtin("ALPHA-CHAR-P", bi_char_class<std::isalpha>, 1, 1);
  m.def_builtin("ALPHANUMERICP", bi_char_class<std::isalnum>, 1, 1);
  m.def_builtin("UPPER-CASE-P", bi_char_class<std::isupper>, 1, 1);
  m.def_builtin("LOWER-CASE-P", bi_char_class<std::islower>, 1, 1);
  m.def_builtin("BOTH-CASE-P", bi_char_class<std::isalpha>, 1, 1);
  m.def_builtin("DIGIT-CHAR-P", bi_digit_char_p, 1, 2);
  m.def_builtin("DIGIT-CHAR", bi_digit_char, 1, 2);
  m.def_builtin("CHAR=", bi_char_cmp<0, false>, 1);
  m.def_builtin("CHAR/=", bi_char_cmp<1, false>, 1);
  m.def_builtin("CHAR<", bi_char_cmp<2, false>, 1);
  m.def_builtin("CHAR>", bi_char_cmp<3, false>, 1);
  m.def_builtin("CHAR<=", bi_char_cmp<4, false>, 1);
  m.def_builtin("CHAR>=", bi_char_cmp<5, false>, 1);
  m.def_builtin("CHAR-EQUAL", bi_char_cmp<0, true>, 1);
  m.def_builtin("CHAR-LESSP", bi_char_cmp<2, true>, 1);
  m.def_builtin("CHAR-GREATERP", bi_char_cmp<3, true>, 1);
  m.def_builtin("STRING", bi_string, 1, 1);
  m.def_builtin("STRING-UPCASE", bi_string_case<0>, 1);
  m.def_builtin("STRING-DOWNCASE", bi_string_case<1>, 1);
  m.def_builtin("STRING-CAPITALIZE", bi_string_case<2>, 1);
  m.def_builtin("STRING=", bi_string_cmp<0, false>, 2);
  m.def_builtin("STRING/=", bi_string_cmp<1, false>, 2);
  m.def_builtin("STRING<", bi_string_cmp<2, false>, 2);
  m.def_builtin("STRING>", bi_string_cmp<3, false>, 2);
  m.def_builtin("STRING<=", bi_string_cmp<4, false>, 2);
  m.def_builtin("STRING>=", bi_string_cmp<5, false>, 2);
  m.def_builtin("STRING-EQUAL", bi_string_cmp<0, true>, 2);
  m.def_builtin("STRING-LESSP", bi_string_cmp<2, true>, 2);
  m.def_builtin("STRING-GREATERP", bi_string_cmp<3, true>, 2);
  m.def_builtin("STRING-TRIM", bi_string_trim<0>, 2, 2);
  m.def_builtin("STRING-LEFT-TRIM", bi_string_trim<1>, 2, 2);
  m.def_builtin("STRING-RIGHT-TRIM", bi_string_trim<2>, 2, 2);
  m.def_builtin("MAKE-STRING", bi_make_string, 1);
  m.def_builtin("CHAR", bi_char, 2, 2);
  m.def_builtin("SCHAR", bi_char, 2, 2);
  m.def_builtin("PARSE-INTEGER", bi_parse_integer, 1);
  m.def_builtin("MAKE-HASH-TABLE", bi_make_hash_table, 0);
  m.def_builtin("GETHASH", bi_gethash, 2, 3);
  m.def_builtin("SETHASH", bi_sethash, 3, 3);
  m.def_builtin("REMHASH", bi_remhash, 2, 2);
  m.def_builtin("CLRHASH", bi_clrhash, 1, 1);
  m.def_builtin("HASH-TABLE-COUNT", bi_hash_count, 1, 1);
  m.def_builtin("MAPHASH", bi_maphash, 2, 2);
  m.def_builtin("HASH-TABLE-P", bi_hash_table_p, 1, 1);
  m.def_builtin("VECTOR", bi_vector, 0);
  m.def_builtin("MAKE-ARRAY", bi_make_array, 1);
  m.def_builtin("AREF", bi_aref, 1);
  m.def_builtin("SVREF", bi_aref, 2, 2);
  m.def_builtin("ROW-MAJOR-AREF", bi_aref, 2, 2);
  m.def_builtin("VECTOR-PUSH", bi_vector_push, 2, 2);
  m.def_builtin("VECTOR-PUSH-EXTEND", bi_vector_push_extend, 2, 3);
  m.def_builtin("VECTOR-POP", bi_vector_pop, 1, 1);
  m.def_builtin("ARRAY-DIMENSIONS", bi_array_dimensions, 1, 1);
  m.def_builtin("ARRAY-DIMENSION", bi_array_dimension, 2, 2);
  m.def_builtin("ARRAY-TOTAL-SIZE", bi_array_total_size, 1, 1);
  m.def_builtin("FILL-POINTER", bi_fill_pointer, 1, 1);
  m.def_builtin("VECTORP", bi_vectorp, 1, 1);
  m.def_builtin("ARRAYP", bi_vectorp, 1, 1);
  m.def_builtin("SIMPLE-VECTOR-P", bi_vectorp, 1, 1);
  m.def_builtin("STRINGP", bi_stringp, 1, 1);
  m.def_builtin("CHARACTERP", bi_characterp, 1, 1);
}

}  // namespace vlisp
