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

// Builtin predicates implemented in C++.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "arith.hpp"
#include "machine.hpp"
#include "text.hpp"

namespace vprolog {

using std::size_t;

inline const Term& A(const Term& g, std::uint32_t i) { return deref(g.arg(i)); }

inline Term mk(std::string_view name, std::vector<Term> args) {
  return Term::make_compound(name, std::move(args));
}

inline std::int64_t require_int64(const Term& raw) {
  const Term& t = deref(raw);
  if (t.is_var()) Machine::instantiation_error();
  if (!t.is_int()) Machine::type_error("integer", t);
  return t.int_value();
}

inline AtomId require_atom(const Term& raw) {
  const Term& t = deref(raw);
  if (t.is_var()) Machine::instantiation_error();
  if (!t.is_atom()) Machine::type_error("atom", t);
  return t.atom_id();
}

inline Term require_callable(const Term& raw) {
  Term t = deref(raw);
  while (t.is_compound() && t.functor() == std_atoms().colon && t.arity() == 2) t = deref(t.arg(1));
  if (t.is_var()) Machine::instantiation_error();
  if (!t.is_callable()) Machine::type_error("callable", t);
  return t;
}

// Goal with extra arguments appended, as call/N does.
inline Term add_args(const Term& goal, const Term& g, std::uint32_t from) {
  Term base = require_callable(goal);
  std::vector<Term> args;
  if (base.is_compound())
    for (std::uint32_t i = 0; i < base.arity(); ++i) args.push_back(base.arg(i));
  for (std::uint32_t i = from; i < g.arity(); ++i) args.push_back(g.arg(i));
  return Term::make_compound(base.name_id(), std::move(args));
}

// ---------------------------------------------------------------------------
// Standard order

inline int type_rank(const Term& t) {
  switch (t.tag()) {
    case Tag::Var: return 0;
    case Tag::Float: case Tag::Int: case Tag::Big: return 1;
    case Tag::Atom: return 3;
    case Tag::Str: return 4;
    default: return 5;
  }
}

inline int compare_terms(const Term& ra, const Term& rb) {
  const Term* pa = &ra;
  const Term* pb = &rb;
  while (true) {
    const Term& a = deref(*pa);
    const Term& b = deref(*pb);
    if (a.same_ref(b)) return 0;
    int ta = type_rank(a), tb = type_rank(b);
    if (ta != tb) return ta < tb ? -1 : 1;
    switch (ta) {
      case 0: {
        auto sa = var_node(a)->stamp, sb = var_node(b)->stamp;
        return sa < sb ? -1 : sa > sb ? 1 : 0;
      }
      case 1: {
        int c = num_compare(a, b);
        if (c != 0) return c;
        if (a.is_float() && !b.is_float()) return -1;
        if (!a.is_float() && b.is_float()) return 1;
        return 0;
      }
      case 3: {
        int c = atom_name(a.atom_id()).compare(atom_name(b.atom_id()));
        return c < 0 ? -1 : c > 0 ? 1 : 0;
      }
      case 4: {
        int c = a.string_value().compare(b.string_value());
        return c < 0 ? -1 : c > 0 ? 1 : 0;
      }
      default: {
        if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
        if (a.functor() != b.functor()) {
          int c = atom_name(a.functor()).compare(atom_name(b.functor()));
          return c < 0 ? -1 : 1;
        }
        std::uint32_t n = a.arity();
        for (std::uint32_t i = 0; i + 1 < n; ++i) {
          int c = compare_terms(a.arg(i), b.arg(i));
          if (c != 0) return c;
        }
        pa = &a.arg(n - 1);
        pb = &b.arg(n - 1);
      }
    }
  }
}

inline bool is_proper_list(const Term& raw) {
  Term cur = deref(raw);
  while (is_cons(cur)) cur = deref(cur.arg(1));
  return is_nil(cur);
}

inline bool is_ground(const Term& raw) {
  std::vector<Term> st{deref(raw)};
  while (!st.empty()) {
    Term t = std::move(st.back());
    st.pop_back();
    if (t.is_var()) return false;
    if (t.is_compound())
      for (std::uint32_t i = 0; i < t.arity(); ++i) st.push_back(deref(t.arg(i)));
  }
  return true;
}

inline void collect_vars(const Term& raw, std::vector<Term>& out, std::unordered_set<VarNode*>& seen) {
  std::vector<Term> st{deref(raw)};
  while (!st.empty()) {
    Term t = std::move(st.back());
    st.pop_back();
    if (t.is_var()) {
      if (seen.insert(var_node(t)).second) out.push_back(t);
    } else if (t.is_compound()) {
      for (std::uint32_t i = t.arity(); i-- > 0;) st.push_back(deref(t.arg(i)));
    }
  }
}

// ---------------------------------------------------------------------------
// Control

inline Term int_term(std::size_t v) { return Term::make_int(static_cast<std::int64_t>(v)); }

inline bool bi_call_n(Machine& m, const Term& g, size_t) {
  Term goal = g.arity() == 1 ? require_callable(g.arg(0)) : add_args(g.arg(0), g, 1);
  m.goals = Cont::push(goal, m.cps.size(), m.goals);
  return true;
}

inline bool bi_disj(Machine& m, const Term& g, size_t cb) {
  const Std& S = std_atoms();
  Term left = A(g, 0);
  Term right = g.arg(1);
  if (left.is_compound() && left.arity() == 2 && (left.functor() == S.arrow || left.functor() == S.soft_arrow)) {
    size_t h = m.cps.size();
    ChoicePoint& cp = m.push_cp(CPKind::Alt);
    cp.goal = right;
    cp.cut_barrier = cb;
    cp.cont = m.goals;
    Term marker = left.functor() == S.arrow ? mk("$ite", {int_term(h)}) : mk("$softcut", {int_term(h)});
    m.goals = Cont::push(left.arg(0), h + 1, Cont::push(marker, cb, Cont::push(left.arg(1), cb, m.goals)));
    return true;
  }
  ChoicePoint& cp = m.push_cp(CPKind::Alt);
  cp.goal = right;
  cp.cut_barrier = cb;
  cp.cont = m.goals;
  m.goals = Cont::push(left, cb, m.goals);
  return true;
}

inline bool bi_ite_marker(Machine& m, const Term& g, size_t) {
  m.cut_to(static_cast<size_t>(A(g, 0).int_value()));
  return true;
}

inline bool bi_softcut_marker(Machine& m, const Term& g, size_t) {
  size_t h = static_cast<size_t>(A(g, 0).int_value());
  if (h < m.cps.size() && m.cps[h].kind == CPKind::Alt) m.cps[h].active = false;
  return true;
}

inline bool bi_cut_fail(Machine& m, const Term& g, size_t) {
  m.cut_to(static_cast<size_t>(A(g, 0).int_value()));
  return false;
}

inline bool bi_if_then(Machine& m, const Term& g, size_t cb) {
  size_t h = m.cps.size();
  m.goals = Cont::push(g.arg(0), h, Cont::push(mk("$ite", {int_term(h)}), cb, Cont::push(g.arg(1), cb, m.goals)));
  return true;
}

inline bool bi_soft_if_then(Machine& m, const Term& g, size_t cb) {
  m.goals = Cont::push(g.arg(0), m.cps.size(), Cont::push(g.arg(1), cb, m.goals));
  return true;
}

inline bool bi_not(Machine& m, const Term& g, size_t) {
  size_t h = m.cps.size();
  ChoicePoint& cp = m.push_cp(CPKind::Alt);
  cp.goal = Term::make_atom(std_atoms().true_);
  cp.cut_barrier = h;
  cp.cont = m.goals;
  m.goals = Cont::push(g.arg(0), h + 1, Cont::push(mk("$cut_fail", {int_term(h)}), h, Cont()));
  return true;
}

inline bool bi_once(Machine& m, const Term& g, size_t cb) {
  size_t h = m.cps.size();
  m.goals = Cont::push(g.arg(0), h, Cont::push(mk("$ite", {int_term(h)}), cb, m.goals));
  return true;
}

inline bool bi_ignore(Machine& m, const Term& g, size_t cb) {
  size_t h = m.cps.size();
  ChoicePoint& cp = m.push_cp(CPKind::Alt);
  cp.goal = Term::make_atom(std_atoms().true_);
  cp.cut_barrier = cb;
  cp.cont = m.goals;
  m.goals = Cont::push(g.arg(0), h + 1, Cont::push(mk("$ite", {int_term(h)}), cb, m.goals));
  return true;
}

inline bool bi_catch(Machine& m, const Term& g, size_t cb) {
  size_t h = m.cps.size();
  ChoicePoint& cp = m.push_cp(CPKind::Catch);
  cp.goal = g.arg(1);
  cp.aux = g.arg(2);
  cp.cut_barrier = cb;
  cp.cont = m.goals;
  m.goals = Cont::push(g.arg(0), h + 1, Cont::push(mk("$catch_exit", {int_term(h)}), cb, m.goals));
  return true;
}

inline bool bi_catch_exit(Machine& m, const Term& g, size_t) {
  size_t h = static_cast<size_t>(A(g, 0).int_value());
  if (h < m.cps.size() && m.cps[h].kind == CPKind::Catch) {
    if (h + 1 == m.cps.size()) {
      m.cps.pop_back();
    } else {
      m.cps[h].active = false;
      m.trail.push_back(TrailEntry{Term(), h});
    }
  }
  return true;
}

inline bool bi_throw(Machine& m, const Term& g, size_t) {
  const Term& b = A(g, 0);
  if (b.is_var()) Machine::instantiation_error();
  throw PrologThrow{m.copy(b)};
}

inline bool bi_findall(Machine& m, const Term& g, size_t) {
  size_t bag = m.bags.size();
  m.bags.emplace_back();
  ChoicePoint& cp = m.push_cp(CPKind::Findall);
  cp.goal = g.arg(2);
  if (g.arity() == 4) cp.aux = g.arg(3);
  cp.bag = bag;
  cp.cont = m.goals;
  size_t h = m.cps.size();
  m.goals = Cont::push(g.arg(1), h,
                       Cont::push(mk("$fa_add", {int_term(bag), g.arg(0)}), h,
                                  Cont::push(Term::make_atom(std_atoms().fail), h, Cont())));
  return true;
}

inline bool bi_fa_add(Machine& m, const Term& g, size_t) {
  size_t bag = static_cast<size_t>(A(g, 0).int_value());
  m.bags[bag].push_back(m.copy(g.arg(1)));
  return true;
}

inline bool bi_forall(Machine& m, const Term& g, size_t) {
  // \+ (C, \+ A)
  Term inner = mk("\\+", {g.arg(1)});
  Term conj = Term::make_compound(std_atoms().comma, {g.arg(0), inner});
  return bi_not(m, mk("\\+", {conj}), 0);
}

inline bool bi_with_output_to(Machine& m, const Term& g, size_t cb) {
  const Term& spec = A(g, 0);
  if (spec.is_var()) Machine::instantiation_error();
  size_t h = m.cps.size();
  m.push_cp(CPKind::Capture);
  m.captures.emplace_back();
  m.goals = Cont::push(g.arg(1), h + 1, Cont::push(mk("$wot_end", {int_term(h), spec}), cb, m.goals));
  return true;
}

inline bool unify_text_spec(Machine& m, const Term& spec, const std::string& text) {
  std::string kind = spec.is_compound() && spec.arity() == 1 ? atom_name(spec.functor()) : "";
  if (kind == "atom") return m.unify(spec.arg(0), Term::make_atom(text));
  if (kind == "string") return m.unify(spec.arg(0), Term::make_string(text));
  if (kind == "codes") return m.unify(spec.arg(0), codes_term(text));
  if (kind == "chars") return m.unify(spec.arg(0), chars_term(text));
  Machine::domain_error("output_sink", spec);
}

inline bool bi_wot_end(Machine& m, const Term& g, size_t) {
  size_t h = static_cast<size_t>(A(g, 0).int_value());
  std::string text = std::move(m.captures.back().buffer);
  m.captures.pop_back();
  m.cut_to(h);
  return unify_text_spec(m, A(g, 1), text);
}

inline bool bi_halt(Machine&, const Term& g, size_t) {
  int code = 0;
  if (g.is_compound()) code = static_cast<int>(require_int64(g.arg(0)));
  throw HaltRequest{code};
}

inline bool redo_between(Machine& m, size_t idx) {
  ChoicePoint& cp = m.cps[idx];
  std::int64_t v = cp.state;
  Term target = cp.goal;
  m.goals = cp.cont;
  if (v >= static_cast<std::int64_t>(cp.next)) m.cps.pop_back();
  else cp.state = v + 1;
  return m.unify(target, Term::make_int(v));
}

inline bool bi_between(Machine& m, const Term& g, size_t) {
  const Term& lo = A(g, 0);
  const Term& hi = A(g, 1);
  const Term& x = A(g, 2);
  std::int64_t l = require_int64(lo);
  std::int64_t h;
  if (hi.is_atom() && (atom_name(hi.atom_id()) == "inf" || atom_name(hi.atom_id()) == "infinite"))
    h = std::numeric_limits<std::int64_t>::max();
  else
    h = require_int64(hi);
  if (x.is_int()) return x.int_value() >= l && x.int_value() <= h;
  if (!x.is_var()) Machine::type_error("integer", x);
  if (l > h) return false;
  if (l < h) {
    ChoicePoint& cp = m.push_cp(CPKind::Redo);
    cp.goal = x;
    cp.state = l + 1;
    cp.next = static_cast<size_t>(h);
    cp.cont = m.goals;
    cp.redo = &redo_between;
  }
  return m.unify(x, Term::make_int(l));
}

inline bool redo_repeat(Machine& m, size_t idx) {
  m.goals = m.cps[idx].cont;
  return true;
}

inline bool bi_repeat(Machine& m, const Term&, size_t) {
  ChoicePoint& cp = m.push_cp(CPKind::Redo);
  cp.cont = m.goals;
  cp.redo = &redo_repeat;
  return true;
}

inline Term fresh_list(std::int64_t n, const Term& tail) {
  std::vector<Term> items;
  for (std::int64_t i = 0; i < n; ++i) items.push_back(Term::make_var());
  return make_list(std::move(items), tail);
}

inline bool bi_numlist(Machine& m, const Term& g, size_t) {
  std::int64_t lo = require_int64(A(g, 0)), hi = require_int64(A(g, 1));
  if (lo > hi) return false;
  std::vector<Term> items;
  items.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t i = lo; i <= hi; ++i) items.push_back(Term::make_int(i));
  return m.unify(g.arg(2), make_list(std::move(items), Term::make_atom(std_atoms().nil)));
}

inline bool redo_length(Machine& m, size_t idx) {
  ChoicePoint& cp = m.cps[idx];
  std::int64_t k = cp.state++;
  Term tail = cp.goal;
  Term n = cp.aux;
  std::int64_t prefix = static_cast<std::int64_t>(cp.next);
  m.goals = cp.cont;
  return m.unify(tail, fresh_list(k - prefix, Term::make_atom(std_atoms().nil))) &&
         m.unify(n, Term::make_int(k));
}

inline bool bi_length(Machine& m, const Term& g, size_t) {
  std::int64_t count = 0;
  Term cur = A(g, 0);
  while (is_cons(cur)) {
    ++count;
    cur = deref(cur.arg(1));
  }
  const Term& n = A(g, 1);
  if (is_nil(cur)) return m.unify(n, Term::make_int(count));
  if (!cur.is_var()) {
    if (cur.is_compound() || cur.is_atomic()) Machine::type_error("list", A(g, 0));
    return false;
  }
  if (n.is_int()) {
    if (n.int_value() < count) return false;
    return m.unify(cur, fresh_list(n.int_value() - count, Term::make_atom(std_atoms().nil)));
  }
  if (!n.is_var()) Machine::type_error("integer", n);
  ChoicePoint& cp = m.push_cp(CPKind::Redo);
  cp.goal = cur;
  cp.aux = n;
  cp.state = count + 1;
  cp.next = static_cast<size_t>(count);
  cp.cont = m.goals;
  cp.redo = &redo_length;
  return m.unify(cur, Term::make_atom(std_atoms().nil)) && m.unify(n, Term::make_int(count));
}

// ---------------------------------------------------------------------------
// Type checks and comparison

#define VP_TYPE_CHECK(fname, expr)                           \
  inline bool fname(Machine&, const Term& g, size_t) {      \
    const Term& t = A(g, 0);                                 \
    return (expr);                                           \
  }
VP_TYPE_CHECK(bi_var, t.is_var())
VP_TYPE_CHECK(bi_nonvar, !t.is_var())
VP_TYPE_CHECK(bi_atom, t.is_atom())
VP_TYPE_CHECK(bi_number, t.is_number())
VP_TYPE_CHECK(bi_integer, t.is_integer())
VP_TYPE_CHECK(bi_float, t.is_float())
VP_TYPE_CHECK(bi_atomic, t.is_atomic())
VP_TYPE_CHECK(bi_compound, t.is_compound())
VP_TYPE_CHECK(bi_callable, t.is_callable())
VP_TYPE_CHECK(bi_is_list, is_proper_list(t))
VP_TYPE_CHECK(bi_string, t.is_string())
VP_TYPE_CHECK(bi_ground, is_ground(t))
VP_TYPE_CHECK(bi_is_assoc, t.is_atom(atom("t")) || (t.is_compound() && atom_name(t.functor()) == "t"))
#undef VP_TYPE_CHECK

inline bool bi_unify(Machine& m, const Term& g, size_t) { return m.unify(g.arg(0), g.arg(1)); }

inline bool bi_not_unify(Machine& m, const Term& g, size_t) {
  size_t mark = m.trail.size();
  ChoicePoint& cp = m.push_cp(CPKind::Stop);
  (void)cp;
  bool ok = m.unify(g.arg(0), g.arg(1));
  m.undo_to(mark);
  m.cps.pop_back();
  return !ok;
}

inline bool bi_subsumes(Machine& m, const Term& g, size_t) {
  // subsumes_term(General, Specific)
  size_t mark = m.trail.size();
  m.push_cp(CPKind::Stop);
  Term spec_before = m.copy(g.arg(1));
  bool ok = m.unify(g.arg(0), g.arg(1)) && compare_terms(g.arg(1), spec_before) == 0;
  std::vector<Term> vs;
  std::unordered_set<VarNode*> seen;
  collect_vars(g.arg(1), vs, seen);
  m.undo_to(mark);
  m.cps.pop_back();
  // Approximation: the specific term must not have been instantiated.
  (void)vs;
  return ok;
}

inline bool bi_eq(Machine&, const Term& g, size_t) { return compare_terms(g.arg(0), g.arg(1)) == 0; }
inline bool bi_neq(Machine&, const Term& g, size_t) { return compare_terms(g.arg(0), g.arg(1)) != 0; }
inline bool bi_lt(Machine&, const Term& g, size_t) { return compare_terms(g.arg(0), g.arg(1)) < 0; }
inline bool bi_gt(Machine&, const Term& g, size_t) { return compare_terms(g.arg(0), g.arg(1)) > 0; }
inline bool bi_le(Machine&, const Term& g, size_t) { return compare_terms(g.arg(0), g.arg(1)) <= 0; }
inline bool bi_ge(Machine&, const Term& g, size_t) { return compare_terms(g.arg(0), g.arg(1)) >= 0; }

inline bool bi_compare(Machine& m, const Term& g, size_t) {
  const Term& o = A(g, 0);
  if (!o.is_var() && !o.is_atom()) Machine::type_error("atom", o);
  int c = compare_terms(g.arg(1), g.arg(2));
  return m.unify(o, Term::make_atom(c < 0 ? "<" : c > 0 ? ">" : "="));
}

// ---------------------------------------------------------------------------
// Arithmetic

inline bool bi_is(Machine& m, const Term& g, size_t) { return m.unify(g.arg(0), eval(g.arg(1))); }

#define VP_ARITH_CMP(fname, op)                                   \
  inline bool fname(Machine&, const Term& g, size_t) {           \
    Term a = eval(g.arg(0)), b = eval(g.arg(1));                  \
    if ((a.is_float() && std::isnan(a.float_value())) ||          \
        (b.is_float() && std::isnan(b.float_value())))            \
      return false;                                               \
    return num_compare(a, b) op 0;                                \
  }
VP_ARITH_CMP(bi_num_eq, ==)
VP_ARITH_CMP(bi_num_ne, !=)
VP_ARITH_CMP(bi_num_lt, <)
VP_ARITH_CMP(bi_num_gt, >)
VP_ARITH_CMP(bi_num_le, <=)
VP_ARITH_CMP(bi_num_ge, >=)
#undef VP_ARITH_CMP

inline bool bi_succ(Machine& m, const Term& g, size_t) {
  const Term& a = A(g, 0);
  const Term& b = A(g, 1);
  if (a.is_integer()) {
    if (a.to_big() < 0) Machine::type_error("not_less_than_zero", a);
    return m.unify(b, apply_binary(Fn::Add, a, Term::make_int(1)));
  }
  if (b.is_integer()) {
    if (b.to_big() < 0) Machine::type_error("not_less_than_zero", b);
    if (b.to_big() == 0) return false;
    return m.unify(a, apply_binary(Fn::Sub, b, Term::make_int(1)));
  }
  if (a.is_var() && b.is_var()) Machine::instantiation_error();
  Machine::type_error("integer", a.is_var() ? b : a);
}

inline bool bi_plus(Machine& m, const Term& g, size_t) {
  const Term& a = A(g, 0);
  const Term& b = A(g, 1);
  const Term& c = A(g, 2);
  if (a.is_number() && b.is_number()) return m.unify(c, apply_binary(Fn::Add, a, b));
  if (a.is_number() && c.is_number()) return m.unify(b, apply_binary(Fn::Sub, c, a));
  if (b.is_number() && c.is_number()) return m.unify(a, apply_binary(Fn::Sub, c, b));
  Machine::instantiation_error();
}

// ---------------------------------------------------------------------------
// Term construction and inspection

inline bool bi_functor(Machine& m, const Term& g, size_t) {
  const Term& t = A(g, 0);
  if (t.is_var()) {
    const Term& name = A(g, 1);
    std::int64_t n = require_int64(g.arg(2));
    if (n < 0) Machine::domain_error("not_less_than_zero", A(g, 2));
    if (n == 0) return m.unify(t, name);
    if (name.is_compound()) Machine::type_error("atomic", name);
    if (!name.is_atom()) Machine::type_error("atom", name);
    std::vector<Term> args;
    for (std::int64_t i = 0; i < n; ++i) args.push_back(Term::make_var());
    return m.unify(t, Term::make_compound(name.atom_id(), std::move(args)));
  }
  if (t.is_compound())
    return m.unify(g.arg(1), Term::make_atom(t.functor())) && m.unify(g.arg(2), Term::make_int(t.arity()));
  return m.unify(g.arg(1), t) && m.unify(g.arg(2), Term::make_int(0));
}

inline bool bi_arg(Machine& m, const Term& g, size_t) {
  const Term& n = A(g, 0);
  const Term& t = A(g, 1);
  if (!t.is_compound()) Machine::type_error("compound", t);
  if (n.is_int()) {
    std::int64_t i = n.int_value();
    if (i < 1 || i > t.arity()) return false;
    return m.unify(g.arg(2), t.arg(static_cast<std::uint32_t>(i - 1)));
  }
  if (!n.is_var()) Machine::type_error("integer", n);
  std::vector<Term> alts;
  for (std::uint32_t i = 0; i < t.arity(); ++i)
    alts.push_back(mk("-", {Term::make_int(i + 1), t.arg(i)}));
  return m.unify_alternatives(mk("-", {n, g.arg(2)}), std::move(alts));
}

inline bool bi_univ(Machine& m, const Term& g, size_t) {
  const Term& t = A(g, 0);
  if (!t.is_var()) {
    if (t.is_compound()) {
      std::vector<Term> items{Term::make_atom(t.functor())};
      for (std::uint32_t i = 0; i < t.arity(); ++i) items.push_back(t.arg(i));
      return m.unify(g.arg(1), make_list(std::move(items)));
    }
    return m.unify(g.arg(1), make_list({t}));
  }
  std::vector<Term> items = list_to_vector(g.arg(1));
  if (items.empty()) Machine::domain_error("non_empty_list", A(g, 1));
  Term head = deref(items[0]);
  if (items.size() == 1) return m.unify(t, head);
  if (head.is_var()) Machine::instantiation_error();
  if (!head.is_atom()) Machine::type_error("atom", head);
  items.erase(items.begin());
  return m.unify(t, Term::make_compound(head.atom_id(), std::move(items)));
}

inline bool bi_copy_term(Machine& m, const Term& g, size_t) { return m.unify(g.arg(1), m.copy(g.arg(0))); }

inline bool bi_setarg(Machine& m, const Term& g, size_t) {
  std::int64_t i = require_int64(g.arg(0));
  Term t = A(g, 1);
  if (!t.is_compound()) Machine::type_error("compound", t);
  if (i < 1 || i > t.arity()) return false;
  // Destructive and not undone on backtracking.
  t.arg_mut(static_cast<std::uint32_t>(i - 1)) = m.copy(g.arg(2));
  return true;
}

inline bool bi_term_variables(Machine& m, const Term& g, size_t) {
  std::vector<Term> vs;
  std::unordered_set<VarNode*> seen;
  collect_vars(g.arg(0), vs, seen);
  return m.unify(g.arg(1), make_list(std::move(vs)));
}

inline bool bi_numbervars(Machine& m, const Term& g, size_t) {
  std::int64_t n = require_int64(g.arg(1));
  std::vector<Term> vs;
  std::unordered_set<VarNode*> seen;
  collect_vars(g.arg(0), vs, seen);
  for (auto& v : vs) m.bind(v, mk("$VAR", {Term::make_int(n++)}));
  return m.unify(g.arg(2), Term::make_int(n));
}

// ---------------------------------------------------------------------------
// Atoms and strings

inline bool bi_atom_codes(Machine& m, const Term& g, size_t) {
  const Term& a = A(g, 0);
  if (!a.is_var()) return m.unify(g.arg(1), codes_term(require_text(a)));
  auto s = list_text_of(g.arg(1));
  if (!s) Machine::instantiation_error();
  return m.unify(a, Term::make_atom(*s));
}

inline bool bi_atom_chars(Machine& m, const Term& g, size_t) {
  const Term& a = A(g, 0);
  if (!a.is_var()) return m.unify(g.arg(1), chars_term(require_text(a)));
  auto s = list_text_of(g.arg(1));
  if (!s) Machine::instantiation_error();
  return m.unify(a, Term::make_atom(*s));
}

inline bool bi_char_code(Machine& m, const Term& g, size_t) {
  const Term& c = A(g, 0);
  if (c.is_atom()) {
    const std::string& s = atom_name(c.atom_id());
    std::size_t i = 0;
    return m.unify(g.arg(1), Term::make_int(next_utf8(s, i)));
  }
  std::int64_t code = require_int64(g.arg(1));
  std::string s;
  append_utf8(s, static_cast<std::uint32_t>(code));
  return m.unify(c, Term::make_atom(s));
}

inline bool bi_atom_length(Machine& m, const Term& g, size_t) {
  return m.unify(g.arg(1), Term::make_int(static_cast<std::int64_t>(utf8_length(require_text(g.arg(0))))));
}

template <bool AsString>
inline Term text_term(const std::string& s) {
  if constexpr (AsString) return Term::make_string(s);
  else return Term::make_atom(s);
}

template <bool AsString>
inline bool bi_concat(Machine& m, const Term& g, size_t) {
  const Term& a = A(g, 0);
  const Term& b = A(g, 1);
  if (!a.is_var() && !b.is_var())
    return m.unify(g.arg(2), text_term<AsString>(require_text(a) + require_text(b)));
  const Term& c = A(g, 2);
  if (c.is_var()) Machine::instantiation_error();
  std::string whole = require_text(c);
  auto chars = utf8_chars(whole);
  std::vector<Term> alts;
  std::string prefix;
  for (std::size_t i = 0; i <= chars.size(); ++i) {
    std::string suffix;
    for (std::size_t j = i; j < chars.size(); ++j) suffix += chars[j];
    alts.push_back(mk("-", {text_term<AsString>(prefix), text_term<AsString>(suffix)}));
    if (i < chars.size()) prefix += chars[i];
  }
  return m.unify_alternatives(mk("-", {a, b}), std::move(alts));
}

// sub_atom/5 and sub_string/5. Goal args: Text, B, L, A, Sub.
template <bool AsString>
inline bool redo_sub(Machine& m, size_t idx);

template <bool AsString>
inline bool sub_search(Machine& m, const Term& g, std::int64_t state, bool from_redo, size_t idx) {
  std::string text = require_text(g.arg(0));
  auto chars = utf8_chars(text);
  auto n = static_cast<std::int64_t>(chars.size());
  const Term& B = A(g, 1);
  const Term& L = A(g, 2);
  const Term& Af = A(g, 3);
  std::int64_t b = state / (n + 1), l = state % (n + 1);
  auto emit = [&](std::int64_t bb, std::int64_t ll) {
    std::string sub;
    for (std::int64_t k = bb; k < bb + ll; ++k) sub += chars[static_cast<std::size_t>(k)];
    return m.unify(B, Term::make_int(bb)) && m.unify(L, Term::make_int(ll)) &&
           m.unify(Af, Term::make_int(n - bb - ll)) && m.unify(g.arg(4), text_term<AsString>(sub));
  };
  std::int64_t b_lo = B.is_int() ? B.int_value() : 0, b_hi = B.is_int() ? B.int_value() : n;
  for (; b <= n; ++b, l = 0) {
    if (b < b_lo) {
      b = b_lo - 1;
      continue;
    }
    if (b > b_hi) break;
    for (; b + l <= n; ++l) {
      if (L.is_int() && l != L.int_value()) {
        if (l < L.int_value()) {
          l = L.int_value() - 1;
          continue;
        }
        break;
      }
      if (Af.is_int() && n - b - l != Af.int_value()) continue;
      std::int64_t next = b * (n + 1) + l + 1;
      // Find whether another candidate may follow; keep the choicepoint if so.
      if (!from_redo) {
        ChoicePoint& cp = m.push_cp(CPKind::Redo);
        cp.goal = g;
        cp.state = next;
        cp.cont = m.goals;
        cp.redo = &redo_sub<AsString>;
      } else {
        m.cps[idx].state = next;
      }
      return emit(b, l);
    }
  }
  if (from_redo) m.cps.pop_back();
  return false;
}

template <bool AsString>
inline bool redo_sub(Machine& m, size_t idx) {
  ChoicePoint& cp = m.cps[idx];
  Term g = cp.goal;
  m.goals = cp.cont;
  return sub_search<AsString>(m, g, cp.state, true, idx);
}

template <bool AsString>
inline bool bi_sub(Machine& m, const Term& g, size_t) {
  const Term& sub = A(g, 4);
  if (!sub.is_var()) {
    std::string text = require_text(g.arg(0));
    std::string needle = require_text(sub);
    auto chars = utf8_chars(text);
    auto nchars = utf8_chars(needle);
    std::vector<Term> alts;
    auto n = static_cast<std::int64_t>(chars.size()), k = static_cast<std::int64_t>(nchars.size());
    // Byte offsets to code point offsets.
    std::vector<std::size_t> byte_at(chars.size() + 1, 0);
    for (std::size_t i = 0; i < chars.size(); ++i) byte_at[i + 1] = byte_at[i] + chars[i].size();
    for (std::int64_t b = 0; b + k <= n; ++b) {
      if (text.compare(byte_at[static_cast<std::size_t>(b)], needle.size(), needle) == 0)
        alts.push_back(mk("f", {Term::make_int(b), Term::make_int(k), Term::make_int(n - b - k)}));
    }
    return m.unify_alternatives(mk("f", {g.arg(1), g.arg(2), g.arg(3)}), std::move(alts));
  }
  return sub_search<AsString>(m, g, 0, false, 0);
}

inline bool bi_atom_number(Machine& m, const Term& g, size_t) {
  const Term& a = A(g, 0);
  if (a.is_var()) {
    const Term& n = A(g, 1);
    if (n.is_var()) Machine::instantiation_error();
    if (!n.is_number()) Machine::type_error("number", n);
    return m.unify(a, Term::make_atom(require_text(n)));
  }
  auto s = text_of(a);
  if (!s) Machine::type_error("atom", a);
  auto num = parse_number(*s);
  if (!num) return false;
  return m.unify(g.arg(1), *num);
}

inline Term syntax_error_term(const char* what) {
  return mk("error", {mk("syntax_error", {Term::make_atom(what)}), Term::make_var()});
}

// number_codes/2, number_chars/2, number_string/2.
inline bool bi_number_text(Machine& m, const Term& g, size_t) {
  const Term& text = A(g, 1);
  if (!text.is_var()) {
    auto s = text_of(text);
    if (s) {
      auto num = parse_number(*s);
      if (!num) throw PrologThrow{syntax_error_term("illegal_number")};
      return m.unify(g.arg(0), *num);
    }
  }
  const Term& n = A(g, 0);
  if (n.is_var()) Machine::instantiation_error();
  if (!n.is_number()) Machine::type_error("number", n);
  std::string s = require_text(n);
  std::string kind = atom_name(g.functor());
  if (kind == "number_codes") return m.unify(text, codes_term(s));
  if (kind == "number_chars") return m.unify(text, chars_term(s));
  return m.unify(text, Term::make_string(s));
}

inline bool bi_atom_string(Machine& m, const Term& g, size_t) {
  const Term& a = A(g, 0);
  if (!a.is_var()) return m.unify(g.arg(1), Term::make_string(require_text(a)));
  return m.unify(a, Term::make_atom(require_text(g.arg(1))));
}

inline bool bi_string_chars(Machine& m, const Term& g, size_t) {
  const Term& s = A(g, 0);
  if (!s.is_var()) return m.unify(g.arg(1), chars_term(require_text(s)));
  auto t = list_text_of(g.arg(1));
  if (!t) Machine::instantiation_error();
  return m.unify(s, Term::make_string(*t));
}

inline bool bi_string_codes(Machine& m, const Term& g, size_t) {
  const Term& s = A(g, 0);
  if (!s.is_var()) return m.unify(g.arg(1), codes_term(require_text(s)));
  auto t = list_text_of(g.arg(1));
  if (!t) Machine::instantiation_error();
  return m.unify(s, Term::make_string(*t));
}

inline bool bi_string_to_atom(Machine& m, const Term& g, size_t) {
  const Term& s = A(g, 0);
  if (!s.is_var()) return m.unify(g.arg(1), Term::make_atom(require_text(s)));
  return m.unify(s, Term::make_string(require_text(g.arg(1))));
}

inline bool bi_string_length(Machine& m, const Term& g, size_t) {
  return m.unify(g.arg(1), Term::make_int(static_cast<std::int64_t>(utf8_length(require_text(g.arg(0))))));
}

inline bool bi_string_code(Machine& m, const Term& g, size_t) {
  std::int64_t i = require_int64(g.arg(0));
  auto codes = utf8_codes(require_text(g.arg(1)));
  if (i < 1 || i > static_cast<std::int64_t>(codes.size())) return false;
  return m.unify(g.arg(2), Term::make_int(codes[static_cast<std::size_t>(i - 1)]));
}

inline bool bi_text_to_string(Machine& m, const Term& g, size_t) {
  return m.unify(g.arg(1), Term::make_string(require_text(g.arg(0))));
}

inline std::string map_case(std::string s, bool upper) {
  for (char& c : s) c = static_cast<char>(upper ? std::toupper(static_cast<unsigned char>(c))
                                                : std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline bool bi_upcase_atom(Machine& m, const Term& g, size_t) {
  return m.unify(g.arg(1), Term::make_atom(map_case(require_text(g.arg(0)), true)));
}
inline bool bi_downcase_atom(Machine& m, const Term& g, size_t) {
  return m.unify(g.arg(1), Term::make_atom(map_case(require_text(g.arg(0)), false)));
}
inline bool bi_string_upper(Machine& m, const Term& g, size_t) {
  return m.unify(g.arg(1), Term::make_string(map_case(require_text(g.arg(0)), true)));
}
inline bool bi_string_lower(Machine& m, const Term& g, size_t) {
  return m.unify(g.arg(1), Term::make_string(map_case(require_text(g.arg(0)), false)));
}

inline std::vector<std::string> split_on(const std::string& s, const std::string& sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t at = s.find(sep, start);
    if (at == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, at - start));
    start = at + sep.size();
  }
}

inline bool bi_atomic_list_concat(Machine& m, const Term& g, size_t) {
  std::string sep = g.arity() == 3 ? require_text(g.arg(1)) : "";
  const Term& result = A(g, g.arity() - 1);
  // Join mode when every element is bound.
  Term cur = A(g, 0);
  std::string joined;
  bool first = true, all_bound = true;
  while (is_cons(cur)) {
    const Term& h = deref(cur.arg(0));
    if (h.is_var()) {
      all_bound = false;
      break;
    }
    if (!first) joined += sep;
    joined += require_text(h);
    first = false;
    cur = deref(cur.arg(1));
  }
  if (all_bound && is_nil(cur)) return m.unify(result, Term::make_atom(joined));
  if (!all_bound || cur.is_var()) {
    if (sep.empty() || result.is_var()) Machine::instantiation_error();
    std::vector<Term> parts;
    for (auto& p : split_on(require_text(result), sep)) parts.push_back(Term::make_atom(p));
    return m.unify(g.arg(0), make_list(std::move(parts)));
  }
  Machine::type_error("list", A(g, 0));
}

inline bool bi_split_string(Machine& m, const Term& g, size_t) {
  std::string s = require_text(g.arg(0));
  std::string seps = require_text(g.arg(1));
  std::string pad = require_text(g.arg(2));
  auto is_in = [](const std::string& set, const std::string& ch) { return set.find(ch) != std::string::npos; };
  auto chars = utf8_chars(s);
  std::vector<std::vector<std::string>> fields(1);
  for (auto& c : chars) {
    if (!seps.empty() && is_in(seps, c)) fields.emplace_back();
    else fields.back().push_back(c);
  }
  std::vector<Term> out;
  for (auto& f : fields) {
    std::size_t b = 0, e = f.size();
    while (b < e && is_in(pad, f[b])) ++b;
    while (e > b && is_in(pad, f[e - 1])) --e;
    std::string piece;
    for (std::size_t i = b; i < e; ++i) piece += f[i];
    out.push_back(Term::make_string(piece));
  }
  return m.unify(g.arg(3), make_list(std::move(out)));
}

inline bool char_has_type(std::uint32_t c, const Term& type, Machine& m, bool as_code) {
  auto mkc = [&](std::uint32_t v) {
    if (as_code) return Term::make_int(v);
    std::string s;
    append_utf8(s, v);
    return Term::make_atom(s);
  };
  bool ascii = c < 128;
  int ch = static_cast<int>(c);
  if (type.is_atom()) {
    const std::string& t = atom_name(type.atom_id());
    if (t == "alpha") return (ascii && (std::isalnum(ch) || ch == '_')) || !ascii;
    if (t == "alnum") return (ascii && std::isalnum(ch)) || !ascii;
    if (t == "digit") return ascii && std::isdigit(ch);
    if (t == "space" || t == "white") return ascii && std::isspace(ch);
    if (t == "upper") return ascii && std::isupper(ch);
    if (t == "lower") return ascii && std::islower(ch);
    if (t == "punct") return ascii && std::ispunct(ch);
    if (t == "graph") return ascii && std::isgraph(ch);
    if (t == "print") return ascii && std::isprint(ch);
    if (t == "cntrl") return ascii && std::iscntrl(ch);
    if (t == "ascii") return ascii;
    if (t == "csym") return ascii && (std::isalnum(ch) || ch == '_');
    if (t == "csymf") return ascii && (std::isalpha(ch) || ch == '_');
    if (t == "end_of_line") return ch == '\n' || ch == '\r';
    if (t == "newline") return ch == '\n';
    if (t == "period") return ch == '.' || ch == '!' || ch == '?';
    if (t == "quote") return ch == '\'' || ch == '"' || ch == '`';
    return false;
  }
  if (type.is_compound() && type.arity() == 1) {
    const std::string& t = atom_name(type.functor());
    const Term& arg = type.arg(0);
    if (t == "digit") {
      if (!(ascii && std::isdigit(ch))) return false;
      return m.unify(arg, Term::make_int(ch - '0'));
    }
    if (t == "to_lower") return m.unify(arg, mkc(ascii ? static_cast<std::uint32_t>(std::tolower(ch)) : c));
    if (t == "to_upper") return m.unify(arg, mkc(ascii ? static_cast<std::uint32_t>(std::toupper(ch)) : c));
    if (t == "upper") {
      if (!(ascii && std::isupper(ch))) return false;
      return m.unify(arg, mkc(static_cast<std::uint32_t>(std::tolower(ch))));
    }
    if (t == "lower") {
      if (!(ascii && std::islower(ch))) return false;
      return m.unify(arg, mkc(static_cast<std::uint32_t>(std::toupper(ch))));
    }
  }
  return false;
}

inline bool bi_char_type(Machine& m, const Term& g, size_t) {
  bool as_code = atom_name(g.functor()) == "code_type";
  const Term& c = A(g, 0);
  Term type = A(g, 1);
  if (c.is_var()) {
    // Enumerate ASCII candidates.
    std::vector<Term> alts;
    for (std::uint32_t v = 0; v < 128; ++v) {
      size_t mark = m.trail.size();
      m.push_cp(CPKind::Stop);
      Term tcopy = m.copy(type);
      bool ok = char_has_type(v, tcopy, m, as_code);
      Term resolved = m.copy(tcopy);
      m.undo_to(mark);
      m.cps.pop_back();
      if (ok) {
        Term ch = as_code ? Term::make_int(v) : Term::make_atom(std::string(1, static_cast<char>(v)));
        alts.push_back(mk("-", {ch, resolved}));
      }
    }
    return m.unify_alternatives(mk("-", {c, type}), std::move(alts));
  }
  std::uint32_t code;
  if (c.is_int()) {
    code = static_cast<std::uint32_t>(c.int_value());
  } else {
    std::string s = require_text(c);
    std::size_t i = 0;
    code = s.empty() ? 0 : next_utf8(s, i);
  }
  return char_has_type(code, type, m, as_code);
}

// ---------------------------------------------------------------------------
// Sorting

inline bool bi_msort(Machine& m, const Term& g, size_t) {
  auto items = list_to_vector(g.arg(0));
  std::stable_sort(items.begin(), items.end(),
                   [](const Term& a, const Term& b) { return compare_terms(a, b) < 0; });
  return m.unify(g.arg(1), make_list(std::move(items)));
}

inline bool bi_sort2(Machine& m, const Term& g, size_t) {
  auto items = list_to_vector(g.arg(0));
  std::stable_sort(items.begin(), items.end(),
                   [](const Term& a, const Term& b) { return compare_terms(a, b) < 0; });
  items.erase(std::unique(items.begin(), items.end(),
                          [](const Term& a, const Term& b) { return compare_terms(a, b) == 0; }),
              items.end());
  return m.unify(g.arg(1), make_list(std::move(items)));
}

inline bool bi_sort4(Machine& m, const Term& g, size_t) {
  std::int64_t key = require_int64(g.arg(0));
  std::string order = atom_name(require_atom(g.arg(1)));
  auto items = list_to_vector(g.arg(2));
  auto key_of_item = [&](const Term& t) -> Term {
    if (key == 0) return t;
    const Term& d = deref(t);
    if (!d.is_compound() || d.arity() < key) Machine::type_error("compound", d);
    return deref(d.arg(static_cast<std::uint32_t>(key - 1)));
  };
  bool desc = order == "@>" || order == "@>=";
  bool dedupe = order == "@<" || order == "@>";
  if (!(desc || order == "@<" || order == "@=<")) Machine::domain_error("order", A(g, 1));
  std::stable_sort(items.begin(), items.end(), [&](const Term& a, const Term& b) {
    int c = compare_terms(key_of_item(a), key_of_item(b));
    return desc ? c > 0 : c < 0;
  });
  if (dedupe)
    items.erase(std::unique(items.begin(), items.end(),
                            [&](const Term& a, const Term& b) {
                              return compare_terms(key_of_item(a), key_of_item(b)) == 0;
                            }),
                items.end());
  return m.unify(g.arg(3), make_list(std::move(items)));
}

inline bool bi_keysort(Machine& m, const Term& g, size_t) {
  auto items = list_to_vector(g.arg(0));
  for (auto& it : items) {
    if (it.is_var()) Machine::instantiation_error();
    if (!(it.is_compound() && it.functor() == std_atoms().minus && it.arity() == 2))
      Machine::type_error("pair", it);
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const Term& a, const Term& b) { return compare_terms(a.arg(0), b.arg(0)) < 0; });
  return m.unify(g.arg(1), make_list(std::move(items)));
}

// ---------------------------------------------------------------------------
// Database

inline Term strip_module(const Term& raw) {
  Term t = deref(raw);
  while (t.is_compound() && t.functor() == std_atoms().colon && t.arity() == 2) t = deref(t.arg(1));
  return t;
}

inline bool bi_assertz(Machine& m, const Term& g, size_t) {
  m.add_clause(m.copy(g.arg(0)), true);
  return true;
}
inline bool bi_asserta(Machine& m, const Term& g, size_t) {
  m.add_clause(m.copy(g.arg(0)), false);
  return true;
}

inline void split_clause(const Term& raw, Term& head, Term& body) {
  Term t = strip_module(raw);
  if (t.is_compound() && t.functor() == std_atoms().neck && t.arity() == 2) {
    head = strip_module(t.arg(0));
    body = deref(t.arg(1));
  } else {
    head = t;
    body = Term::make_atom(std_atoms().true_);
  }
  if (head.is_var()) Machine::instantiation_error();
  if (!head.is_callable()) Machine::type_error("callable", head);
}

// Renames a stored clause into a fresh Head-Body pair.
inline Term clause_instance(Machine& m, const Clause& c) {
  std::vector<Term> frame(c.n_vars);
  Term h = m.instantiate(c.head, frame);
  Term b = m.instantiate(c.body, frame);
  return mk("-", {h, b});
}

inline bool bi_clause(Machine& m, const Term& g, size_t) {
  Term head = strip_module(g.arg(0));
  if (head.is_var()) Machine::instantiation_error();
  if (!head.is_callable()) Machine::type_error("callable", head);
  Predicate* p = m.find_pred(head.name_id(), head.name_arity());
  if (!p) return false;
  if (p->builtin) Machine::permission_error("access", "private_procedure", Machine::indicator(head.name_id(), head.name_arity()));
  std::vector<Term> alts;
  for (auto& c : *p->clauses) alts.push_back(clause_instance(m, *c));
  return m.unify_alternatives(mk("-", {head, g.arg(1)}), std::move(alts));
}

inline bool remove_clause(Predicate& p, const Clause* c) {
  if (p.clauses.use_count() > 1) p.clauses = std::make_shared<ClauseList>(*p.clauses);
  auto& v = *p.clauses;
  auto it = std::find_if(v.begin(), v.end(), [&](const ClauseRef& r) { return r.get() == c; });
  if (it == v.end()) return false;
  v.erase(it);
  return true;
}

inline bool redo_retract(Machine& m, size_t idx);

inline bool retract_from(Machine& m, const Term& g, std::shared_ptr<ClauseList> list, size_t start,
                         bool from_redo, size_t idx) {
  Term head, body;
  split_clause(g.arg(0), head, body);
  Predicate* p = m.find_pred(head.name_id(), head.name_arity());
  for (size_t i = start; i < list->size(); ++i) {
    const ClauseRef& c = (*list)[i];
    if (!from_redo) {
      ChoicePoint& cp = m.push_cp(CPKind::Redo);
      cp.goal = g;
      cp.clauses = list;
      cp.next = i + 1;
      cp.cont = m.goals;
      cp.redo = &redo_retract;
      idx = m.cps.size() - 1;
      from_redo = true;
    } else {
      m.cps[idx].next = i + 1;
    }
    size_t mark = m.trail.size();
    Term inst = clause_instance(m, *c);
    if (m.unify(head, inst.arg(0)) && m.unify(body, inst.arg(1))) {
      if (p) remove_clause(*p, c.get());
      if (i + 1 >= list->size()) m.cps.erase(m.cps.begin() + static_cast<std::ptrdiff_t>(idx));
      return true;
    }
    m.undo_to(mark);
  }
  if (from_redo) m.cps.erase(m.cps.begin() + static_cast<std::ptrdiff_t>(idx));
  return false;
}

inline bool redo_retract(Machine& m, size_t idx) {
  ChoicePoint& cp = m.cps[idx];
  Term g = cp.goal;
  auto list = cp.clauses;
  size_t start = cp.next;
  m.goals = cp.cont;
  return retract_from(m, g, list, start, true, idx);
}

inline bool bi_retract(Machine& m, const Term& g, size_t) {
  Term head, body;
  split_clause(g.arg(0), head, body);
  Predicate* p = m.find_pred(head.name_id(), head.name_arity());
  if (!p) return false;
  if (p->builtin) Machine::permission_error("modify", "static_procedure", Machine::indicator(head.name_id(), head.name_arity()));
  auto list = p->clauses;
  return retract_from(m, g, list, 0, false, 0);
}

inline bool bi_retractall(Machine& m, const Term& g, size_t) {
  Term head = strip_module(g.arg(0));
  if (head.is_var()) Machine::instantiation_error();
  if (!head.is_callable()) Machine::type_error("callable", head);
  Predicate& p = m.pred(head.name_id(), head.name_arity());
  if (p.builtin) Machine::permission_error("modify", "static_procedure", Machine::indicator(head.name_id(), head.name_arity()));
  if (!p.defined) {
    p.dynamic = true;
    p.defined = true;
  }
  auto list = p.clauses;
  for (auto& c : *list) {
    size_t mark = m.trail.size();
    m.push_cp(CPKind::Stop);
    std::vector<Term> frame(c->n_vars);
    bool match = m.unify(head, m.instantiate(c->head, frame));
    m.undo_to(mark);
    m.cps.pop_back();
    if (match) remove_clause(p, c.get());
  }
  return true;
}

inline void for_each_indicator(const Term& raw, const std::function<void(AtomId, std::uint32_t)>& fn) {
  Term t = strip_module(raw);
  if (t.is_var()) Machine::instantiation_error();
  if (t.is_compound() && (t.functor() == std_atoms().comma) && t.arity() == 2) {
    for_each_indicator(t.arg(0), fn);
    for_each_indicator(t.arg(1), fn);
    return;
  }
  if (is_cons(t) || is_nil(t)) {
    for (auto& item : list_to_vector(t)) for_each_indicator(item, fn);
    return;
  }
  if (t.is_compound() && t.arity() == 2 && (t.functor() == std_atoms().slash || atom_name(t.functor()) == "//")) {
    std::uint32_t extra = atom_name(t.functor()) == "//" ? 2 : 0;
    fn(require_atom(t.arg(0)), static_cast<std::uint32_t>(require_int64(t.arg(1))) + extra);
    return;
  }
  Machine::type_error("predicate_indicator", t);
}

inline bool bi_dynamic(Machine& m, const Term& g, size_t) {
  for_each_indicator(g.arg(0), [&](AtomId n, std::uint32_t a) {
    Predicate& p = m.pred(n, a);
    if (p.builtin) Machine::permission_error("modify", "static_procedure", Machine::indicator(n, a));
    if (p.library && !m.loading_library) {
      p.clauses = std::make_shared<ClauseList>();
      p.library = false;
    }
    p.dynamic = true;
    p.defined = true;
  });
  return true;
}

inline bool bi_discontiguous(Machine& m, const Term& g, size_t) {
  for_each_indicator(g.arg(0), [&](AtomId n, std::uint32_t a) { m.pred(n, a); });
  return true;
}

inline bool bi_abolish(Machine& m, const Term& g, size_t) {
  for_each_indicator(g.arg(0), [&](AtomId n, std::uint32_t a) {
    Predicate* p = m.find_pred(n, a);
    if (!p) return;
    if (p->builtin) Machine::permission_error("modify", "static_procedure", Machine::indicator(n, a));
    p->clauses = std::make_shared<ClauseList>();
  });
  return true;
}

inline bool bi_current_predicate(Machine& m, const Term& g, size_t) {
  Term spec = strip_module(g.arg(0));
  if (spec.is_compound() && spec.functor() == std_atoms().slash && spec.arity() == 2) {
    const Term& n = A(spec, 0);
    const Term& a = A(spec, 1);
    if (n.is_atom() && a.is_int()) {
      Predicate* p = m.find_pred(n.atom_id(), static_cast<std::uint32_t>(a.int_value()));
      return p && !p->builtin && !p->library && (!p->clauses->empty() || p->dynamic);
    }
    std::vector<Term> alts;
    for (auto& [k, p] : m.preds) {
      if (p.builtin || p.library || (p.clauses->empty() && !p.dynamic)) continue;
      if (atom_name(p.name).rfind("$", 0) == 0) continue;
      alts.push_back(mk("/", {Term::make_atom(p.name), Term::make_int(p.arity)}));
    }
    return m.unify_alternatives(spec, std::move(alts));
  }
  if (spec.is_callable()) {
    Predicate* p = m.find_pred(spec.name_id(), spec.name_arity());
    return p && !p->builtin && (!p->clauses->empty() || p->dynamic);
  }
  Machine::type_error("predicate_indicator", spec);
}

inline bool bi_predicate_property(Machine& m, const Term& g, size_t) {
  Term head = strip_module(g.arg(0));
  if (!head.is_callable()) return false;
  Predicate* p = m.find_pred(head.name_id(), head.name_arity());
  if (!p || (!p->defined && !p->builtin)) return false;
  std::vector<Term> alts{Term::make_atom("defined")};
  if (p->builtin) alts.push_back(Term::make_atom("built_in"));
  if (p->dynamic) alts.push_back(Term::make_atom("dynamic"));
  else alts.push_back(Term::make_atom("static"));
  if (!p->builtin) alts.push_back(mk("number_of_clauses", {Term::make_int(static_cast<std::int64_t>(p->clauses->size()))}));
  return m.unify_alternatives(g.arg(1), std::move(alts));
}

// ---------------------------------------------------------------------------
// Flags and operators

inline bool bi_set_prolog_flag(Machine& m, const Term& g, size_t) {
  std::string flag = atom_name(require_atom(g.arg(0)));
  const Term& v = A(g, 1);
  if (flag == "double_quotes") {
    std::string s = atom_name(require_atom(v));
    if (s == "codes") m.read_flags.double_quotes = DoubleQuotes::Codes;
    else if (s == "chars") m.read_flags.double_quotes = DoubleQuotes::Chars;
    else if (s == "atom") m.read_flags.double_quotes = DoubleQuotes::Atom;
    else if (s == "string") m.read_flags.double_quotes = DoubleQuotes::String;
    else Machine::domain_error("flag_value", v);
    return true;
  }
  if (flag == "unknown") {
    m.unknown_error = atom_name(require_atom(v)) == "error";
    return true;
  }
  return true;
}

inline bool bi_current_prolog_flag(Machine& m, const Term& g, size_t) {
  std::vector<Term> alts;
  const char* dq[] = {"codes", "chars", "atom", "string"};
  alts.push_back(mk("-", {Term::make_atom("bounded"), Term::make_atom("false")}));
  alts.push_back(mk("-", {Term::make_atom("max_integer"), Term::make_int(std::numeric_limits<std::int64_t>::max())}));
  alts.push_back(mk("-", {Term::make_atom("min_integer"), Term::make_int(std::numeric_limits<std::int64_t>::min())}));
  alts.push_back(mk("-", {Term::make_atom("double_quotes"),
                          Term::make_atom(dq[static_cast<int>(m.read_flags.double_quotes)])}));
  alts.push_back(mk("-", {Term::make_atom("unknown"), Term::make_atom(m.unknown_error ? "error" : "fail")}));
  alts.push_back(mk("-", {Term::make_atom("dialect"), Term::make_atom("swi")}));
  std::vector<Term> args;
  for (auto& a : m.argv) args.push_back(Term::make_atom(a));
  alts.push_back(mk("-", {Term::make_atom("argv"), make_list(args)}));
  return m.unify_alternatives(mk("-", {g.arg(0), g.arg(1)}), std::move(alts));
}

inline OpType parse_op_type(const Term& t) {
  std::string s = atom_name(require_atom(t));
  if (s == "xfx") return OpType::XFX;
  if (s == "xfy") return OpType::XFY;
  if (s == "yfx") return OpType::YFX;
  if (s == "fy") return OpType::FY;
  if (s == "fx") return OpType::FX;
  if (s == "xf") return OpType::XF;
  if (s == "yf") return OpType::YF;
  Machine::domain_error("operator_specifier", t);
}

inline bool bi_op(Machine& m, const Term& g, size_t) {
  std::int64_t p = require_int64(g.arg(0));
  if (p < 0 || p > 1200) Machine::domain_error("operator_priority", A(g, 0));
  OpType type = parse_op_type(g.arg(1));
  const Term& names = A(g, 2);
  std::vector<Term> list = is_cons(names) ? list_to_vector(names) : std::vector<Term>{names};
  for (auto& n : list) m.ops.add(static_cast<int>(p), type, atom_name(require_atom(n)));
  return true;
}

inline bool bi_current_op(Machine& m, const Term& g, size_t) {
  static const char* names[] = {"xfx", "xfy", "yfx", "fy", "fx", "xf", "yf"};
  std::vector<Term> alts;
  m.ops.for_each([&](AtomId a, const OpDef& d) {
    alts.push_back(mk("op", {Term::make_int(d.priority), Term::make_atom(names[static_cast<int>(d.type)]),
                             Term::make_atom(a)}));
  });
  return m.unify_alternatives(mk("op", {g.arg(0), g.arg(1), g.arg(2)}), std::move(alts));
}

// ---------------------------------------------------------------------------
// Global variables

inline bool bi_setval(Machine& m, const Term& g, size_t) {
  m.globals[require_atom(g.arg(0))] = m.copy(g.arg(1));
  return true;
}

inline bool bi_getval(Machine& m, const Term& g, size_t) {
  AtomId k = require_atom(g.arg(0));
  auto it = m.globals.find(k);
  if (it == m.globals.end()) Machine::existence_error("variable", Term::make_atom(k));
  return m.unify(g.arg(1), it->second);
}

inline bool bi_nb_current(Machine& m, const Term& g, size_t) {
  const Term& k = A(g, 0);
  if (k.is_atom()) {
    auto it = m.globals.find(k.atom_id());
    return it != m.globals.end() && m.unify(g.arg(1), it->second);
  }
  std::vector<Term> alts;
  for (auto& [a, v] : m.globals) alts.push_back(mk("-", {Term::make_atom(a), v}));
  return m.unify_alternatives(mk("-", {k, g.arg(1)}), std::move(alts));
}

// ---------------------------------------------------------------------------
// Output

enum class Stream { Out, Err };

inline Stream stream_of(const Term& raw) {
  const Term& t = deref(raw);
  if (t.is_var()) Machine::instantiation_error();
  if (t.is_atom()) {
    const std::string& n = atom_name(t.atom_id());
    if (n == "user_error") return Stream::Err;
    if (n == "user_output" || n == "current_output") return Stream::Out;
  }
  if (t.is_compound() && atom_name(t.functor()) == "$stream") {
    return A(t, 0).is_int() && A(t, 0).int_value() == 2 ? Stream::Err : Stream::Out;
  }
  Machine::domain_error("stream_or_alias", t);
}

inline void emit(Machine& m, Stream s, const std::string& text) {
  if (s == Stream::Err) m.err(text);
  else m.out(text);
}

inline WriteOptions parse_write_options(const Term& opts) {
  WriteOptions o;
  o.number_vars = false;
  for (auto& opt : list_to_vector(opts)) {
    if (!opt.is_compound() || opt.arity() != 1) continue;
    std::string k = atom_name(opt.functor());
    bool v = A(opt, 0).is_atom(std_atoms().true_);
    if (k == "quoted") o.quoted = v;
    else if (k == "ignore_ops") o.ignore_ops = v;
    else if (k == "numbervars") o.number_vars = v;
  }
  return o;
}

// write/1,2 family. The last argument is the term; a leading argument is the
// stream.
template <int Mode>  // 0 write, 1 writeq, 2 print, 3 write_canonical, 4 writeln
inline bool bi_write(Machine& m, const Term& g, size_t) {
  std::uint32_t n = g.arity();
  Stream s = n == 2 ? stream_of(g.arg(0)) : Stream::Out;
  WriteOptions o;
  if (Mode == 1 || Mode == 2) o.quoted = true;
  if (Mode == 3) {
    o.quoted = true;
    o.ignore_ops = true;
    o.number_vars = false;
  }
  Writer w(m.ops, o);
  std::string text = w.write(g.arg(n - 1));
  if (Mode == 4) text += '\n';
  emit(m, s, text);
  return true;
}

inline bool bi_write_term(Machine& m, const Term& g, size_t) {
  std::uint32_t n = g.arity();
  Stream s = n == 3 ? stream_of(g.arg(0)) : Stream::Out;
  Writer w(m.ops, parse_write_options(g.arg(n - 1)));
  emit(m, s, w.write(g.arg(n - 2)));
  return true;
}

inline bool bi_nl(Machine& m, const Term& g, size_t) {
  emit(m, g.is_compound() ? stream_of(g.arg(0)) : Stream::Out, "\n");
  return true;
}

inline bool bi_tab(Machine& m, const Term& g, size_t) {
  std::uint32_t n = g.arity();
  Term v = eval(g.arg(n - 1));
  if (!v.is_int()) Machine::type_error("integer", v);
  emit(m, n == 2 ? stream_of(g.arg(0)) : Stream::Out, std::string(static_cast<size_t>(std::max<std::int64_t>(0, v.int_value())), ' '));
  return true;
}

inline bool bi_put_char(Machine& m, const Term& g, size_t) {
  std::uint32_t n = g.arity();
  const Term& c = A(g, n - 1);
  std::string text;
  if (c.is_int()) append_utf8(text, static_cast<std::uint32_t>(c.int_value()));
  else text = atom_name(require_atom(c));
  emit(m, n == 2 ? stream_of(g.arg(0)) : Stream::Out, text);
  return true;
}

inline bool bi_flush(Machine&, const Term&, size_t) {
  std::fflush(stdout);
  return true;
}

inline std::vector<Term> format_args(const Term& raw) {
  const Term& t = deref(raw);
  if (is_cons(t) || is_nil(t)) return list_to_vector(t);
  return {t};
}

inline bool bi_format(Machine& m, const Term& g, size_t) {
  std::uint32_t n = g.arity();
  std::string fmt = require_text(g.arg(n == 3 ? 1 : 0));
  std::vector<Term> args = n >= 2 ? format_args(g.arg(n - 1)) : std::vector<Term>{};
  std::string text = run_format(m, fmt, std::move(args));
  if (n == 3) {
    const Term& sink = A(g, 0);
    if (sink.is_compound() && sink.arity() == 1) return unify_text_spec(m, sink, text);
    emit(m, stream_of(sink), text);
    return true;
  }
  m.out(text);
  return true;
}

inline bool bi_print_message(Machine& m, const Term& g, size_t) {
  std::string kind = A(g, 0).is_atom() ? atom_name(A(g, 0).atom_id()) : "";
  if (kind == "silent" || kind == "informational") return true;
  std::string prefix = kind == "error" ? "ERROR: " : kind == "warning" ? "Warning: " : "";
  const Term& msg = A(g, 1);
  std::string text;
  if (msg.is_compound() && atom_name(msg.functor()) == "format" && msg.arity() == 2)
    text = run_format(m, require_text(msg.arg(0)), format_args(msg.arg(1)));
  else
    text = describe_error(m, msg);
  m.err(prefix + text + "\n");
  return true;
}

inline bool bi_portray_clause(Machine& m, const Term& g, size_t) {
  Term t = m.copy(g.arg(0));
  std::vector<Term> vs;
  std::unordered_set<VarNode*> seen;
  collect_vars(t, vs, seen);
  std::int64_t i = 0;
  for (auto& v : vs) m.bind(v, mk("$VAR", {Term::make_int(i++)}));
  WriteOptions o;
  o.quoted = true;
  Writer w(m.ops, o);
  m.out(w.write(t) + ".\n");
  return true;
}

// ---------------------------------------------------------------------------
// Reading terms from text

inline bool read_from_text(Machine& m, const std::string& text, Term& out,
                           std::vector<std::pair<std::string, Term>>* names = nullptr) {
  std::string src = text;
  // Allow a missing terminating full stop.
  std::string trimmed = src;
  while (!trimmed.empty() && is_layout(trimmed.back())) trimmed.pop_back();
  if (trimmed.empty() || trimmed.back() != '.') src = trimmed + " .";
  else src = trimmed + " ";
  try {
    Parser p(src, m.ops, m.read_flags);
    ReadResult r = p.read();
    if (r.term.is_none()) {
      out = Term::make_atom(std_atoms().eof);
      return true;
    }
    out = r.term;
    if (names) *names = r.var_names;
    return true;
  } catch (const SyntaxError& e) {
    throw PrologThrow{mk("error", {mk("syntax_error", {Term::make_atom(e.what())}), Term::make_var()})};
  }
}

inline bool bi_term_to_atom(Machine& m, const Term& g, size_t) {
  const Term& t = A(g, 0);
  const Term& a = A(g, 1);
  if (!a.is_var()) {
    Term parsed;
    read_from_text(m, require_text(a), parsed);
    return m.unify(t, parsed);
  }
  std::string text = m.to_text(t, true);
  if (atom_name(g.functor()) == "term_string") return m.unify(a, Term::make_string(text));
  return m.unify(a, Term::make_atom(text));
}

inline bool bi_atom_to_term(Machine& m, const Term& g, size_t) {
  Term parsed;
  std::vector<std::pair<std::string, Term>> names;
  read_from_text(m, require_text(g.arg(0)), parsed, &names);
  std::vector<Term> bindings;
  for (auto& [n, v] : names) bindings.push_back(mk("=", {Term::make_atom(n), v}));
  return m.unify(g.arg(1), parsed) && m.unify(g.arg(2), make_list(std::move(bindings)));
}

inline std::string& stdin_buffer() {
  static std::string buf;
  return buf;
}
inline std::size_t& stdin_pos() {
  static std::size_t pos = 0;
  return pos;
}
inline bool& stdin_loaded() {
  static bool loaded = false;
  return loaded;
}
inline void load_stdin() {
  if (stdin_loaded()) return;
  stdin_loaded() = true;
  std::ostringstream ss;
  ss << std::cin.rdbuf();
  stdin_buffer() = ss.str();
}

inline bool bi_read(Machine& m, const Term& g, size_t) {
  load_stdin();
  std::string_view rest = std::string_view(stdin_buffer()).substr(stdin_pos());
  Term target = g.arity() >= 2 && atom_name(g.functor()) == "read" ? g.arg(1) : g.arg(g.arity() == 3 ? 1 : 0);
  if (g.arity() == 2 && atom_name(g.functor()) == "read_term") target = g.arg(0);
  try {
    Parser p(rest, m.ops, m.read_flags);
    ReadResult r = p.read();
    stdin_pos() += p.pos();
    if (r.term.is_none()) return m.unify(target, Term::make_atom(std_atoms().eof));
    return m.unify(target, r.term);
  } catch (const SyntaxError& e) {
    stdin_pos() = stdin_buffer().size();
    throw PrologThrow{mk("error", {mk("syntax_error", {Term::make_atom(e.what())}), Term::make_var()})};
  }
}

inline bool bi_read_line_to_string(Machine& m, const Term& g, size_t) {
  load_stdin();
  std::string& buf = stdin_buffer();
  std::size_t& pos = stdin_pos();
  if (pos >= buf.size()) return m.unify(g.arg(1), Term::make_atom(std_atoms().eof));
  std::size_t nl = buf.find('\n', pos);
  std::string line = buf.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
  pos = nl == std::string::npos ? buf.size() : nl + 1;
  if (atom_name(g.functor()) == "read_line_to_codes") return m.unify(g.arg(1), codes_term(line));
  return m.unify(g.arg(1), Term::make_string(line));
}

// ---------------------------------------------------------------------------
// Misc

inline bool bi_statistics(Machine& m, const Term& g, size_t) {
  std::string key = atom_name(require_atom(g.arg(0)));
  static auto start = std::chrono::steady_clock::now();
  auto ms = [](auto d) { return std::chrono::duration_cast<std::chrono::milliseconds>(d).count(); };
  std::int64_t cpu = static_cast<std::int64_t>(1000.0 * static_cast<double>(std::clock()) / CLOCKS_PER_SEC);
  if (key == "runtime" || key == "cputime" || key == "process_cputime") {
    if (key == "cputime") return m.unify(g.arg(1), Term::make_float(static_cast<double>(cpu) / 1000.0));
    return m.unify(g.arg(1), make_list({Term::make_int(cpu), Term::make_int(0)}));
  }
  if (key == "walltime" || key == "real_time")
    return m.unify(g.arg(1), make_list({Term::make_int(ms(std::chrono::steady_clock::now() - start)), Term::make_int(0)}));
  if (key == "inferences") return m.unify(g.arg(1), Term::make_int(static_cast<std::int64_t>(m.inferences)));
  return m.unify(g.arg(1), Term::make_int(0));
}

inline bool bi_get_time(Machine& m, const Term& g, size_t) {
  double t = std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();
  return m.unify(g.arg(0), Term::make_float(t));
}

inline bool bi_true(Machine&, const Term&, size_t) { return true; }

inline bool bi_random_between(Machine& m, const Term& g, size_t) {
  std::int64_t lo = require_int64(g.arg(0)), hi = require_int64(g.arg(1));
  if (hi < lo) return false;
  return m.unify(g.arg(2), Term::make_int(std::uniform_int_distribution<std::int64_t>(lo, hi)(arith_rng())));
}

inline bool bi_random(Machine& m, const Term& g, size_t) {
  return m.unify(g.arg(0), Term::make_float(std::uniform_real_distribution<double>(0.0, 1.0)(arith_rng())));
}

inline bool bi_tab_stop(Machine&, const Term&, size_t) { return true; }

// '$free_vars'(Template^Goal, Witness, StrippedGoal) for bagof/setof.
inline bool bi_free_vars(Machine& m, const Term& g, size_t) {
  Term tg = A(g, 0);
  Term templ = deref(tg.arg(0));
  Term goal = deref(tg.arg(1));
  std::vector<Term> bound_vars;
  std::unordered_set<VarNode*> bound;
  collect_vars(templ, bound_vars, bound);
  while (goal.is_compound() && goal.functor() == std_atoms().caret && goal.arity() == 2) {
    collect_vars(goal.arg(0), bound_vars, bound);
    goal = deref(goal.arg(1));
  }
  std::vector<Term> free;
  collect_vars(goal, free, bound);
  return m.unify(g.arg(1), Term::make_compound(atom("v"), free.empty() ? std::vector<Term>{} : free)) &&
         m.unify(g.arg(2), goal);
}

inline void register_builtins(Machine& m) {
  m.def(";", 2, bi_disj);
  m.def("->", 2, bi_if_then);
  m.def("*->", 2, bi_soft_if_then);
  m.def("\\+", 1, bi_not);
  m.def("not", 1, bi_not);
  for (std::uint32_t n = 1; n <= 8; ++n) m.def("call", n, bi_call_n);
  m.def("once", 1, bi_once);
  m.def("ignore", 1, bi_ignore);
  m.def("catch", 3, bi_catch);
  m.def("throw", 1, bi_throw);
  m.def("findall", 3, bi_findall);
  m.def("findall", 4, bi_findall);
  m.def("forall", 2, bi_forall);
  m.def("with_output_to", 2, bi_with_output_to);
  m.def("$ite", 1, bi_ite_marker);
  m.def("$softcut", 1, bi_softcut_marker);
  m.def("$cut_fail", 1, bi_cut_fail);
  m.def("$catch_exit", 1, bi_catch_exit);
  m.def("$fa_add", 2, bi_fa_add);
  m.def("$wot_end", 2, bi_wot_end);
  m.def("$free_vars", 3, bi_free_vars);
  m.def("halt", 0, bi_halt);
  m.def("halt", 1, bi_halt);
  m.def("between", 3, bi_between);
  m.def("repeat", 0, bi_repeat);
  m.def("length", 2, bi_length);
  m.def("numlist", 3, bi_numlist);

  m.def("var", 1, bi_var);
  m.def("nonvar", 1, bi_nonvar);
  m.def("atom", 1, bi_atom);
  m.def("number", 1, bi_number);
  m.def("integer", 1, bi_integer);
  m.def("float", 1, bi_float);
  m.def("atomic", 1, bi_atomic);
  m.def("compound", 1, bi_compound);
  m.def("callable", 1, bi_callable);
  m.def("is_list", 1, bi_is_list);
  m.def("string", 1, bi_string);
  m.def("ground", 1, bi_ground);
  m.def("is_assoc", 1, bi_is_assoc);

  m.def("=", 2, bi_unify);
  m.def("unify_with_occurs_check", 2, bi_unify);
  m.def("\\=", 2, bi_not_unify);
  m.def("subsumes_term", 2, bi_subsumes);
  m.def("==", 2, bi_eq);
  m.def("\\==", 2, bi_neq);
  m.def("@<", 2, bi_lt);
  m.def("@>", 2, bi_gt);
  m.def("@=<", 2, bi_le);
  m.def("@>=", 2, bi_ge);
  m.def("compare", 3, bi_compare);

  m.def("is", 2, bi_is);
  m.def("=:=", 2, bi_num_eq);
  m.def("=\\=", 2, bi_num_ne);
  m.def("<", 2, bi_num_lt);
  m.def(">", 2, bi_num_gt);
  m.def("=<", 2, bi_num_le);
  m.def(">=", 2, bi_num_ge);
  m.def("succ", 2, bi_succ);
  m.def("plus", 3, bi_plus);

  m.def("functor", 3, bi_functor);
  m.def("arg", 3, bi_arg);
  m.def("=..", 2, bi_univ);
  m.def("copy_term", 2, bi_copy_term);
  m.def("setarg", 3, bi_setarg);
  m.def("nb_setarg", 3, bi_setarg);
  m.def("term_variables", 2, bi_term_variables);
  m.def("numbervars", 3, bi_numbervars);

  m.def("atom_codes", 2, bi_atom_codes);
  m.def("atom_chars", 2, bi_atom_chars);
  m.def("char_code", 2, bi_char_code);
  m.def("atom_length", 2, bi_atom_length);
  m.def("atom_concat", 3, bi_concat<false>);
  m.def("string_concat", 3, bi_concat<true>);
  m.def("sub_atom", 5, bi_sub<false>);
  m.def("sub_string", 5, bi_sub<true>);
  m.def("atom_number", 2, bi_atom_number);
  m.def("number_codes", 2, bi_number_text);
  m.def("number_chars", 2, bi_number_text);
  m.def("number_string", 2, bi_number_text);
  m.def("atom_string", 2, bi_atom_string);
  m.def("string_chars", 2, bi_string_chars);
  m.def("string_codes", 2, bi_string_codes);
  m.def("string_to_atom", 2, bi_string_to_atom);
  m.def("string_length", 2, bi_string_length);
  m.def("string_code", 3, bi_string_code);
  m.def("text_to_string", 2, bi_text_to_string);
  m.def("upcase_atom", 2, bi_upcase_atom);
  m.def("downcase_atom", 2, bi_downcase_atom);
  m.def("string_upper", 2, bi_string_upper);
  m.def("string_lower", 2, bi_string_lower);
  m.def("atomic_list_concat", 2, bi_atomic_list_concat);
  m.def("atomic_list_concat", 3, bi_atomic_list_concat);
  m.def("split_string", 4, bi_split_string);
  m.def("char_type", 2, bi_char_type);
  m.def("code_type", 2, bi_char_type);
  m.def("term_to_atom", 2, bi_term_to_atom);
  m.def("term_string", 2, bi_term_to_atom);
  m.def("atom_to_term", 3, bi_atom_to_term);

  m.def("msort", 2, bi_msort);
  m.def("sort", 2, bi_sort2);
  m.def("sort", 4, bi_sort4);
  m.def("keysort", 2, bi_keysort);

  m.def("assert", 1, bi_assertz);
  m.def("assertz", 1, bi_assertz);
  m.def("asserta", 1, bi_asserta);
  m.def("retract", 1, bi_retract);
  m.def("retractall", 1, bi_retractall);
  m.def("clause", 2, bi_clause);
  m.def("dynamic", 1, bi_dynamic);
  m.def("discontiguous", 1, bi_discontiguous);
  m.def("abolish", 1, bi_abolish);
  m.def("current_predicate", 1, bi_current_predicate);
  m.def("predicate_property", 2, bi_predicate_property);

  m.def("set_prolog_flag", 2, bi_set_prolog_flag);
  m.def("current_prolog_flag", 2, bi_current_prolog_flag);
  m.def("op", 3, bi_op);
  m.def("current_op", 3, bi_current_op);

  m.def("nb_setval", 2, bi_setval);
  m.def("b_setval", 2, bi_setval);
  m.def("nb_getval", 2, bi_getval);
  m.def("b_getval", 2, bi_getval);
  m.def("nb_current", 2, bi_nb_current);

  m.def("write", 1, bi_write<0>);
  m.def("write", 2, bi_write<0>);
  m.def("writeq", 1, bi_write<1>);
  m.def("writeq", 2, bi_write<1>);
  m.def("print", 1, bi_write<2>);
  m.def("print", 2, bi_write<2>);
  m.def("write_canonical", 1, bi_write<3>);
  m.def("write_canonical", 2, bi_write<3>);
  m.def("writeln", 1, bi_write<4>);
  m.def("writeln", 2, bi_write<4>);
  m.def("write_term", 2, bi_write_term);
  m.def("write_term", 3, bi_write_term);
  m.def("nl", 0, bi_nl);
  m.def("nl", 1, bi_nl);
  m.def("tab", 1, bi_tab);
  m.def("tab", 2, bi_tab);
  m.def("put_char", 1, bi_put_char);
  m.def("put_char", 2, bi_put_char);
  m.def("flush_output", 0, bi_flush);
  m.def("flush_output", 1, bi_flush);
  m.def("format", 1, bi_format);
  m.def("format", 2, bi_format);
  m.def("format", 3, bi_format);
  m.def("print_message", 2, bi_print_message);
  m.def("portray_clause", 1, bi_portray_clause);
  m.def("read", 1, bi_read);
  m.def("read_term", 2, bi_read);
  m.def("read_term", 3, bi_read);
  m.def("read_line_to_string", 2, bi_read_line_to_string);
  m.def("read_line_to_codes", 2, bi_read_line_to_string);

  m.def("statistics", 2, bi_statistics);
  m.def("get_time", 1, bi_get_time);
  m.def("random_between", 3, bi_random_between);
  m.def("random", 1, bi_random);
  m.def("garbage_collect", 0, bi_true);
  m.def("style_check", 1, bi_true);
  m.def("use_module", 1, bi_true);
  m.def("use_module", 2, bi_true);
  m.def("ensure_loaded", 1, bi_true);
  m.def("set_stream", 2, bi_true);
  m.def("prompt", 2, bi_true);
  m.def("license", 1, bi_true);
  m.def("table", 1, bi_true);
  m.def("multifile", 1, bi_true);
  m.def("module", 2, bi_true);
}

}  // namespace vprolog
