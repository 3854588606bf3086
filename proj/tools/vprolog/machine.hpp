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

// The vprolog engine.
//
// Execution state is a goal continuation (a shared linked list of goals,
// each tagged with the choicepoint height a cut inside it returns to) plus a
// choicepoint stack and a trail. Clause bodies are instantiated on call from
// a frame of local slots, and clause selection is filtered on the first
// argument so deterministic recursion leaves no choicepoints behind.

#pragma once

#include <cstdint>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "reader.hpp"
#include "term.hpp"
#include "writer.hpp"

namespace vprolog {

struct PrologThrow {
  Term ball;
};

struct HaltRequest {
  int code;
};

class Machine;

// Builtins get the dereferenced goal and its cut barrier. By the time they
// run, m.goals already holds the continuation after the goal. Returning
// false fails the goal.
using Builtin = bool (*)(Machine& m, const Term& goal, std::size_t cut_barrier);

struct FirstArgKey {
  std::uint8_t kind = 0;  // 0 = unindexed, 1 atom, 2 int, 3 functor, 4 float
  std::uint64_t value = 0;
  bool compatible(const FirstArgKey& o) const {
    return kind == 0 || o.kind == 0 || (kind == o.kind && value == o.value);
  }
};

inline FirstArgKey key_of(const Term& raw) {
  const Term& t = deref(raw);
  FirstArgKey k;
  switch (t.tag()) {
    case Tag::Atom:
      k.kind = 1;
      k.value = t.atom_id();
      break;
    case Tag::Int:
      k.kind = 2;
      k.value = static_cast<std::uint64_t>(t.int_value());
      break;
    case Tag::Cmp:
      k.kind = 3;
      k.value = (static_cast<std::uint64_t>(t.functor()) << 32) | t.arity();
      break;
    case Tag::Float: {
      k.kind = 4;
      double d = t.float_value();
      std::memcpy(&k.value, &d, sizeof d);
      break;
    }
    default:
      break;
  }
  return k;
}

struct Clause {
  Term head;  // variables replaced by Local slots
  Term body;
  std::uint32_t n_vars = 0;
  FirstArgKey key;
};
using ClauseRef = std::shared_ptr<const Clause>;
using ClauseList = std::vector<ClauseRef>;

struct Predicate {
  AtomId name = 0;
  std::uint32_t arity = 0;
  Builtin builtin = nullptr;
  std::shared_ptr<ClauseList> clauses = std::make_shared<ClauseList>();
  bool dynamic = false;
  bool library = false;
  bool defined = false;
};

inline std::uint64_t pred_key(AtomId name, std::uint32_t arity) {
  return (static_cast<std::uint64_t>(name) << 32) | arity;
}

enum class CPKind : std::uint8_t { Stop, Alt, Clauses, Catch, Findall, Redo, Capture };

struct ChoicePoint;
using RedoFn = bool (*)(Machine& m, std::size_t cp_index);

struct ChoicePoint {
  CPKind kind;
  bool active = true;
  std::size_t trail_mark = 0;
  std::uint64_t var_stamp = 0;
  Cont cont;                  // continuation after the goal
  Term goal;                  // Alt: alternative; Clauses/Redo: goal; Catch: catcher; Findall: result
  Term aux;                   // Catch: recovery; Findall: tail
  std::size_t cut_barrier = 0;
  std::shared_ptr<ClauseList> clauses;
  std::size_t next = 0;       // Clauses: next clause; Redo: state
  std::int64_t state = 0;
  std::shared_ptr<std::vector<Term>> alternatives;
  RedoFn redo = nullptr;
  std::size_t bag = 0;
};

struct TrailEntry {
  Term var;               // binding to undo, or None
  std::size_t catch_index = 0;  // reactivation of a catch frame when var is None
};

struct OutputSink {
  std::string buffer;
};

class Machine {
 public:
  Machine() = default;
  Machine(const Machine&) = delete;
  Machine& operator=(const Machine&) = delete;

  // ---- configuration -------------------------------------------------
  OpTable ops;
  ReadFlags read_flags;
  bool unknown_error = true;
  int error_count = 0;
  int warning_count = 0;
  bool halt_on_error = false;
  bool loading_library = false;
  std::string current_file;
  std::vector<Term> init_goals;
  Term main_goal;
  std::vector<std::string> argv;

  // ---- execution state -----------------------------------------------
  Cont goals;
  std::vector<ChoicePoint> cps;
  std::vector<TrailEntry> trail;
  std::vector<std::vector<Term>> bags;
  std::vector<OutputSink> captures;
  std::unordered_map<AtomId, Term> globals;
  std::unordered_map<std::uint64_t, Predicate> preds;
  std::uint64_t inferences = 0;

  // ---- output ----------------------------------------------------------
  void out(std::string_view s) {
    if (!captures.empty()) {
      captures.back().buffer.append(s);
      return;
    }
    std::fwrite(s.data(), 1, s.size(), stdout);
    if (!s.empty()) last_out_char_ = s.back();
  }
  void err(std::string_view s) {
    std::fflush(stdout);
    std::fwrite(s.data(), 1, s.size(), stderr);
  }
  // Column of the current output line; used by ~t~| in format/2.
  char last_out_char() const { return last_out_char_; }

  std::string to_text(const Term& t, bool quoted = false) {
    WriteOptions o;
    o.quoted = quoted;
    Writer w(ops, o);
    return w.write(t);
  }

  // ---- predicates ------------------------------------------------------
  Predicate& pred(AtomId name, std::uint32_t arity) {
    auto& p = preds[pred_key(name, arity)];
    p.name = name;
    p.arity = arity;
    return p;
  }
  Predicate* find_pred(AtomId name, std::uint32_t arity) {
    auto it = preds.find(pred_key(name, arity));
    return it == preds.end() ? nullptr : &it->second;
  }
  void def(std::string_view name, std::uint32_t arity, Builtin fn) {
    auto& p = pred(atom(name), arity);
    p.builtin = fn;
    p.defined = true;
  }

  // ---- binding ---------------------------------------------------------
  void bind(const Term& var, const Term& value) {
    VarNode* v = var_node(var);
    v->ref = value;
    if (!cps.empty() && v->stamp <= cps.back().var_stamp) trail.push_back(TrailEntry{var, 0});
  }

  void undo_to(std::size_t mark) {
    while (trail.size() > mark) {
      TrailEntry& e = trail.back();
      if (e.var.is_var()) {
        var_node(e.var)->ref = Term();
      } else if (e.catch_index < cps.size() && cps[e.catch_index].kind == CPKind::Catch) {
        cps[e.catch_index].active = true;
      }
      trail.pop_back();
    }
  }

  bool unify(const Term& a, const Term& b) {
    std::vector<std::pair<const Term*, const Term*>>& st = unify_stack_;
    std::size_t base = st.size();
    st.emplace_back(&a, &b);
    while (st.size() > base) {
      auto [pa, pb] = st.back();
      st.pop_back();
      const Term& x = deref(*pa);
      const Term& y = deref(*pb);
      if (x.same_ref(y)) continue;
      if (x.is_var()) {
        if (y.is_var() && var_node(y)->stamp > var_node(x)->stamp) bind(y, x);
        else bind(x, y);
        continue;
      }
      if (y.is_var()) {
        bind(y, x);
        continue;
      }
      if (x.tag() != y.tag()) {
        st.resize(base);
        return false;
      }
      bool ok = true;
      switch (x.tag()) {
        case Tag::Atom:
          ok = x.atom_id() == y.atom_id();
          break;
        case Tag::Int:
          ok = x.int_value() == y.int_value();
          break;
        case Tag::Float:
          ok = x.float_value() == y.float_value() ||
               (std::isnan(x.float_value()) && std::isnan(y.float_value()));
          break;
        case Tag::Big:
          ok = x.big_value() == y.big_value();
          break;
        case Tag::Str:
          ok = x.string_value() == y.string_value();
          break;
        case Tag::Cmp:
          ok = x.functor() == y.functor() && x.arity() == y.arity();
          if (ok)
            for (std::uint32_t i = x.arity(); i-- > 0;) st.emplace_back(&x.arg(i), &y.arg(i));
          break;
        default:
          ok = false;
      }
      if (!ok) {
        st.resize(base);
        return false;
      }
    }
    return true;
  }

  // ---- clause instantiation -------------------------------------------
  Term instantiate(const Term& t, std::vector<Term>& frame) {
    if (t.is_local()) {
      Term& slot = frame[t.local_index()];
      if (slot.is_none()) slot = Term::make_var();
      return slot;
    }
    if (!t.is_compound() || !t.has_locals()) return t;
    std::size_t base = chain_.size();
    const Term* cur = &t;
    while (cur->is_compound() && cur->has_locals()) {
      chain_.push_back(cur);
      cur = &cur->arg(cur->arity() - 1);
    }
    Term acc = instantiate(*cur, frame);
    while (chain_.size() > base) {
      const Term& c = *chain_.back();
      chain_.pop_back();
      std::uint32_t last = c.arity() - 1;
      acc = Term::build_compound(c.functor(), c.arity(), [&](std::uint32_t i) {
        return i == last ? std::move(acc) : instantiate(c.arg(i), frame);
      });
    }
    return acc;
  }

  bool unify_head(const Term& pattern, const Term& goal, std::vector<Term>& frame) {
    std::vector<std::pair<const Term*, const Term*>>& st = head_stack_;
    st.clear();
    st.emplace_back(&pattern, &goal);
    while (!st.empty()) {
      auto [pp, pg] = st.back();
      st.pop_back();
      const Term& p = *pp;
      const Term& g = deref(*pg);
      if (p.is_local()) {
        Term& slot = frame[p.local_index()];
        if (slot.is_none()) {
          slot = g;
        } else if (!unify(slot, g)) {
          return false;
        }
        continue;
      }
      if (p.is_compound()) {
        if (g.is_var()) {
          bind(g, instantiate(p, frame));
          continue;
        }
        if (!g.is_compound() || g.functor() != p.functor() || g.arity() != p.arity()) return false;
        if (!p.has_locals()) {
          if (!unify(p, g)) return false;
          continue;
        }
        for (std::uint32_t i = p.arity(); i-- > 0;) st.emplace_back(&p.arg(i), &g.arg(i));
        continue;
      }
      if (!unify(p, g)) return false;
    }
    return true;
  }

  // ---- copying ---------------------------------------------------------
  // Copies a term with fresh variables. Variables map through `vars` so
  // that related copies share them.
  Term copy(const Term& raw, std::unordered_map<VarNode*, Term>& vars) {
    const Term& t = deref(raw);
    if (t.is_var()) {
      auto [it, fresh] = vars.try_emplace(var_node(t));
      if (fresh) it->second = Term::make_var();
      return it->second;
    }
    if (!t.is_compound()) return t;
    std::vector<Term> chain;
    Term cur = t;
    while (cur.is_compound()) {
      chain.push_back(cur);
      cur = deref(cur.arg(cur.arity() - 1));
    }
    Term acc = copy(cur, vars);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const Term& c = *it;
      std::vector<Term> args;
      args.reserve(c.arity());
      for (std::uint32_t i = 0; i + 1 < c.arity(); ++i) args.push_back(copy(c.arg(i), vars));
      args.push_back(std::move(acc));
      acc = Term::make_compound(c.functor(), std::move(args));
    }
    return acc;
  }
  Term copy(const Term& t) {
    std::unordered_map<VarNode*, Term> vars;
    return copy(t, vars);
  }

  // Converts a term to clause form: variables become Local slots.
  Term to_pattern(const Term& raw, std::unordered_map<VarNode*, std::uint32_t>& slots) {
    const Term& t = deref(raw);
    if (t.is_var()) {
      auto [it, fresh] = slots.try_emplace(var_node(t), static_cast<std::uint32_t>(slots.size()));
      return Term::make_local(it->second);
    }
    if (!t.is_compound()) return t;
    std::vector<Term> chain;
    Term cur = t;
    while (cur.is_compound()) {
      chain.push_back(cur);
      cur = deref(cur.arg(cur.arity() - 1));
    }
    Term acc = to_pattern(cur, slots);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const Term& c = *it;
      std::vector<Term> args;
      for (std::uint32_t i = 0; i + 1 < c.arity(); ++i) args.push_back(to_pattern(c.arg(i), slots));
      args.push_back(std::move(acc));
      acc = Term::make_compound(c.functor(), std::move(args));
    }
    return acc;
  }

  // ---- errors ------------------------------------------------------------
  [[noreturn]] static void throw_error(Term formal, Term context = Term::make_var()) {
    throw PrologThrow{Term::make_compound(std_atoms().error, {std::move(formal), std::move(context)})};
  }
  [[noreturn]] static void instantiation_error() {
    throw_error(Term::make_atom("instantiation_error"));
  }
  [[noreturn]] static void type_error(std::string_view type, const Term& culprit) {
    throw_error(Term::make_compound("type_error", {Term::make_atom(type), culprit}));
  }
  [[noreturn]] static void domain_error(std::string_view domain, const Term& culprit) {
    throw_error(Term::make_compound("domain_error", {Term::make_atom(domain), culprit}));
  }
  [[noreturn]] static void existence_error(std::string_view kind, const Term& culprit) {
    throw_error(Term::make_compound("existence_error", {Term::make_atom(kind), culprit}));
  }
  [[noreturn]] static void evaluation_error(std::string_view what) {
    throw_error(Term::make_compound("evaluation_error", {Term::make_atom(what)}));
  }
  [[noreturn]] static void representation_error(std::string_view what) {
    throw_error(Term::make_compound("representation_error", {Term::make_atom(what)}));
  }
  [[noreturn]] static void permission_error(std::string_view action, std::string_view type,
                                            const Term& culprit) {
    throw_error(Term::make_compound(
        "permission_error", {Term::make_atom(action), Term::make_atom(type), culprit}));
  }
  static Term indicator(AtomId name, std::uint32_t arity) {
    return Term::make_compound(std_atoms().slash, {Term::make_atom(name), Term::make_int(arity)});
  }

  // ---- choicepoints ------------------------------------------------------
  ChoicePoint& push_cp(CPKind kind) {
    ChoicePoint cp;
    cp.kind = kind;
    cp.trail_mark = trail.size();
    cp.var_stamp = var_counter();
    cps.push_back(std::move(cp));
    return cps.back();
  }

  void cut_to(std::size_t height) {
    if (cps.size() > height) cps.resize(height);
  }

  // Offers each alternative in turn as a binding for `target`.
  bool unify_alternatives(const Term& target, std::vector<Term> alts) {
    if (alts.empty()) return false;
    if (alts.size() == 1) return unify(target, alts[0]);
    auto shared = std::make_shared<std::vector<Term>>(std::move(alts));
    ChoicePoint& cp = push_cp(CPKind::Redo);
    cp.cont = goals;
    cp.goal = target;
    cp.alternatives = shared;
    cp.next = 1;
    cp.redo = &Machine::redo_alternatives;
    Term first = (*shared)[0];
    return unify(target, first);
  }

  static bool redo_alternatives(Machine& m, std::size_t idx) {
    ChoicePoint& cp = m.cps[idx];
    auto alts = cp.alternatives;
    std::size_t i = cp.next++;
    Term target = cp.goal;
    m.goals = cp.cont;
    if (cp.next >= alts->size()) m.cps.pop_back();
    return m.unify(target, (*alts)[i]);
  }

  // ---- solving -------------------------------------------------------------
  // Runs `goal` to its first solution. Bindings persist on success. Uncaught
  // Prolog exceptions propagate as PrologThrow.
  bool solve_once(const Term& goal) {
    std::size_t base = cps.size();
    Cont saved = goals;
    push_cp(CPKind::Stop);
    goals = Cont::push(goal, cps.size(), Cont());
    try {
      bool ok = run();
      cut_to(base);
      goals = saved;
      return ok;
    } catch (...) {
      cut_to(base);
      goals = saved;
      throw;
    }
  }

  // Drives the machine until the continuation empties (success) or
  // backtracking reaches a Stop choicepoint (failure).
  bool run() {
    while (true) {
      if (goals.empty()) return true;
      Term goal = goals.goal();
      std::size_t cb = goals.cut_barrier();
      goals = goals.next();
      bool ok;
      try {
        ok = step(goal, cb);
      } catch (PrologThrow& t) {
        Term ball = copy(t.ball);
        if (!handle_throw(ball)) throw PrologThrow{ball};
        continue;
      } catch (const std::bad_alloc&) {
        if (!handle_throw(resource_error_ball())) throw PrologThrow{resource_error_ball()};
        continue;
      }
      if (!ok && !backtrack()) return false;
    }
  }

  static Term resource_error_ball() {
    return Term::make_compound(std_atoms().error, {Term::make_compound("resource_error", {Term::make_atom("memory")}),
                                                   Term::make_var()});
  }

  // Unwinds to the innermost active catch/3 whose catcher unifies with the
  // ball. Returns false when a Stop frame is reached first.
  bool handle_throw(const Term& ball) {
    while (!cps.empty()) {
      ChoicePoint& cp = cps.back();
      switch (cp.kind) {
        case CPKind::Stop:
          undo_to(cp.trail_mark);
          cps.pop_back();
          return false;
        case CPKind::Capture:
          if (!captures.empty()) captures.pop_back();
          break;
        case CPKind::Findall:
          if (bags.size() > cp.bag) bags.resize(cp.bag);
          break;
        case CPKind::Catch:
          if (cp.active) {
            undo_to(cp.trail_mark);
            Term catcher = cp.goal;
            Term recovery = cp.aux;
            Cont cont = cp.cont;
            std::size_t cb = cp.cut_barrier;
            std::size_t mark = cp.trail_mark;
            if (unify(catcher, ball)) {
              cps.pop_back();
              goals = Cont::push(Term::make_compound(std_atoms().call, {recovery}), cb, cont);
              return true;
            }
            undo_to(mark);
          }
          break;
        default:
          break;
      }
      undo_to(cps.back().trail_mark);
      cps.pop_back();
    }
    return false;
  }

  bool backtrack() {
    while (true) {
      if (cps.empty()) return false;
      std::size_t idx = cps.size() - 1;
      ChoicePoint& cp = cps[idx];
      undo_to(cp.trail_mark);
      switch (cp.kind) {
        case CPKind::Stop:
          cps.pop_back();
          return false;
        case CPKind::Alt: {
          if (!cp.active) {
            cps.pop_back();
            continue;
          }
          goals = Cont::push(std::move(cp.goal), cp.cut_barrier, cp.cont);
          cps.pop_back();
          return true;
        }
        case CPKind::Catch:
          cps.pop_back();
          continue;
        case CPKind::Capture:
          if (!captures.empty()) captures.pop_back();
          cps.pop_back();
          continue;
        case CPKind::Findall: {
          std::vector<Term> items = std::move(bags[cp.bag]);
          bags.resize(cp.bag);
          Term result = cp.goal;
          Term tail = cp.aux;
          goals = cp.cont;
          cps.pop_back();
          if (unify(result, make_list(std::move(items), tail.is_none() ? Term::make_atom(std_atoms().nil) : tail)))
            return true;
          continue;
        }
        case CPKind::Redo:
          if (cp.redo(*this, idx)) return true;
          continue;
        case CPKind::Clauses: {
          auto list = cp.clauses;
          std::size_t i = cp.next;
          Term goal = cp.goal;
          std::size_t j = next_clause(*list, i + 1, goal);
          Cont cont = cp.cont;
          if (j >= list->size()) cps.pop_back();
          else cps[idx].next = j;
          if (try_clause(*(*list)[i], goal, idx, cont)) return true;
          continue;
        }
      }
    }
  }

  static std::size_t next_clause(const ClauseList& list, std::size_t from, const Term& goal) {
    if (!goal.is_compound()) return from < list.size() ? from : list.size();
    FirstArgKey k = key_of(goal.arg(0));
    for (std::size_t i = from; i < list.size(); ++i)
      if (list[i]->key.compatible(k)) return i;
    return list.size();
  }

  bool try_clause(const Clause& c, const Term& goal, std::size_t cut_barrier, const Cont& cont) {
    std::vector<Term>& frame = frame_;
    frame.clear();
    frame.resize(c.n_vars);
    bool ok = unify_head(c.head, goal, frame);
    if (ok) {
      if (c.body.is_atom(std_atoms().true_)) {
        goals = cont;
      } else {
        goals = Cont::push(instantiate(c.body, frame), cut_barrier, cont);
      }
    }
    frame.clear();
    return ok;
  }

  bool step(const Term& raw, std::size_t cb) {
    const Term& g = deref(raw);
    ++inferences;
    if (g.is_var()) instantiation_error();
    if (!g.is_callable()) type_error("callable", g);
    AtomId name = g.name_id();
    std::uint32_t arity = g.name_arity();
    const Std& S = std_atoms();
    // Control constructs that need no lookup.
    if (arity == 2 && name == S.comma) {
      goals = Cont::push(g.arg(0), cb, Cont::push(g.arg(1), cb, goals));
      return true;
    }
    if (arity == 0) {
      if (name == S.true_) return true;
      if (name == S.cut) {
        cut_to(cb);
        return true;
      }
      if (name == S.fail || name == S.false_) return false;
    }
    auto it = preds.find(pred_key(name, arity));
    if (it == preds.end()) return unknown(g);
    Predicate& p = it->second;
    if (p.builtin) return p.builtin(*this, g, cb);
    auto list = p.clauses;
    std::size_t i = next_clause(*list, 0, g);
    if (i >= list->size()) {
      if (!p.defined && !p.dynamic && list->empty()) return unknown(g);
      return false;
    }
    std::size_t j = next_clause(*list, i + 1, g);
    std::size_t height = cps.size();
    if (j < list->size()) {
      ChoicePoint& cp = push_cp(CPKind::Clauses);
      cp.goal = g;
      cp.clauses = list;
      cp.next = j;
      cp.cont = goals;
    }
    Cont cont = goals;
    return try_clause(*(*list)[i], g, height, cont);
  }

  bool unknown(const Term& g) {
    if (!unknown_error) return false;
    existence_error("procedure", indicator(g.name_id(), g.name_arity()));
  }

  // ---- database ----------------------------------------------------------
  void add_clause(const Term& raw, bool at_end = true, bool from_consult = false) {
    const Term& t = deref(raw);
    Term head = t, body = Term::make_atom(std_atoms().true_);
    if (t.is_compound() && t.functor() == std_atoms().neck && t.arity() == 2) {
      head = deref(t.arg(0));
      body = deref(t.arg(1));
    }
    if (head.is_compound() && head.functor() == std_atoms().colon && head.arity() == 2)
      head = deref(head.arg(1));
    if (head.is_var()) instantiation_error();
    if (!head.is_callable()) type_error("callable", head);
    if (body.is_number()) type_error("callable", body);
    Predicate& p = pred(head.name_id(), head.name_arity());
    if (p.builtin || is_control(head.name_id(), head.name_arity()))
      permission_error("modify", "static_procedure", indicator(head.name_id(), head.name_arity()));
    if (from_consult && p.library && !loading_library) {
      p.clauses = std::make_shared<ClauseList>();
      p.library = false;
    }
    if (loading_library) p.library = true;
    std::unordered_map<VarNode*, std::uint32_t> slots;
    auto c = std::make_shared<Clause>();
    c->head = to_pattern(head, slots);
    c->body = to_pattern(wrap_body_vars(body), slots);
    c->n_vars = static_cast<std::uint32_t>(slots.size());
    c->key = head.is_compound() ? clause_key(c->head.arg(0)) : FirstArgKey{};
    p.defined = true;
    if (p.clauses.use_count() > 1) p.clauses = std::make_shared<ClauseList>(*p.clauses);
    if (at_end) p.clauses->push_back(std::move(c));
    else p.clauses->insert(p.clauses->begin(), std::move(c));
  }

  static FirstArgKey clause_key(const Term& pattern_arg) {
    if (pattern_arg.is_local()) return {};
    return key_of(pattern_arg);
  }

  static bool is_control(AtomId name, std::uint32_t arity) {
    const Std& S = std_atoms();
    if (arity == 2 && (name == S.comma || name == S.semicolon || name == S.arrow || name == S.soft_arrow))
      return true;
    if (arity == 0 && (name == S.true_ || name == S.cut || name == S.fail || name == S.false_)) return true;
    return false;
  }

  // Variables in goal positions become call(V).
  Term wrap_body_vars(const Term& raw) {
    const Term& t = deref(raw);
    if (t.is_var()) return Term::make_compound(std_atoms().call, {t});
    const Std& S = std_atoms();
    if (t.is_compound() && t.arity() == 2 &&
        (t.functor() == S.comma || t.functor() == S.semicolon || t.functor() == S.arrow ||
         t.functor() == S.soft_arrow)) {
      // Long conjunctions nest to the right; walk them iteratively.
      std::vector<Term> chain;
      Term cur = t;
      while (cur.is_compound() && cur.arity() == 2 && cur.functor() == S.comma) {
        chain.push_back(cur);
        cur = deref(cur.arg(1));
      }
      if (chain.empty()) {
        return Term::make_compound(t.functor(), {wrap_body_vars(t.arg(0)), wrap_body_vars(t.arg(1))});
      }
      Term acc = wrap_body_vars(cur);
      for (auto it = chain.rbegin(); it != chain.rend(); ++it)
        acc = Term::make_compound(S.comma, {wrap_body_vars(it->arg(0)), std::move(acc)});
      return acc;
    }
    return t;
  }

 private:
  std::vector<std::pair<const Term*, const Term*>> unify_stack_;
  std::vector<std::pair<const Term*, const Term*>> head_stack_;
  std::vector<const Term*> chain_;
  std::vector<Term> frame_;
  char last_out_char_ = '\n';
};

// ---- list helpers ------------------------------------------------------------

// Collects the elements of a proper list. Throws instantiation_error for a
// partial list and type_error(list) for anything else.
inline std::vector<Term> list_to_vector(const Term& raw) {
  std::vector<Term> out;
  Term cur = deref(raw);
  while (is_cons(cur)) {
    out.push_back(deref(cur.arg(0)));
    cur = deref(cur.arg(1));
  }
  if (cur.is_var()) Machine::instantiation_error();
  if (!is_nil(cur)) Machine::type_error("list", raw);
  return out;
}

}  // namespace vprolog
