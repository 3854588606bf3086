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

// Loading source text: clauses, directives, DCG rules and initialization
// goals.

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "builtins.hpp"
#include "machine.hpp"
#include "prelude.hpp"
#include "text.hpp"

namespace vprolog {

inline Term dcg_body(const Term& raw, const Term& s0, const Term& s);

inline Term dcg_nonterminal(const Term& t, const Term& s0, const Term& s) {
  if (t.is_atom()) return Term::make_compound(t.atom_id(), {s0, s});
  std::vector<Term> args;
  for (std::uint32_t i = 0; i < t.arity(); ++i) args.push_back(t.arg(i));
  args.push_back(s0);
  args.push_back(s);
  return Term::make_compound(t.functor(), std::move(args));
}

inline Term dcg_body(const Term& raw, const Term& s0, const Term& s) {
  const Std& S = std_atoms();
  Term t = deref(raw);
  auto eq = [](Term a, Term b) { return Term::make_compound(std_atoms().equals, {std::move(a), std::move(b)}); };
  if (t.is_var()) return mk("phrase", {t, s0, s});
  if (t.is_compound() && t.arity() == 2 && t.functor() == S.comma) {
    Term mid = Term::make_var();
    return Term::make_compound(S.comma, {dcg_body(t.arg(0), s0, mid), dcg_body(t.arg(1), mid, s)});
  }
  if (t.is_compound() && t.arity() == 2 && (t.functor() == S.semicolon || t.functor() == S.bar))
    return Term::make_compound(S.semicolon, {dcg_body(t.arg(0), s0, s), dcg_body(t.arg(1), s0, s)});
  if (t.is_compound() && t.arity() == 2 && t.functor() == S.arrow) {
    Term mid = Term::make_var();
    return Term::make_compound(S.arrow, {dcg_body(t.arg(0), s0, mid), dcg_body(t.arg(1), mid, s)});
  }
  if (t.is_compound() && t.arity() == 1 && t.functor() == S.not_provable)
    return Term::make_compound(S.comma, {Term::make_compound(S.not_provable, {dcg_body(t.arg(0), s0, Term::make_var())}),
                                         eq(s0, s)});
  if (t.is_compound() && t.arity() == 1 && t.functor() == S.curly)
    return Term::make_compound(S.comma, {t.arg(0), eq(s0, s)});
  if (t.is_atom(S.cut)) return Term::make_compound(S.comma, {t, eq(s0, s)});
  if (is_nil(t)) return eq(s0, s);
  if (is_cons(t)) {
    std::vector<Term> items = list_to_vector(t);
    return eq(s0, make_list(std::move(items), s));
  }
  if (t.is_string()) {
    std::vector<Term> items;
    for (auto cp : utf8_codes(t.string_value())) items.push_back(Term::make_int(cp));
    return eq(s0, make_list(std::move(items), s));
  }
  if (t.is_compound() && t.functor() == S.call) {
    std::vector<Term> args;
    for (std::uint32_t i = 0; i < t.arity(); ++i) args.push_back(t.arg(i));
    args.push_back(s0);
    args.push_back(s);
    return Term::make_compound(S.call, std::move(args));
  }
  if (!t.is_callable()) Machine::type_error("callable", t);
  return dcg_nonterminal(t, s0, s);
}

inline Term dcg_transform(const Term& rule) {
  Term head = deref(rule.arg(0));
  Term s0 = Term::make_var(), s = Term::make_var();
  if (head.is_compound() && head.functor() == std_atoms().comma && head.arity() == 2) {
    // Pushback: H, PB --> B  becomes  H(S0,S) :- B(S0,S1), S = PB + S1.
    Term mid = Term::make_var();
    Term nt = dcg_nonterminal(deref(head.arg(0)), s0, s);
    Term body = dcg_body(rule.arg(1), s0, mid);
    Term pb = dcg_body(head.arg(1), s, mid);
    return Term::make_compound(std_atoms().neck, {nt, Term::make_compound(std_atoms().comma, {body, pb})});
  }
  if (!head.is_callable()) Machine::type_error("callable", head);
  return Term::make_compound(std_atoms().neck, {dcg_nonterminal(head, s0, s), dcg_body(rule.arg(1), s0, s)});
}

inline void report(Machine& m, const char* level, const std::string& where, const std::string& msg) {
  std::string text;
  if (!where.empty()) text += std::string(level) + ": " + where + ":\n" + level + ":    ";
  else text += std::string(level) + ": ";
  text += msg + "\n";
  m.err(text);
}

inline void report_error(Machine& m, const std::string& where, const std::string& msg) {
  report(m, "ERROR", where, msg);
  ++m.error_count;
  if (m.halt_on_error) throw HaltRequest{1};
}

// Runs a directive once, reporting failure and uncaught errors.
inline void run_directive(Machine& m, const Term& goal, const std::string& where) {
  try {
    if (!m.solve_once(goal)) {
      report(m, "Warning", where, "Goal (directive) failed: user:" + m.to_text(goal, true));
      ++m.warning_count;
    }
  } catch (PrologThrow& t) {
    report_error(m, where, describe_error(m, t.ball));
  }
}

inline void handle_directive(Machine& m, const Term& d, const std::string& where) {
  Term goal = deref(d);
  if (goal.is_compound() && atom_name(goal.functor()) == "initialization") {
    Term g = goal.arg(0);
    std::string when = goal.arity() == 2 ? atom_name(A(goal, 1).is_atom() ? A(goal, 1).atom_id() : atom("now")) : "";
    if (when == "main") {
      m.main_goal = g;
    } else if (when == "now") {
      run_directive(m, g, where);
    } else {
      m.init_goals.push_back(g);
    }
    return;
  }
  run_directive(m, goal, where);
}

// Loads clauses and directives from source text.
inline void consult_text(Machine& m, std::string_view src, const std::string& name) {
  std::string saved_file = m.current_file;
  m.current_file = name;
  std::vector<Term> saved_init = std::move(m.init_goals);
  m.init_goals.clear();
  Parser parser(src, m.ops, m.read_flags);
  while (true) {
    ReadResult r;
    int line = parser.line();
    try {
      r = parser.read();
    } catch (const SyntaxError& e) {
      report_error(m, name + ":" + std::to_string(e.line), std::string("Syntax error: ") + e.what());
      parser.recover();
      continue;
    }
    if (r.term.is_none()) break;
    std::string where = name + ":" + std::to_string(line + 1);
    Term t = r.term;
    const Std& S = std_atoms();
    try {
      if (t.is_compound() && t.functor() == S.neck && t.arity() == 1) {
        handle_directive(m, t.arg(0), where);
        continue;
      }
      if (t.is_compound() && atom_name(t.functor()) == "?-" && t.arity() == 1) {
        handle_directive(m, t.arg(0), where);
        continue;
      }
      if (t.is_compound() && t.functor() == S.dcg_arrow && t.arity() == 2) t = dcg_transform(t);
      m.add_clause(t, true, true);
    } catch (PrologThrow& e) {
      report_error(m, where, describe_error(m, e.ball));
    }
  }
  std::vector<Term> inits = std::move(m.init_goals);
  m.init_goals = std::move(saved_init);
  for (auto& g : inits) run_directive(m, g, name);
  m.current_file = saved_file;
}

inline bool consult_file(Machine& m, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string resolved = path;
  if (!in) {
    in.open(path + ".pl", std::ios::binary);
    resolved = path + ".pl";
  }
  if (!in) {
    report_error(m, "", "source_sink `" + path + "' does not exist");
    return false;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  consult_text(m, ss.str(), resolved);
  return true;
}

inline bool bi_consult(Machine& m, const Term& g, size_t) {
  const Term& spec = A(g, 0);
  std::vector<Term> files = is_cons(spec) ? list_to_vector(spec) : std::vector<Term>{spec};
  for (auto& f : files) {
    std::string path = require_text(f);
    if (!consult_file(m, path)) Machine::existence_error("source_sink", f);
  }
  return true;
}

inline void boot(Machine& m) {
  register_builtins(m);
  m.def("consult", 1, bi_consult);
  m.def("[|]", 2, [](Machine& mm, const Term& g, size_t cb) {
    return bi_consult(mm, Term::make_compound(atom("consult"), {g}), cb);
  });
  m.loading_library = true;
  consult_text(m, kPrelude, "prelude");
  m.loading_library = false;
}

}  // namespace vprolog
