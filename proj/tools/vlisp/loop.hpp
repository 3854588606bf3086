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

// The extended loop macro, interpreted directly from its clause list.
// Iteration drivers run first on every pass, then the body clauses in order.

#pragma once

#include <chrono>
#include <string>
#include <thread>
#include <vector>

#include "interp.hpp"

namespace vlisp {

inline std::size_t seq_length(const Val& seq);
inline Val seq_elt(const Val& seq, std::size_t i);

namespace loop_detail {

inline std::string kw(const Val& v) {
  if (!v.is(Kind::Symbol)) return {};
  const std::string& n = v.as<Symbol>()->name;
  return n.size() > 1 && n[0] == ':' ? n.substr(1) : n;
}

struct Driver {
  enum K { Num, In, On, Across, Eq, Hash, Repeat } k = Num;
  Val var;
  Val from, to, by, seq_form, then_form;
  bool down = false, inclusive = true, has_to = false, has_then = false, values = false;
  Symbol* other = nullptr;  // hash "using" variable
  // iteration state
  Val cur, limit, step, seq;
  std::size_t index = 0;
  std::vector<std::pair<Val, Val>> entries;
};

struct Clause {
  enum K { Do, Collect, Append, Nconc, Sum, Count, Max, Min, While, Until, Always, Never, Thereis,
           Return, Cond } k = Do;
  std::vector<Val> forms;
  Symbol* into = nullptr;
  bool negate = false;
  std::vector<Clause> then_, else_;
};

struct Acc {
  Symbol* name = nullptr;
  Clause::K kind = Clause::Collect;
  Val value, tail;
  bool touched = false;
};

struct Parser {
  std::vector<Val> t;
  std::size_t i = 0;

  bool at_end() const { return i >= t.size(); }
  std::string peek() const { return at_end() ? std::string() : kw(t[i]); }
  Val next() {
    if (at_end()) fail("LOOP: unexpected end of clauses", "PROGRAM-ERROR");
    return t[i++];
  }
  void skip_type() {
    static const char* types[] = {"FIXNUM", "INTEGER", "FLOAT", "NUMBER", "T", "DOUBLE-FLOAT",
                                  "SINGLE-FLOAT", "STRING", "CHARACTER", "LIST", "SYMBOL"};
    if (peek() == "OF-TYPE") {
      i += 2;
      return;
    }
    for (const char* ty : types)
      if (!at_end() && t[i].is(Kind::Symbol) && t[i].as<Symbol>()->name == ty) {
        ++i;
        return;
      }
  }

  Clause parse_body_clause() {
    Clause c;
    std::string k = peek();
    next();
    auto into = [&] {
      if (peek() == "INTO") {
        next();
        c.into = require_symbol(next());
      }
    };
    if (k == "DO" || k == "DOING") {
      c.k = Clause::Do;
      while (!at_end() && consp(t[i])) c.forms.push_back(t[i++]);
    } else if (k == "COLLECT" || k == "COLLECTING") {
      c.k = Clause::Collect;
      c.forms.push_back(next());
      into();
    } else if (k == "APPEND" || k == "APPENDING") {
      c.k = Clause::Append;
      c.forms.push_back(next());
      into();
    } else if (k == "NCONC" || k == "NCONCING") {
      c.k = Clause::Nconc;
      c.forms.push_back(next());
      into();
    } else if (k == "SUM" || k == "SUMMING") {
      c.k = Clause::Sum;
      c.forms.push_back(next());
      skip_type();
      into();
    } else if (k == "COUNT" || k == "COUNTING") {
      c.k = Clause::Count;
      c.forms.push_back(next());
      skip_type();
      into();
    } else if (k == "MAXIMIZE" || k == "MAXIMIZING") {
      c.k = Clause::Max;
      c.forms.push_back(next());
      skip_type();
      into();
    } else if (k == "MINIMIZE" || k == "MINIMIZING") {
      c.k = Clause::Min;
      c.forms.push_back(next());
      skip_type();
      into();
    } else if (k == "WHILE") {
      c.k = Clause::While;
      c.forms.push_back(next());
    } else if (k == "UNTIL") {
      c.k = Clause::Until;
      c.forms.push_back(next());
    } else if (k == "ALWAYS") {
      c.k = Clause::Always;
      c.forms.push_back(next());
    } else if (k == "NEVER") {
      c.k = Clause::Never;
      c.forms.push_back(next());
    } else if (k == "THEREIS") {
      c.k = Clause::Thereis;
      c.forms.push_back(next());
    } else if (k == "RETURN") {
      c.k = Clause::Return;
      c.forms.push_back(next());
    } else if (k == "WHEN" || k == "IF" || k == "UNLESS") {
      c.k = Clause::Cond;
      c.negate = k == "UNLESS";
      c.forms.push_back(next());
      c.then_.push_back(parse_body_clause());
      while (peek() == "AND") {
        next();
        c.then_.push_back(parse_body_clause());
      }
      if (peek() == "ELSE") {
        next();
        c.else_.push_back(parse_body_clause());
        while (peek() == "AND") {
          next();
          c.else_.push_back(parse_body_clause());
        }
      }
      if (peek() == "END") next();
    } else {
      fail("LOOP: unknown clause " + k, "PROGRAM-ERROR");
    }
    return c;
  }

  Driver parse_for() {
    Driver d;
    d.var = next();
    skip_type();
    std::string k = peek();
    if (k == "IN" || k == "ON") {
      next();
      d.k = k == "IN" ? Driver::In : Driver::On;
      d.seq_form = next();
      if (peek() == "BY") {
        next();
        d.by = next();
      }
      return d;
    }
    if (k == "ACROSS") {
      next();
      d.k = Driver::Across;
      d.seq_form = next();
      return d;
    }
    if (k == "=") {
      next();
      d.k = Driver::Eq;
      d.from = next();
      if (peek() == "THEN") {
        next();
        d.then_form = next();
        d.has_then = true;
      }
      return d;
    }
    if (k == "BEING") {
      next();
      if (peek() == "THE" || peek() == "EACH") next();
      std::string what = kw(next());
      d.k = Driver::Hash;
      d.values = what == "HASH-VALUES" || what == "HASH-VALUE";
      if (what != "HASH-KEYS" && what != "HASH-KEY" && !d.values)
        fail("LOOP: unsupported iteration " + what, "PROGRAM-ERROR");
      next();  // OF or IN
      d.seq_form = next();
      if (peek() == "USING") {
        next();
        Val u = next();
        d.other = require_symbol(car(cdr(u)));
      }
      return d;
    }
    // Arithmetic.
    d.k = Driver::Num;
    d.from = Val::fix(0);
    bool any = false;
    for (;;) {
      k = peek();
      if (k == "FROM" || k == "UPFROM") {
        next();
        d.from = next();
      } else if (k == "DOWNFROM") {
        next();
        d.from = next();
        d.down = true;
      } else if (k == "TO" || k == "UPTO") {
        next();
        d.to = next();
        d.has_to = true;
      } else if (k == "BELOW") {
        next();
        d.to = next();
        d.has_to = true;
        d.inclusive = false;
      } else if (k == "DOWNTO") {
        next();
        d.to = next();
        d.has_to = true;
        d.down = true;
      } else if (k == "ABOVE") {
        next();
        d.to = next();
        d.has_to = true;
        d.down = true;
        d.inclusive = false;
      } else if (k == "BY") {
        next();
        d.by = next();
      } else {
        break;
      }
      any = true;
    }
    if (!any) fail("LOOP: malformed FOR clause", "PROGRAM-ERROR");
    return d;
  }
};

inline void assign(Interp& m, const Val& pattern, const Val& value, const Val& env) {
  if (pattern.nil()) return;
  if (is_symbol(pattern)) {
    m.set_var(symbol_of(pattern), value, env);
    return;
  }
  if (consp(pattern)) {
    assign(m, car(pattern), consp(value) ? car(value) : Val(), env);
    assign(m, cdr(pattern), consp(value) ? cdr(value) : Val(), env);
  }
}

inline void declare(Env* frame, const Val& pattern) {
  if (pattern.nil()) return;
  if (is_symbol(pattern)) {
    frame->vars.push_back({symbol_of(pattern), Val(), false});
    return;
  }
  if (consp(pattern)) {
    declare(frame, car(pattern));
    declare(frame, cdr(pattern));
  }
}

}  // namespace loop_detail

inline Val Interp::eval_loop(const Val& form, const Val& env) {
  using namespace loop_detail;
  Symbol* nil_sym = intern("NIL");
  Val rest = cdr(form);
  if (!consp(rest)) {
    for (;;) std::this_thread::sleep_for(std::chrono::seconds(1));
  }
  if (consp(car(rest))) {
    try {
      for (;;)
        for (Val c = rest; consp(c); c = cdr(c)) eval(car(c), env);
    } catch (BlockExit& b) {
      if (b.name != nil_sym) throw;
      return std::move(b.value);
    }
  }

  Parser p{to_vector(rest)};
  Symbol* name = nil_sym;
  std::vector<std::pair<Val, Val>> withs;
  std::vector<Driver> drivers;
  std::vector<Clause> body;
  std::vector<Val> initially, finally;
  bool has_always = false;
  while (!p.at_end()) {
    std::string k = p.peek();
    if (k == "NAMED") {
      p.next();
      name = require_symbol(p.next());
    } else if (k == "WITH") {
      p.next();
      for (;;) {
        Val v = p.next();
        p.skip_type();
        Val init;
        if (p.peek() == "=") {
          p.next();
          init = p.next();
        }
        withs.emplace_back(v, init);
        if (p.peek() != "AND") break;
        p.next();
      }
    } else if (k == "FOR" || k == "AS") {
      p.next();
      drivers.push_back(p.parse_for());
      while (p.peek() == "AND") {
        p.next();
        drivers.push_back(p.parse_for());
      }
    } else if (k == "REPEAT") {
      p.next();
      Driver d;
      d.k = Driver::Repeat;
      d.from = p.next();
      drivers.push_back(std::move(d));
    } else if (k == "INITIALLY" || k == "FINALLY") {
      p.next();
      auto& dst = k == "INITIALLY" ? initially : finally;
      while (!p.at_end() && consp(p.t[p.i])) dst.push_back(p.t[p.i++]);
    } else {
      body.push_back(p.parse_body_clause());
      if (body.back().k == Clause::Always || body.back().k == Clause::Never) has_always = true;
    }
  }

  Val holder;
  Env* frame = new_frame(env, holder);
  for (auto& [v, init] : withs) {
    declare(frame, v);
    if (init.truthy()) assign(*this, v, eval(init, holder), holder);
  }
  for (auto& d : drivers) {
    declare(frame, d.var);
    if (d.other) frame->vars.push_back({d.other, Val(), false});
  }

  // Accumulators: the unnamed one plus one per INTO variable.
  std::vector<Acc> accs;
  Acc* default_acc = nullptr;
  std::function<void(const std::vector<Clause>&)> scan = [&](const std::vector<Clause>& cs) {
    for (const auto& c : cs) {
      if (c.k == Clause::Cond) {
        scan(c.then_);
        scan(c.else_);
        continue;
      }
      if (c.k < Clause::Collect || c.k > Clause::Min) continue;
      bool found = false;
      for (auto& a : accs)
        if (a.name == c.into) found = true;
      if (found) continue;
      Acc a;
      a.name = c.into;
      a.kind = c.k;
      if (c.k == Clause::Sum || c.k == Clause::Count) a.value = Val::fix(0);
      accs.push_back(a);
      if (c.into) frame->vars.push_back({c.into, accs.back().value, false});
    }
  };
  scan(body);
  for (auto& a : accs)
    if (!a.name) default_acc = &a;

  auto acc_for = [&](Symbol* into) -> Acc& {
    for (auto& a : accs)
      if (a.name == into) return a;
    fail("LOOP: missing accumulator");
  };
  auto publish = [&](Acc& a) {
    if (a.name) set_var(a.name, a.value, holder);
  };
  auto append_items = [&](Acc& a, const Val& items, bool copy) {
    if (a.name) a.value = lookup_var(a.name, holder);
    if (a.value.nil()) a.tail = Val();
    Val cur = items;
    while (consp(cur)) {
      Val cell = copy ? cons(car(cur), Val()) : cur;
      if (a.value.nil()) {
        a.value = cell;
      } else {
        a.tail.as<Cons>()->cdr = cell;
      }
      a.tail = cell;
      if (!copy) {
        while (consp(cdr(a.tail))) a.tail = cdr(a.tail);
        break;
      }
      cur = cdr(cur);
    }
    publish(a);
  };

  struct Stop {};
  struct Done {
    Val v;
  };

  std::function<void(const Clause&, const Val&)> run = [&](const Clause& c, const Val& it) {
    auto value = [&](const Val& f) {
      if (f.is(Kind::Symbol) && f.as<Symbol>()->name == "IT" && it.truthy()) return it;
      return eval(f, holder);
    };
    switch (c.k) {
      case Clause::Do:
        for (const auto& f : c.forms) eval(f, holder);
        break;
      case Clause::Collect: {
        Acc& a = acc_for(c.into);
        append_items(a, cons(value(c.forms[0]), Val()), true);
        break;
      }
      case Clause::Append:
        append_items(acc_for(c.into), value(c.forms[0]), true);
        break;
      case Clause::Nconc:
        append_items(acc_for(c.into), value(c.forms[0]), false);
        break;
      case Clause::Sum: {
        Acc& a = acc_for(c.into);
        if (a.name) a.value = lookup_var(a.name, holder);
        a.value = arith_add(a.value, value(c.forms[0]));
        publish(a);
        break;
      }
      case Clause::Count: {
        Acc& a = acc_for(c.into);
        if (a.name) a.value = lookup_var(a.name, holder);
        if (value(c.forms[0]).truthy()) a.value = arith_add(a.value, Val::fix(1));
        publish(a);
        break;
      }
      case Clause::Max:
      case Clause::Min: {
        Acc& a = acc_for(c.into);
        Val v = value(c.forms[0]);
        if (!a.touched || (c.k == Clause::Max ? num_compare(v, a.value) > 0 : num_compare(v, a.value) < 0))
          a.value = v;
        a.touched = true;
        publish(a);
        break;
      }
      case Clause::While:
        if (!eval(c.forms[0], holder).truthy()) throw Stop{};
        break;
      case Clause::Until:
        if (eval(c.forms[0], holder).truthy()) throw Stop{};
        break;
      case Clause::Always:
        if (!eval(c.forms[0], holder).truthy()) throw Done{Val()};
        break;
      case Clause::Never:
        if (eval(c.forms[0], holder).truthy()) throw Done{Val()};
        break;
      case Clause::Thereis: {
        Val v = eval(c.forms[0], holder);
        if (v.truthy()) throw Done{v};
        break;
      }
      case Clause::Return:
        throw Done{value(c.forms[0])};
      case Clause::Cond: {
        Val t = eval(c.forms[0], holder);
        bool hit = t.truthy() != c.negate;
        for (const auto& sub : hit ? c.then_ : c.else_) run(sub, t);
        break;
      }
    }
  };

  auto numeric_done = [&](const Driver& d) {
    if (!d.has_to) return false;
    int cmp = num_compare(d.cur, d.limit);
    if (d.down) return d.inclusive ? cmp < 0 : cmp <= 0;
    return d.inclusive ? cmp > 0 : cmp >= 0;
  };

  // Returns false when the driver is exhausted.
  auto advance = [&](Driver& d, bool first) -> bool {
    switch (d.k) {
      case Driver::Num:
        if (first) {
          d.cur = eval(d.from, holder);
          if (d.has_to) d.limit = eval(d.to, holder);
          d.step = d.by.truthy() ? eval(d.by, holder) : Val::fix(1);
        } else {
          d.cur = d.down ? arith_sub(d.cur, d.step) : arith_add(d.cur, d.step);
        }
        if (numeric_done(d)) return false;
        assign(*this, d.var, d.cur, holder);
        return true;
      case Driver::In:
      case Driver::On:
        if (first) {
          d.cur = eval(d.seq_form, holder);
          if (d.by.truthy()) d.step = eval(d.by, holder);
        } else if (d.step.truthy()) {
          d.cur = funcall(d.step, {d.cur});
        } else {
          d.cur = consp(d.cur) ? cdr(d.cur) : Val();
        }
        if (!consp(d.cur)) return false;
        assign(*this, d.var, d.k == Driver::In ? car(d.cur) : d.cur, holder);
        return true;
      case Driver::Across:
        if (first) {
          d.seq = eval(d.seq_form, holder);
          d.index = 0;
        } else {
          ++d.index;
        }
        if (d.index >= seq_length(d.seq)) return false;
        assign(*this, d.var, seq_elt(d.seq, d.index), holder);
        return true;
      case Driver::Eq:
        if (first || !d.has_then) {
          assign(*this, d.var, eval(d.from, holder), holder);
        } else {
          assign(*this, d.var, eval(d.then_form, holder), holder);
        }
        return true;
      case Driver::Hash: {
        if (first) {
          Val h = eval(d.seq_form, holder);
          if (!h.is(Kind::Hash)) fail("LOOP: not a hash table", "TYPE-ERROR");
          auto* ho = h.as<HashObj>();
          for (const auto& key : ho->order) {
            auto it = ho->map.find(key);
            if (it != ho->map.end()) d.entries.emplace_back(it->first, it->second);
          }
          d.index = 0;
        } else {
          ++d.index;
        }
        if (d.index >= d.entries.size()) return false;
        const auto& [key, val] = d.entries[d.index];
        assign(*this, d.var, d.values ? val : key, holder);
        if (d.other) set_var(d.other, d.values ? key : val, holder);
        return true;
      }
      case Driver::Repeat:
        if (first) {
          d.cur = eval(d.from, holder);
        } else {
          d.cur = arith_sub(d.cur, Val::fix(1));
        }
        return num_compare(d.cur, Val::fix(0)) > 0;
    }
    return false;
  };

  try {
    for (const auto& f : initially) eval(f, holder);
    try {
      for (bool first = true;; first = false) {
        bool more = true;
        for (auto& d : drivers)
          if (!advance(d, first)) {
            more = false;
            break;
          }
        if (!more) break;
        for (const auto& c : body) run(c, Val());
      }
    } catch (Stop&) {
    }
    for (const auto& f : finally) eval(f, holder);
    if (default_acc) return default_acc->value;
    return has_always ? T() : Val();
  } catch (Done& d) {
    return std::move(d.v);
  } catch (BlockExit& b) {
    if (b.name != name && b.name != nil_sym) throw;
    return std::move(b.value);
  }
}

}  // namespace vlisp
