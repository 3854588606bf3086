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

// The evaluator: special forms, the common macros (implemented natively),
// closures with tail calls, setf places and the loop facility.

#pragma once

#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "object.hpp"
#include "syntax.hpp"

namespace vlisp {

enum Form {
  F_NONE = 0, F_QUOTE, F_FUNCTION, F_IF, F_PROGN, F_LET, F_LETSTAR, F_SETQ, F_LAMBDA,
  F_BLOCK, F_RETURN_FROM, F_RETURN, F_FLET, F_LABELS, F_TAGBODY, F_GO, F_UNWIND_PROTECT,
  F_MVB, F_MVL, F_NTH_VALUE, F_THE, F_LOCALLY, F_DECLARE, F_DEFUN, F_DEFMACRO, F_DEFVAR,
  F_DEFPARAMETER, F_DEFCONSTANT, F_COND, F_WHEN, F_UNLESS, F_AND, F_OR, F_CASE, F_ECASE,
  F_TYPECASE, F_DOTIMES, F_DOLIST, F_DO, F_DOSTAR, F_LOOP, F_SETF, F_INCF, F_DECF, F_PUSH,
  F_POP, F_PUSHNEW, F_PROG1, F_PROG2, F_HANDLER_CASE, F_IGNORE_ERRORS, F_DEFSTRUCT, F_WOTS,
  F_DBIND, F_QUASI, F_ASSERT, F_IGNORED, F_CATCH, F_THROW, F_PSETQ, F_ROTATEF, F_EVAL_WHEN,
  F_ETYPECASE, F_CCASE, F_WITH_SLOTS, F_MVSETQ, F_DEFGENERIC, F_HANDLER_BIND, F_MVCALL,
};

struct BlockExit {
  Symbol* name;
  Val value;
};
struct GoExit {
  Val tag;
};
struct ThrowExit {
  Val tag;
  Val value;
};
struct ExitRequest {
  int code;
};

class Interp {
 public:
  Interp();

  // ---- output ---------------------------------------------------------
  void write(std::string_view s) {
    if (!captures.empty()) {
      captures.back() += s;
    } else {
      std::fwrite(s.data(), 1, s.size(), stdout);
      if (!s.empty()) column_zero = s.back() == '\n';
    }
    if (!captures.empty() && !s.empty()) capture_col_zero = s.back() == '\n';
  }
  bool at_line_start() const { return captures.empty() ? column_zero : capture_col_zero; }

  // ---- evaluation -----------------------------------------------------
  Val eval(Val form, Val env);
  Val progn(const Val& body, const Val& env);
  Val apply(const Val& fn, std::vector<Val>& args);
  Val funcall(const Val& fn, std::vector<Val> args) { return apply(fn, args); }
  Val function_value(const Val& designator);

  Val make_closure(const Val& lambda_list, const Val& body, const Val& env, std::string name);
  std::shared_ptr<LambdaList> parse_lambda_list(const Val& ll);
  void bind_params(const LambdaList& ll, std::vector<Val>& args, Env* frame, const Val& env,
                   const std::string& who);
  void destructure(const Val& pattern, const Val& value, Env* frame, const Val& env);

  void def_builtin(const char* name, BuiltinFn fn, int min, int max = -1) {
    auto* f = new Function();
    f->name = name;
    f->builtin = fn;
    f->min_args = min;
    f->max_args = max;
    intern(name)->function = Val::adopt(f);
  }

  // Structure accessors: symbol -> (type, slot index); index -1 for the
  // constructor, -2 for the predicate, -3 for the copier.
  struct Accessor {
    std::shared_ptr<StructType> type;
    int index;
    std::vector<Val> defaults;
  };
  std::unordered_map<Symbol*, Accessor> accessors;
  std::unordered_map<std::string, std::shared_ptr<StructType>> struct_types;

  std::vector<std::string> captures;
  bool column_zero = true;
  bool capture_col_zero = true;
  std::vector<Val> mv;
  bool mv_set = false;
  Function* calling = nullptr;  // the builtin being applied
  bool mv_fresh = false;        // set by a builtin that returned several values
  int depth = 0;
  int max_depth = 20000;
  std::uint64_t gensym_counter = 0;

  // ---- helpers shared with builtins ------------------------------------
  Val lookup_var(Symbol* s, const Val& env);
  void set_var(Symbol* s, Val v, const Val& env);
  Val lookup_function(Symbol* s, const Val& env, bool must = true);

  Val eval_loop(const Val& form, const Val& env);
  Val eval_setf_place(const Val& place, Val value, const Val& env);
  Val quasi(const Val& tmpl, const Val& env, int level);
  Val macroexpand_1(const Val& form, const Val& env, bool& expanded);
  Val eval_defstruct(const Val& form);

  struct Place {
    enum K { Var, Car, Cdr, Nth, Hash, Aref, Struct, SymVal, Fill } k = Var;
    Symbol* var = nullptr;
    Val obj, key, dflt;
    std::vector<Val> idx;
    int slot = 0;
  };
  Place resolve_place(const Val& place, const Val& env);
  Val place_get(const Place& p, const Val& env);
  void place_set(const Place& p, const Val& v, const Val& env);

 private:
  Val call_closure_blocked(Function* f, const Val& env);
  Val let_form(const Val& form, Val& env, bool sequential, bool& tail, Val& tail_form);
};

// ---------------------------------------------------------------------------

struct DepthGuard {
  Interp& m;
  explicit DepthGuard(Interp& i) : m(i) {
    if (++m.depth > m.max_depth) {
      --m.depth;
      fail("Control stack exhausted (no more space for function call frames).",
           "STORAGE-CONDITION");
    }
  }
  ~DepthGuard() { --m.depth; }
};

struct SpecialRestore {
  std::vector<std::tuple<Symbol*, Val, bool>> saved;
  ~SpecialRestore() {
    for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
      auto& [s, v, b] = *it;
      s->value = v;
      s->bound = b;
    }
  }
};

inline Symbol* require_symbol(const Val& v, const char* what = "symbol") {
  if (!is_symbol(v)) fail(std::string("The value ") + to_string(v, true) + " is not of type " + what,
                          "TYPE-ERROR");
  return symbol_of(v);
}

inline Env* new_frame(const Val& parent, Val& holder) {
  auto* e = new Env(parent);
  holder = Val::adopt(e);
  return e;
}

inline Interp::Interp() {
  struct {
    const char* name;
    int id;
  } forms[] = {
      {"QUOTE", F_QUOTE}, {"FUNCTION", F_FUNCTION}, {"IF", F_IF}, {"PROGN", F_PROGN},
      {"LET", F_LET}, {"LET*", F_LETSTAR}, {"SETQ", F_SETQ}, {"LAMBDA", F_LAMBDA},
      {"BLOCK", F_BLOCK}, {"RETURN-FROM", F_RETURN_FROM}, {"RETURN", F_RETURN},
      {"FLET", F_FLET}, {"LABELS", F_LABELS}, {"TAGBODY", F_TAGBODY}, {"GO", F_GO},
      {"UNWIND-PROTECT", F_UNWIND_PROTECT}, {"MULTIPLE-VALUE-BIND", F_MVB},
      {"MULTIPLE-VALUE-LIST", F_MVL}, {"NTH-VALUE", F_NTH_VALUE}, {"THE", F_THE},
      {"LOCALLY", F_LOCALLY}, {"DECLARE", F_DECLARE}, {"DEFUN", F_DEFUN},
      {"DEFMACRO", F_DEFMACRO}, {"DEFVAR", F_DEFVAR}, {"DEFPARAMETER", F_DEFPARAMETER},
      {"DEFCONSTANT", F_DEFCONSTANT}, {"COND", F_COND}, {"WHEN", F_WHEN}, {"UNLESS", F_UNLESS},
      {"AND", F_AND}, {"OR", F_OR}, {"CASE", F_CASE}, {"ECASE", F_ECASE},
      {"TYPECASE", F_TYPECASE}, {"ETYPECASE", F_ETYPECASE}, {"DOTIMES", F_DOTIMES},
      {"DOLIST", F_DOLIST}, {"DO", F_DO}, {"DO*", F_DOSTAR}, {"LOOP", F_LOOP}, {"SETF", F_SETF},
      {"INCF", F_INCF}, {"DECF", F_DECF}, {"PUSH", F_PUSH}, {"POP", F_POP},
      {"PUSHNEW", F_PUSHNEW}, {"PROG1", F_PROG1}, {"PROG2", F_PROG2},
      {"HANDLER-CASE", F_HANDLER_CASE}, {"IGNORE-ERRORS", F_IGNORE_ERRORS},
      {"DEFSTRUCT", F_DEFSTRUCT}, {"WITH-OUTPUT-TO-STRING", F_WOTS},
      {"DESTRUCTURING-BIND", F_DBIND}, {"QUASIQUOTE", F_QUASI}, {"ASSERT", F_ASSERT},
      {"CHECK-TYPE", F_IGNORED}, {"IN-PACKAGE", F_IGNORED}, {"DEFPACKAGE", F_IGNORED},
      {"DECLAIM", F_IGNORED}, {"PROCLAIM", F_IGNORED}, {"CATCH", F_CATCH}, {"THROW", F_THROW},
      {"PSETQ", F_PSETQ}, {"PSETF", F_PSETQ}, {"ROTATEF", F_ROTATEF}, {"EVAL-WHEN", F_EVAL_WHEN},
      {"CCASE", F_CCASE}, {"WITH-SLOTS", F_WITH_SLOTS}, {"MULTIPLE-VALUE-SETQ", F_MVSETQ},
      {"DEFGENERIC", F_DEFGENERIC}, {"HANDLER-BIND", F_HANDLER_BIND},
      {"MULTIPLE-VALUE-CALL", F_MVCALL}, {"REQUIRE", F_IGNORED}, {"DEFINE-CONDITION", F_IGNORED},
  };
  for (auto& f : forms) intern(f.name)->form = f.id;
  T_sym();
  Symbol* nil = intern("NIL");
  nil->constant = true;
  nil->bound = true;
}

inline Val Interp::lookup_var(Symbol* s, const Val& env) {
  if (!s->special) {
    for (Obj* e = env.is_obj() ? env.obj() : nullptr; e;) {
      auto* frame = static_cast<Env*>(e);
      for (auto it = frame->vars.rbegin(); it != frame->vars.rend(); ++it)
        if (it->sym == s && !it->fn) return it->value;
      e = frame->parent.is_obj() ? frame->parent.obj() : nullptr;
    }
  }
  if (s->bound) return s->value;
  if (s->name == "NIL") return Val();
  fail("The variable " + s->name + " is unbound.", "UNBOUND-VARIABLE");
}

inline void Interp::set_var(Symbol* s, Val v, const Val& env) {
  if (!s->special) {
    for (Obj* e = env.is_obj() ? env.obj() : nullptr; e;) {
      auto* frame = static_cast<Env*>(e);
      for (auto it = frame->vars.rbegin(); it != frame->vars.rend(); ++it) {
        if (it->sym == s && !it->fn) {
          it->value = std::move(v);
          return;
        }
      }
      e = frame->parent.is_obj() ? frame->parent.obj() : nullptr;
    }
  }
  if (s->constant) fail("Cannot set constant " + s->name);
  s->value = std::move(v);
  s->bound = true;
}

inline Val Interp::lookup_function(Symbol* s, const Val& env, bool must) {
  for (Obj* e = env.is_obj() ? env.obj() : nullptr; e;) {
    auto* frame = static_cast<Env*>(e);
    for (auto it = frame->vars.rbegin(); it != frame->vars.rend(); ++it)
      if (it->sym == s && it->fn) return it->value;
    e = frame->parent.is_obj() ? frame->parent.obj() : nullptr;
  }
  if (s->function.truthy()) return s->function;
  if (!must) return Val();
  fail("The function " + s->name + " is undefined.", "UNDEFINED-FUNCTION");
}

inline Val Interp::function_value(const Val& d) {
  if (d.is(Kind::Function)) return d;
  if (is_symbol(d)) {
    Symbol* s = symbol_of(d);
    Val f = lookup_function(s, Val());
    if (f.as<Function>()->macro) fail(s->name + " is a macro, not a function");
    return f;
  }
  fail(to_string(d, true) + " is not a function designator", "TYPE-ERROR");
}

inline std::shared_ptr<LambdaList> Interp::parse_lambda_list(const Val& raw) {
  auto ll = std::make_shared<LambdaList>();
  enum { Req, Opt, Rest, Key, Aux, Skip } mode = Req;
  Val cur = raw;
  while (consp(cur)) {
    Val item = car(cur);
    cur = cdr(cur);
    if (item.is(Kind::Symbol)) {
      const std::string& n = item.as<Symbol>()->name;
      if (n == "&OPTIONAL") { mode = Opt; continue; }
      if (n == "&REST" || n == "&BODY") { mode = Rest; continue; }
      if (n == "&KEY") { mode = Key; ll->has_key = true; continue; }
      if (n == "&AUX") { mode = Aux; continue; }
      if (n == "&ALLOW-OTHER-KEYS") { ll->allow_other_keys = true; continue; }
      if (n == "&WHOLE" || n == "&ENVIRONMENT") { mode = Skip; continue; }
    }
    switch (mode) {
      case Req:
        ll->required.push_back(item);
        break;
      case Opt: {
        LambdaList::Opt o;
        if (consp(item)) {
          o.var = car(item);
          if (consp(cdr(item))) {
            o.init = car(cdr(item));
            if (consp(cdr(cdr(item)))) o.supplied = require_symbol(car(cdr(cdr(item))));
          }
        } else {
          o.var = item;
        }
        ll->optional.push_back(std::move(o));
        break;
      }
      case Rest:
        ll->rest = require_symbol(item);
        break;
      case Key: {
        LambdaList::Key k;
        Val spec = consp(item) ? car(item) : item;
        if (consp(spec)) {
          k.keyword = require_symbol(car(spec));
          k.var = require_symbol(car(cdr(spec)));
        } else {
          k.var = require_symbol(spec);
          k.keyword = intern(":" + k.var->name);
        }
        if (consp(item) && consp(cdr(item))) {
          k.init = car(cdr(item));
          if (consp(cdr(cdr(item)))) k.supplied = require_symbol(car(cdr(cdr(item))));
        }
        ll->keys.push_back(std::move(k));
        break;
      }
      case Aux:
        if (consp(item)) {
          ll->aux.emplace_back(require_symbol(car(item)), consp(cdr(item)) ? car(cdr(item)) : Val());
        } else {
          ll->aux.emplace_back(require_symbol(item), Val());
        }
        break;
      case Skip:
        mode = Req;
        break;
    }
  }
  if (!cur.nil()) ll->rest = require_symbol(cur);  // dotted tail
  return ll;
}

inline void Interp::destructure(const Val& pattern, const Val& value, Env* frame, const Val& env) {
  if (pattern.nil()) return;
  if (is_symbol(pattern)) {
    frame->vars.push_back({symbol_of(pattern), value, false});
    return;
  }
  auto ll = parse_lambda_list(pattern);
  std::vector<Val> items;
  Val cur = value;
  while (consp(cur)) {
    items.push_back(car(cur));
    cur = cdr(cur);
  }
  bind_params(*ll, items, frame, env, "destructuring-bind");
}

inline void Interp::bind_params(const LambdaList& ll, std::vector<Val>& args, Env* frame,
                                const Val& env, const std::string& who) {
  std::size_t n = args.size(), i = 0;
  if (n < ll.required.size())
    fail("invalid number of arguments to " + who + ": " + std::to_string(n), "PROGRAM-ERROR");
  for (const auto& r : ll.required) {
    if (r.is(Kind::Symbol) || r.nil()) {
      if (r.truthy()) frame->vars.push_back({r.as<Symbol>(), args[i], false});
    } else {
      destructure(r, args[i], frame, env);
    }
    ++i;
  }
  for (const auto& o : ll.optional) {
    bool given = i < n;
    Val v = given ? args[i++] : (o.init.truthy() ? eval(o.init, env) : Val());
    destructure(o.var, v, frame, env);
    if (o.supplied) frame->vars.push_back({o.supplied, boolean(given), false});
  }
  if (!ll.rest && !ll.has_key && i < n)
    fail("invalid number of arguments to " + who + ": " + std::to_string(n), "PROGRAM-ERROR");
  if (ll.rest) {
    std::vector<Val> rest(args.begin() + static_cast<std::ptrdiff_t>(i), args.end());
    frame->vars.push_back({ll.rest, list(std::move(rest)), false});
  }
  if (ll.has_key) {
    if ((n - i) % 2 != 0) fail("odd number of &key arguments to " + who, "PROGRAM-ERROR");
    for (const auto& k : ll.keys) {
      bool found = false;
      Val v;
      for (std::size_t j = i; j + 1 < n; j += 2) {
        if (args[j].is(Kind::Symbol) && args[j].as<Symbol>() == k.keyword) {
          v = args[j + 1];
          found = true;
          break;
        }
      }
      if (!found && k.init.truthy()) v = eval(k.init, env);
      frame->vars.push_back({k.var, v, false});
      if (k.supplied) frame->vars.push_back({k.supplied, boolean(found), false});
    }
  }
  for (const auto& [s, init] : ll.aux) frame->vars.push_back({s, init.truthy() ? eval(init, env) : Val(), false});
}

inline bool mentions_return_from(const Val& body, Symbol* name) {
  std::vector<const Val*> stack{&body};
  Symbol* rf = intern("RETURN-FROM");
  while (!stack.empty()) {
    const Val* v = stack.back();
    stack.pop_back();
    if (!consp(*v)) continue;
    if (car(*v).is(Kind::Symbol) && car(*v).as<Symbol>() == rf && consp(cdr(*v)) &&
        is_symbol(car(cdr(*v))) && symbol_of(car(cdr(*v))) == name)
      return true;
    stack.push_back(&car(*v));
    stack.push_back(&cdr(*v));
  }
  return false;
}

inline Val strip_declarations(const Val& body) {
  Val cur = body;
  Symbol* decl = intern("DECLARE");
  while (consp(cur) && consp(cdr(cur))) {
    const Val& f = car(cur);
    if (f.is(Kind::String) || (consp(f) && car(f).is(Kind::Symbol) && car(f).as<Symbol>() == decl)) {
      cur = cdr(cur);
    } else {
      break;
    }
  }
  if (consp(cur) && consp(car(cur)) && car(car(cur)).is(Kind::Symbol) &&
      car(car(cur)).as<Symbol>() == decl)
    return Val();
  return cur;
}

inline Val Interp::make_closure(const Val& lambda_list, const Val& body, const Val& env, std::string name) {
  auto* f = new Function();
  Val fv = Val::adopt(f);
  f->name = std::move(name);
  f->params = parse_lambda_list(lambda_list);
  f->body = strip_declarations(body);
  f->env = env;
  return fv;
}

inline Val Interp::progn(const Val& body, const Val& env) {
  Val result;
  for (Val cur = body; consp(cur); cur = cdr(cur)) result = eval(car(cur), env);
  return result;
}

inline Val Interp::call_closure_blocked(Function* f, const Val& env) {
  try {
    return progn(f->body, env);
  } catch (BlockExit& b) {
    if (b.name != f->block_name) throw;
    return std::move(b.value);
  }
}

inline Val Interp::apply(const Val& fnv, std::vector<Val>& args) {
  Val fv = function_value(fnv);
  auto* f = fv.as<Function>();
  if (f->builtin) {
    int n = static_cast<int>(args.size());
    if (n < f->min_args || (f->max_args >= 0 && n > f->max_args))
      fail("invalid number of arguments to " + f->name + ": " + std::to_string(n), "PROGRAM-ERROR");
    mv_fresh = false;
    calling = f;
    Val r = f->builtin(*this, args);
    mv_set = mv_fresh;
    mv_fresh = false;
    return r;
  }
  DepthGuard g(*this);
  Val frame_holder;
  Env* frame = new_frame(f->env, frame_holder);
  bind_params(*f->params, args, frame, frame_holder, f->name.empty() ? "lambda" : f->name);
  if (f->block_name) return call_closure_blocked(f, frame_holder);
  return progn(f->body, frame_holder);
}

inline Val Interp::quasi(const Val& t, const Val& env, int level) {
  if (!consp(t)) {
    if (t.is(Kind::Vector)) {
      Val as_list = list(t.as<VectorObj>()->items);
      Val l = quasi(as_list, env, level);
      auto* v = new VectorObj();
      v->items = to_vector(l);
      return Val::adopt(v);
    }
    return t;
  }
  const Val& head = car(t);
  if (head.is(Kind::Symbol)) {
    const std::string& n = head.as<Symbol>()->name;
    if (n == "UNQUOTE") {
      if (level == 1) return eval(car(cdr(t)), env);
      return list({head, quasi(car(cdr(t)), env, level - 1)});
    }
    if (n == "QUASIQUOTE") return list({head, quasi(car(cdr(t)), env, level + 1)});
  }
  std::vector<Val> items;
  Val cur = t;
  while (consp(cur)) {
    const Val& x = car(cur);
    if (x.is(Kind::Symbol) && x.as<Symbol>()->name == "UNQUOTE" && level == 1) {
      // `(a . ,b)
      return list(std::move(items), eval(car(cdr(cur)), env));
    }
    if (consp(x) && car(x).is(Kind::Symbol) && car(x).as<Symbol>()->name == "UNQUOTE-SPLICING" &&
        level == 1) {
      Val spliced = eval(car(cdr(x)), env);
      for (Val s = spliced; consp(s); s = cdr(s)) items.push_back(car(s));
    } else {
      items.push_back(quasi(x, env, level));
    }
    cur = cdr(cur);
  }
  return list(std::move(items), quasi(cur, env, level));
}

inline Val Interp::macroexpand_1(const Val& form, const Val& env, bool& expanded) {
  expanded = false;
  if (!consp(form) || !car(form).is(Kind::Symbol)) return form;
  Symbol* s = car(form).as<Symbol>();
  Val fn = lookup_function(s, env, false);
  if (!fn.truthy() || !fn.as<Function>()->macro) return form;
  std::vector<Val> args = to_vector(cdr(form));
  auto* f = fn.as<Function>();
  Val frame_holder;
  Env* frame = new_frame(f->env, frame_holder);
  bind_params(*f->params, args, frame, frame_holder, s->name);
  expanded = true;
  if (f->block_name) return call_closure_blocked(f, frame_holder);
  return progn(f->body, frame_holder);
}

// ---------------------------------------------------------------------------
// Places

inline std::int64_t to_index(const Val& v) {
  if (!v.is_fix() || v.fixnum() < 0)
    fail("The value " + to_string(v, true) + " is not a valid index", "TYPE-ERROR");
  return v.fixnum();
}

inline Interp::Place Interp::resolve_place(const Val& place, const Val& env) {
  Place p;
  if (is_symbol(place)) {
    p.k = Place::Var;
    p.var = symbol_of(place);
    return p;
  }
  if (!consp(place) || !car(place).is(Kind::Symbol)) fail("invalid place " + to_string(place, true));
  Symbol* head = car(place).as<Symbol>();
  const std::string& n = head->name;
  std::vector<Val> args;
  for (Val c = cdr(place); consp(c); c = cdr(c)) args.push_back(eval(car(c), env));
  auto need = [&](std::size_t k) {
    if (args.size() < k) fail("bad place " + to_string(place, true));
  };
  static const std::map<std::string, int> nth_names = {
      {"FIRST", 0}, {"SECOND", 1}, {"THIRD", 2}, {"FOURTH", 3}, {"FIFTH", 4},
      {"SIXTH", 5}, {"SEVENTH", 6}, {"EIGHTH", 7}, {"NINTH", 8}, {"TENTH", 9}};
  if (n == "CAR") {
    need(1);
    p.k = Place::Car;
    p.obj = args[0];
  } else if (n == "CDR" || n == "REST") {
    need(1);
    p.k = Place::Cdr;
    p.obj = args[0];
  } else if (auto it = nth_names.find(n); it != nth_names.end()) {
    need(1);
    p.k = Place::Nth;
    p.obj = args[0];
    p.slot = it->second;
  } else if (n == "NTH") {
    need(2);
    p.k = Place::Nth;
    p.obj = args[1];
    p.slot = static_cast<int>(to_index(args[0]));
  } else if (n == "CADR") {
    need(1);
    p.k = Place::Nth;
    p.obj = args[0];
    p.slot = 1;
  } else if (n == "CDDR") {
    need(1);
    p.k = Place::Cdr;
    p.obj = consp(args[0]) ? cdr(args[0]) : Val();
  } else if (n == "GETHASH") {
    need(2);
    p.k = Place::Hash;
    p.key = args[0];
    p.obj = args[1];
    if (args.size() > 2) p.dflt = args[2];
  } else if (n == "AREF" || n == "SVREF" || n == "CHAR" || n == "SCHAR" || n == "ELT" ||
             n == "ROW-MAJOR-AREF") {
    need(2);
    p.k = Place::Aref;
    p.obj = args[0];
    p.idx.assign(args.begin() + 1, args.end());
    if (n == "ELT" && (consp(p.obj) || p.obj.nil())) {
      p.k = Place::Nth;
      p.slot = static_cast<int>(to_index(args[1]));
    }
  } else if (n == "SYMBOL-VALUE") {
    need(1);
    p.k = Place::SymVal;
    p.var = require_symbol(args[0]);
  } else if (n == "FILL-POINTER") {
    need(1);
    p.k = Place::Fill;
    p.obj = args[0];
  } else if (n == "SLOT-VALUE") {
    need(2);
    p.k = Place::Struct;
    p.obj = args[0];
    if (!p.obj.is(Kind::Struct)) fail("slot-value on a non-structure", "TYPE-ERROR");
    Symbol* slot = require_symbol(args[1]);
    auto& slots = p.obj.as<StructObj>()->type->slots;
    auto sit = std::find(slots.begin(), slots.end(), slot);
    if (sit == slots.end()) fail("no slot " + slot->name);
    p.slot = static_cast<int>(sit - slots.begin());
  } else if (auto ait = accessors.find(head); ait != accessors.end() && ait->second.index >= 0) {
    need(1);
    p.k = Place::Struct;
    p.obj = args[0];
    if (!p.obj.is(Kind::Struct) || p.obj.as<StructObj>()->type != ait->second.type)
      fail("The value " + to_string(p.obj, true) + " is not of type " + ait->second.type->name,
           "TYPE-ERROR");
    p.slot = ait->second.index;
  } else {
    fail("unsupported place " + n);
  }
  return p;
}

inline Val vector_ref(const Val& v, const std::vector<Val>& idx);
inline void vector_set(const Val& v, const std::vector<Val>& idx, const Val& x);
inline Val nthcdr_val(std::int64_t n, const Val& l);

inline Val Interp::place_get(const Place& p, const Val& env) {
  switch (p.k) {
    case Place::Var: return lookup_var(p.var, env);
    case Place::Car: return consp(p.obj) ? car(p.obj) : Val();
    case Place::Cdr: return consp(p.obj) ? cdr(p.obj) : Val();
    case Place::Nth: {
      Val c = nthcdr_val(p.slot, p.obj);
      return consp(c) ? car(c) : Val();
    }
    case Place::Hash: {
      if (!p.obj.is(Kind::Hash)) fail("gethash on a non-hash-table", "TYPE-ERROR");
      auto* h = p.obj.as<HashObj>();
      auto it = h->map.find(p.key);
      return it == h->map.end() ? p.dflt : it->second;
    }
    case Place::Aref: return vector_ref(p.obj, p.idx);
    case Place::Struct: return p.obj.as<StructObj>()->slots[static_cast<std::size_t>(p.slot)];
    case Place::SymVal: return lookup_var(p.var, Val());
    case Place::Fill: return Val::fix(static_cast<std::int64_t>(p.obj.as<VectorObj>()->active()));
  }
  return Val();
}

inline void Interp::place_set(const Place& p, const Val& v, const Val& env) {
  switch (p.k) {
    case Place::Var: set_var(p.var, v, env); return;
    case Place::Car:
      if (!consp(p.obj)) fail("setf car of a non-cons", "TYPE-ERROR");
      p.obj.as<Cons>()->car = v;
      return;
    case Place::Cdr:
      if (!consp(p.obj)) fail("setf cdr of a non-cons", "TYPE-ERROR");
      p.obj.as<Cons>()->cdr = v;
      return;
    case Place::Nth: {
      Val c = nthcdr_val(p.slot, p.obj);
      if (!consp(c)) fail("setf nth past the end of a list", "TYPE-ERROR");
      c.as<Cons>()->car = v;
      return;
    }
    case Place::Hash: {
      if (!p.obj.is(Kind::Hash)) fail("setf gethash on a non-hash-table", "TYPE-ERROR");
      auto* h = p.obj.as<HashObj>();
      auto [it, fresh] = h->map.insert_or_assign(p.key, v);
      if (fresh) h->order.push_back(p.key);
      return;
    }
    case Place::Aref: vector_set(p.obj, p.idx, v); return;
    case Place::Struct: p.obj.as<StructObj>()->slots[static_cast<std::size_t>(p.slot)] = v; return;
    case Place::SymVal: set_var(p.var, v, Val()); return;
    case Place::Fill: p.obj.as<VectorObj>()->fill = to_index(v); return;
  }
}

inline Val Interp::eval_setf_place(const Val& place, Val value, const Val& env) {
  Place p = resolve_place(place, env);
  place_set(p, value, env);
  return value;
}

inline Val arith_add(const Val& a, const Val& b);
inline Val arith_sub(const Val& a, const Val& b);
inline bool num_equal(const Val& a, const Val& b);
inline int num_compare(const Val& a, const Val& b);
inline std::string type_name_of(const Val& v);
inline bool typep(Interp& m, const Val& v, const Val& type);

// ---------------------------------------------------------------------------
// eval

inline Val Interp::let_form(const Val& form, Val& env, bool sequential, bool& tail, Val& tail_form) {
  Val bindings = car(cdr(form));
  Val body = strip_declarations(cdr(cdr(form)));
  Val holder;
  Env* frame = new_frame(env, holder);
  SpecialRestore restore;
  std::vector<std::pair<Symbol*, Val>> pending;
  for (Val b = bindings; consp(b); b = cdr(b)) {
    Val spec = car(b);
    Symbol* s;
    Val v;
    if (consp(spec)) {
      s = require_symbol(car(spec));
      if (consp(cdr(spec))) v = eval(car(cdr(spec)), sequential ? holder : env);
    } else {
      s = require_symbol(spec);
    }
    if (sequential) {
      if (s->special) {
        restore.saved.emplace_back(s, s->value, s->bound);
        s->value = v;
        s->bound = true;
      } else {
        frame->vars.push_back({s, v, false});
      }
    } else {
      pending.emplace_back(s, std::move(v));
    }
  }
  for (auto& [s, v] : pending) {
    if (s->special) {
      restore.saved.emplace_back(s, s->value, s->bound);
      s->value = v;
      s->bound = true;
    } else {
      frame->vars.push_back({s, std::move(v), false});
    }
  }
  if (restore.saved.empty() && consp(body)) {
    // Tail position: evaluate all but the last form here.
    Val cur = body;
    while (consp(cdr(cur))) {
      eval(car(cur), holder);
      cur = cdr(cur);
    }
    tail = true;
    tail_form = car(cur);
    env = holder;
    return Val();
  }
  tail = false;
  return progn(body, holder);
}

inline bool case_matches(const Val& keys, const Val& key) {
  if (keys.is(Kind::Symbol) && (keys.as<Symbol>() == T_sym() || keys.as<Symbol>()->name == "OTHERWISE"))
    return true;
  if (consp(keys)) {
    for (Val k = keys; consp(k); k = cdr(k))
      if (eql(car(k), key)) return true;
    return false;
  }
  return eql(keys, key);
}

inline Val Interp::eval(Val form, Val env) {
  DepthGuard guard(*this);
  for (;;) {
    mv_set = false;
    if (form.is(Kind::Symbol)) return lookup_var(form.as<Symbol>(), env);
    if (!consp(form)) return form;
    const Val head = car(form);
    const Val args = cdr(form);
    auto arg = [&](int i) -> Val {
      Val c = args;
      for (int k = 0; k < i && consp(c); ++k) c = cdr(c);
      return consp(c) ? car(c) : Val();
    };
    if (head.is(Kind::Symbol)) {
      Symbol* s = head.as<Symbol>();
      if (s->form && !lookup_function(s, env, false).truthy()) {
        switch (s->form) {
          case F_QUOTE:
            return arg(0);
          case F_FUNCTION: {
            Val x = arg(0);
            if (consp(x) && car(x).is(Kind::Symbol) && car(x).as<Symbol>()->form == F_LAMBDA)
              return make_closure(car(cdr(x)), cdr(cdr(x)), env, "");
            return lookup_function(require_symbol(x), env);
          }
          case F_LAMBDA:
            return make_closure(arg(0), cdr(args), env, "");
          case F_IF:
            form = eval(arg(0), env).truthy() ? arg(1) : arg(2);
            continue;
          case F_PROGN:
          case F_LOCALLY:
          case F_EVAL_WHEN: {
            Val body = s->form == F_PROGN ? args : (consp(args) ? cdr(args) : Val());
            if (!consp(body)) return Val();
            while (consp(cdr(body))) {
              eval(car(body), env);
              body = cdr(body);
            }
            form = car(body);
            continue;
          }
          case F_LET:
          case F_LETSTAR: {
            bool tail = false;
            Val tail_form;
            Val r = let_form(form, env, s->form == F_LETSTAR, tail, tail_form);
            if (!tail) return r;
            form = tail_form;
            continue;
          }
          case F_SETQ: {
            Val result;
            for (Val c = args; consp(c) && consp(cdr(c)); c = cdr(cdr(c))) {
              result = eval(car(cdr(c)), env);
              set_var(require_symbol(car(c)), result, env);
            }
            return result;
          }
          case F_PSETQ: {
            std::vector<std::pair<Val, Val>> pairs;
            for (Val c = args; consp(c) && consp(cdr(c)); c = cdr(cdr(c)))
              pairs.emplace_back(car(c), eval(car(cdr(c)), env));
            for (auto& [place, v] : pairs) eval_setf_place(place, v, env);
            return Val();
          }
          case F_SETF: {
            Val result;
            for (Val c = args; consp(c) && consp(cdr(c)); c = cdr(cdr(c))) {
              Val place = car(c);
              bool expanded = true;
              while (consp(place) && expanded) {
                Symbol* ps = car(place).is(Kind::Symbol) ? car(place).as<Symbol>() : nullptr;
                if (ps && (accessors.count(ps) || ps->form)) break;
                place = macroexpand_1(place, env, expanded);
              }
              Place p = resolve_place(place, env);
              result = eval(car(cdr(c)), env);
              place_set(p, result, env);
            }
            return result;
          }
          case F_INCF:
          case F_DECF: {
            Place p = resolve_place(arg(0), env);
            Val delta = consp(cdr(args)) ? eval(arg(1), env) : Val::fix(1);
            Val old = place_get(p, env);
            Val nv = s->form == F_INCF ? arith_add(old, delta) : arith_sub(old, delta);
            place_set(p, nv, env);
            return nv;
          }
          case F_PUSH: {
            Val item = eval(arg(0), env);
            Place p = resolve_place(arg(1), env);
            Val nv = cons(item, place_get(p, env));
            place_set(p, nv, env);
            return nv;
          }
          case F_PUSHNEW: {
            Val item = eval(arg(0), env);
            Place p = resolve_place(arg(1), env);
            Val old = place_get(p, env);
            Val test, key;
            for (Val c = cdr(cdr(args)); consp(c) && consp(cdr(c)); c = cdr(cdr(c))) {
              std::string k = symbol_of(car(c))->name;
              if (k == ":TEST") test = eval(car(cdr(c)), env);
              if (k == ":KEY") key = eval(car(cdr(c)), env);
            }
            Val probe = key.truthy() ? funcall(key, {item}) : item;
            for (Val c = old; consp(c); c = cdr(c)) {
              Val x = key.truthy() ? funcall(key, {car(c)}) : car(c);
              bool same = test.truthy() ? funcall(test, {probe, x}).truthy() : eql(probe, x);
              if (same) return old;
            }
            Val nv = cons(item, old);
            place_set(p, nv, env);
            return nv;
          }
          case F_POP: {
            Place p = resolve_place(arg(0), env);
            Val old = place_get(p, env);
            if (!consp(old)) return Val();
            place_set(p, cdr(old), env);
            return car(old);
          }
          case F_ROTATEF: {
            std::vector<Place> places;
            for (Val c = args; consp(c); c = cdr(c)) places.push_back(resolve_place(car(c), env));
            if (places.size() < 2) return Val();
            Val first = place_get(places[0], env);
            for (std::size_t i = 0; i + 1 < places.size(); ++i)
              place_set(places[i], place_get(places[i + 1], env), env);
            place_set(places.back(), first, env);
            return Val();
          }
          case F_BLOCK: {
            Symbol* name = symbol_of(arg(0));
            try {
              return progn(cdr(args), env);
            } catch (BlockExit& b) {
              if (b.name != name) throw;
              return std::move(b.value);
            }
          }
          case F_RETURN_FROM:
            throw BlockExit{symbol_of(arg(0)), eval(arg(1), env)};
          case F_RETURN:
            throw BlockExit{intern("NIL"), eval(arg(0), env)};
          case F_CATCH: {
            Val tag = eval(arg(0), env);
            try {
              return progn(cdr(args), env);
            } catch (ThrowExit& t) {
              if (!eql(t.tag, tag)) throw;
              return std::move(t.value);
            }
          }
          case F_THROW:
            throw ThrowExit{eval(arg(0), env), eval(arg(1), env)};
          case F_FLET:
          case F_LABELS: {
            Val holder;
            Env* frame = new_frame(env, holder);
            for (Val d = arg(0); consp(d); d = cdr(d)) {
              Val def = car(d);
              Symbol* name = require_symbol(car(def));
              Val fn = make_closure(car(cdr(def)), cdr(cdr(def)), s->form == F_LABELS ? holder : env,
                                    name->name);
              auto* f = fn.as<Function>();
              if (mentions_return_from(f->body, name)) f->block_name = name;
              frame->vars.push_back({name, fn, true});
            }
            Val body = strip_declarations(cdr(args));
            if (!consp(body)) return Val();
            while (consp(cdr(body))) {
              eval(car(body), holder);
              body = cdr(body);
            }
            form = car(body);
            env = holder;
            continue;
          }
          case F_TAGBODY: {
            std::vector<Val> items = to_vector(args);
            std::size_t pc = 0;
            while (pc < items.size()) {
              const Val& item = items[pc++];
              if (!consp(item)) continue;
              try {
                eval(item, env);
              } catch (GoExit& g) {
                auto it = std::find_if(items.begin(), items.end(),
                                       [&](const Val& x) { return !consp(x) && eql(x, g.tag); });
                if (it == items.end()) throw;
                pc = static_cast<std::size_t>(it - items.begin()) + 1;
              }
            }
            return Val();
          }
          case F_GO:
            throw GoExit{arg(0)};
          case F_UNWIND_PROTECT: {
            Val result;
            try {
              result = eval(arg(0), env);
            } catch (...) {
              progn(cdr(args), env);
              throw;
            }
            std::vector<Val> saved = mv;
            bool saved_set = mv_set;
            progn(cdr(args), env);
            mv = std::move(saved);
            mv_set = saved_set;
            return result;
          }
          case F_MVB: {
            Val v = eval(arg(1), env);
            std::vector<Val> vals = mv_set ? mv : std::vector<Val>{v};
            Val holder;
            Env* frame = new_frame(env, holder);
            std::size_t i = 0;
            for (Val c = arg(0); consp(c); c = cdr(c), ++i)
              frame->vars.push_back({require_symbol(car(c)), i < vals.size() ? vals[i] : Val(), false});
            Val body = strip_declarations(cdr(cdr(args)));
            return progn(body, holder);
          }
          case F_MVSETQ: {
            Val v = eval(arg(1), env);
            std::vector<Val> vals = mv_set ? mv : std::vector<Val>{v};
            std::size_t i = 0;
            for (Val c = arg(0); consp(c); c = cdr(c), ++i)
              set_var(require_symbol(car(c)), i < vals.size() ? vals[i] : Val(), env);
            return vals.empty() ? Val() : vals[0];
          }
          case F_MVL: {
            Val v = eval(arg(0), env);
            return list(mv_set ? mv : std::vector<Val>{v});
          }
          case F_MVCALL: {
            Val fn = eval(arg(0), env);
            std::vector<Val> all;
            for (Val c = cdr(args); consp(c); c = cdr(c)) {
              Val v = eval(car(c), env);
              if (mv_set) {
                all.insert(all.end(), mv.begin(), mv.end());
              } else {
                all.push_back(v);
              }
            }
            return apply(fn, all);
          }
          case F_NTH_VALUE: {
            std::int64_t n = to_index(eval(arg(0), env));
            Val v = eval(arg(1), env);
            std::vector<Val> vals = mv_set ? mv : std::vector<Val>{v};
            return static_cast<std::size_t>(n) < vals.size() ? vals[static_cast<std::size_t>(n)] : Val();
          }
          case F_THE:
            form = arg(1);
            continue;
          case F_DECLARE:
          case F_IGNORED:
          case F_DEFGENERIC:
            return Val();
          case F_DEFUN:
          case F_DEFMACRO: {
            Symbol* name = require_symbol(arg(0));
            Val fn = make_closure(arg(1), cdr(cdr(args)), env, name->name);
            auto* f = fn.as<Function>();
            f->macro = s->form == F_DEFMACRO;
            if (mentions_return_from(f->body, name)) f->block_name = name;
            name->function = fn;
            return head.nil() ? Val() : sym(name);
          }
          case F_DEFVAR:
          case F_DEFPARAMETER:
          case F_DEFCONSTANT: {
            Symbol* name = require_symbol(arg(0));
            name->special = s->form != F_DEFCONSTANT;
            if (s->form != F_DEFVAR || !name->bound) {
              if (consp(cdr(args))) {
                name->value = eval(arg(1), env);
                name->bound = true;
              }
            }
            if (s->form == F_DEFCONSTANT) name->constant = true;
            return sym(name);
          }
          case F_COND: {
            bool matched = false;
            for (Val c = args; consp(c); c = cdr(c)) {
              Val clause = car(c);
              Val test = eval(car(clause), env);
              if (test.truthy()) {
                Val body = cdr(clause);
                if (!consp(body)) return test;
                while (consp(cdr(body))) {
                  eval(car(body), env);
                  body = cdr(body);
                }
                form = car(body);
                matched = true;
                break;
              }
            }
            if (!matched) return Val();
            continue;
          }
          case F_WHEN:
          case F_UNLESS: {
            bool t = eval(arg(0), env).truthy();
            if (t != (s->form == F_WHEN)) return Val();
            Val body = cdr(args);
            if (!consp(body)) return Val();
            while (consp(cdr(body))) {
              eval(car(body), env);
              body = cdr(body);
            }
            form = car(body);
            continue;
          }
          case F_AND: {
            if (!consp(args)) return T();
            Val c = args;
            bool stop = false;
            while (consp(cdr(c))) {
              if (!eval(car(c), env).truthy()) {
                stop = true;
                break;
              }
              c = cdr(c);
            }
            if (stop) return Val();
            form = car(c);
            continue;
          }
          case F_OR: {
            if (!consp(args)) return Val();
            Val c = args;
            while (consp(cdr(c))) {
              Val v = eval(car(c), env);
              if (v.truthy()) return v;
              c = cdr(c);
            }
            form = car(c);
            continue;
          }
          case F_CASE:
          case F_ECASE:
          case F_CCASE: {
            Val key = eval(arg(0), env);
            bool matched = false;
            for (Val c = cdr(args); consp(c); c = cdr(c)) {
              Val clause = car(c);
              if (case_matches(car(clause), key)) {
                Val body = cdr(clause);
                if (!consp(body)) return Val();
                while (consp(cdr(body))) {
                  eval(car(body), env);
                  body = cdr(body);
                }
                form = car(body);
                matched = true;
                break;
              }
            }
            if (!matched) {
              if (s->form != F_CASE)
                fail(to_string(key, true) + " fell through ECASE expression", "TYPE-ERROR");
              return Val();
            }
            continue;
          }
          case F_TYPECASE:
          case F_ETYPECASE: {
            Val key = eval(arg(0), env);
            for (Val c = cdr(args); consp(c); c = cdr(c)) {
              Val clause = car(c);
              Val type = car(clause);
              bool hit = (type.is(Kind::Symbol) && (type.as<Symbol>() == T_sym() ||
                                                    type.as<Symbol>()->name == "OTHERWISE")) ||
                         typep(*this, key, type);
              if (hit) return progn(cdr(clause), env);
            }
            if (s->form == F_ETYPECASE)
              fail(to_string(key, true) + " fell through ETYPECASE expression", "TYPE-ERROR");
            return Val();
          }
          case F_PROG1:
          case F_PROG2: {
            Val first = eval(arg(0), env);
            if (s->form == F_PROG2) {
              Val second = eval(arg(1), env);
              progn(cdr(cdr(args)), env);
              return second;
            }
            progn(cdr(args), env);
            return first;
          }
          case F_DOTIMES:
          case F_DOLIST: {
            Val spec = arg(0);
            Symbol* var = require_symbol(car(spec));
            Val holder;
            Env* frame = new_frame(env, holder);
            frame->vars.push_back({var, Val(), false});
            Val body = strip_declarations(cdr(args));
            Val result_form = consp(cdr(spec)) && consp(cdr(cdr(spec))) ? car(cdr(cdr(spec))) : Val();
            try {
              if (s->form == F_DOTIMES) {
                Val limit = eval(car(cdr(spec)), env);
                if (!is_integer(limit)) fail("dotimes count is not an integer", "TYPE-ERROR");
                std::int64_t n = limit.is_fix() ? limit.fixnum() : INT64_MAX;
                for (std::int64_t i = 0; i < n; ++i) {
                  frame->vars[0].value = Val::fix(i);
                  for (Val b = body; consp(b); b = cdr(b)) {
                    const Val& f = car(b);
                    if (consp(f)) eval(f, holder);
                  }
                }
                frame->vars[0].value = limit;
              } else {
                Val l = eval(car(cdr(spec)), env);
                for (Val c = l; consp(c); c = cdr(c)) {
                  frame->vars[0].value = car(c);
                  for (Val b = body; consp(b); b = cdr(b)) {
                    const Val& f = car(b);
                    if (consp(f)) eval(f, holder);
                  }
                }
                frame->vars[0].value = Val();
              }
              return result_form.truthy() ? eval(result_form, holder) : Val();
            } catch (BlockExit& b) {
              if (b.name != intern("NIL")) throw;
              return std::move(b.value);
            }
          }
          case F_DO:
          case F_DOSTAR: {
            bool seq = s->form == F_DOSTAR;
            Val holder;
            Env* frame = new_frame(env, holder);
            std::vector<std::pair<Symbol*, Val>> steps;
            std::vector<std::pair<Symbol*, Val>> inits;
            for (Val c = arg(0); consp(c); c = cdr(c)) {
              Val spec = car(c);
              Symbol* v = require_symbol(consp(spec) ? car(spec) : spec);
              Val init = consp(spec) && consp(cdr(spec)) ? eval(car(cdr(spec)), seq ? holder : env) : Val();
              if (seq) {
                frame->vars.push_back({v, init, false});
              } else {
                inits.emplace_back(v, init);
              }
              if (consp(spec) && consp(cdr(spec)) && consp(cdr(cdr(spec))))
                steps.emplace_back(v, car(cdr(cdr(spec))));
            }
            for (auto& [v, init] : inits) frame->vars.push_back({v, init, false});
            Val end = arg(1);
            Val body = strip_declarations(cdr(cdr(args)));
            try {
              while (true) {
                if (eval(car(end), holder).truthy()) return progn(cdr(end), holder);
                for (Val b = body; consp(b); b = cdr(b))
                  if (consp(car(b))) eval(car(b), holder);
                if (seq) {
                  for (auto& [v, step] : steps) set_var(v, eval(step, holder), holder);
                } else {
                  std::vector<Val> nv;
                  for (auto& [v, step] : steps) nv.push_back(eval(step, holder));
                  for (std::size_t i = 0; i < steps.size(); ++i) set_var(steps[i].first, nv[i], holder);
                }
              }
            } catch (BlockExit& b) {
              if (b.name != intern("NIL")) throw;
              return std::move(b.value);
            }
          }
          case F_LOOP:
            return eval_loop(form, env);
          case F_HANDLER_CASE: {
            try {
              return eval(arg(0), env);
            } catch (LispError& e) {
              for (Val c = cdr(args); consp(c); c = cdr(c)) {
                Val clause = car(c);
                Val type = car(clause);
                std::string tn = is_symbol(type) ? symbol_of(type)->name : "";
                if (tn == ":NO-ERROR") continue;
                bool serious = e.type == "STORAGE-CONDITION";
                bool hit = (tn == "ERROR" && !serious) || tn == "CONDITION" || tn == "T" ||
                           tn == "SERIOUS-CONDITION" ||
                           tn == e.type ||
                           (tn == "ARITHMETIC-ERROR" && e.type == "DIVISION-BY-ZERO") ||
                           (tn == "SIMPLE-ERROR" && e.type == "SIMPLE-ERROR");
                if (!hit) continue;
                Val holder;
                Env* frame = new_frame(env, holder);
                Val params = car(cdr(clause));
                if (consp(params)) {
                  Val cond = e.condition.truthy() ? e.condition : str(e.what());
                  frame->vars.push_back({require_symbol(car(params)), cond, false});
                }
                return progn(strip_declarations(cdr(cdr(clause))), holder);
              }
              throw;
            }
          }
          case F_HANDLER_BIND:
            return progn(cdr(args), env);
          case F_IGNORE_ERRORS: {
            try {
              return progn(args, env);
            } catch (LispError&) {
              return Val();
            }
          }
          case F_DEFSTRUCT:
            return eval_defstruct(form);
          case F_WOTS: {
            Val holder;
            Env* frame = new_frame(env, holder);
            frame->vars.push_back({require_symbol(car(arg(0))), T(), false});
            captures.emplace_back();
            std::string text;
            try {
              progn(cdr(args), holder);
            } catch (...) {
              captures.pop_back();
              throw;
            }
            text = std::move(captures.back());
            captures.pop_back();
            return str(std::move(text));
          }
          case F_DBIND: {
            Val value = eval(arg(1), env);
            Val holder;
            Env* frame = new_frame(env, holder);
            destructure(arg(0), value, frame, holder);
            return progn(strip_declarations(cdr(cdr(args))), holder);
          }
          case F_QUASI:
            return quasi(arg(0), env, 1);
          case F_ASSERT:
            if (!eval(arg(0), env).truthy())
              fail("The assertion " + to_string(arg(0), true) + " failed.");
            return Val();
          case F_WITH_SLOTS: {
            Val obj = eval(arg(1), env);
            if (!obj.is(Kind::Struct)) fail("with-slots on a non-structure", "TYPE-ERROR");
            auto* so = obj.as<StructObj>();
            Val holder;
            Env* frame = new_frame(env, holder);
            for (Val c = arg(0); consp(c); c = cdr(c)) {
              Symbol* slot = require_symbol(consp(car(c)) ? car(cdr(car(c))) : car(c));
              Symbol* var = require_symbol(consp(car(c)) ? car(car(c)) : car(c));
              auto& slots = so->type->slots;
              auto it = std::find(slots.begin(), slots.end(), slot);
              if (it == slots.end()) fail("no slot " + slot->name);
              frame->vars.push_back({var, so->slots[static_cast<std::size_t>(it - slots.begin())], false});
            }
            return progn(cdr(cdr(args)), holder);
          }
          default:
            break;
        }
      }
      Val fn = lookup_function(s, env);
      auto* f = fn.as<Function>();
      if (f->macro) {
        bool expanded;
        form = macroexpand_1(form, env, expanded);
        continue;
      }
      std::vector<Val> argv;
      for (Val c = args; consp(c); c = cdr(c)) argv.push_back(eval(car(c), env));
      if (f->builtin) return apply(fn, argv);
      Val holder;
      Env* frame = new_frame(f->env, holder);
      bind_params(*f->params, argv, frame, holder, f->name);
      if (f->block_name) return call_closure_blocked(f, holder);
      Val body = f->body;
      if (!consp(body)) return Val();
      while (consp(cdr(body))) {
        eval(car(body), holder);
        body = cdr(body);
      }
      form = car(body);
      env = holder;
      continue;
    }
    if (consp(head) && car(head).is(Kind::Symbol) && car(head).as<Symbol>()->form == F_LAMBDA) {
      Val fn = make_closure(car(cdr(head)), cdr(cdr(head)), env, "");
      std::vector<Val> argv;
      for (Val c = args; consp(c); c = cdr(c)) argv.push_back(eval(car(c), env));
      return apply(fn, argv);
    }
    fail("illegal function call: " + to_string(form, true), "PROGRAM-ERROR");
  }
}

// ---------------------------------------------------------------------------
// defstruct

// Shared implementation of generated constructors, predicates, copiers and
// slot readers; the accessor record is found through the called function.
inline Val struct_builtin(Interp& m, std::vector<Val>& args) {
  Symbol* fs = intern(m.calling->name);
  const auto& acc = m.accessors.at(fs);
  switch (acc.index) {
    case -1: {
      auto* o = new StructObj(acc.type);
      Val ov = Val::adopt(o);
      o->slots.resize(acc.type->slots.size());
      std::vector<bool> given(o->slots.size(), false);
      if (args.size() % 2 != 0) fail("odd number of arguments to " + fs->name, "PROGRAM-ERROR");
      for (std::size_t i = 0; i + 1 < args.size(); i += 2) {
        Symbol* k = require_symbol(args[i]);
        std::string slot = k->name.substr(k->name[0] == ':' ? 1 : 0);
        bool found = false;
        for (std::size_t j = 0; j < acc.type->slots.size(); ++j) {
          if (acc.type->slots[j]->name == slot) {
            o->slots[j] = args[i + 1];
            given[j] = true;
            found = true;
          }
        }
        if (!found) fail("unknown keyword " + k->name + " for " + fs->name, "PROGRAM-ERROR");
      }
      for (std::size_t j = 0; j < o->slots.size(); ++j)
        if (!given[j] && acc.defaults[j].truthy()) o->slots[j] = m.eval(acc.defaults[j], Val());
      return ov;
    }
    case -2:
      return boolean(args[0].is(Kind::Struct) && args[0].as<StructObj>()->type == acc.type);
    case -3: {
      if (!args[0].is(Kind::Struct)) fail("copier applied to a non-structure", "TYPE-ERROR");
      auto* o = new StructObj(acc.type);
      o->slots = args[0].as<StructObj>()->slots;
      return Val::adopt(o);
    }
    default:
      if (!args[0].is(Kind::Struct) || args[0].as<StructObj>()->type != acc.type)
        fail("The value " + to_string(args[0], true) + " is not of type " + acc.type->name, "TYPE-ERROR");
      return args[0].as<StructObj>()->slots[static_cast<std::size_t>(acc.index)];
  }
}

inline Val Interp::eval_defstruct(const Val& form) {
  Val spec = car(cdr(form));
  Symbol* name = require_symbol(consp(spec) ? car(spec) : spec);
  std::string conc = name->name + "-";
  std::string ctor = "MAKE-" + name->name;
  if (consp(spec)) {
    for (Val o = cdr(spec); consp(o); o = cdr(o)) {
      Val opt = car(o);
      if (!consp(opt)) continue;
      std::string on = symbol_of(car(opt))->name;
      if (on == ":CONC-NAME") conc = consp(cdr(opt)) && car(cdr(opt)).truthy()
                                         ? (car(cdr(opt)).is(Kind::String) ? car(cdr(opt)).as<String>()->s
                                                                           : symbol_of(car(cdr(opt)))->name)
                                         : "";
      if (on == ":CONSTRUCTOR" && consp(cdr(opt)) && car(cdr(opt)).truthy())
        ctor = symbol_of(car(cdr(opt)))->name;
    }
  }
  auto type = std::make_shared<StructType>();
  type->name = name->name;
  std::vector<Val> defaults;
  Val body = cdr(cdr(form));
  if (consp(body) && car(body).is(Kind::String)) body = cdr(body);
  for (Val s = body; consp(s); s = cdr(s)) {
    Val slot = car(s);
    type->slots.push_back(require_symbol(consp(slot) ? car(slot) : slot));
    defaults.push_back(consp(slot) && consp(cdr(slot)) ? car(cdr(slot)) : Val());
  }
  struct_types[name->name] = type;
  auto def = [&](const std::string& fname, int index, BuiltinFn fn) {
    Symbol* fs = intern(fname);
    accessors[fs] = Accessor{type, index, defaults};
    auto* f = new Function();
    f->name = fname;
    f->builtin = fn;
    f->min_args = index == -1 ? 0 : 1;
    f->max_args = index == -1 ? -1 : 1;
    fs->function = Val::adopt(f);
  };
  def(ctor, -1, struct_builtin);
  def("COPY-" + name->name, -3, struct_builtin);
  def(name->name + "-P", -2, struct_builtin);
  for (std::size_t i = 0; i < type->slots.size(); ++i)
    def(conc + type->slots[i]->name, static_cast<int>(i), struct_builtin);
  return sym(name);
}

}  // namespace vlisp
