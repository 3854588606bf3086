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

// Lisp values. Fixnums, floats and characters are immediate; everything
// else is a refcounted heap object. Symbols are interned and never freed.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace vlisp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Tag : std::uint8_t { Nil, Int, Float, Char, Obj };
enum class Kind : std::uint8_t { Symbol, Cons, String, Big, Ratio, Function, Hash, Vector, Struct, Env };

struct Obj {
  std::uint32_t rc = 1;
  Kind kind;
  explicit Obj(Kind k) : kind(k) {}
  virtual ~Obj() = default;
};

void release(Obj* o);

class Val {
 public:
  Val() noexcept : tag_(Tag::Nil), i_(0) {}
  ~Val() { drop(); }
  Val(const Val& o) noexcept : tag_(o.tag_), i_(o.i_) {
    if (tag_ == Tag::Obj) ++o_->rc;
  }
  Val(Val&& o) noexcept : tag_(o.tag_), i_(o.i_) { o.tag_ = Tag::Nil; }
  Val& operator=(const Val& o) noexcept {
    Val t(o);
    swap(t);
    return *this;
  }
  Val& operator=(Val&& o) noexcept {
    Val t(std::move(o));
    swap(t);
    return *this;
  }
  void swap(Val& o) noexcept {
    std::swap(tag_, o.tag_);
    std::swap(i_, o.i_);
  }

  static Val fix(std::int64_t v) {
    Val r;
    r.tag_ = Tag::Int;
    r.i_ = v;
    return r;
  }
  static Val flo(double v) {
    Val r;
    r.tag_ = Tag::Float;
    r.f_ = v;
    return r;
  }
  static Val chr(std::uint32_t c) {
    Val r;
    r.tag_ = Tag::Char;
    r.i_ = c;
    return r;
  }
  // Takes ownership of a fresh object (rc == 1).
  static Val adopt(Obj* o) {
    Val r;
    r.tag_ = Tag::Obj;
    r.o_ = o;
    return r;
  }
  // Shares an object that is owned elsewhere.
  static Val share(Obj* o) {
    ++o->rc;
    return adopt(o);
  }

  Tag tag() const noexcept { return tag_; }
  bool nil() const noexcept { return tag_ == Tag::Nil; }
  bool truthy() const noexcept { return tag_ != Tag::Nil; }
  bool is_fix() const noexcept { return tag_ == Tag::Int; }
  bool is_float() const noexcept { return tag_ == Tag::Float; }
  bool is_char() const noexcept { return tag_ == Tag::Char; }
  bool is_obj() const noexcept { return tag_ == Tag::Obj; }
  bool is(Kind k) const noexcept { return tag_ == Tag::Obj && o_->kind == k; }

  std::int64_t fixnum() const noexcept { return i_; }
  double flonum() const noexcept { return f_; }
  std::uint32_t character() const noexcept { return static_cast<std::uint32_t>(i_); }
  Obj* obj() const noexcept { return o_; }
  template <class T>
  T* as() const noexcept {
    return static_cast<T*>(o_);
  }

  bool identical(const Val& o) const noexcept {
    if (tag_ != o.tag_) return false;
    if (tag_ == Tag::Float) return f_ == o.f_ || (f_ != f_ && o.f_ != o.f_);
    return i_ == o.i_;
  }

 private:
  void drop() noexcept {
    if (tag_ == Tag::Obj && --o_->rc == 0) release(o_);
    tag_ = Tag::Nil;
  }

  Tag tag_;
  union {
    std::int64_t i_;
    double f_;
    Obj* o_;
  };
};

struct Symbol : Obj {
  std::string name;
  Val value;
  Val function;
  bool bound = false;
  bool special = false;
  bool constant = false;
  bool keyword = false;
  int form = 0;  // special-form id; 0 for ordinary symbols
  Val plist;
  explicit Symbol(std::string n) : Obj(Kind::Symbol), name(std::move(n)) {}
};

struct Cons : Obj {
  Val car, cdr;
  Cons(Val a, Val d) : Obj(Kind::Cons), car(std::move(a)), cdr(std::move(d)) {}
};

struct String : Obj {
  std::string s;
  explicit String(std::string v) : Obj(Kind::String), s(std::move(v)) {}
};

struct Big : Obj {
  BigInt v;
  explicit Big(BigInt x) : Obj(Kind::Big), v(std::move(x)) {}
};

struct Ratio : Obj {
  Rational v;
  explicit Ratio(Rational x) : Obj(Kind::Ratio), v(std::move(x)) {}
};

struct VectorObj : Obj {
  std::vector<Val> items;
  bool adjustable = false;
  std::int64_t fill = -1;  // fill pointer; -1 when absent
  std::vector<std::size_t> dims;  // empty for one-dimensional vectors
  VectorObj() : Obj(Kind::Vector) {}
  std::size_t active() const { return fill >= 0 ? static_cast<std::size_t>(fill) : items.size(); }
};

struct StructType {
  std::string name;
  std::vector<Symbol*> slots;
};

struct StructObj : Obj {
  std::shared_ptr<StructType> type;
  std::vector<Val> slots;
  explicit StructObj(std::shared_ptr<StructType> t) : Obj(Kind::Struct), type(std::move(t)) {}
};

struct Env;

class Interp;
using BuiltinFn = Val (*)(Interp&, std::vector<Val>& args);

struct LambdaList {
  struct Opt {
    Val var;  // symbol, or a nested pattern for destructuring
    Val init;
    Symbol* supplied = nullptr;
  };
  struct Key {
    Symbol* var = nullptr;
    Symbol* keyword = nullptr;
    Val init;
    Symbol* supplied = nullptr;
  };
  std::vector<Val> required;
  std::vector<Opt> optional;
  Symbol* rest = nullptr;
  bool has_key = false;
  bool allow_other_keys = false;
  std::vector<Key> keys;
  std::vector<std::pair<Symbol*, Val>> aux;
};

struct Function : Obj {
  std::string name;
  BuiltinFn builtin = nullptr;
  int min_args = 0;
  int max_args = -1;
  // Closures
  std::shared_ptr<LambdaList> params;
  Val body;
  Val env;  // Env or nil
  bool macro = false;
  Symbol* block_name = nullptr;  // implicit block around the body, if any
  Function() : Obj(Kind::Function) {}
};

struct Env : Obj {
  struct Binding {
    Symbol* sym;
    Val value;
    bool fn;
  };
  std::vector<Binding> vars;
  Val parent;
  Env() : Obj(Kind::Env) {}
  explicit Env(Val p) : Obj(Kind::Env), parent(std::move(p)) {}
};

// Hash tables key on eql or equal identity of values.
std::size_t hash_value(const Val& v, bool equal);
bool eql(const Val& a, const Val& b);
bool equal(const Val& a, const Val& b);

struct HashObj : Obj {
  int test = 1;  // 0 eq, 1 eql, 2 equal, 3 equalp
  struct Hasher {
    const HashObj* h;
    std::size_t operator()(const Val& v) const { return hash_value(v, h->test >= 2); }
  };
  struct Eq {
    const HashObj* h;
    bool operator()(const Val& a, const Val& b) const { return h->test >= 2 ? equal(a, b) : eql(a, b); }
  };
  std::unordered_map<Val, Val, Hasher, Eq> map;
  std::vector<Val> order;  // insertion order for maphash
  HashObj() : Obj(Kind::Hash), map(16, Hasher{this}, Eq{this}) {}
};

// Destruction goes through a work list so long chains do not recurse.
inline void release(Obj* o) {
  static std::vector<Obj*> pending;
  static bool draining = false;
  pending.push_back(o);
  if (draining) return;
  draining = true;
  while (!pending.empty()) {
    Obj* x = pending.back();
    pending.pop_back();
    delete x;
  }
  draining = false;
}

// ---------------------------------------------------------------------------
// Symbols

class Symbols {
 public:
  static Symbols& table() {
    static Symbols t;
    return t;
  }
  Symbol* intern(std::string_view name) {
    auto it = map_.find(std::string(name));
    if (it != map_.end()) return it->second;
    auto* s = new Symbol(std::string(name));
    s->rc = 1u << 30;
    if (!name.empty() && name[0] == ':') {
      s->keyword = true;
      s->constant = true;
      s->bound = true;
      s->value = Val::share(s);
    }
    map_.emplace(std::string(name), s);
    return s;
  }

 private:
  std::unordered_map<std::string, Symbol*> map_;
};

inline Symbol* intern(std::string_view name) { return Symbols::table().intern(name); }
inline Val sym(std::string_view name) { return Val::share(intern(name)); }
inline Val sym(Symbol* s) { return Val::share(s); }

inline Symbol* T_sym() {
  static Symbol* t = [] {
    Symbol* s = intern("T");
    s->constant = true;
    s->bound = true;
    s->value = Val::share(s);
    return s;
  }();
  return t;
}
inline Val T() { return Val::share(T_sym()); }
inline Val boolean(bool b) { return b ? T() : Val(); }

inline bool is_symbol(const Val& v) { return v.nil() || v.is(Kind::Symbol); }
inline Symbol* symbol_of(const Val& v) { return v.nil() ? intern("NIL") : v.as<Symbol>(); }

// ---------------------------------------------------------------------------
// Constructors and list helpers

inline Val cons(Val a, Val d) { return Val::adopt(new Cons(std::move(a), std::move(d))); }
inline Val str(std::string s) { return Val::adopt(new String(std::move(s))); }
inline bool consp(const Val& v) { return v.is(Kind::Cons); }
inline const Val& car(const Val& v) { return v.as<Cons>()->car; }
inline const Val& cdr(const Val& v) { return v.as<Cons>()->cdr; }

inline Val list(std::vector<Val> items, Val tail = Val()) {
  Val out = std::move(tail);
  for (auto it = items.rbegin(); it != items.rend(); ++it) out = cons(std::move(*it), std::move(out));
  return out;
}

struct LispError : std::runtime_error {
  Val condition;  // a string or structured datum; printed by the top level
  std::string type = "SIMPLE-ERROR";
  explicit LispError(const std::string& msg, std::string t = "SIMPLE-ERROR")
      : std::runtime_error(msg), type(std::move(t)) {}
};

[[noreturn]] inline void fail(const std::string& msg, const char* type = "SIMPLE-ERROR") {
  throw LispError(msg, type);
}

inline std::vector<Val> to_vector(const Val& l) {
  std::vector<Val> out;
  Val cur = l;
  while (consp(cur)) {
    out.push_back(car(cur));
    cur = cdr(cur);
  }
  if (!cur.nil()) fail("not a proper list", "TYPE-ERROR");
  return out;
}

inline std::size_t list_length(const Val& l) {
  std::size_t n = 0;
  const Val* cur = &l;
  while (consp(*cur)) {
    ++n;
    cur = &cdr(*cur);
  }
  return n;
}

// ---------------------------------------------------------------------------
// Numbers

inline bool is_number(const Val& v) {
  return v.is_fix() || v.is_float() || v.is(Kind::Big) || v.is(Kind::Ratio);
}
inline bool is_integer(const Val& v) { return v.is_fix() || v.is(Kind::Big); }
inline bool is_rational(const Val& v) { return is_integer(v) || v.is(Kind::Ratio); }

inline Val make_int(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return Val::fix(v.convert_to<std::int64_t>());
  return Val::adopt(new Big(v));
}

inline Val make_rational(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1) return make_int(boost::multiprecision::numerator(r));
  return Val::adopt(new Ratio(r));
}

inline BigInt to_big(const Val& v) {
  if (v.is_fix()) return BigInt(v.fixnum());
  return v.as<Big>()->v;
}

inline Rational to_rational(const Val& v) {
  if (v.is_fix()) return Rational(v.fixnum());
  if (v.is(Kind::Big)) return Rational(v.as<Big>()->v);
  return v.as<Ratio>()->v;
}

inline double to_double(const Val& v) {
  if (v.is_fix()) return static_cast<double>(v.fixnum());
  if (v.is_float()) return v.flonum();
  if (v.is(Kind::Big)) return v.as<Big>()->v.convert_to<double>();
  if (v.is(Kind::Ratio)) return v.as<Ratio>()->v.convert_to<double>();
  fail("not a number", "TYPE-ERROR");
}

inline bool eql(const Val& a, const Val& b) {
  if (a.identical(b)) return true;
  if (a.is(Kind::Big) && b.is(Kind::Big)) return a.as<Big>()->v == b.as<Big>()->v;
  if (a.is(Kind::Ratio) && b.is(Kind::Ratio)) return a.as<Ratio>()->v == b.as<Ratio>()->v;
  return false;
}

inline bool equal(const Val& a, const Val& b) {
  if (eql(a, b)) return true;
  if (a.is(Kind::String) && b.is(Kind::String)) return a.as<String>()->s == b.as<String>()->s;
  if (consp(a) && consp(b)) {
    const Val* x = &a;
    const Val* y = &b;
    while (consp(*x) && consp(*y)) {
      if (!equal(car(*x), car(*y))) return false;
      x = &cdr(*x);
      y = &cdr(*y);
    }
    return equal(*x, *y);
  }
  return false;
}

inline std::size_t hash_value(const Val& v, bool deep) {
  switch (v.tag()) {
    case Tag::Nil: return 0x9e37;
    case Tag::Int: return std::hash<std::int64_t>()(v.fixnum());
    case Tag::Float: return std::hash<double>()(v.flonum());
    case Tag::Char: return v.character() * 31u + 7u;
    case Tag::Obj: break;
  }
  switch (v.obj()->kind) {
    case Kind::Big: return std::hash<std::string>()(v.as<Big>()->v.str());
    case Kind::Ratio: return std::hash<std::string>()(v.as<Ratio>()->v.str());
    case Kind::String:
      if (deep) return std::hash<std::string>()(v.as<String>()->s);
      break;
    case Kind::Cons:
      if (deep) {
        std::size_t h = 17;
        const Val* cur = &v;
        int n = 0;
        while (consp(*cur) && n++ < 16) {
          h = h * 31 + hash_value(car(*cur), true);
          cur = &cdr(*cur);
        }
        return h;
      }
      break;
    default: break;
  }
  return std::hash<const void*>()(v.obj());
}

}  // namespace vlisp
