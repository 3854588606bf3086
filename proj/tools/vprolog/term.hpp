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

// Term representation for vprolog.
//
// Atomic values (atoms, small integers, floats) live inline in a Term;
// variables, strings, big integers and compounds are reference-counted heap
// nodes. The interpreter is single-threaded, so counts are plain integers.
// Node destruction is iterative so that dropping a long list or a deep
// continuation chain never recurses on the C stack.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <new>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace vprolog {

using BigInt = boost::multiprecision::cpp_int;
using AtomId = std::uint32_t;

class Atoms {
 public:
  static Atoms& table() {
    static Atoms t;
    return t;
  }
  AtomId intern(std::string_view name) {
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) return it->second;
    AtomId id = static_cast<AtomId>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
  }
  const std::string& name(AtomId id) const { return names_[id]; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, AtomId> ids_;
};

inline AtomId atom(std::string_view name) { return Atoms::table().intern(name); }
inline const std::string& atom_name(AtomId id) { return Atoms::table().name(id); }

enum class Tag : std::uint8_t { None, Var, Atom, Int, Float, Big, Str, Cmp, Local };

struct Node;
void release(Node* n);

class Term {
 public:
  Term() noexcept : tag_(Tag::None), i_(0) {}
  ~Term() { drop(); }

  Term(const Term& o) noexcept : tag_(o.tag_), i_(o.i_) { retain(); }
  Term(Term&& o) noexcept : tag_(o.tag_), i_(o.i_) {
    o.tag_ = Tag::None;
    o.i_ = 0;
  }
  Term& operator=(const Term& o) noexcept {
    if (this != &o) {
      Term tmp(o);
      swap(tmp);
    }
    return *this;
  }
  Term& operator=(Term&& o) noexcept {
    if (this != &o) {
      Term tmp(std::move(o));
      swap(tmp);
    }
    return *this;
  }
  void swap(Term& o) noexcept {
    std::swap(tag_, o.tag_);
    std::swap(i_, o.i_);
  }

  static Term make_atom(AtomId a) {
    Term t;
    t.tag_ = Tag::Atom;
    t.a_ = a;
    return t;
  }
  static Term make_atom(std::string_view s) { return make_atom(atom(s)); }
  static Term make_int(std::int64_t v) {
    Term t;
    t.tag_ = Tag::Int;
    t.i_ = v;
    return t;
  }
  static Term make_float(double v) {
    Term t;
    t.tag_ = Tag::Float;
    t.f_ = v;
    return t;
  }
  static Term make_local(std::uint32_t idx) {
    Term t;
    t.tag_ = Tag::Local;
    t.i_ = idx;
    return t;
  }
  // Integer from a big value; narrows to Int when it fits.
  static Term make_integer(const BigInt& v);
  static Term make_string(std::string s);
  static Term make_var();
  static Term make_compound(AtomId name, std::vector<Term> args);
  // Builds an arity > 0 compound whose args are filled in place. The
  // result is marked as holding no clause locals.
  template <class F>
  static Term build_compound(AtomId name, std::uint32_t arity, F&& fill);
  static Term make_compound(std::string_view name, std::vector<Term> args) {
    return make_compound(atom(name), std::move(args));
  }

  Tag tag() const noexcept { return tag_; }
  bool is_none() const noexcept { return tag_ == Tag::None; }
  bool is_var() const noexcept { return tag_ == Tag::Var; }
  bool is_atom() const noexcept { return tag_ == Tag::Atom; }
  bool is_atom(AtomId a) const noexcept { return tag_ == Tag::Atom && a_ == a; }
  bool is_int() const noexcept { return tag_ == Tag::Int; }
  bool is_big() const noexcept { return tag_ == Tag::Big; }
  bool is_integer() const noexcept { return tag_ == Tag::Int || tag_ == Tag::Big; }
  bool is_float() const noexcept { return tag_ == Tag::Float; }
  bool is_number() const noexcept { return is_integer() || is_float(); }
  bool is_string() const noexcept { return tag_ == Tag::Str; }
  bool is_compound() const noexcept { return tag_ == Tag::Cmp; }
  bool is_local() const noexcept { return tag_ == Tag::Local; }
  bool is_atomic() const noexcept {
    return tag_ == Tag::Atom || is_number() || tag_ == Tag::Str;
  }
  bool is_callable() const noexcept { return tag_ == Tag::Atom || tag_ == Tag::Cmp; }

  AtomId atom_id() const noexcept { return a_; }
  std::int64_t int_value() const noexcept { return i_; }
  double float_value() const noexcept { return f_; }
  std::uint32_t local_index() const noexcept { return static_cast<std::uint32_t>(i_); }
  Node* node() const noexcept { return p_; }

  // Compound accessors.
  AtomId functor() const noexcept;
  std::uint32_t arity() const noexcept;
  const Term& arg(std::uint32_t i) const noexcept;
  Term& arg_mut(std::uint32_t i) noexcept;
  bool has_locals() const noexcept;

  const std::string& string_value() const noexcept;
  const BigInt& big_value() const noexcept;
  BigInt to_big() const;

  // Name and arity for atoms and compounds.
  AtomId name_id() const noexcept { return tag_ == Tag::Atom ? a_ : functor(); }
  std::uint32_t name_arity() const noexcept { return tag_ == Tag::Atom ? 0 : arity(); }

  bool same_ref(const Term& o) const noexcept { return tag_ == o.tag_ && i_ == o.i_; }

 private:
  friend struct Node;
  void retain() const noexcept;
  void drop() noexcept;

  Tag tag_;
  union {
    std::int64_t i_;
    double f_;
    AtomId a_;
    Node* p_;
  };
};

enum class NodeKind : std::uint8_t { Var, Str, Big, Cmp, Cont };

struct Node {
  std::uint32_t rc = 1;
  NodeKind kind;
  explicit Node(NodeKind k) : kind(k) {}
};

struct VarNode : Node {
  Term ref;  // None while unbound
  std::uint64_t stamp;
  explicit VarNode(std::uint64_t s) : Node(NodeKind::Var), stamp(s) {}
};

struct StrNode : Node {
  std::string value;
  explicit StrNode(std::string v) : Node(NodeKind::Str), value(std::move(v)) {}
};

struct BigNode : Node {
  BigInt value;
  explicit BigNode(BigInt v) : Node(NodeKind::Big), value(std::move(v)) {}
};

struct alignas(alignof(Term)) CmpNode : Node {
  AtomId name;
  std::uint32_t arity;
  bool has_locals = false;
  Term* args() { return reinterpret_cast<Term*>(this + 1); }
  const Term* args() const { return reinterpret_cast<const Term*>(this + 1); }
  CmpNode(AtomId n, std::uint32_t a) : Node(NodeKind::Cmp), name(n), arity(a) {}
};
static_assert(sizeof(CmpNode) % alignof(Term) == 0);

// Continuation cell: a goal with its cut barrier and the rest of the
// conjunction. Shared between choicepoints, so it is immutable once built.
struct ContNode : Node {
  Term goal;
  std::size_t cut_barrier;
  Node* next;  // ContNode or nullptr, owned (counted)
  ContNode(Term g, std::size_t cb, Node* n)
      : Node(NodeKind::Cont), goal(std::move(g)), cut_barrier(cb), next(n) {}
};

inline std::uint64_t& var_counter() {
  static std::uint64_t counter = 0;
  return counter;
}

inline void Term::retain() const noexcept {
  if (tag_ == Tag::Var || tag_ == Tag::Str || tag_ == Tag::Cmp || tag_ == Tag::Big) ++p_->rc;
}

inline void Term::drop() noexcept {
  if (tag_ == Tag::Var || tag_ == Tag::Str || tag_ == Tag::Cmp || tag_ == Tag::Big) {
    if (--p_->rc == 0) release(p_);
  }
  tag_ = Tag::None;
}

inline void destroy_node(Node* n) {
  switch (n->kind) {
    case NodeKind::Var:
      delete static_cast<VarNode*>(n);
      break;
    case NodeKind::Str:
      delete static_cast<StrNode*>(n);
      break;
    case NodeKind::Big:
      delete static_cast<BigNode*>(n);
      break;
    case NodeKind::Cmp: {
      auto* c = static_cast<CmpNode*>(n);
      for (std::uint32_t i = 0; i < c->arity; ++i) c->args()[i].~Term();
      c->~CmpNode();
      ::operator delete(c);
      break;
    }
    case NodeKind::Cont: {
      auto* c = static_cast<ContNode*>(n);
      Node* next = c->next;
      delete c;
      if (next && --next->rc == 0) release(next);
      break;
    }
  }
}

// Destroys `n` and anything it solely owns without recursing: nested
// releases triggered during destruction are queued instead.
inline void release(Node* n) {
  static std::vector<Node*> pending;
  static bool draining = false;
  pending.push_back(n);
  if (draining) return;
  draining = true;
  while (!pending.empty()) {
    Node* x = pending.back();
    pending.pop_back();
    destroy_node(x);
  }
  draining = false;
}

inline Term Term::make_string(std::string s) {
  Term t;
  t.p_ = new StrNode(std::move(s));
  t.tag_ = Tag::Str;
  return t;
}

inline Term Term::make_var() {
  Term t;
  t.p_ = new VarNode(++var_counter());
  t.tag_ = Tag::Var;
  return t;
}

inline Term Term::make_integer(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max())
    return make_int(v.convert_to<std::int64_t>());
  Term t;
  t.p_ = new BigNode(v);
  t.tag_ = Tag::Big;
  return t;
}

inline Term Term::make_compound(AtomId name, std::vector<Term> args) {
  if (args.empty()) return make_atom(name);
  auto arity = static_cast<std::uint32_t>(args.size());
  void* mem = ::operator new(sizeof(CmpNode) + sizeof(Term) * arity);
  auto* c = new (mem) CmpNode(name, arity);
  bool locals = false;
  for (std::uint32_t i = 0; i < arity; ++i) {
    if (args[i].is_local() || (args[i].is_compound() && args[i].has_locals())) locals = true;
    new (&c->args()[i]) Term(std::move(args[i]));
  }
  c->has_locals = locals;
  Term t;
  t.tag_ = Tag::Cmp;
  t.p_ = c;
  return t;
}

template <class F>
inline Term Term::build_compound(AtomId name, std::uint32_t arity, F&& fill) {
  void* mem = ::operator new(sizeof(CmpNode) + sizeof(Term) * arity);
  auto* c = new (mem) CmpNode(name, arity);
  for (std::uint32_t i = 0; i < arity; ++i) new (&c->args()[i]) Term();
  Term t;
  t.tag_ = Tag::Cmp;
  t.p_ = c;
  for (std::uint32_t i = 0; i < arity; ++i) c->args()[i] = fill(i);
  return t;
}

inline AtomId Term::functor() const noexcept { return static_cast<CmpNode*>(p_)->name; }
inline std::uint32_t Term::arity() const noexcept { return static_cast<CmpNode*>(p_)->arity; }
inline const Term& Term::arg(std::uint32_t i) const noexcept {
  return static_cast<CmpNode*>(p_)->args()[i];
}
inline Term& Term::arg_mut(std::uint32_t i) noexcept { return static_cast<CmpNode*>(p_)->args()[i]; }
inline bool Term::has_locals() const noexcept { return static_cast<CmpNode*>(p_)->has_locals; }
inline const std::string& Term::string_value() const noexcept {
  return static_cast<StrNode*>(p_)->value;
}
inline const BigInt& Term::big_value() const noexcept { return static_cast<BigNode*>(p_)->value; }
inline BigInt Term::to_big() const { return is_int() ? BigInt(i_) : big_value(); }

inline VarNode* var_node(const Term& t) { return static_cast<VarNode*>(t.node()); }

// Follows variable bindings.
inline const Term& deref(const Term& t) {
  const Term* cur = &t;
  while (cur->is_var()) {
    const Term& r = var_node(*cur)->ref;
    if (r.is_none()) return *cur;
    cur = &r;
  }
  return *cur;
}

// Handle to a continuation chain.
class Cont {
 public:
  Cont() = default;
  explicit Cont(ContNode* n) : n_(n) {}  // adopts
  Cont(const Cont& o) : n_(o.n_) {
    if (n_) ++n_->rc;
  }
  Cont(Cont&& o) noexcept : n_(o.n_) { o.n_ = nullptr; }
  Cont& operator=(Cont o) noexcept {
    std::swap(n_, o.n_);
    return *this;
  }
  ~Cont() {
    if (n_ && --n_->rc == 0) release(n_);
  }

  static Cont push(Term goal, std::size_t cut_barrier, const Cont& next) {
    Node* nx = next.n_;
    if (nx) ++nx->rc;
    return Cont(new ContNode(std::move(goal), cut_barrier, nx));
  }

  bool empty() const noexcept { return n_ == nullptr; }
  const Term& goal() const { return n_->goal; }
  std::size_t cut_barrier() const { return n_->cut_barrier; }
  Cont next() const {
    auto* nx = static_cast<ContNode*>(n_->next);
    if (nx) ++nx->rc;
    return Cont(nx);
  }

 private:
  ContNode* n_ = nullptr;
};

// Frequently used atoms.
struct Std {
  AtomId nil = atom("[]");
  AtomId dot = atom("[|]");
  AtomId curly = atom("{}");
  AtomId comma = atom(",");
  AtomId semicolon = atom(";");
  AtomId arrow = atom("->");
  AtomId soft_arrow = atom("*->");
  AtomId neck = atom(":-");
  AtomId dcg_arrow = atom("-->");
  AtomId not_provable = atom("\\+");
  AtomId true_ = atom("true");
  AtomId fail = atom("fail");
  AtomId false_ = atom("false");
  AtomId cut = atom("!");
  AtomId call = atom("call");
  AtomId minus = atom("-");
  AtomId plus = atom("+");
  AtomId slash = atom("/");
  AtomId colon = atom(":");
  AtomId error = atom("error");
  AtomId eof = atom("end_of_file");
  AtomId bar = atom("|");
  AtomId empty = atom("");
  AtomId caret = atom("^");
  AtomId equals = atom("=");
};

inline const Std& std_atoms() {
  static Std s;
  return s;
}

inline Term make_list(std::vector<Term> items, Term tail = Term::make_atom(std_atoms().nil)) {
  Term out = std::move(tail);
  for (auto it = items.rbegin(); it != items.rend(); ++it)
    out = Term::make_compound(std_atoms().dot, {std::move(*it), std::move(out)});
  return out;
}

inline Term make_cons(Term head, Term tail) {
  return Term::make_compound(std_atoms().dot, {std::move(head), std::move(tail)});
}

inline bool is_cons(const Term& t) {
  return t.is_compound() && t.functor() == std_atoms().dot && t.arity() == 2;
}

inline bool is_nil(const Term& t) { return t.is_atom(std_atoms().nil); }

}  // namespace vprolog
