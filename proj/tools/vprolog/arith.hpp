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

// Arithmetic evaluation for is/2 and the comparison builtins. Integers stay
// in int64 until an operation overflows, then continue as big integers.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <unordered_map>

#include "machine.hpp"

namespace vprolog {

inline std::mt19937_64& arith_rng() {
  static std::mt19937_64 rng(0x5eed);
  return rng;
}

inline double to_float(const Term& t) {
  if (t.is_int()) return static_cast<double>(t.int_value());
  if (t.is_big()) return t.big_value().convert_to<double>();
  return t.float_value();
}

inline Term check_float(double d) {
  if (std::isnan(d)) Machine::evaluation_error("undefined");
  if (std::isinf(d)) Machine::evaluation_error("float_overflow");
  return Term::make_float(d);
}

inline void require_int(const Term& t) {
  if (!t.is_integer()) Machine::type_error("integer", t);
}

// Exact numeric comparison: <0, 0, >0.
inline int num_compare(const Term& a, const Term& b) {
  if (a.is_int() && b.is_int())
    return a.int_value() < b.int_value() ? -1 : a.int_value() > b.int_value() ? 1 : 0;
  if (a.is_integer() && b.is_integer()) {
    BigInt x = a.to_big(), y = b.to_big();
    return x < y ? -1 : x > y ? 1 : 0;
  }
  double x = to_float(a), y = to_float(b);
  return x < y ? -1 : x > y ? 1 : 0;
}

inline Term float_to_integer(double d) {
  if (std::isnan(d) || std::isinf(d)) Machine::evaluation_error("undefined");
  if (d >= -9.2e18 && d <= 9.2e18) return Term::make_int(static_cast<std::int64_t>(d));
  return Term::make_integer(BigInt(d));
}

inline Term int_pow(const Term& base, const Term& exp) {
  BigInt b = base.to_big(), e = exp.to_big();
  if (e < 0) {
    if (b == 1) return Term::make_int(1);
    if (b == -1) return Term::make_int(e % 2 == 0 ? 1 : -1);
    if (b == 0) Machine::evaluation_error("zero_divisor");
    return check_float(std::pow(to_float(base), to_float(exp)));
  }
  if (e > 100000) Machine::throw_error(Term::make_compound("resource_error", {Term::make_atom("memory")}));
  return Term::make_integer(boost::multiprecision::pow(b, e.convert_to<unsigned>()));
}

enum class Fn : std::uint8_t {
  Add, Sub, Mul, Div, IntDiv, Mod, Rem, FloorDiv, Min, Max, Pow, Caret, Shl, Shr, And, Or, Xor,
  Atan2, Gcd, Log2Arg, Copysign, Truncate2,
  Neg, Pos, Abs, Sign, Sqrt, Sin, Cos, Tan, Asin, Acos, Atan, Exp, Log, Log2, Float, Integer,
  FIntPart, FFracPart, Trunc, Round, Ceil, Floor, Not, Msb, Sinh, Cosh, Tanh, Asinh, Acosh, Atanh,
  Random, RandomFloat, Succ, Cot,
};

inline const std::unordered_map<std::uint64_t, Fn>& fn_table() {
  static const std::unordered_map<std::uint64_t, Fn> t = [] {
    std::unordered_map<std::uint64_t, Fn> m;
    auto add = [&](const char* n, std::uint32_t a, Fn f) { m[pred_key(atom(n), a)] = f; };
    add("+", 2, Fn::Add); add("-", 2, Fn::Sub); add("*", 2, Fn::Mul); add("/", 2, Fn::Div);
    add("//", 2, Fn::IntDiv); add("mod", 2, Fn::Mod); add("rem", 2, Fn::Rem); add("div", 2, Fn::FloorDiv);
    add("min", 2, Fn::Min); add("max", 2, Fn::Max); add("**", 2, Fn::Pow); add("^", 2, Fn::Caret);
    add("<<", 2, Fn::Shl); add(">>", 2, Fn::Shr); add("/\\", 2, Fn::And); add("\\/", 2, Fn::Or);
    add("xor", 2, Fn::Xor); add("atan2", 2, Fn::Atan2); add("atan", 2, Fn::Atan2); add("gcd", 2, Fn::Gcd);
    add("log", 2, Fn::Log2Arg); add("copysign", 2, Fn::Copysign); add("truncate", 2, Fn::Truncate2);
    add("-", 1, Fn::Neg); add("+", 1, Fn::Pos); add("abs", 1, Fn::Abs); add("sign", 1, Fn::Sign);
    add("sqrt", 1, Fn::Sqrt); add("sin", 1, Fn::Sin); add("cos", 1, Fn::Cos); add("tan", 1, Fn::Tan);
    add("asin", 1, Fn::Asin); add("acos", 1, Fn::Acos); add("atan", 1, Fn::Atan); add("exp", 1, Fn::Exp);
    add("log", 1, Fn::Log); add("log2", 1, Fn::Log2); add("float", 1, Fn::Float);
    add("integer", 1, Fn::Integer); add("float_integer_part", 1, Fn::FIntPart);
    add("float_fractional_part", 1, Fn::FFracPart); add("truncate", 1, Fn::Trunc);
    add("round", 1, Fn::Round); add("ceiling", 1, Fn::Ceil); add("floor", 1, Fn::Floor);
    add("\\", 1, Fn::Not); add("msb", 1, Fn::Msb); add("sinh", 1, Fn::Sinh); add("cosh", 1, Fn::Cosh);
    add("tanh", 1, Fn::Tanh); add("asinh", 1, Fn::Asinh); add("acosh", 1, Fn::Acosh);
    add("atanh", 1, Fn::Atanh); add("random", 1, Fn::Random); add("random_float", 0, Fn::RandomFloat);
    add("succ", 1, Fn::Succ); add("cot", 1, Fn::Cot);
    return m;
  }();
  return t;
}

inline Term eval(const Term& raw);

inline Term eval_atom(const Term& t) {
  const std::string& n = atom_name(t.atom_id());
  if (n == "pi") return Term::make_float(M_PI);
  if (n == "e") return Term::make_float(M_E);
  if (n == "inf" || n == "infinite") return Term::make_float(std::numeric_limits<double>::infinity());
  if (n == "nan") return Term::make_float(std::numeric_limits<double>::quiet_NaN());
  if (n == "epsilon") return Term::make_float(std::numeric_limits<double>::epsilon());
  if (n == "max_tagged_integer") return Term::make_int((std::int64_t{1} << 60) - 1);
  if (n == "min_tagged_integer") return Term::make_int(-(std::int64_t{1} << 60));
  if (n == "random") return Term::make_int(static_cast<std::int64_t>(arith_rng()() >> 1));
  if (n == "random_float")
    return Term::make_float(std::uniform_real_distribution<double>(0.0, 1.0)(arith_rng()));
  if (n == "cputime") {
    return Term::make_float(static_cast<double>(std::clock()) / CLOCKS_PER_SEC);
  }
  if (n == "realtime")
    return Term::make_int(std::chrono::duration_cast<std::chrono::seconds>(
                              std::chrono::system_clock::now().time_since_epoch())
                              .count());
  if (n == "max_integer") return Term::make_int(std::numeric_limits<std::int64_t>::max());
  if (n == "min_integer") return Term::make_int(std::numeric_limits<std::int64_t>::min());
  if (n == "[]" ) Machine::type_error("evaluable", Machine::indicator(t.atom_id(), 0));
  if (utf8_length(n) == 1) {
    std::size_t i = 0;
    return Term::make_int(next_utf8(n, i));
  }
  Machine::type_error("evaluable", Machine::indicator(t.atom_id(), 0));
}

inline Term apply_binary(Fn f, const Term& a, const Term& b) {
  bool ints = a.is_int() && b.is_int();
  bool integers = a.is_integer() && b.is_integer();
  std::int64_t x = ints ? a.int_value() : 0, y = ints ? b.int_value() : 0, r = 0;
  switch (f) {
    case Fn::Add:
      if (ints && !__builtin_add_overflow(x, y, &r)) return Term::make_int(r);
      if (integers) return Term::make_integer(a.to_big() + b.to_big());
      return check_float(to_float(a) + to_float(b));
    case Fn::Sub:
      if (ints && !__builtin_sub_overflow(x, y, &r)) return Term::make_int(r);
      if (integers) return Term::make_integer(a.to_big() - b.to_big());
      return check_float(to_float(a) - to_float(b));
    case Fn::Mul:
      if (ints && !__builtin_mul_overflow(x, y, &r)) return Term::make_int(r);
      if (integers) return Term::make_integer(a.to_big() * b.to_big());
      return check_float(to_float(a) * to_float(b));
    case Fn::Div:
      if (integers) {
        if (b.is_int() && b.int_value() == 0) Machine::evaluation_error("zero_divisor");
        if (ints && !(x == std::numeric_limits<std::int64_t>::min() && y == -1)) {
          if (x % y == 0) return Term::make_int(x / y);
          return Term::make_float(static_cast<double>(x) / static_cast<double>(y));
        }
        BigInt p = a.to_big(), q = b.to_big();
        if (p % q == 0) return Term::make_integer(p / q);
        return check_float(to_float(a) / to_float(b));
      }
      if (to_float(b) == 0.0) Machine::evaluation_error("zero_divisor");
      return check_float(to_float(a) / to_float(b));
    case Fn::IntDiv:
    case Fn::Rem:
    case Fn::Mod:
    case Fn::FloorDiv: {
      require_int(a);
      require_int(b);
      if (b.is_int() && b.int_value() == 0) Machine::evaluation_error("zero_divisor");
      if (ints && !(x == std::numeric_limits<std::int64_t>::min() && y == -1)) {
        std::int64_t q = x / y, m = x % y;
        switch (f) {
          case Fn::IntDiv: return Term::make_int(q);
          case Fn::Rem: return Term::make_int(m);
          case Fn::Mod: return Term::make_int(m != 0 && ((m < 0) != (y < 0)) ? m + y : m);
          default: return Term::make_int(m != 0 && ((m < 0) != (y < 0)) ? q - 1 : q);
        }
      }
      BigInt p = a.to_big(), d = b.to_big();
      BigInt q = p / d, m = p % d;
      switch (f) {
        case Fn::IntDiv: return Term::make_integer(q);
        case Fn::Rem: return Term::make_integer(m);
        case Fn::Mod: return Term::make_integer(m != 0 && ((m < 0) != (d < 0)) ? BigInt(m + d) : m);
        default: return Term::make_integer(m != 0 && ((m < 0) != (d < 0)) ? BigInt(q - 1) : q);
      }
    }
    case Fn::Min:
      return num_compare(b, a) < 0 ? b : a;
    case Fn::Max:
      return num_compare(b, a) > 0 ? b : a;
    case Fn::Pow:
      if (integers) return int_pow(a, b);
      return check_float(std::pow(to_float(a), to_float(b)));
    case Fn::Caret:
      if (integers) {
        if (b.to_big() < 0 && !(a.to_big() == 1 || a.to_big() == -1)) {
          if (a.to_big() == 0) Machine::evaluation_error("zero_divisor");
          Machine::type_error("float", a);
        }
        return int_pow(a, b);
      }
      return check_float(std::pow(to_float(a), to_float(b)));
    case Fn::Shl:
      require_int(a);
      require_int(b);
      if (ints && y >= 0 && y < 62 && x >= -(std::int64_t{1} << (62 - y)) && x < (std::int64_t{1} << (62 - y)))
        return Term::make_int(x << y);
      return Term::make_integer(a.to_big() << static_cast<unsigned>(b.to_big()));
    case Fn::Shr:
      require_int(a);
      require_int(b);
      if (ints && y >= 0) return Term::make_int(y >= 63 ? (x < 0 ? -1 : 0) : x >> y);
      return Term::make_integer(a.to_big() >> static_cast<unsigned>(b.to_big()));
    case Fn::And:
      require_int(a);
      require_int(b);
      if (ints) return Term::make_int(x & y);
      return Term::make_integer(a.to_big() & b.to_big());
    case Fn::Or:
      require_int(a);
      require_int(b);
      if (ints) return Term::make_int(x | y);
      return Term::make_integer(a.to_big() | b.to_big());
    case Fn::Xor:
      require_int(a);
      require_int(b);
      if (ints) return Term::make_int(x ^ y);
      return Term::make_integer(a.to_big() ^ b.to_big());
    case Fn::Atan2:
      return check_float(std::atan2(to_float(a), to_float(b)));
    case Fn::Gcd: {
      require_int(a);
      require_int(b);
      BigInt p = boost::multiprecision::abs(a.to_big()), q = boost::multiprecision::abs(b.to_big());
      return Term::make_integer(boost::multiprecision::gcd(p, q));
    }
    case Fn::Log2Arg: {
      double base = to_float(a), v = to_float(b);
      if (base <= 0 || v <= 0) Machine::evaluation_error("undefined");
      return check_float(std::log(v) / std::log(base));
    }
    case Fn::Copysign:
      return check_float(std::copysign(to_float(a), to_float(b)));
    case Fn::Truncate2:
      return float_to_integer(std::trunc(to_float(a)));
    default:
      break;
  }
  Machine::type_error("evaluable", a);
}

inline Term apply_unary(Fn f, const Term& a) {
  switch (f) {
    case Fn::Neg:
      if (a.is_int() && a.int_value() != std::numeric_limits<std::int64_t>::min())
        return Term::make_int(-a.int_value());
      if (a.is_integer()) return Term::make_integer(-a.to_big());
      return Term::make_float(-a.float_value());
    case Fn::Pos:
      return a;
    case Fn::Abs:
      if (a.is_int() && a.int_value() != std::numeric_limits<std::int64_t>::min())
        return Term::make_int(a.int_value() < 0 ? -a.int_value() : a.int_value());
      if (a.is_integer()) return Term::make_integer(boost::multiprecision::abs(a.to_big()));
      return Term::make_float(std::fabs(a.float_value()));
    case Fn::Sign:
      if (a.is_integer()) {
        int s = a.is_int() ? (a.int_value() > 0) - (a.int_value() < 0) : a.big_value().sign();
        return Term::make_int(s);
      }
      return Term::make_float(a.float_value() > 0 ? 1.0 : a.float_value() < 0 ? -1.0 : 0.0);
    case Fn::Sqrt:
      if (to_float(a) < 0) Machine::evaluation_error("undefined");
      return check_float(std::sqrt(to_float(a)));
    case Fn::Sin: return check_float(std::sin(to_float(a)));
    case Fn::Cos: return check_float(std::cos(to_float(a)));
    case Fn::Tan: return check_float(std::tan(to_float(a)));
    case Fn::Cot: return check_float(1.0 / std::tan(to_float(a)));
    case Fn::Asin: return check_float(std::asin(to_float(a)));
    case Fn::Acos: return check_float(std::acos(to_float(a)));
    case Fn::Atan: return check_float(std::atan(to_float(a)));
    case Fn::Sinh: return check_float(std::sinh(to_float(a)));
    case Fn::Cosh: return check_float(std::cosh(to_float(a)));
    case Fn::Tanh: return check_float(std::tanh(to_float(a)));
    case Fn::Asinh: return check_float(std::asinh(to_float(a)));
    case Fn::Acosh: return check_float(std::acosh(to_float(a)));
    case Fn::Atanh: return check_float(std::atanh(to_float(a)));
    case Fn::Exp: return check_float(std::exp(to_float(a)));
    case Fn::Log:
      if (to_float(a) <= 0) {
        if (to_float(a) == 0 && a.is_integer()) Machine::evaluation_error("undefined");
        Machine::evaluation_error("undefined");
      }
      return check_float(std::log(to_float(a)));
    case Fn::Log2:
      if (to_float(a) <= 0) Machine::evaluation_error("undefined");
      return check_float(std::log2(to_float(a)));
    case Fn::Float:
      return Term::make_float(to_float(a));
    case Fn::Integer:
      if (a.is_integer()) return a;
      return float_to_integer(std::round(a.float_value()));
    case Fn::FIntPart:
      return Term::make_float(std::trunc(to_float(a)));
    case Fn::FFracPart: {
      double d = to_float(a);
      return Term::make_float(d - std::trunc(d));
    }
    case Fn::Trunc:
      if (a.is_integer()) return a;
      return float_to_integer(std::trunc(a.float_value()));
    case Fn::Round:
      if (a.is_integer()) return a;
      return float_to_integer(std::round(a.float_value()));
    case Fn::Ceil:
      if (a.is_integer()) return a;
      return float_to_integer(std::ceil(a.float_value()));
    case Fn::Floor:
      if (a.is_integer()) return a;
      return float_to_integer(std::floor(a.float_value()));
    case Fn::Not:
      require_int(a);
      if (a.is_int()) return Term::make_int(~a.int_value());
      return Term::make_integer(-a.to_big() - 1);
    case Fn::Msb: {
      require_int(a);
      BigInt v = a.to_big();
      if (v <= 0) Machine::type_error("not_less_than_one", a);
      return Term::make_int(static_cast<std::int64_t>(boost::multiprecision::msb(v)));
    }
    case Fn::Random: {
      require_int(a);
      std::int64_t n = a.int_value();
      if (n <= 0) Machine::evaluation_error("undefined");
      return Term::make_int(std::uniform_int_distribution<std::int64_t>(0, n - 1)(arith_rng()));
    }
    case Fn::Succ:
      return apply_binary(Fn::Add, a, Term::make_int(1));
    default:
      break;
  }
  Machine::type_error("evaluable", a);
}

inline Term eval(const Term& raw) {
  const Term& t = deref(raw);
  switch (t.tag()) {
    case Tag::Int:
    case Tag::Big:
    case Tag::Float:
      return t;
    case Tag::Var:
      Machine::instantiation_error();
    case Tag::Atom:
      return eval_atom(t);
    case Tag::Str:
      if (utf8_length(t.string_value()) == 1) {
        std::size_t i = 0;
        return Term::make_int(next_utf8(t.string_value(), i));
      }
      Machine::type_error("evaluable", t);
    case Tag::Cmp: {
      if (is_cons(t) && is_nil(deref(t.arg(1)))) return eval(t.arg(0));
      auto& table = fn_table();
      auto it = table.find(pred_key(t.functor(), t.arity()));
      if (it == table.end())
        Machine::type_error("evaluable", Machine::indicator(t.functor(), t.arity()));
      if (t.arity() == 1) return apply_unary(it->second, eval(t.arg(0)));
      return apply_binary(it->second, eval(t.arg(0)), eval(t.arg(1)));
    }
    default:
      break;
  }
  Machine::type_error("evaluable", t);
}

}  // namespace vprolog
