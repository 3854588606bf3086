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

// The numeric tower: fixnums overflow into bignums, integer division yields
// ratios, and any float operand makes the result a double.

#pragma once

#include <boost/multiprecision/integer.hpp>

#include <cmath>
#include <random>

#include "interp.hpp"

namespace vlisp {

inline const Val& need_number(const Val& v) {
  if (!is_number(v)) fail("The value " + to_string(v, true) + " is not of type NUMBER", "TYPE-ERROR");
  return v;
}

inline const Val& need_integer(const Val& v) {
  if (!is_integer(v)) fail("The value " + to_string(v, true) + " is not of type INTEGER", "TYPE-ERROR");
  return v;
}

inline Val int_from_double(double d) {
  if (!std::isfinite(d)) fail("floating point overflow", "FLOATING-POINT-OVERFLOW");
  if (std::fabs(d) < 9.0e18) return Val::fix(static_cast<std::int64_t>(d));
  return make_int(BigInt(d));
}

inline Val arith_add(const Val& a, const Val& b) {
  if (a.is_fix() && b.is_fix()) {
    std::int64_t r;
    if (!__builtin_add_overflow(a.fixnum(), b.fixnum(), &r)) return Val::fix(r);
    return make_int(BigInt(a.fixnum()) + b.fixnum());
  }
  need_number(a);
  need_number(b);
  if (a.is_float() || b.is_float()) return Val::flo(to_double(a) + to_double(b));
  if (is_integer(a) && is_integer(b)) return make_int(to_big(a) + to_big(b));
  return make_rational(to_rational(a) + to_rational(b));
}

inline Val arith_neg(const Val& a) {
  need_number(a);
  if (a.is_fix() && a.fixnum() != INT64_MIN) return Val::fix(-a.fixnum());
  if (a.is_float()) return Val::flo(-a.flonum());
  if (is_integer(a)) return make_int(-to_big(a));
  return make_rational(-to_rational(a));
}

inline Val arith_sub(const Val& a, const Val& b) {
  if (a.is_fix() && b.is_fix()) {
    std::int64_t r;
    if (!__builtin_sub_overflow(a.fixnum(), b.fixnum(), &r)) return Val::fix(r);
    return make_int(BigInt(a.fixnum()) - b.fixnum());
  }
  need_number(a);
  need_number(b);
  if (a.is_float() || b.is_float()) return Val::flo(to_double(a) - to_double(b));
  if (is_integer(a) && is_integer(b)) return make_int(to_big(a) - to_big(b));
  return make_rational(to_rational(a) - to_rational(b));
}

inline Val arith_mul(const Val& a, const Val& b) {
  if (a.is_fix() && b.is_fix()) {
    std::int64_t r;
    if (!__builtin_mul_overflow(a.fixnum(), b.fixnum(), &r)) return Val::fix(r);
    return make_int(BigInt(a.fixnum()) * b.fixnum());
  }
  need_number(a);
  need_number(b);
  if (a.is_float() || b.is_float()) return Val::flo(to_double(a) * to_double(b));
  if (is_integer(a) && is_integer(b)) return make_int(to_big(a) * to_big(b));
  return make_rational(to_rational(a) * to_rational(b));
}

inline bool is_zero(const Val& v) {
  if (v.is_fix()) return v.fixnum() == 0;
  if (v.is_float()) return v.flonum() == 0.0;
  return false;  // bignums and ratios are never zero
}

inline Val arith_div(const Val& a, const Val& b) {
  need_number(a);
  need_number(b);
  if (is_zero(b)) fail("arithmetic error DIVISION-BY-ZERO signalled", "DIVISION-BY-ZERO");
  if (a.is_float() || b.is_float()) return Val::flo(to_double(a) / to_double(b));
  if (a.is_fix() && b.is_fix() && b.fixnum() != -1 && a.fixnum() % b.fixnum() == 0)
    return Val::fix(a.fixnum() / b.fixnum());
  return make_rational(to_rational(a) / to_rational(b));
}

inline int num_compare(const Val& a, const Val& b) {
  if (a.is_fix() && b.is_fix()) return a.fixnum() < b.fixnum() ? -1 : (a.fixnum() > b.fixnum() ? 1 : 0);
  need_number(a);
  need_number(b);
  if (a.is_float() || b.is_float()) {
    double x = to_double(a), y = to_double(b);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  if (is_integer(a) && is_integer(b)) {
    BigInt x = to_big(a), y = to_big(b);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  Rational x = to_rational(a), y = to_rational(b);
  return x < y ? -1 : (x > y ? 1 : 0);
}

inline bool num_equal(const Val& a, const Val& b) { return num_compare(a, b) == 0; }

inline int sign_of(const Val& v) {
  need_number(v);
  if (v.is_fix()) return v.fixnum() < 0 ? -1 : (v.fixnum() > 0 ? 1 : 0);
  if (v.is_float()) return v.flonum() < 0 ? -1 : (v.flonum() > 0 ? 1 : 0);
  if (v.is(Kind::Big)) return v.as<Big>()->v.sign();
  return v.as<Ratio>()->v.sign();
}

enum class RoundMode { Floor, Ceiling, Truncate, Round };

// Quotient and remainder of a / b under the given rounding.
inline std::pair<Val, Val> divide(const Val& a, const Val& b, RoundMode mode) {
  need_number(a);
  need_number(b);
  if (is_zero(b)) fail("arithmetic error DIVISION-BY-ZERO signalled", "DIVISION-BY-ZERO");
  if (a.is_float() || b.is_float()) {
    double x = to_double(a), y = to_double(b), q = x / y;
    switch (mode) {
      case RoundMode::Floor: q = std::floor(q); break;
      case RoundMode::Ceiling: q = std::ceil(q); break;
      case RoundMode::Truncate: q = std::trunc(q); break;
      case RoundMode::Round: q = std::nearbyint(q); break;
    }
    return {int_from_double(q), Val::flo(x - q * y)};
  }
  if (a.is_fix() && b.is_fix() && !(a.fixnum() == INT64_MIN && b.fixnum() == -1)) {
    std::int64_t x = a.fixnum(), y = b.fixnum(), q = x / y, r = x % y;
    switch (mode) {
      case RoundMode::Floor:
        if (r != 0 && ((r < 0) != (y < 0))) {
          --q;
          r += y;
        }
        break;
      case RoundMode::Ceiling:
        if (r != 0 && ((r < 0) == (y < 0))) {
          ++q;
          r -= y;
        }
        break;
      case RoundMode::Truncate: break;
      case RoundMode::Round: {
        // Nearest, ties to even.
        std::int64_t twice = 2 * (r < 0 ? -r : r), ay = y < 0 ? -y : y;
        if (twice > ay || (twice == ay && (q % 2 != 0))) {
          std::int64_t step = ((x < 0) != (y < 0)) ? -1 : 1;
          q += step;
          r -= step * y;
        }
        break;
      }
    }
    return {Val::fix(q), Val::fix(r)};
  }
  Rational x = to_rational(a), y = to_rational(b), ratio = x / y;
  BigInt n = boost::multiprecision::numerator(ratio), d = boost::multiprecision::denominator(ratio);
  BigInt q = n / d, r = n % d;  // truncating
  switch (mode) {
    case RoundMode::Floor:
      if (r != 0 && n < 0) --q;
      break;
    case RoundMode::Ceiling:
      if (r != 0 && n > 0) ++q;
      break;
    case RoundMode::Truncate: break;
    case RoundMode::Round: {
      Rational frac = ratio - Rational(q);
      Rational afrac = frac < 0 ? Rational(-frac) : frac;
      if (afrac > Rational(1, 2) || (afrac == Rational(1, 2) && q % 2 != 0)) q += frac < 0 ? -1 : 1;
      break;
    }
  }
  Rational rem = x - Rational(q) * y;
  return {make_int(q), make_rational(rem)};
}

inline Val set_values(Interp& m, std::vector<Val> vals) {
  Val first = vals.empty() ? Val() : vals[0];
  m.mv = std::move(vals);
  m.mv_fresh = true;
  return first;
}

inline Val expt(const Val& base, const Val& power) {
  need_number(base);
  need_number(power);
  if (is_integer(power) && is_rational(base)) {
    BigInt p = to_big(power);
    bool neg = p < 0;
    if (neg) p = -p;
    if (p > 1000000) fail("exponent too large", "STORAGE-CONDITION");
    unsigned e = p.convert_to<unsigned>();
    Rational b = to_rational(base);
    if (neg && b == 0) fail("arithmetic error DIVISION-BY-ZERO signalled", "DIVISION-BY-ZERO");
    BigInt num = boost::multiprecision::pow(BigInt(boost::multiprecision::numerator(b)), e);
    BigInt den = boost::multiprecision::pow(BigInt(boost::multiprecision::denominator(b)), e);
    Rational r(num, den);
    if (neg) r = Rational(1) / r;
    return make_rational(r);
  }
  if (is_integer(power) && base.is_float()) return Val::flo(std::pow(base.flonum(), to_double(power)));
  double r = std::pow(to_double(base), to_double(power));
  if (std::isnan(r)) fail("complex results are not supported", "ARITHMETIC-ERROR");
  return Val::flo(r);
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20260101);
  return g;
}

inline Val fold(std::vector<Val>& a, Val init, Val (*op)(const Val&, const Val&)) {
  Val acc = std::move(init);
  for (const auto& x : a) acc = op(acc, x);
  return acc;
}

#define VL_BUILTIN(name) inline Val name([[maybe_unused]] Interp& m, [[maybe_unused]] std::vector<Val>& a)

VL_BUILTIN(bi_add) { return fold(a, Val::fix(0), arith_add); }
VL_BUILTIN(bi_mul) { return fold(a, Val::fix(1), arith_mul); }
VL_BUILTIN(bi_sub) {
  if (a.size() == 1) return arith_neg(a[0]);
  Val acc = a[0];
  for (std::size_t i = 1; i < a.size(); ++i) acc = arith_sub(acc, a[i]);
  return acc;
}
VL_BUILTIN(bi_div) {
  if (a.size() == 1) return arith_div(Val::fix(1), a[0]);
  Val acc = a[0];
  for (std::size_t i = 1; i < a.size(); ++i) acc = arith_div(acc, a[i]);
  return acc;
}

template <int Op>
Val bi_compare(Interp&, std::vector<Val>& a) {
  for (const auto& x : a) need_number(x);
  if (Op == 5) {  // /= : all pairwise distinct
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = i + 1; j < a.size(); ++j)
        if (num_compare(a[i], a[j]) == 0) return Val();
    return T();
  }
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    int c = num_compare(a[i], a[i + 1]);
    bool ok = Op == 0 ? c == 0 : Op == 1 ? c < 0 : Op == 2 ? c > 0 : Op == 3 ? c <= 0 : c >= 0;
    if (!ok) return Val();
  }
  return T();
}

VL_BUILTIN(bi_max) {
  Val best = need_number(a[0]);
  for (std::size_t i = 1; i < a.size(); ++i)
    if (num_compare(a[i], best) > 0) best = a[i];
  return best;
}
VL_BUILTIN(bi_min) {
  Val best = need_number(a[0]);
  for (std::size_t i = 1; i < a.size(); ++i)
    if (num_compare(a[i], best) < 0) best = a[i];
  return best;
}
VL_BUILTIN(bi_inc) { return arith_add(a[0], Val::fix(1)); }
VL_BUILTIN(bi_dec) { return arith_sub(a[0], Val::fix(1)); }
VL_BUILTIN(bi_abs) { return sign_of(a[0]) < 0 ? arith_neg(a[0]) : a[0]; }
VL_BUILTIN(bi_signum) {
  int s = sign_of(a[0]);
  return a[0].is_float() ? Val::flo(s) : Val::fix(s);
}

template <RoundMode M>
Val bi_round(Interp& m, std::vector<Val>& a) {
  auto [q, r] = divide(a[0], a.size() > 1 ? a[1] : Val::fix(1), M);
  return set_values(m, {q, r});
}
template <RoundMode M>
Val bi_fround(Interp& m, std::vector<Val>& a) {
  auto [q, r] = divide(a[0], a.size() > 1 ? a[1] : Val::fix(1), M);
  return set_values(m, {Val::flo(to_double(q)), r});
}
VL_BUILTIN(bi_mod) { return divide(a[0], a[1], RoundMode::Floor).second; }
VL_BUILTIN(bi_rem) { return divide(a[0], a[1], RoundMode::Truncate).second; }

VL_BUILTIN(bi_gcd) {
  BigInt g = 0;
  for (const auto& x : a) g = boost::multiprecision::gcd(g, to_big(need_integer(x)));
  return make_int(g < 0 ? BigInt(-g) : g);
}
VL_BUILTIN(bi_lcm) {
  BigInt l = 1;
  for (const auto& x : a) {
    BigInt v = to_big(need_integer(x));
    if (v == 0) return Val::fix(0);
    l = boost::multiprecision::lcm(l, v);
  }
  return make_int(l < 0 ? BigInt(-l) : l);
}
VL_BUILTIN(bi_expt) { return expt(a[0], a[1]); }
VL_BUILTIN(bi_sqrt) {
  double d = to_double(need_number(a[0]));
  if (d < 0) fail("complex results are not supported", "ARITHMETIC-ERROR");
  return Val::flo(std::sqrt(d));
}
VL_BUILTIN(bi_isqrt) {
  BigInt v = to_big(need_integer(a[0]));
  if (v < 0) fail("isqrt of a negative number", "TYPE-ERROR");
  return make_int(boost::multiprecision::sqrt(v));
}
VL_BUILTIN(bi_exp) { return Val::flo(std::exp(to_double(need_number(a[0])))); }
VL_BUILTIN(bi_log) {
  double x = to_double(need_number(a[0]));
  if (x <= 0) fail("log of a non-positive number is not supported", "ARITHMETIC-ERROR");
  if (a.size() > 1) return Val::flo(std::log(x) / std::log(to_double(need_number(a[1]))));
  return Val::flo(std::log(x));
}
template <double (*F)(double)>
Val bi_float_fn(Interp&, std::vector<Val>& a) {
  return Val::flo(F(to_double(need_number(a[0]))));
}
VL_BUILTIN(bi_atan) {
  if (a.size() > 1) return Val::flo(std::atan2(to_double(a[0]), to_double(a[1])));
  return Val::flo(std::atan(to_double(need_number(a[0]))));
}
VL_BUILTIN(bi_float) { return Val::flo(to_double(need_number(a[0]))); }
VL_BUILTIN(bi_rational) {
  need_number(a[0]);
  if (!a[0].is_float()) return a[0];
  double d = a[0].flonum();
  int exp;
  double mant = std::frexp(d, &exp);
  BigInt num(static_cast<std::int64_t>(std::ldexp(mant, 53)));
  exp -= 53;
  Rational r = exp >= 0 ? Rational(num << exp) : Rational(num, BigInt(1) << -exp);
  return make_rational(r);
}
VL_BUILTIN(bi_numerator) {
  if (!is_rational(a[0])) fail("numerator of a non-rational", "TYPE-ERROR");
  return make_int(boost::multiprecision::numerator(to_rational(a[0])));
}
VL_BUILTIN(bi_denominator) {
  if (!is_rational(a[0])) fail("denominator of a non-rational", "TYPE-ERROR");
  return make_int(boost::multiprecision::denominator(to_rational(a[0])));
}
VL_BUILTIN(bi_zerop) { return boolean(sign_of(a[0]) == 0); }
VL_BUILTIN(bi_plusp) { return boolean(sign_of(a[0]) > 0); }
VL_BUILTIN(bi_minusp) { return boolean(sign_of(a[0]) < 0); }
VL_BUILTIN(bi_evenp) { return boolean(to_big(need_integer(a[0])) % 2 == 0); }
VL_BUILTIN(bi_oddp) { return boolean(to_big(need_integer(a[0])) % 2 != 0); }
VL_BUILTIN(bi_numberp) { return boolean(is_number(a[0])); }
VL_BUILTIN(bi_integerp) { return boolean(is_integer(a[0])); }
VL_BUILTIN(bi_rationalp) { return boolean(is_rational(a[0])); }
VL_BUILTIN(bi_floatp) { return boolean(a[0].is_float()); }

VL_BUILTIN(bi_ash) {
  BigInt v = to_big(need_integer(a[0]));
  std::int64_t s = to_big(need_integer(a[1])).convert_to<std::int64_t>();
  if (s > 100000) fail("shift too large", "STORAGE-CONDITION");
  if (s >= 0) return make_int(v << static_cast<unsigned>(s));
  // Arithmetic right shift rounds toward negative infinity.
  BigInt d = BigInt(1) << static_cast<unsigned>(-s);
  BigInt q = v / d;
  if (v < 0 && q * d != v) --q;
  return make_int(q);
}
template <int Op>
Val bi_logop(Interp&, std::vector<Val>& a) {
  BigInt acc = Op == 0 ? BigInt(-1) : BigInt(0);
  for (const auto& x : a) {
    BigInt v = to_big(need_integer(x));
    acc = Op == 0 ? BigInt(acc & v) : Op == 1 ? BigInt(acc | v) : BigInt(acc ^ v);
  }
  return make_int(acc);
}
VL_BUILTIN(bi_lognot) { return make_int(-to_big(need_integer(a[0])) - 1); }
VL_BUILTIN(bi_logbitp) {
  auto bit = to_big(need_integer(a[0])).convert_to<unsigned>();
  BigInt v = to_big(need_integer(a[1]));
  if (v < 0) return boolean(((-v - 1) >> bit) % 2 == 0);
  return boolean((v >> bit) % 2 != 0);
}
VL_BUILTIN(bi_integer_length) {
  BigInt v = to_big(need_integer(a[0]));
  if (v < 0) v = -v - 1;
  return Val::fix(v == 0 ? 0 : static_cast<std::int64_t>(boost::multiprecision::msb(v)) + 1);
}
VL_BUILTIN(bi_random) {
  need_number(a[0]);
  if (sign_of(a[0]) <= 0) fail("random limit must be positive", "TYPE-ERROR");
  if (a[0].is_float()) return Val::flo(std::uniform_real_distribution<double>(0, a[0].flonum())(rng()));
  if (a[0].is_fix())
    return Val::fix(std::uniform_int_distribution<std::int64_t>(0, a[0].fixnum() - 1)(rng()));
  BigInt lim = to_big(a[0]), r = 0;
  for (unsigned i = 0; i <= boost::multiprecision::msb(lim) / 64 + 1; ++i) r = (r << 64) | rng()();
  return make_int(r % lim);
}

inline void install_numbers(Interp& m) {
  m.def_builtin("+", bi_add, 0);
  m.def_builtin("*", bi_mul, 0);
  m.def_builtin("-", bi_sub, 1);
  m.def_builtin("/", bi_div, 1);
  m.def_builtin("=", bi_compare<0>, 1);
  m.def_builtin("<", bi_compare<1>, 1);
  m.def_builtin(">", bi_compare<2>, 1);
  m.def_builtin("<=", bi_compare<3>, 1);
  m.def_builtin(">=", bi_compare<4>, 1);
  m.def_builtin("/=", bi_compare<5>, 1);
  m.def_builtin("MAX", bi_max, 1);
  m.def_builtin("MIN", bi_min, 1);
  m.def_builtin("1+", bi_inc, 1, 1);
  m.def_builtin("1-", bi_dec, 1, 1);
  m.def_builtin("ABS", bi_abs, 1, 1);
  m.def_builtin("SIGNUM", bi_signum, 1, 1);
  m.def_builtin("FLOOR", bi_round<RoundMode::Floor>, 1, 2);
  m.def_builtin("CEILING", bi_round<RoundMode::Ceiling>, 1, 2);
  m.def_builtin("TRUNCATE", bi_round<RoundMode::Truncate>, 1, 2);
  m.def_builtin("ROUND", bi_round<RoundMode::Round>, 1, 2);
  m.def_builtin("FFLOOR", bi_fround<RoundMode::Floor>, 1, 2);
  m.def_builtin("FCEILING", bi_fround<RoundMode::Ceiling>, 1, 2);
  m.def_builtin("FTRUNCATE", bi_fround<RoundMode::Truncate>, 1, 2);
  m.def_builtin("FROUND", bi_fround<RoundMode::Round>, 1, 2);
  m.def_builtin("MOD", bi_mod, 2, 2);
  m.def_builtin("REM", bi_rem, 2, 2);
  m.def_builtin("GCD", bi_gcd, 0);
  m.def_builtin("LCM", bi_lcm, 0);
  m.def_builtin("EXPT", bi_expt, 2, 2);
  m.def_builtin("SQRT", bi_sqrt, 1, 1);
  m.def_builtin("ISQRT", bi_isqrt, 1, 1);
  m.def_builtin("EXP", bi_exp, 1, 1);
  m.def_builtin("LOG", bi_log, 1, 2);
  m.def_builtin("SIN", bi_float_fn<std::sin>, 1, 1);
  m.def_builtin("COS", bi_float_fn<std::cos>, 1, 1);
  m.def_builtin("TAN", bi_float_fn<std::tan>, 1, 1);
  m.def_builtin("ASIN", bi_float_fn<std::asin>, 1, 1);
  m.def_builtin("ACOS", bi_float_fn<std::acos>, 1, 1);
  m.def_builtin("ATAN", bi_atan, 1, 2);
  m.def_builtin("FLOAT", bi_float, 1, 2);
  m.def_builtin("RATIONAL", bi_rational, 1, 1);
  m.def_builtin("RATIONALIZE", bi_rational, 1, 1);
  m.def_builtin("NUMERATOR", bi_numerator, 1, 1);
  m.def_builtin("DENOMINATOR", bi_denominator, 1, 1);
  m.def_builtin("ZEROP", bi_zerop, 1, 1);
  m.def_builtin("PLUSP", bi_plusp, 1, 1);
  m.def_builtin("MINUSP", bi_minusp, 1, 1);
  m.def_builtin("EVENP", bi_evenp, 1, 1);
  m.def_builtin("ODDP", bi_oddp, 1, 1);
  m.def_builtin("NUMBERP", bi_numberp, 1, 1);
  m.def_builtin("REALP", bi_numberp, 1, 1);
  m.def_builtin("INTEGERP", bi_integerp, 1, 1);
  m.def_builtin("RATIONALP", bi_rationalp, 1, 1);
  m.def_builtin("FLOATP", bi_floatp, 1, 1);
  m.def_builtin("ASH", bi_ash, 2, 2);
  m.def_builtin("LOGAND", bi_logop<0>, 0);
  m.def_builtin("LOGIOR", bi_logop<1>, 0);
  m.def_builtin("LOGXOR", bi_logop<2>, 0);
  m.def_builtin("LOGNOT", bi_lognot, 1, 1);
  m.def_builtin("LOGBITP", bi_logbitp, 2, 2);
  m.def_builtin("INTEGER-LENGTH", bi_integer_length, 1, 1);
  m.def_builtin("RANDOM", bi_random, 1, 2);
}

}  // namespace vlisp
