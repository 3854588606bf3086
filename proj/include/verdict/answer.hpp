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

// Normalized answer values: the ground truth of a problem and the value a
// candidate program prints are both reduced to one canonical form before
// they are compared.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <variant>

#include "verdict/text.hpp"

namespace verdict {

using BigInt = boost::multiprecision::cpp_int;

class AnswerValue {
 public:
  enum class Kind { Integer, Decimal, Literal };

  AnswerValue() : value_(std::string{}) {}

  static AnswerValue integer(BigInt v) { return AnswerValue(std::move(v)); }
  static AnswerValue decimal(double v) { return AnswerValue(v); }
  static AnswerValue literal(std::string v) { return AnswerValue(std::move(v)); }

  Kind kind() const noexcept { return static_cast<Kind>(value_.index()); }
  bool is_integer() const noexcept { return kind() == Kind::Integer; }
  bool is_decimal() const noexcept { return kind() == Kind::Decimal; }
  bool is_literal() const noexcept { return kind() == Kind::Literal; }

  const BigInt& as_integer() const { return std::get<BigInt>(value_); }
  double as_decimal() const { return std::get<double>(value_); }
  const std::string& as_literal() const { return std::get<std::string>(value_); }

  // Canonical text form. normalize_answer(v.to_string()) == v for every
  // normalized value, which makes the string form safe for wire formats.
  std::string to_string() const {
    switch (kind()) {
      case Kind::Integer:
        return as_integer().str();
      case Kind::Decimal: {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, as_decimal());
        return std::string(buf, res.ptr);
      }
      case Kind::Literal:
        return as_literal();
    }
    return {};
  }

  friend bool operator==(const AnswerValue& a, const AnswerValue& b) {
    return a.value_ == b.value_;
  }

 private:
  explicit AnswerValue(BigInt v) : value_(std::move(v)) {}
  explicit AnswerValue(double v) : value_(v) {}
  explicit AnswerValue(std::string v) : value_(std::move(v)) {}

  std::variant<BigInt, double, std::string> value_;
};

inline const char* kind_name(AnswerValue::Kind k) {
  switch (k) {
    case AnswerValue::Kind::Integer: return "integer";
    case AnswerValue::Kind::Decimal: return "decimal";
    case AnswerValue::Kind::Literal: return "literal";
  }
  return "?";
}

namespace detail {

inline bool is_integer_syntax(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

// [+-]? (digits [. digits*] | . digits) ([eE] [+-]? digits)?
inline bool is_decimal_syntax(std::string_view s) {
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t int_digits = 0, frac_digits = 0;
  while (i < s.size() && digit(s[i])) ++i, ++int_digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && digit(s[i])) ++i, ++frac_digits;
  }
  if (int_digits + frac_digits == 0) return false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < s.size() && digit(s[i])) ++i, ++exp_digits;
    if (exp_digits == 0) return false;
  }
  return i == s.size();
}

}  // namespace detail

// Values this close to an integer collapse to that integer.
inline constexpr double kIntegerSnap = 1e-9;
// Absolute tolerance for decimal comparisons.
inline constexpr double kDecimalTolerance = 1e-6;

inline AnswerValue normalize_answer(std::string_view raw) {
  std::string s = trim(raw);
  if (detail::is_integer_syntax(s)) {
    std::string_view digits = s;
    bool negative = false;
    if (digits.front() == '+' || digits.front() == '-') {
      negative = digits.front() == '-';
      digits.remove_prefix(1);
    }
    BigInt v{std::string(digits)};
    if (negative) v = -v;
    return AnswerValue::integer(std::move(v));
  }
  if (detail::is_decimal_syntax(s)) {
    double d = 0.0;
    std::string_view body = s;
    if (body.front() == '+') body.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), d);
    if (ptr == body.data() + body.size() && std::isfinite(d) &&
        ec != std::errc::result_out_of_range) {
      double nearest = std::round(d);
      if (std::fabs(d - nearest) < kIntegerSnap)
        return AnswerValue::integer(BigInt(nearest));
      return AnswerValue::decimal(d);
    }
  }
  return AnswerValue::literal(std::move(s));
}

inline double to_double(const BigInt& v) { return v.convert_to<double>(); }

inline bool compare_answers(const AnswerValue& a, const AnswerValue& b) {
  using K = AnswerValue::Kind;
  if (a.is_literal() || b.is_literal())
    return a.is_literal() && b.is_literal() && a.as_literal() == b.as_literal();
  if (a.kind() == K::Integer && b.kind() == K::Integer)
    return a.as_integer() == b.as_integer();
  double x = a.is_integer() ? to_double(a.as_integer()) : a.as_decimal();
  double y = b.is_integer() ? to_double(b.as_integer()) : b.as_decimal();
  return std::fabs(x - y) <= kDecimalTolerance;
}

}  // namespace verdict
