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

#include "verdict/answer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

namespace verdict {
namespace {

using K = AnswerValue::Kind;

struct Row {
  const char* raw;
  K kind;
  const char* canonical;  // expected to_string()
};

// Hand-listed oracle table, written down before the normalizer existed.
const Row kTable[] = {
    {"42", K::Integer, "42"},
    {"42.0", K::Integer, "42"},
    {"yes", K::Literal, "yes"},
    {"0", K::Integer, "0"},
    {"-0", K::Integer, "0"},
    {"+7", K::Integer, "7"},
    {"-7", K::Integer, "-7"},
    {"007", K::Integer, "7"},
    {"  18\n", K::Integer, "18"},
    {"123456789012345678901234567890", K::Integer, "123456789012345678901234567890"},
    {"-123456789012345678901234567890", K::Integer, "-123456789012345678901234567890"},
    {"2.5", K::Decimal, "2.5"},
    {"-2.5", K::Decimal, "-2.5"},
    {"+2.5", K::Decimal, "2.5"},
    {"0.5", K::Decimal, "0.5"},
    {".5", K::Decimal, "0.5"},
    {"5.", K::Integer, "5"},
    {"3.14159", K::Decimal, "3.14159"},
    {"1e3", K::Integer, "1000"},
    {"1.0e10", K::Integer, "10000000000"},
    {"1.5E2", K::Integer, "150"},
    {"2.5e-1", K::Decimal, "0.25"},
    {"1e-12", K::Integer, "0"},
    {"7.0000000001", K::Integer, "7"},
    {"6.9999999999", K::Integer, "7"},
    {"7.00001", K::Decimal, "7.00001"},
    {"-3.0", K::Integer, "-3"},
    {"-0.0", K::Integer, "0"},
    {"100.00", K::Integer, "100"},
    {"0.1", K::Decimal, "0.1"},
    {"0.333", K::Decimal, "0.333"},
    {"12.75", K::Decimal, "12.75"},
    {"1,200", K::Literal, "1,200"},
    {"$5", K::Literal, "$5"},
    {"5%", K::Literal, "5%"},
    {"0x1A", K::Literal, "0x1A"},
    {"inf", K::Literal, "inf"},
    {"nan", K::Literal, "nan"},
    {"1e", K::Literal, "1e"},
    {"e5", K::Literal, "e5"},
    {".", K::Literal, "."},
    {"-", K::Literal, "-"},
    {"", K::Literal, ""},
    {"1 2", K::Literal, "1 2"},
    {"7/2", K::Literal, "7/2"},
    {"true", K::Literal, "true"},
    {"[1,2,3]", K::Literal, "[1,2,3]"},
    {"  spaced out  ", K::Literal, "spaced out"},
    {"1e400", K::Literal, "1e400"},
    {"--5", K::Literal, "--5"},
};

TEST(NormalizeAnswer, OracleTable) {
  for (const auto& row : kTable) {
    auto v = normalize_answer(row.raw);
    EXPECT_EQ(v.kind(), row.kind) << "raw=" << row.raw;
    EXPECT_EQ(v.to_string(), row.canonical) << "raw=" << row.raw;
  }
}

TEST(NormalizeAnswer, CanonicalFormRoundTrips) {
  std::mt19937_64 rng(3);
  for (const auto& row : kTable) {
    auto v = normalize_answer(row.raw);
    EXPECT_EQ(normalize_answer(v.to_string()), v) << row.raw;
  }
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    auto v = normalize_answer(std::to_string(d(rng)));
    EXPECT_EQ(normalize_answer(v.to_string()), v);
    EXPECT_NE(v.kind(), K::Literal);
  }
}

TEST(NormalizeAnswer, IntegersNeverStoredAsDecimals) {
  for (int i = -50; i <= 50; ++i) {
    auto v = normalize_answer(std::to_string(i) + ".0");
    EXPECT_TRUE(v.is_integer());
  }
}

TEST(CompareAnswers, Examples) {
  EXPECT_TRUE(compare_answers(normalize_answer("18"), normalize_answer("18")));
  EXPECT_TRUE(compare_answers(AnswerValue::decimal(2.5000001), AnswerValue::decimal(2.5)));
  EXPECT_FALSE(compare_answers(AnswerValue::literal("a"), AnswerValue::integer(1)));
  EXPECT_FALSE(compare_answers(normalize_answer("17"), normalize_answer("18")));
}

TEST(CompareAnswers, DecimalToleranceMatchesDirectDifference) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> base(-100.0, 100.0);
  std::uniform_real_distribution<double> delta(-3e-6, 3e-6);
  for (int i = 0; i < 5000; ++i) {
    double a = base(rng), b = a + delta(rng);
    bool oracle = std::fabs(a - b) <= 1e-6;
    EXPECT_EQ(compare_answers(AnswerValue::decimal(a), AnswerValue::decimal(b)), oracle);
  }
}

TEST(CompareAnswers, MixedKinds) {
  EXPECT_TRUE(compare_answers(AnswerValue::integer(3), AnswerValue::decimal(3.0000005)));
  EXPECT_FALSE(compare_answers(AnswerValue::integer(3), AnswerValue::decimal(3.01)));
  EXPECT_TRUE(compare_answers(AnswerValue::literal("yes"), AnswerValue::literal("yes")));
  EXPECT_FALSE(compare_answers(AnswerValue::literal("yes"), AnswerValue::literal("Yes")));
  EXPECT_FALSE(compare_answers(AnswerValue::literal("18"), AnswerValue::integer(18)));
}

TEST(CompareAnswers, BigIntegersAreExact) {
  auto a = normalize_answer("100000000000000000000000000001");
  auto b = normalize_answer("100000000000000000000000000000");
  EXPECT_FALSE(compare_answers(a, b));
  EXPECT_TRUE(compare_answers(a, a));
}

}  // namespace
}  // namespace verdict
