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

#include "verdict/completion.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "test_util.hpp"

namespace verdict {
namespace {

const char* kTemplate =
    "<reasoning>\nAdd three and four.\n</reasoning>\n"
    "<code>\ntotal(X) :- X is 3+4.\n</code>\n"
    "<query>\ntotal(X).\n</query>";

TEST(Parse, FullTemplateIsStrict) {
  auto p = parse({kTemplate, 0, "p"});
  ASSERT_TRUE(p.reasoning && p.code && p.query);
  EXPECT_EQ(*p.code, "\ntotal(X) :- X is 3+4.\n");
  EXPECT_EQ(*p.query, "\ntotal(X).\n");
  EXPECT_TRUE(p.report.strict_match);
  EXPECT_TRUE(p.report.soft_extractable);
  EXPECT_EQ(p.report.required_tag_count, 5);
  EXPECT_FALSE(p.report.query_nested_in_code);
  EXPECT_TRUE(p.report.has_closing_query);
  EXPECT_EQ(p.report.trailing_garbage_length, 0u);
}

TEST(Parse, ChatterAroundBlocksIsSoftOnly) {
  auto p = parse({"chatter <code>f(1).</code> more chatter <query>f(X).</query>", 0, "p"});
  EXPECT_EQ(p.code, "f(1).");
  EXPECT_EQ(p.query, "f(X).");
  EXPECT_FALSE(p.report.strict_match);
  EXPECT_TRUE(p.report.soft_extractable);
  EXPECT_FALSE(p.reasoning.has_value());
}

TEST(Parse, EmptyInput) {
  auto p = parse({"", 0, "p"});
  EXPECT_FALSE(p.reasoning || p.code || p.query);
  EXPECT_EQ(p.report, StructuralReport{});
}

TEST(Parse, TextIsNotMutated) {
  Completion c{kTemplate, 3, "p"};
  std::string before = c.text;
  (void)parse(c);
  EXPECT_EQ(c.text, before);
}

TEST(Parse, TrailingGarbageAfterQuery) {
  auto p = parse({std::string(kTemplate) + "\n  thanks!  \n", 0, "p"});
  EXPECT_EQ(p.report.trailing_garbage_length, 7u);
  EXPECT_FALSE(p.report.strict_match);
}

TEST(CountRequiredTags, AllFive) {
  EXPECT_EQ(count_required_tags("<reasoning></reasoning><code></code><query>"),
            (TagCount{5, false}));
}

TEST(CountRequiredTags, NestedQuery) {
  EXPECT_EQ(count_required_tags("<code><query>Q.</query></code>"), (TagCount{3, true}));
}

TEST(CountRequiredTags, NoTags) {
  EXPECT_EQ(count_required_tags("no tags at all"), (TagCount{0, false}));
}

TEST(CountRequiredTags, RepeatsCountOnce) {
  EXPECT_EQ(count_required_tags("<code><code><code></code></code>").count, 2);
}

TEST(CountRequiredTags, ClosingQueryIsNotRequired) {
  EXPECT_EQ(count_required_tags("</query>").count, 0);
}

TEST(CountRequiredTags, NestingUsesFirstCodeAndNearestClose) {
  // The query follows the first block's </code>, so it is not nested even
  // though a later <code> block surrounds it.
  EXPECT_FALSE(count_required_tags("<code>a.</code><code><query>q</query></code>").nested);
  // Unclosed code block extends to the end.
  EXPECT_TRUE(count_required_tags("<code>a. <query>q</query>").nested);
}

TEST(DetectStrict, Canonical) { EXPECT_TRUE(detect_strict(kTemplate)); }

TEST(DetectStrict, ProsePrefixFails) {
  EXPECT_FALSE(detect_strict(std::string("Sure! Here is the answer:\n") + kTemplate));
}

TEST(DetectStrict, WrongOrderFails) {
  EXPECT_FALSE(detect_strict("<query>q.</query><code>c.</code><reasoning>r</reasoning>"));
  EXPECT_FALSE(detect_strict("<reasoning>r</reasoning><query>q.</query><code>c.</code>"));
}

TEST(DetectStrict, WhitespaceBetweenBlocksIsTolerated) {
  EXPECT_TRUE(detect_strict(
      "  \n<reasoning>r</reasoning>\n\n\t<code>c.</code>   <query>q.</query>\n\n"));
  EXPECT_FALSE(detect_strict("<reasoning>r</reasoning>x<code>c.</code><query>q.</query>"));
}

TEST(DetectStrict, DuplicateBlocksFail) {
  EXPECT_FALSE(detect_strict(
      "<reasoning>r</reasoning><code>a.</code><code>b.</code><query>q.</query>"));
  EXPECT_FALSE(detect_strict("<reasoning>r</reasoning><code>a.<query>x</query></code><query>q.</query>"));
}

TEST(DetectStrict, MissingClosingQueryFails) {
  EXPECT_FALSE(detect_strict("<reasoning>r</reasoning><code>a.</code><query>q."));
}

TEST(ExtractSoft, Basic) {
  auto r = extract_soft("<code>a(1).</code><query>a(X).</query>");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->code, "a(1).");
  EXPECT_EQ(r->query, "a(X).");
}

TEST(ExtractSoft, UnterminatedCode) {
  EXPECT_FALSE(extract_soft("<code>a(1)."));
  EXPECT_FALSE(extract_soft("<code>a(1).<query>a(X).</query>"));
}

// Oracle: build strings from known blocks and filler, so the expected first
// body is known by construction rather than by scanning.
TEST(ExtractSoft, FirstBlockWinsAgainstGeneratedOracle) {
  std::mt19937 rng(7);
  const std::vector<std::string> fillers = {"", " ", "\n", "chatter ", "x<y ", "</query",
                                            "<cod", "reasoning"};
  auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };
  auto body = [&](char tag) {
    std::string s;
    int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) s += static_cast<char>('a' + rng() % 26);
    return std::string(1, tag) + s;
  };
  for (int trial = 0; trial < 2000; ++trial) {
    int n_code = 1 + static_cast<int>(rng() % 3);
    int n_query = 1 + static_cast<int>(rng() % 3);
    std::string text = pick(fillers);
    std::string first_code, first_query;
    while (n_code > 0 || n_query > 0) {
      bool code = n_query == 0 || (n_code > 0 && rng() % 2 == 0);
      if (code) {
        auto b = body('c');
        if (first_code.empty()) first_code = b;
        text += "<code>" + b + "</code>";
        --n_code;
      } else {
        auto b = body('q');
        if (first_query.empty()) first_query = b;
        text += "<query>" + b + "</query>";
        --n_query;
      }
      text += pick(fillers);
    }
    auto r = extract_soft(text);
    ASSERT_TRUE(r) << text;
    EXPECT_EQ(r->code, first_code) << text;
    EXPECT_EQ(r->query, first_query) << text;
  }
}

// Every segment must be a substring of the source with tags removed.
void check_invariants(const std::string& text) {
  auto p = parse({text, 0, "fuzz"});
  const auto& r = p.report;
  ASSERT_GE(r.required_tag_count, 0);
  ASSERT_LE(r.required_tag_count, 5);
  if (r.strict_match) {
    ASSERT_TRUE(r.soft_extractable) << text;
    ASSERT_EQ(r.required_tag_count, 5) << text;
    ASSERT_FALSE(r.query_nested_in_code) << text;
  }
  if (r.soft_extractable) ASSERT_TRUE(p.code && p.query) << text;
  for (const auto* seg : {&p.reasoning, &p.code, &p.query})
    if (*seg) ASSERT_NE(text.find(**seg), std::string::npos);
}

TEST(ParseProperties, TotalOnRandomStrings) {
  std::mt19937 rng(20260101);
  for (int i = 0; i < 10000; ++i) check_invariants(testutil::random_tagged_text(rng));
  // Arbitrary bytes too, including invalid UTF-8 and NULs.
  for (int i = 0; i < 2000; ++i) {
    std::string s(rng() % 64, '\0');
    for (auto& c : s) c = static_cast<char>(rng() % 256);
    check_invariants(s);
  }
}

TEST(ParseProperties, CountIsMonotoneUnderAppend) {
  std::mt19937 rng(99);
  for (int i = 0; i < 2000; ++i) {
    std::string text = testutil::random_tagged_text(rng);
    int before = count_required_tags(text).count;
    for (auto tag : kRequiredTags) {
      if (text.find(tag) != std::string::npos) continue;
      std::string grown = text + std::string(tag);
      EXPECT_GE(count_required_tags(grown).count, before);
      EXPECT_EQ(count_required_tags(grown).count, before + 1);
    }
  }
}

TEST(ParseProperties, StrictReserializationIsIdempotent) {
  std::mt19937 rng(5);
  int strict_seen = 0;
  for (int i = 0; i < 5000; ++i) {
    std::string text = testutil::random_tagged_text(rng);
    auto p = parse({text, 0, "x"});
    if (!p.report.strict_match) continue;
    ++strict_seen;
    EXPECT_EQ(parse({serialize(p), 0, "x"}), p) << text;
  }
  auto canonical = parse({kTemplate, 0, "x"});
  EXPECT_EQ(parse({serialize(canonical), 0, "x"}), canonical);
  EXPECT_GT(strict_seen, 0);
}

}  // namespace
}  // namespace verdict
