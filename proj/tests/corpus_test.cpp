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

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "verdict/corpus.hpp"

namespace verdict {
namespace {

namespace fs = std::filesystem;

fs::path corpus_fixture(const std::string& name) { return testutil::fixture_dir() / "corpus" / name; }

TEST(ExtractFinalAnswerTest, MarkerConvention) {
  EXPECT_EQ(extract_final_answer("so 3x6=18.\n#### 18"), AnswerValue::integer(18));
  EXPECT_EQ(extract_final_answer("#### 1,200"), AnswerValue::integer(1200));
  EXPECT_EQ(extract_final_answer("#### 2.5"), AnswerValue::decimal(2.5));
  EXPECT_EQ(extract_final_answer("#### $36"), AnswerValue::integer(36));
  EXPECT_EQ(extract_final_answer("#### 7 #### 8"), AnswerValue::integer(8));
  EXPECT_EQ(extract_final_answer("####   -4 "), AnswerValue::integer(-4));
  EXPECT_EQ(extract_final_answer("#### \xe2\x82\xac" "5"), AnswerValue::integer(5));
}

TEST(ExtractFinalAnswerTest, FallsBackToLastToken) {
  EXPECT_EQ(extract_final_answer("the answer is 42"), AnswerValue::integer(42));
  EXPECT_EQ(extract_final_answer("maybe yes"), AnswerValue::literal("yes"));
  EXPECT_EQ(extract_final_answer(""), normalize_answer(""));
}

TEST(LoadGsm8kTest, ParsesRecords) {
  auto ps = load_gsm8k(corpus_fixture("gsm_sample_test.jsonl"));
  ASSERT_EQ(ps.size(), 5u);
  EXPECT_EQ(ps[0].ground_truth, AnswerValue::integer(18));
  EXPECT_EQ(ps[1].ground_truth, AnswerValue::integer(1200));
  EXPECT_EQ(ps[2].ground_truth, AnswerValue::decimal(2.5));
  EXPECT_EQ(ps[3].ground_truth, AnswerValue::integer(36));
  EXPECT_EQ(ps[4].ground_truth, AnswerValue::integer(6));
  std::set<std::string> ids;
  for (const auto& p : ps) {
    EXPECT_EQ(p.source, Source::Gsm8k);
    EXPECT_EQ(p.split, Split::Test);
    EXPECT_TRUE(p.checks.empty());
    ids.insert(p.id);
  }
  EXPECT_EQ(ids.size(), ps.size());
}

TEST(LoadGsm8kTest, IdsAreStableAcrossLoads) {
  auto a = load_gsm8k(corpus_fixture("gsm_sample_test.jsonl"));
  auto b = load_gsm8k(corpus_fixture("gsm_sample_test.jsonl"));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a[0].id, derived_problem_id(Source::Gsm8k, a[0].question));
  EXPECT_EQ(a[0].id, derived_problem_id(Source::Gsm8k, "  " + a[0].question + "\n"));
}

TEST(LoadGsm8kTest, EmptyFileGivesEmptyList) {
  EXPECT_TRUE(load_gsm8k(corpus_fixture("empty.jsonl")).empty());
}

TEST(LoadGsm8kTest, MalformedFailsByDefault) {
  try {
    load_gsm8k(corpus_fixture("gsm_sample_malformed.jsonl"));
    FAIL() << "expected MalformedRecord";
  } catch (const MalformedRecord& e) {
    EXPECT_EQ(e.line_no(), 2u);
  }
}

TEST(LoadGsm8kTest, MalformedCanBeSkipped) {
  std::vector<std::size_t> skipped;
  LoadOptions opts;
  opts.skip_malformed = true;
  opts.skipped_lines = &skipped;
  auto ps = load_gsm8k(corpus_fixture("gsm_sample_malformed.jsonl"), opts);
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps[1].ground_truth, AnswerValue::integer(120));
  EXPECT_EQ(skipped, (std::vector<std::size_t>{2, 3}));
}

TEST(LoadGsm8kTest, DuplicateIdIsMalformed) {
  std::istringstream in(R"({"id": "a", "question": "q1", "answer": "#### 1"}
{"id": "a", "question": "q2", "answer": "#### 2"}
)");
  EXPECT_THROW(parse_records(in, Source::Gsm8k, Split::Test, {}), MalformedRecord);
}

TEST(LoadGsm8kTest, MissingFileThrows) {
  EXPECT_THROW(load_gsm8k(corpus_fixture("no_such_file.jsonl")), std::runtime_error);
}

TEST(LoadGsmSymbolicTest, VariantSetsSource) {
  auto ps = load_gsm_symbolic(corpus_fixture("symbolic_p2.jsonl"), "p2");
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps[0].source, Source::GsmSymbolicP2);
  EXPECT_EQ(ps[0].id, "p2-0001");
  EXPECT_EQ(ps[0].ground_truth, AnswerValue::integer(78));
  EXPECT_EQ(ps[1].split, Split::Test);
  EXPECT_THROW(load_gsm_symbolic(corpus_fixture("symbolic_p2.jsonl"), "p3"), std::invalid_argument);
  auto base = load_dataset("gsm-symbolic-base", corpus_fixture("symbolic_p2.jsonl"));
  EXPECT_EQ(base[0].source, Source::GsmSymbolicBase);
}

TEST(SplitHygieneTest, SplitFromFileName) {
  auto train = load_gsm8k(corpus_fixture("gsm_sample_train.jsonl"));
  for (const auto& p : train) EXPECT_EQ(p.split, Split::Train);
}

TEST(SplitHygieneTest, SharedQuestionIsLeakage) {
  auto train = load_gsm8k(corpus_fixture("gsm_sample_train.jsonl"));
  auto test = load_gsm8k(corpus_fixture("gsm_sample_test.jsonl"));
  EXPECT_THROW(check_split_hygiene(train, test), SplitLeakage);
  train.pop_back();
  EXPECT_NO_THROW(check_split_hygiene(train, test));
}

TEST(ProblemJsonTest, RoundTrip) {
  auto ps = load_gsm8k(corpus_fixture("gsm_sample_test.jsonl"));
  auto sym = load_gsm_symbolic(corpus_fixture("symbolic_p2.jsonl"), "p2");
  ps.insert(ps.end(), sym.begin(), sym.end());
  for (const auto& t : load_rosetta(testutil::data_dir() / "rosetta20")) ps.push_back(task_problem(t));
  std::stringstream buf;
  write_problems(buf, ps);
  auto back = read_problems(buf);
  EXPECT_EQ(back, ps);
}

TEST(RosettaTest, ShippedPackIsComplete) {
  auto tasks = load_rosetta(testutil::data_dir() / "rosetta20");
  ASSERT_EQ(tasks.size(), 20u);
  EXPECT_TRUE(missing_rosetta_tasks(tasks).empty());
  std::set<std::string> names;
  for (const auto& t : tasks) {
    names.insert(t.name);
    EXPECT_FALSE(t.test_cases.empty()) << t.name;
    EXPECT_TRUE(t.reference) << t.name;
  }
  EXPECT_EQ(names.size(), 20u);
  for (auto n : kRosettaTaskNames) EXPECT_TRUE(names.count(std::string(n))) << n;
}

TEST(RosettaTest, CanonicalNames) {
  EXPECT_EQ(canonical_task_name("dijkstras algorithm"), "Dijkstra's Algorithm");
  EXPECT_EQ(canonical_task_name("  N-Queens Problem "), "N-queens problem");
  EXPECT_FALSE(canonical_task_name("Bubble sort"));
  EXPECT_EQ(task_slug("Knight's tour"), "knights-tour");
  EXPECT_EQ(task_slug("24 game"), "24-game");
}

TEST(RosettaTest, ParseTask) {
  auto j = nlohmann::json::parse(R"({
    "name": "Quicksort", "prompt": "Sort a list.",
    "test_cases": [{"query": "qs([3,1,2], X).", "expected": "[1,2,3]"},
                   {"query": "qs([], X).", "expected": "[]"},
                   {"query": "qs([2,2], X), length(X, N).", "expected": 2}]})");
  auto t = parse_task(j, "inline");
  EXPECT_EQ(t.name, "Quicksort");
  ASSERT_EQ(t.test_cases.size(), 3u);
  EXPECT_EQ(t.test_cases[2].expected, AnswerValue::integer(2));
  EXPECT_FALSE(t.reference);

  j["name"] = "bubble sort";
  EXPECT_THROW(parse_task(j, "inline"), UnknownTaskName);
  j["name"] = "Quicksort";
  j["test_cases"] = nlohmann::json::array();
  EXPECT_THROW(parse_task(j, "inline"), MalformedRecord);
  j.erase("test_cases");
  EXPECT_THROW(parse_task(j, "inline"), MalformedRecord);
}

TEST(RosettaTest, IncompletePackIsRejectedAsDataset) {
  testutil::ScratchDir dir;
  fs::copy(testutil::data_dir() / "rosetta20" / "quicksort.json", dir.path() / "quicksort.json");
  EXPECT_EQ(load_rosetta(dir.path()).size(), 1u);
  EXPECT_THROW(load_dataset("rosetta20", dir.path()), MalformedRecord);
}

TEST(RosettaTest, DuplicateTaskRejected) {
  testutil::ScratchDir dir;
  fs::copy(testutil::data_dir() / "rosetta20" / "quicksort.json", dir.path() / "a.json");
  fs::copy(testutil::data_dir() / "rosetta20" / "quicksort.json", dir.path() / "b.json");
  EXPECT_THROW(load_rosetta(dir.path()), MalformedRecord);
}

TEST(RosettaTest, TaskProblemCarriesChecks) {
  auto tasks = load_rosetta(testutil::data_dir() / "rosetta20");
  auto p = task_problem(tasks.front());
  EXPECT_EQ(p.id, tasks.front().slug());
  EXPECT_EQ(p.source, Source::Rosetta);
  EXPECT_EQ(p.checks, tasks.front().test_cases);
  EXPECT_EQ(p.ground_truth, tasks.front().test_cases.front().expected);
}

class PromptTest : public ::testing::Test {
 protected:
  Problem problem() const {
    Problem p;
    p.id = "x";
    p.question = "A box holds 4 pears. How many pears are in 3 boxes?";
    return p;
  }
};

TEST_F(PromptTest, ZeroShotHasEachTagOnce) {
  for (const char* lang : {"prolog", "lisp"}) {
    auto spec = load_prompt_spec(testutil::data_dir() / "prompts" / lang, PromptMode::ZeroShot);
    auto text = render_prompt(problem(), spec);
    for (auto tag : {"<reasoning>", "<code>", "<query>"})
      EXPECT_EQ(PromptSpec::count_occurrences(text, tag), 1u) << lang << " " << tag;
    EXPECT_NE(text.find(problem().question), std::string::npos);
    EXPECT_EQ(text.find("Example question"), std::string::npos);
  }
}

TEST_F(PromptTest, OneShotPutsDemonstrationBeforeQuestion) {
  auto spec = load_prompt_spec(testutil::data_dir() / "prompts" / "prolog", PromptMode::OneShot);
  ASSERT_TRUE(spec.demonstration);
  auto text = render_prompt(problem(), spec);
  auto demo = text.find(trim(spec.demonstration->completion));
  auto question = text.find("Question:\n" + problem().question);
  ASSERT_NE(demo, std::string::npos);
  ASSERT_NE(question, std::string::npos);
  EXPECT_LT(demo, question);
}

TEST_F(PromptTest, Deterministic) {
  auto spec = load_prompt_spec(testutil::data_dir() / "prompts" / "prolog", PromptMode::OneShot);
  EXPECT_EQ(render_prompt(problem(), spec), render_prompt(problem(), spec));
}

TEST_F(PromptTest, ModeInvariant) {
  PromptSpec spec;
  spec.system_template = "Use <reasoning>, <code> and <query>.";
  spec.mode = PromptMode::OneShot;
  EXPECT_THROW(render_prompt(problem(), spec), std::invalid_argument);
  spec.mode = PromptMode::ZeroShot;
  spec.demonstration = Demonstration{"q", "a"};
  EXPECT_THROW(render_prompt(problem(), spec), std::invalid_argument);
  spec.demonstration.reset();
  EXPECT_NO_THROW(render_prompt(problem(), spec));
  spec.system_template = "Use <code> only.";
  EXPECT_THROW(render_prompt(problem(), spec), std::invalid_argument);
}

TEST(DatasetIdTest, Known) {
  for (auto id : kDatasetIds) EXPECT_TRUE(is_dataset_id(id));
  EXPECT_FALSE(is_dataset_id("gsm8k-train"));
}

}  // namespace
}  // namespace verdict
