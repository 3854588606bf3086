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

// Problem corpora: word-problem record files, the Rosetta task pack, and
// prompt rendering.
//
// Record files hold one JSON object per line with "question" and "answer"
// fields and an optional "id". Task files hold one JSON object per file;
// see docs/schemas/task.schema.json.

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "verdict/answer.hpp"
#include "verdict/completion.hpp"
#include "verdict/errors.hpp"
#include "verdict/problem.hpp"
#include "verdict/text.hpp"

namespace verdict {

inline constexpr int kCorpusSchemaVersion = 1;

class SplitLeakage : public std::runtime_error {
 public:
  explicit SplitLeakage(const std::string& id)
      : std::runtime_error("problem id in both train and test splits: " + id), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

// ---------------------------------------------------------------------------
// Ground truth

namespace detail {

inline bool is_currency_byte_run(std::string_view s, std::size_t i, std::size_t& len) {
  static constexpr std::string_view kSymbols[] = {"$", "\xE2\x82\xAC", "\xC2\xA3", "\xC2\xA5",
                                                  "\xE2\x82\xB9"};
  for (auto sym : kSymbols) {
    if (s.substr(i, sym.size()) == sym) {
      len = sym.size();
      return true;
    }
  }
  return false;
}

inline std::string strip_answer_noise(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t len = 0;
    if (s[i] == ',' || is_space(s[i])) {
      ++i;
    } else if (is_currency_byte_run(s, i, len)) {
      i += len;
    } else {
      out += s[i++];
    }
  }
  return out;
}

}  // namespace detail

inline AnswerValue extract_final_answer(std::string_view answer_text) {
  auto pos = answer_text.rfind("####");
  if (pos != std::string_view::npos)
    return normalize_answer(detail::strip_answer_noise(answer_text.substr(pos + 4)));
  auto tokens = split_whitespace(answer_text);
  if (tokens.empty()) return normalize_answer("");
  return normalize_answer(detail::strip_answer_noise(tokens.back()));
}

// ---------------------------------------------------------------------------
// Record files

struct LoadOptions {
  bool skip_malformed = false;
  std::vector<std::size_t>* skipped_lines = nullptr;
};

// Stable id derived from the question text, so the same question gets the
// same id in whichever file it appears.
inline std::string derived_problem_id(Source source, std::string_view question) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : trim_view(question)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(source_name(source)) + "-" + std::string(buf, 12);
}

inline Problem parse_record(const nlohmann::json& j, std::size_t line_no, Source source,
                            Split split) {
  if (!j.is_object()) throw MalformedRecord(line_no, "record is not a JSON object");
  auto q = j.find("question");
  if (q == j.end() || !q->is_string()) throw MalformedRecord(line_no, "missing string field 'question'");
  auto a = j.find("answer");
  if (a == j.end()) throw MalformedRecord(line_no, "missing field 'answer'");
  Problem p;
  p.question = q->get<std::string>();
  if (a->is_string()) {
    p.ground_truth = extract_final_answer(a->get<std::string>());
  } else if (a->is_number()) {
    p.ground_truth = normalize_answer(a->dump());
  } else {
    throw MalformedRecord(line_no, "field 'answer' must be a string or number");
  }
  if (p.ground_truth.is_literal() && p.ground_truth.as_literal().empty())
    throw MalformedRecord(line_no, "empty answer");
  if (auto id = j.find("id"); id != j.end()) {
    if (id->is_string()) p.id = id->get<std::string>();
    else if (id->is_number_integer()) p.id = id->dump();
    else throw MalformedRecord(line_no, "field 'id' must be a string or integer");
  } else {
    p.id = derived_problem_id(source, p.question);
  }
  p.source = source;
  p.split = split;
  return p;
}

inline std::vector<Problem> parse_records(std::istream& in, Source source, Split split,
                                          const LoadOptions& opts = {}) {
  std::vector<Problem> out;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (all_space(line)) continue;
    try {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw MalformedRecord(line_no, e.what());
      }
      Problem p = parse_record(j, line_no, source, split);
      if (!ids.insert(p.id).second) throw MalformedRecord(line_no, "duplicate id " + p.id);
      out.push_back(std::move(p));
    } catch (const MalformedRecord&) {
      if (!opts.skip_malformed) throw;
      if (opts.skipped_lines) opts.skipped_lines->push_back(line_no);
    }
  }
  return out;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

// Files whose name mentions "train" are the training split.
inline Split split_from_filename(const std::filesystem::path& path) {
  std::string name = path.filename().string();
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return name.find("train") != std::string::npos ? Split::Train : Split::Test;
}

inline std::vector<Problem> load_gsm8k(const std::filesystem::path& path, Split split,
                                       const LoadOptions& opts = {}) {
  auto in = open_input(path);
  return parse_records(in, Source::Gsm8k, split, opts);
}

inline std::vector<Problem> load_gsm8k(const std::filesystem::path& path,
                                       const LoadOptions& opts = {}) {
  return load_gsm8k(path, split_from_filename(path), opts);
}

inline std::optional<Source> parse_symbolic_variant(std::string_view v) {
  if (v == "base") return Source::GsmSymbolicBase;
  if (v == "p1") return Source::GsmSymbolicP1;
  if (v == "p2") return Source::GsmSymbolicP2;
  return std::nullopt;
}

// GSM-Symbolic sets are evaluation-only.
inline std::vector<Problem> load_gsm_symbolic(const std::filesystem::path& path,
                                              std::string_view variant,
                                              const LoadOptions& opts = {}) {
  auto source = parse_symbolic_variant(variant);
  if (!source) throw std::invalid_argument("unknown GSM-Symbolic variant: " + std::string(variant));
  auto in = open_input(path);
  return parse_records(in, *source, Split::Test, opts);
}

inline void check_split_hygiene(const std::vector<Problem>& train,
                                const std::vector<Problem>& test) {
  std::set<std::string> ids;
  for (const auto& p : train) ids.insert(p.id);
  for (const auto& p : test)
    if (ids.count(p.id)) throw SplitLeakage(p.id);
}

// ---------------------------------------------------------------------------
// Problem serialization

inline nlohmann::ordered_json to_json(const Problem& p) {
  nlohmann::ordered_json j;
  j["id"] = p.id;
  j["question"] = p.question;
  j["ground_truth"] = p.ground_truth.to_string();
  j["source"] = source_name(p.source);
  j["split"] = split_name(p.split);
  if (!p.checks.empty()) {
    auto& arr = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : p.checks)
      arr.push_back({{"query", c.query}, {"expected", c.expected.to_string()}});
  }
  return j;
}

inline Problem problem_from_json(const nlohmann::json& j, std::size_t line_no = 0) {
  try {
    Problem p;
    p.id = j.at("id").get<std::string>();
    p.question = j.at("question").get<std::string>();
    p.ground_truth = normalize_answer(j.at("ground_truth").get<std::string>());
    auto src = parse_source(j.at("source").get<std::string>());
    if (!src) throw MalformedRecord(line_no, "unknown source");
    p.source = *src;
    std::string split = j.at("split").get<std::string>();
    if (split != "train" && split != "test") throw MalformedRecord(line_no, "unknown split");
    p.split = split == "train" ? Split::Train : Split::Test;
    if (auto c = j.find("checks"); c != j.end())
      for (const auto& t : *c)
        p.checks.push_back({t.at("query").get<std::string>(),
                            normalize_answer(t.at("expected").get<std::string>())});
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedRecord(line_no, e.what());
  }
}

inline void write_problems(std::ostream& out, const std::vector<Problem>& problems) {
  for (const auto& p : problems) out << to_json(p).dump() << '\n';
}

inline std::vector<Problem> read_problems(std::istream& in) {
  std::vector<Problem> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (all_space(line)) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw MalformedRecord(line_no, e.what());
    }
    out.push_back(problem_from_json(j, line_no));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rosetta task pack

inline constexpr std::array<std::string_view, 20> kRosettaTaskNames = {
    "Fibonacci sequence",   "Sieve of Eratosthenes",
    "Quicksort",            "Binary search",
    "Greatest common divisor", "Factorial",
    "Towers of Hanoi",      "Palindrome detection",
    "Prime decomposition",  "Dijkstra's Algorithm",
    "Levenshtein distance", "N-queens problem",
    "Ackermann function",   "Balanced brackets",
    "Knight's tour",        "Merge sort",
    "Roman numerals decode", "Longest common subsequence",
    "Huffman coding",       "24 game"};

inline std::string task_slug(std::string_view name) {
  std::string out;
  for (char c : name) {
    auto u = static_cast<unsigned char>(c);
    if (c == '\'') continue;
    if (std::isalnum(u)) {
      out += static_cast<char>(std::tolower(u));
    } else if (!out.empty() && out.back() != '-') {
      out += '-';
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

// Canonical spelling of a task name, matched case-insensitively.
inline std::optional<std::string_view> canonical_task_name(std::string_view name) {
  std::string slug = task_slug(trim_view(name));
  for (auto n : kRosettaTaskNames)
    if (task_slug(n) == slug) return n;
  return std::nullopt;
}

struct ReferenceSolution {
  std::string code;
  std::string query;
};

struct RosettaTask {
  std::string name;
  std::string prompt;
  std::vector<TestCase> test_cases;
  std::optional<ReferenceSolution> reference;

  std::string slug() const { return task_slug(name); }
};

inline RosettaTask parse_task(const nlohmann::json& j, const std::string& where) {
  auto bad = [&](const std::string& why) { return MalformedRecord(0, where + ": " + why); };
  if (!j.is_object()) throw bad("task is not a JSON object");
  RosettaTask t;
  try {
    if (auto v = j.find("schema_version"); v != j.end() && v->get<int>() != kCorpusSchemaVersion)
      throw bad("unsupported schema_version " + v->dump());
    std::string name = j.at("name").get<std::string>();
    auto canon = canonical_task_name(name);
    if (!canon) throw UnknownTaskName(name);
    t.name = std::string(*canon);
    t.prompt = j.at("prompt").get<std::string>();
    for (const auto& c : j.at("test_cases")) {
      const auto& e = c.at("expected");
      std::string expected = e.is_string() ? e.get<std::string>() : e.dump();
      t.test_cases.push_back({c.at("query").get<std::string>(), normalize_answer(expected)});
    }
    if (auto r = j.find("reference"); r != j.end())
      t.reference = ReferenceSolution{r->at("code").get<std::string>(),
                                      r->at("query").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    throw bad(e.what());
  }
  if (t.test_cases.empty()) throw bad("task has no test cases");
  if (trim_view(t.prompt).empty()) throw bad("empty prompt");
  return t;
}

// Loads every *.json file in `dir`, ordered by file name.
inline std::vector<RosettaTask> load_rosetta(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw std::runtime_error("task pack directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<RosettaTask> tasks;
  std::set<std::string> names;
  for (const auto& f : files) {
    auto in = open_input(f);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw MalformedRecord(0, f.string() + ": " + e.what());
    }
    RosettaTask t = parse_task(j, f.string());
    if (!names.insert(t.name).second)
      throw MalformedRecord(0, f.string() + ": duplicate task " + t.name);
    tasks.push_back(std::move(t));
  }
  return tasks;
}

inline std::vector<std::string> missing_rosetta_tasks(const std::vector<RosettaTask>& tasks) {
  std::vector<std::string> missing;
  for (auto n : kRosettaTaskNames) {
    bool found = std::any_of(tasks.begin(), tasks.end(),
                             [&](const RosettaTask& t) { return t.name == n; });
    if (!found) missing.emplace_back(n);
  }
  return missing;
}

inline Problem task_problem(const RosettaTask& t) {
  Problem p;
  p.id = t.slug();
  p.question = t.prompt;
  p.ground_truth = t.test_cases.front().expected;
  p.source = Source::Rosetta;
  p.split = Split::Test;
  p.checks = t.test_cases;
  return p;
}

// ---------------------------------------------------------------------------
// Dataset ids

inline constexpr std::array<std::string_view, 5> kDatasetIds = {
    "gsm8k-test", "gsm-symbolic-base", "gsm-symbolic-p1", "gsm-symbolic-p2", "rosetta20"};

inline bool is_dataset_id(std::string_view id) {
  return std::find(kDatasetIds.begin(), kDatasetIds.end(), id) != kDatasetIds.end();
}

// `path` is a record file, or the task-pack directory for rosetta20.
inline std::vector<Problem> load_dataset(std::string_view id, const std::filesystem::path& path,
                                         const LoadOptions& opts = {}) {
  if (id == "gsm8k-test") return load_gsm8k(path, Split::Test, opts);
  if (id.substr(0, 13) == "gsm-symbolic-") return load_gsm_symbolic(path, id.substr(13), opts);
  if (id == "rosetta20") {
    auto tasks = load_rosetta(path);
    if (auto missing = missing_rosetta_tasks(tasks); !missing.empty())
      throw MalformedRecord(0, path.string() + ": task pack lacks " + missing.front());
    std::vector<Problem> out;
    for (const auto& t : tasks) out.push_back(task_problem(t));
    return out;
  }
  throw std::invalid_argument("unknown dataset id: " + std::string(id));
}

// ---------------------------------------------------------------------------
// Prompts

struct Demonstration {
  std::string question;
  std::string completion;

  friend bool operator==(const Demonstration&, const Demonstration&) = default;
};

struct PromptSpec {
  PromptMode mode = PromptMode::ZeroShot;
  std::string system_template;
  std::optional<Demonstration> demonstration;

  void validate() const {
    if (mode == PromptMode::OneShot && !demonstration)
      throw std::invalid_argument("one-shot prompt needs a demonstration");
    if (mode == PromptMode::ZeroShot && demonstration)
      throw std::invalid_argument("zero-shot prompt must not carry a demonstration");
    for (auto tag : {tags::kReasoningOpen, tags::kCodeOpen, tags::kQueryOpen})
      if (count_occurrences(system_template, tag) != 1)
        throw std::invalid_argument("system template must name " + std::string(tag) +
                                    " exactly once");
  }

  static std::size_t count_occurrences(std::string_view text, std::string_view needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string_view::npos;
         pos = text.find(needle, pos + needle.size()))
      ++n;
    return n;
  }
};

inline std::string render_prompt(const Problem& problem, const PromptSpec& spec) {
  spec.validate();
  std::string out = trim(spec.system_template);
  out += "\n\n";
  if (spec.demonstration) {
    out += "Example question:\n" + trim(spec.demonstration->question) + "\n\n";
    out += "Example answer:\n" + trim(spec.demonstration->completion) + "\n\n";
  }
  out += "Question:\n" + trim(problem.question) + "\n";
  return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A prompt asset directory holds system.txt and one_shot.json
// ({"question": ..., "completion": ...}).
inline PromptSpec load_prompt_spec(const std::filesystem::path& dir, PromptMode mode) {
  PromptSpec spec;
  spec.mode = mode;
  spec.system_template = read_text_file(dir / "system.txt");
  if (mode == PromptMode::OneShot) {
    auto j = nlohmann::json::parse(read_text_file(dir / "one_shot.json"));
    spec.demonstration = Demonstration{j.at("question").get<std::string>(),
                                       j.at("completion").get<std::string>()};
  }
  spec.validate();
  return spec;
}

}  // namespace verdict
