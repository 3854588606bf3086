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

// Shared generators and paths for the test binaries.

#pragma once

#include <stdlib.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef VERDICT_TEST_DATA_DIR
#define VERDICT_TEST_DATA_DIR "data"
#endif
#ifndef VERDICT_TEST_FIXTURE_DIR
#define VERDICT_TEST_FIXTURE_DIR "tests/fixtures"
#endif
#ifndef VERDICT_TOOLS_DIR
#define VERDICT_TOOLS_DIR "."
#endif

namespace verdict::testutil {

inline std::filesystem::path data_dir() { return VERDICT_TEST_DATA_DIR; }
inline std::filesystem::path fixture_dir() { return VERDICT_TEST_FIXTURE_DIR; }
inline std::filesystem::path tools_dir() { return VERDICT_TOOLS_DIR; }
inline std::filesystem::path vprolog_path() { return tools_dir() / "vprolog"; }
inline std::filesystem::path vlisp_path() { return tools_dir() / "vlisp"; }
inline std::filesystem::path verdict_cli_path() { return tools_dir() / "verdict"; }

// Private directory removed on destruction.
class ScratchDir {
 public:
  ScratchDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "verdict-test-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

// Random text biased toward the template tags, so that every structural
// branch of the parser is reached, including strict matches.
template <typename Rng>
std::string random_tagged_text(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "<reasoning>", "</reasoning>", "<code>", "</code>", "<query>", "</query>",
      "<code", "query>", "</", "<", ">", " ", "\n", "\t", "foo", "X is 1+2.",
      "total(X).", "é", "Sure!", "<reason>", "</ query>"};
  std::string out;
  if (rng() % 4 == 0) {
    auto ws = [&] { return std::string(rng() % 3, rng() % 2 ? ' ' : '\n'); };
    auto word = [&] { return pieces[14 + rng() % 4]; };
    out = ws() + "<reasoning>" + word() + "</reasoning>" + ws() + "<code>" + word() +
          "</code>" + ws() + "<query>" + word() + "</query>" + ws();
    if (rng() % 3 == 0) out.insert(rng() % (out.size() + 1), pieces[rng() % pieces.size()]);
    return out;
  }
  int n = static_cast<int>(rng() % 14);
  for (int i = 0; i < n; ++i) out += pieces[rng() % pieces.size()];
  return out;
}

}  // namespace verdict::testutil
