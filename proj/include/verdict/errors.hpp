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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace verdict {

// Infrastructure failure: the interpreter cannot be launched. Never a model
// penalty; callers surface it as a request-level error.
class BackendUnavailable : public std::runtime_error {
 public:
  explicit BackendUnavailable(const std::string& what)
      : std::runtime_error("backend unavailable: " + what) {}
};

class MalformedRecord : public std::runtime_error {
 public:
  MalformedRecord(std::size_t line_no, const std::string& why)
      : std::runtime_error("malformed record at line " +
                           std::to_string(line_no) + ": " + why),
        line_no_(line_no) {}

  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::size_t line_no_;
};

class UnknownTaskName : public std::runtime_error {
 public:
  explicit UnknownTaskName(const std::string& name)
      : std::runtime_error("unknown task name: " + name) {}
};

class ShapeMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyMatrix : public std::invalid_argument {
 public:
  EmptyMatrix() : std::invalid_argument("outcome matrix has no problems") {}
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what)
      : std::runtime_error("config error: " + what) {}
};

}  // namespace verdict
