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

// Tag-level parsing of model completions.
//
// A completion is expected to follow the three-block template
//
//   <reasoning> ... </reasoning>
//   <code> ... </code>
//   <query> ... </query>
//
// Nothing here ever fails: malformed structure is reported through
// StructuralReport so that the format rewards can grade it.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "verdict/text.hpp"

namespace verdict {

struct Completion {
  std::string text;
  std::size_t candidate_index = 0;
  std::string problem_id;
};

struct StructuralReport {
  int required_tag_count = 0;  // distinct tokens of kRequiredTags present
  bool query_nested_in_code = false;
  bool strict_match = false;
  bool soft_extractable = false;
  // Non-whitespace bytes after the last </query>; 0 when it is absent.
  std::size_t trailing_garbage_length = 0;
  // Diagnostic only; </query> does not count toward required_tag_count.
  bool has_closing_query = false;

  friend bool operator==(const StructuralReport&,
                         const StructuralReport&) = default;
};

struct ParsedCompletion {
  std::optional<std::string> reasoning;
  std::optional<std::string> code;
  std::optional<std::string> query;
  StructuralReport report;

  friend bool operator==(const ParsedCompletion&,
                         const ParsedCompletion&) = default;
};

namespace tags {
inline constexpr std::string_view kReasoningOpen = "<reasoning>";
inline constexpr std::string_view kReasoningClose = "</reasoning>";
inline constexpr std::string_view kCodeOpen = "<code>";
inline constexpr std::string_view kCodeClose = "</code>";
inline constexpr std::string_view kQueryOpen = "<query>";
inline constexpr std::string_view kQueryClose = "</query>";
}  // namespace tags

// The tokens that earn xmlcount credit. The closing </query> is not one.
inline constexpr std::array<std::string_view, 5> kRequiredTags = {
    tags::kReasoningOpen, tags::kReasoningClose, tags::kCodeOpen,
    tags::kCodeClose, tags::kQueryOpen};

struct TagCount {
  int count = 0;
  bool nested = false;

  friend bool operator==(const TagCount&, const TagCount&) = default;
};

inline TagCount count_required_tags(std::string_view text) {
  TagCount out;
  for (auto tag : kRequiredTags)
    if (text.find(tag) != std::string_view::npos) ++out.count;

  // The block opened by the first <code> runs to the nearest </code>, or to
  // the end of the text when it is never closed.
  auto open = text.find(tags::kCodeOpen);
  if (open != std::string_view::npos) {
    auto body = open + tags::kCodeOpen.size();
    auto close = text.find(tags::kCodeClose, body);
    auto q = text.find(tags::kQueryOpen, body);
    out.nested = q != std::string_view::npos &&
                 (close == std::string_view::npos || q < close);
  }
  return out;
}

namespace detail {

// Body of the first `open ... close` block, as a view into `text`.
inline std::optional<std::string_view> first_block(std::string_view text,
                                                   std::string_view open,
                                                   std::string_view close) {
  auto b = text.find(open);
  if (b == std::string_view::npos) return std::nullopt;
  b += open.size();
  auto e = text.find(close, b);
  if (e == std::string_view::npos) return std::nullopt;
  return text.substr(b, e - b);
}

inline bool contains_any_tag(std::string_view body) {
  for (auto t : {tags::kReasoningOpen, tags::kReasoningClose, tags::kCodeOpen,
                 tags::kCodeClose, tags::kQueryOpen, tags::kQueryClose})
    if (body.find(t) != std::string_view::npos) return true;
  return false;
}

// Consumes `open body close` at the front of `rest`; the body may not
// contain any template tag.
inline bool eat_block(std::string_view& rest, std::string_view open,
                      std::string_view close) {
  if (rest.substr(0, open.size()) != open) return false;
  rest.remove_prefix(open.size());
  auto e = rest.find(close);
  if (e == std::string_view::npos) return false;
  if (contains_any_tag(rest.substr(0, e))) return false;
  rest.remove_prefix(e + close.size());
  return true;
}

inline void skip_space(std::string_view& s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
}

}  // namespace detail

inline bool detect_strict(std::string_view text) {
  std::string_view rest = trim_view(text);
  if (!detail::eat_block(rest, tags::kReasoningOpen, tags::kReasoningClose))
    return false;
  detail::skip_space(rest);
  if (!detail::eat_block(rest, tags::kCodeOpen, tags::kCodeClose)) return false;
  detail::skip_space(rest);
  if (!detail::eat_block(rest, tags::kQueryOpen, tags::kQueryClose))
    return false;
  return rest.empty();
}

struct CodeAndQuery {
  std::string code;
  std::string query;

  friend bool operator==(const CodeAndQuery&, const CodeAndQuery&) = default;
};

inline std::optional<CodeAndQuery> extract_soft(std::string_view text) {
  auto code = detail::first_block(text, tags::kCodeOpen, tags::kCodeClose);
  auto query = detail::first_block(text, tags::kQueryOpen, tags::kQueryClose);
  if (!code || !query) return std::nullopt;
  return CodeAndQuery{std::string(*code), std::string(*query)};
}

inline ParsedCompletion parse(const Completion& completion) {
  std::string_view text = completion.text;
  ParsedCompletion out;

  auto to_opt = [](std::optional<std::string_view> v) {
    return v ? std::optional<std::string>(std::string(*v)) : std::nullopt;
  };
  out.reasoning = to_opt(detail::first_block(text, tags::kReasoningOpen,
                                             tags::kReasoningClose));
  out.code = to_opt(detail::first_block(text, tags::kCodeOpen, tags::kCodeClose));
  out.query =
      to_opt(detail::first_block(text, tags::kQueryOpen, tags::kQueryClose));

  auto& r = out.report;
  auto count = count_required_tags(text);
  r.required_tag_count = count.count;
  r.query_nested_in_code = count.nested;
  r.soft_extractable = out.code.has_value() && out.query.has_value();
  r.strict_match = detect_strict(text);

  auto last_close = text.rfind(tags::kQueryClose);
  r.has_closing_query = last_close != std::string_view::npos;
  if (r.has_closing_query)
    r.trailing_garbage_length =
        trim_view(text.substr(last_close + tags::kQueryClose.size())).size();
  return out;
}

// Canonical three-block rendering of a strictly parsed completion.
inline std::string serialize(const ParsedCompletion& p) {
  std::string out;
  out += tags::kReasoningOpen;
  out += p.reasoning.value_or("");
  out += tags::kReasoningClose;
  out += '\n';
  out += tags::kCodeOpen;
  out += p.code.value_or("");
  out += tags::kCodeClose;
  out += '\n';
  out += tags::kQueryOpen;
  out += p.query.value_or("");
  out += tags::kQueryClose;
  return out;
}

}  // namespace verdict
