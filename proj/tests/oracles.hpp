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

// Test-only reference computations. Nothing here calls into the library
// code paths they check.

#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace verdict::oracle {

template <typename Rng>
std::vector<std::vector<bool>> random_rows(Rng& rng, std::size_t n, std::size_t k) {
  // Skew the success probability per matrix so uniform rows show up.
  double p = static_cast<double>(rng() % 101) / 100.0;
  std::vector<std::vector<bool>> rows(n, std::vector<bool>(k));
  for (auto& r : rows)
    for (std::size_t j = 0; j < k; ++j)
      r[j] = static_cast<double>(rng() % 10000) / 10000.0 < p;
  return rows;
}

// Encodes each row as a bit mask and compares against 0 / all-ones.
inline std::uint64_t row_mask(const std::vector<bool>& row) {
  std::uint64_t m = 0;
  for (std::size_t j = 0; j < row.size(); ++j)
    if (row[j]) m |= std::uint64_t{1} << j;
  return m;
}

// (numerator, denominator) of the fraction of rows with any success.
inline std::pair<std::uint64_t, std::uint64_t> brute_force_any(
    const std::vector<std::vector<bool>>& rows) {
  std::uint64_t hits = 0;
  for (const auto& r : rows) hits += row_mask(r) != 0;
  return {hits, rows.size()};
}

inline std::pair<std::uint64_t, std::uint64_t> brute_force_all(
    const std::vector<std::vector<bool>>& rows) {
  std::uint64_t hits = 0;
  for (const auto& r : rows) {
    std::uint64_t full = r.size() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << r.size()) - 1;
    hits += !r.empty() && row_mask(r) == full;
  }
  return {hits, rows.size()};
}

// Reduced-fraction equality without floating point: a/b == c/d.
inline bool same_fraction(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  return a * d == c * b;
}

}  // namespace verdict::oracle
