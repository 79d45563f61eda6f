// Copyright 2026 The xbm authors
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

#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>
#include <set>

#include "xbm/counting.hpp"
#include "xbm/core.hpp"

using namespace xbm;

namespace {

/// Exhaustive oracle: enumerate every d-subset of the N^2 cells of an
/// N x N grid and average the number of distinct XOR keys.
double exhaustive_expected_keys(std::uint64_t d, std::uint64_t n_types) {
  const std::uint64_t cells = n_types * n_types;
  REQUIRE(cells <= 20);
  std::uint64_t count = 0;
  std::uint64_t key_total = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
    if (std::popcount(mask) != int(d)) continue;
    ++count;
    std::set<std::uint64_t> keys;
    for (std::uint64_t cell = 0; cell < cells; ++cell) {
      if ((mask >> cell) & 1) keys.insert((cell / n_types) ^ (cell % n_types));
    }
    key_total += keys.size();
  }
  return double(key_total) / double(count);
}

}  // namespace

TEST_CASE("one nonzero always hits exactly one key", "[counting]") {
  for (std::uint64_t n_types : {2ull, 4ull, 8ull, 32ull, 128ull}) {
    CHECK(expected_groups(1, n_types) == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("distribution sums to one and matches the exhaustive oracle", "[counting]") {
  for (std::uint64_t d = 1; d <= 4; ++d) {
    const auto p = expected_group_distribution(d, 2);
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    CHECK(total == Catch::Approx(1.0).margin(1e-12));
    double e = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) e += double(k + 1) * p[k];
    CHECK(e == Catch::Approx(exhaustive_expected_keys(d, 2)).margin(1e-12));
    CHECK(expected_groups(d, 2) == Catch::Approx(e).margin(1e-12));
  }
  // Frozen from the d = 2, N = 2 enumeration: 6 subsets, 4 of them two-keyed.
  const auto p = expected_group_distribution(2, 2);
  REQUIRE(p.size() == 2);
  CHECK(p[0] == Catch::Approx(2.0 / 6.0).margin(1e-12));
  CHECK(p[1] == Catch::Approx(4.0 / 6.0).margin(1e-12));
}

TEST_CASE("expected keys match Monte Carlo at N = 4", "[counting]") {
  std::mt19937_64 rng(99);
  for (std::uint64_t d : {2ull, 5ull, 9ull}) {
    const int trials = 100000;
    double sum = 0.0, sumsq = 0.0;
    std::vector<std::uint64_t> cells(16);
    std::iota(cells.begin(), cells.end(), 0);
    for (int t = 0; t < trials; ++t) {
      for (std::uint64_t i = 0; i < d; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, cells.size() - 1);
        std::swap(cells[i], cells[pick(rng)]);
      }
      std::set<std::uint64_t> keys;
      for (std::uint64_t i = 0; i < d; ++i) keys.insert((cells[i] / 4) ^ (cells[i] % 4));
      sum += double(keys.size());
      sumsq += double(keys.size() * keys.size());
    }
    const double mean = sum / trials;
    const double var = sumsq / trials - mean * mean;
    const double sigma_mean = std::sqrt(var / trials);
    CHECK(std::abs(expected_groups(d, 4) - mean) < 3.0 * sigma_mean + 1e-9);
  }
}

TEST_CASE("recursion agrees with the per-key inclusion identity", "[counting]") {
  // E = N (1 - C(N^2-N, d)/C(N^2, d)) by linearity over keys; the recursion
  // must reproduce it exactly.
  for (std::uint64_t n_types : {8ull, 32ull}) {
    for (std::uint64_t d : {1ull, 3ull, 10ull, 50ull}) {
      const double direct =
          double(n_types) *
          -std::expm1(detail::log_choose(n_types * n_types - n_types, d) -
                      detail::log_choose(n_types * n_types, d));
      CHECK(expected_groups(d, n_types) == Catch::Approx(direct).epsilon(1e-9));
    }
  }
}

TEST_CASE("exact and log-space paths agree at the switchover", "[counting]") {
  // N = 64 runs the exact recursion, N = 128 the log-space form; both must
  // continue each other smoothly on a shared scale-free quantity.
  const double e64 = expected_groups(100, 64);
  const double direct64 =
      64.0 * -std::expm1(detail::log_choose(64 * 64 - 64, 100) - detail::log_choose(64 * 64, 100));
  CHECK(e64 == Catch::Approx(direct64).epsilon(1e-9));
  CHECK(expected_groups(100, 128) > 0.0);
  CHECK(expected_groups(128 * 128, 128) == Catch::Approx(128.0).margin(1e-6));
}

TEST_CASE("the d = 50 five-qubit prediction sits near 52", "[counting]") {
  const double two_e = 2.0 * expected_groups(50, 32);
  CHECK(two_e > 51.0);
  CHECK(two_e < 53.0);
}

TEST_CASE("out-of-range d is rejected", "[counting]") {
  CHECK_THROWS_AS(expected_groups(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(expected_groups(17, 4), std::invalid_argument);
}
