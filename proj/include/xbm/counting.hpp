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

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace xbm {

namespace detail {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_choose(std::uint64_t a, std::uint64_t b) {
  if (b > a) return 0;
  b = std::min(b, a - b);
  BigInt result = 1;
  for (std::uint64_t j = 1; j <= b; ++j) {
    result *= a - b + j;
    result /= j;  // exact at every step
  }
  return result;
}

inline double log_choose(std::uint64_t a, std::uint64_t b) {
  if (b > a) return -std::numeric_limits<double>::infinity();
  return std::lgamma(double(a) + 1.0) - std::lgamma(double(b) + 1.0) -
         std::lgamma(double(a - b) + 1.0);
}

}  // namespace detail

/// Distribution of the number of distinct keys hit by d nonzeros placed
/// uniformly at random in a 2^n x 2^n grid: N = 2^n key classes of N cells
/// each. P(k) = N(k,d,N) / C(N^2, d) with the exclusion recursion
/// N(k,d,N) = C(N,k) C(kN,d) - sum_{i<k} [C(N,k)C(k,i)/C(N,i)] N(i,d,N).
/// Exact rational arithmetic; index 0 of the returned vector is P(k=1).
inline std::vector<double> expected_group_distribution(std::uint64_t d, std::uint64_t n_types) {
  const std::uint64_t total = n_types * n_types;
  if (d < 1 || d > total) {
    throw std::invalid_argument("expected_group_distribution: d out of range");
  }
  const std::uint64_t kmax = std::min(d, n_types);
  // Carrying W(k) = N(k,d,N)/C(N,k) keeps every step integral:
  // W(k) = C(kN, d) - sum_{i<k} C(k,i) W(i).
  std::vector<detail::BigInt> w(kmax + 1);
  for (std::uint64_t k = 1; k <= kmax; ++k) {
    detail::BigInt t = detail::big_choose(k * n_types, d);
    for (std::uint64_t i = 1; i < k; ++i) {
      t -= detail::big_choose(k, i) * w[i];
    }
    w[k] = std::move(t);
  }
  const detail::BigInt denom = detail::big_choose(total, d);
  std::vector<double> p(kmax);
  for (std::uint64_t k = 1; k <= kmax; ++k) {
    const detail::BigInt num = detail::big_choose(n_types, k) * w[k];
    // num/denom <= 1; scale into a 128-bit window for the double division.
    const detail::BigInt scaled = (num << 100) / denom;
    p[k - 1] = std::ldexp(scaled.convert_to<double>(), -100);
  }
  return p;
}

/// Expected number of distinct keys, E(d,N) = sum_k k P(k;d,N). The expected
/// measurement circuit count for d random nonzeros is 2 E(d, 2^n). Uses the
/// exact recursion up to N = 64 and a log-space evaluation of the equivalent
/// per-key inclusion form E = N (1 - C(N^2-N, d)/C(N^2, d)) above that.
inline double expected_groups(std::uint64_t d, std::uint64_t n_types) {
  const std::uint64_t total = n_types * n_types;
  if (d < 1 || d > total) {
    throw std::invalid_argument("expected_groups: d out of range");
  }
  if (n_types <= 64) {
    const std::vector<double> p = expected_group_distribution(d, n_types);
    double e = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) e += double(k + 1) * p[k];
    return e;
  }
  const double log_absent =
      detail::log_choose(total - n_types, d) - detail::log_choose(total, d);
  return double(n_types) * -std::expm1(log_absent);
}

}  // namespace xbm
