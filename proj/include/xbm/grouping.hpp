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

#include <algorithm>
#include <map>
#include <utility>

#include "xbm/observable.hpp"
#include "xbm/pauli.hpp"

namespace xbm {

/// Sparse map from measured bit string b to the complex coefficient it
/// contributes to the estimate. Entries are sorted by b and never zero.
struct OutcomeTable {
  std::vector<std::pair<BasisLabel, Complex>> values;

  Complex at(BasisLabel b) const {
    auto it = std::lower_bound(values.begin(), values.end(), b,
                               [](const auto& kv, BasisLabel key) { return kv.first < key; });
    return it != values.end() && it->first == b ? it->second : Complex{0.0, 0.0};
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& [b, v] : values) m = std::max(m, std::abs(v));
    return m;
  }

  bool empty() const { return values.empty(); }
  std::size_t size() const { return values.size(); }
};

struct MeasurementGroup {
  GroupKey key;
  MeasurementCircuit circuit;
  OutcomeTable outcomes;
};

struct GroupingResult {
  std::size_t n = 0;
  std::vector<MeasurementGroup> groups;

  std::size_t m() const { return groups.size(); }

  const MeasurementGroup* find(GroupKey key) const {
    auto it = std::lower_bound(groups.begin(), groups.end(), key,
                               [](const MeasurementGroup& g, GroupKey k) { return g.key < k; });
    return it != groups.end() && it->key == key ? &*it : nullptr;
  }
};

/// Measurement circuit for key l, in application order. For s = Re the state
/// is hit by CNOT(j0, k) for every other set bit k of l, then H(j0), with
/// j0 the top set bit; for s = Im an S^dag(j0) comes first. l = 0 measures
/// in the computational basis directly and has no Im variant.
inline MeasurementCircuit build_measurement_circuit(BasisLabel l, Part s, std::size_t n) {
  if (l >= dim(n)) {
    throw std::invalid_argument("build_measurement_circuit: key out of range");
  }
  MeasurementCircuit c;
  c.n = n;
  if (l == 0) {
    if (s == Part::Im) {
      throw std::invalid_argument("build_measurement_circuit: the diagonal key has no Im part");
    }
    return c;
  }
  const std::size_t j0 = top_set_bit(l);
  if (s == Part::Im) c.gates.push_back(Gate::sdg(j0));
  for (std::size_t k = 0; k < j0; ++k) {
    if ((l >> k) & 1) c.gates.push_back(Gate::cnot(j0, k));
  }
  c.gates.push_back(Gate::h(j0));
  return c;
}

namespace detail {

struct KeyBucket {
  std::vector<std::pair<BasisLabel, Complex>> re;
  std::vector<std::pair<BasisLabel, Complex>> im;
};

/// Sorts, merges duplicate labels, and drops exact-zero coefficients.
inline OutcomeTable fold_outcomes(std::vector<std::pair<BasisLabel, Complex>>&& raw) {
  std::sort(raw.begin(), raw.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  OutcomeTable table;
  table.values.reserve(raw.size());
  for (const auto& [b, v] : raw) {
    if (!table.values.empty() && table.values.back().first == b) {
      table.values.back().second += v;
    } else {
      table.values.emplace_back(b, v);
    }
  }
  std::erase_if(table.values, [](const auto& kv) { return kv.second == Complex{0.0, 0.0}; });
  return table;
}

}  // namespace detail

/// Folds the matrix entries into one group per surviving (l, s) pair.
///
/// Each diagonal entry lands on the l = 0 table at its own label. An
/// off-diagonal entry at (b, c) with b < c splits between labels b and
/// b ^ 2^{j0}, contributing (+-A/2) to the Re table and (+-iA/2) to the Im
/// table; for b > c the element is folded onto the transposed slot with the
/// Im signs flipped. Coefficients that cancel exactly are dropped, as are
/// groups whose table empties (e.g. Im groups of a real symmetric matrix).
inline GroupingResult group_terms(const SparseObservable& a) {
  std::map<BasisLabel, detail::KeyBucket> buckets;
  for (const auto& e : a.entries) {
    const BasisLabel l = e.row ^ e.col;
    if (l == 0) {
      buckets[0].re.emplace_back(e.row, e.value);
      continue;
    }
    const BasisLabel pivot = dim(top_set_bit(l));
    const Complex half = e.value * 0.5;
    const Complex ihalf = Complex{0.0, 1.0} * half;
    auto& bucket = buckets[l];
    if (e.row < e.col) {
      const BasisLabel b = e.row, bbar = e.row ^ pivot;
      bucket.re.emplace_back(b, half);
      bucket.re.emplace_back(bbar, -half);
      bucket.im.emplace_back(b, ihalf);
      bucket.im.emplace_back(bbar, -ihalf);
    } else {
      const BasisLabel c = e.col, cbar = e.col ^ pivot;
      bucket.re.emplace_back(c, half);
      bucket.re.emplace_back(cbar, -half);
      bucket.im.emplace_back(c, -ihalf);
      bucket.im.emplace_back(cbar, ihalf);
    }
  }

  GroupingResult result;
  result.n = a.n;
  for (auto& [l, bucket] : buckets) {
    OutcomeTable re = detail::fold_outcomes(std::move(bucket.re));
    if (!re.empty()) {
      result.groups.push_back(
          {{l, Part::Re}, build_measurement_circuit(l, Part::Re, a.n), std::move(re)});
    }
    if (l == 0) continue;
    OutcomeTable im = detail::fold_outcomes(std::move(bucket.im));
    if (!im.empty()) {
      result.groups.push_back(
          {{l, Part::Im}, build_measurement_circuit(l, Part::Im, a.n), std::move(im)});
    }
  }
  return result;
}

/// Block embedding [[0, 2A'], [0, 0]] used when bra and ket states differ:
/// <psi0|A'|psi1> = <phi|embed(A')|phi> with phi the flagged superposition
/// of the two states.
inline SparseObservable embed_offdiagonal(const SparseObservable& a) {
  SparseObservable out;
  out.n = a.n + 1;
  out.entries.reserve(a.entries.size());
  const BasisLabel shift = dim(a.n);
  for (const auto& e : a.entries) out.add(e.row, e.col + shift, 2.0 * e.value);
  out.normalize();
  return out;
}

/// Number of distinct keys {row^col} of a fully filled band matrix with
/// bandwidth k: (n-r)k + 2^r with r = ceil(log2 k), or 1 for the diagonal.
inline std::uint64_t band_color_count(std::size_t n, BasisLabel k) {
  if (k >= dim(n)) {
    throw std::invalid_argument("band_color_count: bandwidth must be below the dimension");
  }
  if (k == 0) return 1;
  const std::uint64_t r = static_cast<std::uint64_t>(std::bit_width(k - 1));
  return (n - r) * k + (std::uint64_t{1} << r);
}

/// Worst-case number of measurement circuits for an n-qubit band matrix:
/// twice the key count, less one when a diagonal is present (its Im part
/// never exists) and k > 1.
inline std::uint64_t upper_bound_m(std::size_t n, BasisLabel k, bool has_diagonal) {
  if (k == 0) return 1;
  const std::uint64_t bound = 2 * band_color_count(n, k);
  return (has_diagonal && k > 1) ? bound - 1 : bound;
}

/// Measurement groups needed for a single weighted Pauli string: one when it
/// is diagonal ({I,Z} letters only), otherwise a Re and an Im group.
inline int pauli_to_xbm_groups(const PauliString& p) { return p.is_diagonal() ? 1 : 2; }

}  // namespace xbm
