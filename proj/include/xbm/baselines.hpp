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

#include "xbm/estimation.hpp"
#include "xbm/pauli.hpp"
#include "xbm/simulator.hpp"

namespace xbm {

/// Qubit-wise commuting strings measured together after one layer of
/// single-qubit rotations.
struct PauliGroup {
  std::vector<PauliString> members;
  MeasurementCircuit basis_rotation;
};

/// True when the letters agree or one is I at every position.
inline bool qubit_wise_commute(const PauliString& a, const PauliString& b) {
  for (std::size_t j = 0; j < a.n(); ++j) {
    const PauliLetter x = a.letters[j], y = b.letters[j];
    if (x != PauliLetter::I && y != PauliLetter::I && x != y) return false;
  }
  return true;
}

/// Rotation layer mapping every member's eigenbasis to the computational
/// basis: H for X, S^dag then H for Y, nothing for I/Z.
inline MeasurementCircuit qwc_basis_rotation(const PauliGroup& group, std::size_t n) {
  MeasurementCircuit c;
  c.n = n;
  for (std::size_t j = 0; j < n; ++j) {
    PauliLetter letter = PauliLetter::I;
    for (const auto& p : group.members) {
      if (p.letters[j] != PauliLetter::I) {
        letter = p.letters[j];
        break;
      }
    }
    if (letter == PauliLetter::X) {
      c.gates.push_back(Gate::h(j));
    } else if (letter == PauliLetter::Y) {
      c.gates.push_back(Gate::sdg(j));
      c.gates.push_back(Gate::h(j));
    }
  }
  return c;
}

/// Greedy first-fit grouping under qubit-wise commutativity, visiting the
/// strings by descending coefficient magnitude.
inline std::vector<PauliGroup> qwc_group(std::vector<PauliString> strings) {
  std::sort(strings.begin(), strings.end(), [](const PauliString& a, const PauliString& b) {
    const double ma = std::abs(a.coefficient), mb = std::abs(b.coefficient);
    return ma != mb ? ma > mb : a.str() < b.str();
  });
  std::vector<PauliGroup> groups;
  for (auto& s : strings) {
    bool placed = false;
    for (auto& g : groups) {
      const bool fits = std::all_of(g.members.begin(), g.members.end(), [&](const PauliString& m) {
        return qubit_wise_commute(s, m);
      });
      if (fits) {
        g.members.push_back(std::move(s));
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({{std::move(s)}, {}});
  }
  for (auto& g : groups) {
    g.basis_rotation = qwc_basis_rotation(g, g.members.front().n());
  }
  return groups;
}

namespace detail {

/// <P> from computational-basis probabilities of the rotated state: each
/// outcome contributes (-1)^{popcount(b & support)}.
inline double pauli_value_from_probs(const std::vector<double>& probs, BasisLabel support) {
  double value = 0.0;
  for (std::size_t b = 0; b < probs.size(); ++b) {
    value += (std::popcount(BasisLabel(b) & support) & 1) ? -probs[b] : probs[b];
  }
  return value;
}

inline BasisLabel pauli_support(const PauliString& p) {
  BasisLabel mask = 0;
  for (std::size_t j = 0; j < p.n(); ++j) {
    if (p.letters[j] != PauliLetter::I) mask |= dim(j);
  }
  return mask;
}

inline MeasurementCircuit single_string_rotation(const PauliString& p) {
  PauliGroup g{{p}, {}};
  return qwc_basis_rotation(g, p.n());
}

}  // namespace detail

/// Term-by-term Pauli estimator: decompose A, measure every string with its
/// own rotation layer, and sum c_i <P_i>. shots_per_string = 0 runs the
/// shot-free exact mode.
inline EstimationReport naive_pauli_estimate(const SparseObservable& a, const Statevector& phi,
                                             std::uint64_t shots_per_string, std::uint64_t seed) {
  const std::vector<PauliString> strings = pauli_decompose(a);
  EstimationReport report;
  report.allocation = Allocation::Proportional;
  for (std::size_t i = 0; i < strings.size(); ++i) {
    const auto& p = strings[i];
    const Statevector rotated = apply_circuit(phi, detail::single_string_rotation(p));
    const BasisLabel support = detail::pauli_support(p);
    double value = 0.0;
    if (shots_per_string == 0) {
      value = detail::pauli_value_from_probs(probabilities(rotated), support);
    } else {
      std::int64_t signed_sum = 0;
      for (const auto& rec : sample(rotated, shots_per_string, derive_seed(seed, i))) {
        const bool odd = std::popcount(rec.bitstring & support) & 1;
        signed_sum += odd ? -std::int64_t(rec.count) : std::int64_t(rec.count);
      }
      value = double(signed_sum) / double(shots_per_string);
      report.shots_total += shots_per_string;
    }
    report.estimate += p.coefficient * value;
  }
  return report;
}

/// Pauli estimator batched by QWC groups: one rotation and one measurement
/// per group, every member scored from the shared outcomes.
inline EstimationReport qwc_estimate(const SparseObservable& a, const Statevector& phi,
                                     std::uint64_t shots_per_group, std::uint64_t seed) {
  const std::vector<PauliGroup> groups = qwc_group(pauli_decompose(a));
  EstimationReport report;
  report.allocation = Allocation::Proportional;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = groups[i];
    const Statevector rotated = apply_circuit(phi, g.basis_rotation);
    if (shots_per_group == 0) {
      const std::vector<double> probs = probabilities(rotated);
      for (const auto& p : g.members) {
        report.estimate +=
            p.coefficient * detail::pauli_value_from_probs(probs, detail::pauli_support(p));
      }
    } else {
      const auto records = sample(rotated, shots_per_group, derive_seed(seed, i));
      report.shots_total += shots_per_group;
      for (const auto& p : g.members) {
        const BasisLabel support = detail::pauli_support(p);
        std::int64_t signed_sum = 0;
        for (const auto& rec : records) {
          const bool odd = std::popcount(rec.bitstring & support) & 1;
          signed_sum += odd ? -std::int64_t(rec.count) : std::int64_t(rec.count);
        }
        report.estimate += p.coefficient * (double(signed_sum) / double(shots_per_group));
      }
    }
  }
  return report;
}

}  // namespace xbm
