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

#include <array>
#include <cmath>
#include <map>
#include <string>

#include "xbm/observable.hpp"

namespace xbm {

enum class PauliLetter : std::uint8_t { I, X, Y, Z };

inline char pauli_char(PauliLetter p) { return "IXYZ"[static_cast<int>(p)]; }

inline PauliLetter pauli_from_char(char c) {
  switch (c) {
    case 'I': case 'i': return PauliLetter::I;
    case 'X': case 'x': return PauliLetter::X;
    case 'Y': case 'y': return PauliLetter::Y;
    case 'Z': case 'z': return PauliLetter::Z;
  }
  throw std::invalid_argument(std::string("unknown Pauli letter: ") + c);
}

/// Weighted n-qubit Pauli string. letters[j] acts on qubit j, so the string
/// prints in p_{n-1}...p_0 order like basis labels.
struct PauliString {
  std::vector<PauliLetter> letters;  // index = qubit
  Complex coefficient{1.0, 0.0};

  std::size_t n() const { return letters.size(); }

  /// Parses "XIYYZ" with the leftmost letter on the highest qubit.
  static PauliString parse(const std::string& text, Complex coefficient = {1.0, 0.0}) {
    PauliString p;
    p.coefficient = coefficient;
    p.letters.resize(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      p.letters[text.size() - 1 - i] = pauli_from_char(text[i]);
    }
    return p;
  }

  std::string str() const {
    std::string out(n(), 'I');
    for (std::size_t j = 0; j < n(); ++j) out[n() - 1 - j] = pauli_char(letters[j]);
    return out;
  }

  /// Bit j set iff letter j is X or Y (the qubits whose basis label flips).
  BasisLabel flip_mask() const {
    BasisLabel mask = 0;
    for (std::size_t j = 0; j < n(); ++j) {
      if (letters[j] == PauliLetter::X || letters[j] == PauliLetter::Y) mask |= dim(j);
    }
    return mask;
  }

  bool is_diagonal() const { return flip_mask() == 0; }
};

/// Single-letter action on a basis bit: P|bit> = phase |bit ^ flips>.
inline void pauli_letter_action(PauliLetter p, int bit, int& flips, Complex& phase) {
  switch (p) {
    case PauliLetter::I:
      flips = 0;
      break;
    case PauliLetter::X:
      flips = 1;
      break;
    case PauliLetter::Y:
      flips = 1;
      phase *= bit ? Complex{0.0, -1.0} : Complex{0.0, 1.0};
      break;
    case PauliLetter::Z:
      flips = 0;
      if (bit) phase = -phase;
      break;
  }
}

/// Expands coefficient * P into its 2^n nonzero matrix entries.
inline SparseObservable pauli_to_observable(const PauliString& p) {
  SparseObservable a;
  a.n = p.n();
  const BasisLabel size = dim(a.n);
  a.entries.reserve(size);
  for (BasisLabel col = 0; col < size; ++col) {
    Complex phase{1.0, 0.0};
    BasisLabel row = 0;
    for (std::size_t j = 0; j < p.n(); ++j) {
      int flips = 0;
      pauli_letter_action(p.letters[j], static_cast<int>((col >> j) & 1), flips, phase);
      row |= (((col >> j) & 1) ^ static_cast<BasisLabel>(flips)) << j;
    }
    const Complex v = p.coefficient * phase;
    if (v != Complex{0.0, 0.0}) a.add(row, col, v);
  }
  a.normalize();
  return a;
}

/// Pauli-basis expansion of A: every string P with coefficient
/// tr(P A) / 2^n != 0, so that sum_i c_i P_i reconstructs A exactly.
///
/// Only strings whose flip mask appears among {row^col} of A can have a
/// nonzero trace, which keeps the expansion at O(d * 2^n) instead of 4^n.
inline std::vector<PauliString> pauli_decompose(const SparseObservable& a) {
  const std::size_t n = a.n;
  // tr(P A) = sum over entries (r,c): <c|P|r> * A_rc, nonzero only when the
  // flip mask of P equals r^c. Per key, iterate the 2^n diagonal letter
  // choices (I vs Z on unflipped qubits are both allowed; X vs Y on flipped).
  std::map<BasisLabel, std::vector<const MatrixEntry*>> by_key;
  for (const auto& e : a.entries) by_key[e.row ^ e.col].push_back(&e);

  std::vector<PauliString> result;
  for (const auto& [mask, entries] : by_key) {
    const BasisLabel choices = dim(n);
    for (BasisLabel choice = 0; choice < choices; ++choice) {
      // choice bit j: on flipped qubits selects X(0)/Y(1); otherwise I(0)/Z(1).
      PauliString p;
      p.letters.resize(n);
      for (std::size_t j = 0; j < n; ++j) {
        const bool flip = (mask >> j) & 1;
        const bool alt = (choice >> j) & 1;
        p.letters[j] = flip ? (alt ? PauliLetter::Y : PauliLetter::X)
                            : (alt ? PauliLetter::Z : PauliLetter::I);
      }
      Complex trace{0.0, 0.0};
      for (const MatrixEntry* e : entries) {
        // <c|P|r>: P|r> = phase |r ^ mask> = phase |c>.
        Complex phase{1.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
          int flips = 0;
          pauli_letter_action(p.letters[j], static_cast<int>((e->row >> j) & 1), flips, phase);
        }
        trace += phase * e->value;
      }
      const Complex coeff = trace / static_cast<double>(choices);
      if (coeff != Complex{0.0, 0.0}) {
        p.coefficient = coeff;
        result.push_back(std::move(p));
      }
    }
  }
  return result;
}

/// Number of unique Pauli strings in the expansion of a fully filled band
/// matrix of bandwidth k: 2^n per key, doubled when the bra and ket states
/// differ (the block embedding adds one flipped ancilla letter).
inline std::uint64_t pauli_string_count(std::size_t n, BasisLabel k, bool distinct_states) {
  if (k >= dim(n)) {
    throw std::invalid_argument("pauli_string_count: bandwidth must be below the dimension");
  }
  std::uint64_t colors = 1;
  if (k > 0) {
    const std::uint64_t r = static_cast<std::uint64_t>(std::bit_width(k - 1));  // ceil(log2 k)
    colors = (n - r) * k + (std::uint64_t{1} << r);
  }
  return (dim(n) << (distinct_states ? 1 : 0)) * colors;
}

}  // namespace xbm
