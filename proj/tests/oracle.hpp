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

// Test-only dense linear-algebra reference path. Everything here works on
// explicit 2^n x 2^n matrices and stays independent of the sparse grouping
// and estimation code it checks.

#pragma once

#include <random>
#include <vector>

#include "xbm/observable.hpp"
#include "xbm/pauli.hpp"
#include "xbm/simulator.hpp"

namespace oracle {

using xbm::BasisLabel;
using xbm::Complex;

/// Row-major dense complex matrix.
struct Dense {
  std::size_t size = 0;
  std::vector<Complex> data;

  explicit Dense(std::size_t size) : size(size), data(size * size) {}

  Complex& at(std::size_t r, std::size_t c) { return data[r * size + c]; }
  Complex at(std::size_t r, std::size_t c) const { return data[r * size + c]; }
};

inline Dense to_dense(const xbm::SparseObservable& a) {
  Dense m(xbm::dim(a.n));
  for (const auto& e : a.entries) m.at(e.row, e.col) += e.value;
  return m;
}

inline Dense multiply(const Dense& a, const Dense& b) {
  Dense out(a.size);
  for (std::size_t i = 0; i < a.size; ++i) {
    for (std::size_t k = 0; k < a.size; ++k) {
      const Complex aik = a.at(i, k);
      if (aik == Complex{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < a.size; ++j) out.at(i, j) += aik * b.at(k, j);
    }
  }
  return out;
}

inline Dense kron(const Dense& a, const Dense& b) {
  Dense out(a.size * b.size);
  for (std::size_t i = 0; i < a.size; ++i) {
    for (std::size_t j = 0; j < a.size; ++j) {
      for (std::size_t k = 0; k < b.size; ++k) {
        for (std::size_t l = 0; l < b.size; ++l) {
          out.at(i * b.size + k, j * b.size + l) = a.at(i, j) * b.at(k, l);
        }
      }
    }
  }
  return out;
}

/// <phi|M|phi>.
inline Complex expectation(const Dense& m, const xbm::Statevector& phi) {
  Complex total{0.0, 0.0};
  for (std::size_t r = 0; r < m.size; ++r) {
    for (std::size_t c = 0; c < m.size; ++c) {
      total += std::conj(phi.amplitudes[r]) * m.at(r, c) * phi.amplitudes[c];
    }
  }
  return total;
}

/// <psi0|M|psi1>.
inline Complex bilinear(const Dense& m, const xbm::Statevector& psi0,
                        const xbm::Statevector& psi1) {
  Complex total{0.0, 0.0};
  for (std::size_t r = 0; r < m.size; ++r) {
    for (std::size_t c = 0; c < m.size; ++c) {
      total += std::conj(psi0.amplitudes[r]) * m.at(r, c) * psi1.amplitudes[c];
    }
  }
  return total;
}

inline Complex dense_sparse_expectation(const xbm::SparseObservable& a,
                                        const xbm::Statevector& phi) {
  Complex total{0.0, 0.0};
  for (const auto& e : a.entries) {
    total += std::conj(phi.amplitudes[e.row]) * e.value * phi.amplitudes[e.col];
  }
  return total;
}

/// Dense Pauli-string matrix built from explicit 2x2 factors (independent of
/// the bit-twiddling expansion in the library).
inline Dense pauli_matrix(const xbm::PauliString& p) {
  auto single = [](xbm::PauliLetter letter) {
    Dense m(2);
    switch (letter) {
      case xbm::PauliLetter::I: m.at(0, 0) = 1.0; m.at(1, 1) = 1.0; break;
      case xbm::PauliLetter::X: m.at(0, 1) = 1.0; m.at(1, 0) = 1.0; break;
      case xbm::PauliLetter::Y: m.at(0, 1) = {0.0, -1.0}; m.at(1, 0) = {0.0, 1.0}; break;
      case xbm::PauliLetter::Z: m.at(0, 0) = 1.0; m.at(1, 1) = -1.0; break;
    }
    return m;
  };
  Dense out = single(p.letters[p.n() - 1]);
  for (std::size_t j = p.n() - 1; j-- > 0;) out = kron(out, single(p.letters[j]));
  for (auto& v : out.data) v *= p.coefficient;
  return out;
}

inline double max_abs_diff(const Dense& a, const Dense& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
  }
  return worst;
}

/// Dense classical-shadow state for a recorded (l, s, b) under selection
/// probability p: |b><b|/p on the diagonal key, otherwise the (anti)symmetric
/// ket-bra pair over the measured label and its partner.
inline Dense shadow_dense(xbm::GroupKey key, BasisLabel b, double p, std::size_t n) {
  Dense m(xbm::dim(n));
  if (key.l == 0) {
    m.at(b, b) = 1.0 / p;
    return m;
  }
  const BasisLabel pivot = xbm::dim(xbm::top_set_bit(key.l));
  BasisLabel bp, cp;
  double sign;
  if ((b ^ key.l) > b) {
    bp = b;
    cp = b ^ key.l;
    sign = 1.0;
  } else {
    bp = b ^ pivot;
    cp = b ^ key.l ^ pivot;
    sign = -1.0;
  }
  if (key.s == xbm::Part::Re) {
    m.at(cp, bp) += sign / (2.0 * p);
    m.at(bp, cp) += sign / (2.0 * p);
  } else {
    m.at(cp, bp) += Complex{0.0, sign / (2.0 * p)};
    m.at(bp, cp) -= Complex{0.0, sign / (2.0 * p)};
  }
  return m;
}

// ---------------------------------------------------------------------------
// Random test inputs
// ---------------------------------------------------------------------------

enum class MatrixKind { Dense, Band, Sparse, Hermitian, RealSymmetric };

inline xbm::SparseObservable random_observable(MatrixKind kind, std::size_t n,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(xbm::derive_seed(seed, 0xca5e));
  std::uniform_real_distribution<double> amp(-100.0, 100.0);
  const BasisLabel size = xbm::dim(n);
  xbm::SparseObservable a;
  a.n = n;
  switch (kind) {
    case MatrixKind::Dense:
      for (BasisLabel r = 0; r < size; ++r) {
        for (BasisLabel c = 0; c < size; ++c) a.add(r, c, {amp(rng), amp(rng)});
      }
      break;
    case MatrixKind::Band: {
      const BasisLabel k = size > 2 ? 1 + rng() % (size / 2) : 1;
      return xbm::gen_random_band(n, k, 1.0, seed);
    }
    case MatrixKind::Sparse: {
      const std::size_t d = 1 + rng() % (2 * size);
      return xbm::gen_random_support(n, d, seed);
    }
    case MatrixKind::Hermitian: {
      const BasisLabel k = size > 2 ? 1 + rng() % (size - 1) : 1;
      return xbm::gen_random_band(n, k, 1.0, seed, xbm::BandSymmetry::Hermitian);
    }
    case MatrixKind::RealSymmetric: {
      const BasisLabel k = size > 2 ? 1 + rng() % (size - 1) : 1;
      return xbm::gen_random_band(n, k, 1.0, seed, xbm::BandSymmetry::RealSymmetric);
    }
  }
  a.normalize();
  return a;
}

}  // namespace oracle
