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
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <set>
#include <unordered_map>
#include <vector>

#include "xbm/core.hpp"

namespace xbm {

using Complex = std::complex<double>;

struct MatrixEntry {
  BasisLabel row = 0;
  BasisLabel col = 0;
  Complex value;

  bool operator==(const MatrixEntry&) const = default;
};

/// Coordinate-list complex matrix over n qubits. Entries are unique (row,col)
/// pairs with nonzero values; absent coordinates are implicit zeros.
struct SparseObservable {
  std::size_t n = 0;
  std::vector<MatrixEntry> entries;

  BasisLabel dimension() const { return dim(n); }

  void add(BasisLabel row, BasisLabel col, Complex value) {
    entries.push_back({row, col, value});
  }

  /// Sums duplicate coordinates, drops exact zeros, orders by (row, col).
  void normalize() {
    std::sort(entries.begin(), entries.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<MatrixEntry> merged;
    merged.reserve(entries.size());
    for (const auto& e : entries) {
      if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col) {
        merged.back().value += e.value;
      } else {
        merged.push_back(e);
      }
    }
    std::erase_if(merged, [](const MatrixEntry& e) { return e.value == Complex{0.0, 0.0}; });
    entries = std::move(merged);
  }

  bool is_hermitian() const {
    std::unordered_map<std::uint64_t, Complex> lookup;
    lookup.reserve(entries.size() * 2);
    for (const auto& e : entries) lookup[(e.row << kMaxQubits) | e.col] = e.value;
    for (const auto& e : entries) {
      auto it = lookup.find((e.col << kMaxQubits) | e.row);
      if (it == lookup.end() || it->second != std::conj(e.value)) return false;
    }
    return true;
  }
};

/// Structural statistics consumed by the bound and count predictors.
struct MatrixStats {
  std::size_t nnz = 0;
  BasisLabel bandwidth = 0;               // max |row - col|
  std::set<BasisLabel> key_set;           // {row ^ col}
  double max_abs = 0.0;                   // max |A_bc|
  double trace_sq = 0.0;                  // tr(A^dag A); equals tr(A^2) for Hermitian A
  double abs_sum = 0.0;                   // sum |A_bc|
};

inline MatrixStats matrix_stats(const SparseObservable& a) {
  MatrixStats s;
  s.nnz = a.entries.size();
  for (const auto& e : a.entries) {
    const BasisLabel delta = e.row > e.col ? e.row - e.col : e.col - e.row;
    s.bandwidth = std::max(s.bandwidth, delta);
    s.key_set.insert(e.row ^ e.col);
    const double mag = std::abs(e.value);
    s.max_abs = std::max(s.max_abs, mag);
    s.trace_sq += mag * mag;
    s.abs_sum += mag;
  }
  return s;
}

enum class BandSymmetry { None, RealSymmetric, Hermitian };

/// Random band matrix: nonzeros only where |row-col| <= k, each band position
/// kept with probability `fill`, values with Re and Im uniform in [-100, 100].
inline SparseObservable gen_random_band(std::size_t n, BasisLabel k, double fill,
                                        std::uint64_t seed,
                                        BandSymmetry symmetry = BandSymmetry::None) {
  const BasisLabel size = dim(n);
  if (k >= size) {
    throw std::invalid_argument("gen_random_band: bandwidth must be below the dimension");
  }
  if (!(fill > 0.0) || fill > 1.0) {
    throw std::invalid_argument("gen_random_band: fill must be in (0, 1]");
  }
  std::mt19937_64 rng(derive_seed(seed, 0xba2d));
  const auto amp = [&rng] { return -100.0 + 200.0 * uniform_unit(rng); };
  SparseObservable a;
  a.n = n;
  for (BasisLabel row = 0; row < size; ++row) {
    const BasisLabel lo = row > k ? row - k : 0;
    const BasisLabel hi = std::min(size - 1, row + k);
    for (BasisLabel col = lo; col <= hi; ++col) {
      if (symmetry != BandSymmetry::None && col < row) continue;  // mirrored below
      if (fill < 1.0 && uniform_unit(rng) >= fill) continue;
      Complex v;
      switch (symmetry) {
        case BandSymmetry::None:
          v = {amp(), amp()};
          break;
        case BandSymmetry::RealSymmetric:
          v = {amp(), 0.0};
          break;
        case BandSymmetry::Hermitian:
          v = col == row ? Complex{amp(), 0.0} : Complex{amp(), amp()};
          break;
      }
      if (v == Complex{0.0, 0.0}) continue;
      a.add(row, col, v);
      if (symmetry != BandSymmetry::None && col != row) {
        a.add(col, row, symmetry == BandSymmetry::Hermitian ? std::conj(v) : v);
      }
    }
  }
  a.normalize();
  return a;
}

/// d nonzeros at distinct random coordinates, values as in gen_random_band.
inline SparseObservable gen_random_support(std::size_t n, std::size_t d, std::uint64_t seed) {
  const BasisLabel size = dim(n);
  if (d == 0 || d > size * size) {
    throw std::invalid_argument("gen_random_support: d out of range");
  }
  std::mt19937_64 rng(derive_seed(seed, 0x5eed));
  const auto amp = [&rng] { return -100.0 + 200.0 * uniform_unit(rng); };
  std::set<std::uint64_t> cells;
  // size*size is a power of two, so the modulo draw is exactly uniform.
  while (cells.size() < d) cells.insert(rng() % (size * size));
  SparseObservable a;
  a.n = n;
  for (std::uint64_t c : cells) {
    Complex v{amp(), amp()};
    if (v == Complex{0.0, 0.0}) v = {1.0, 0.0};
    a.add(c / size, c % size, v);
  }
  a.normalize();
  return a;
}

/// 1-sparse matrix whose keys {row^col} cover every value in [0, 2^n): one
/// entry per row and per column, all values 1. Built from a hand-picked 4x4
/// pattern by repeated split/copy doubling; each doubling keeps the low-key
/// half-columns in place, moves the rest to the opposite corner block, and
/// fills the off-corner blocks with half-shifted copies.
inline SparseObservable gen_one_sparse_all_colors(std::size_t n) {
  if (n < 2) {
    throw std::invalid_argument("gen_one_sparse_all_colors: needs n >= 2");
  }
  // row_of_col[c] for the 4x4 base pattern; keys come out as {0, 3, 1, 2}.
  std::vector<BasisLabel> row_of_col = {0, 2, 3, 1};
  for (std::size_t m = 2; m < n; ++m) {
    const BasisLabel half = dim(m) / 2;
    const BasisLabel full = dim(m);
    std::vector<BasisLabel> next(2 * full);
    for (BasisLabel c = 0; c < half; ++c) {
      next[c] = row_of_col[c];                        // keep in the low block
      next[c + half] = row_of_col[c] + full;          // shifted copy, high key
    }
    for (BasisLabel c = half; c < full; ++c) {
      next[c + full] = row_of_col[c] + full;          // move to the high block
      next[c + half] = row_of_col[c];                 // shifted copy, high key
    }
    row_of_col = std::move(next);
  }
  SparseObservable a;
  a.n = n;
  for (BasisLabel c = 0; c < dim(n); ++c) a.add(row_of_col[c], c, {1.0, 0.0});
  a.normalize();
  return a;
}

}  // namespace xbm
