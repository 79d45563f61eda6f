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

#include <set>

#include "oracle.hpp"
#include "xbm/observable.hpp"
#include "xbm/pauli.hpp"

using namespace xbm;

TEST_CASE("normalize merges duplicates and drops zeros", "[observable]") {
  SparseObservable a;
  a.n = 2;
  a.add(1, 2, {1.0, 0.0});
  a.add(1, 2, {2.0, 0.0});
  a.add(0, 0, {1.0, 0.0});
  a.add(0, 0, {-1.0, 0.0});
  a.normalize();
  REQUIRE(a.entries.size() == 1);
  CHECK(a.entries[0].row == 1);
  CHECK(a.entries[0].col == 2);
  CHECK(a.entries[0].value == Complex{3.0, 0.0});
}

TEST_CASE("matrix_stats collects structure", "[observable]") {
  SECTION("diagonal matrix") {
    SparseObservable a;
    a.n = 2;
    for (BasisLabel b = 0; b < 4; ++b) a.add(b, b, {double(b + 1), 0.0});
    a.normalize();
    const MatrixStats s = matrix_stats(a);
    CHECK(s.bandwidth == 0);
    CHECK(s.key_set == std::set<BasisLabel>{0});
    CHECK(s.nnz == 4);
    CHECK(s.max_abs == 4.0);
  }
  SECTION("single off-diagonal entry") {
    SparseObservable a;
    a.n = 2;
    a.add(1, 2, {3.0, -4.0});
    const MatrixStats s = matrix_stats(a);
    CHECK(s.key_set == std::set<BasisLabel>{3});
    CHECK(s.bandwidth == 1);
    CHECK(s.max_abs == Catch::Approx(5.0));
    CHECK(s.trace_sq == Catch::Approx(25.0));
    CHECK(s.abs_sum == Catch::Approx(5.0));
  }
  SECTION("dense two-qubit matrix") {
    const auto a = oracle::random_observable(oracle::MatrixKind::Dense, 2, 5);
    const MatrixStats s = matrix_stats(a);
    CHECK(s.nnz == 16);
    CHECK(s.key_set == std::set<BasisLabel>{0, 1, 2, 3});
  }
}

TEST_CASE("gen_random_band fills the band", "[observable]") {
  SECTION("diagonal band") {
    const auto a = gen_random_band(3, 0, 1.0, 1);
    CHECK(a.entries.size() == 8);
    for (const auto& e : a.entries) CHECK(e.row == e.col);
  }
  SECTION("full band count matches 2^n(2k+1)-k(k+1)") {
    const auto a = gen_random_band(3, 2, 1.0, 2);
    CHECK(a.entries.size() == 8 * 5 - 2 * 3);
    for (const auto& e : a.entries) {
      const auto delta = e.row > e.col ? e.row - e.col : e.col - e.row;
      CHECK(delta <= 2);
    }
  }
  SECTION("partial fill stays inside the band positions") {
    const auto a = gen_random_band(2, 1, 0.5, 7);
    CHECK(a.entries.size() <= 10);
    for (const auto& e : a.entries) {
      const auto delta = e.row > e.col ? e.row - e.col : e.col - e.row;
      CHECK(delta <= 1);
    }
  }
  SECTION("value range per the random setup") {
    const auto a = gen_random_band(3, 1, 1.0, 3);
    for (const auto& e : a.entries) {
      CHECK(std::abs(e.value.real()) <= 100.0);
      CHECK(std::abs(e.value.imag()) <= 100.0);
    }
  }
  SECTION("hermitian and real-symmetric modes") {
    CHECK(gen_random_band(3, 2, 1.0, 4, BandSymmetry::Hermitian).is_hermitian());
    const auto sym = gen_random_band(3, 2, 1.0, 4, BandSymmetry::RealSymmetric);
    CHECK(sym.is_hermitian());
    for (const auto& e : sym.entries) CHECK(e.value.imag() == 0.0);
  }
  SECTION("bandwidth must fit") {
    CHECK_THROWS_AS(gen_random_band(2, 4, 1.0, 1), std::invalid_argument);
  }
}

TEST_CASE("gen_random_support places d distinct nonzeros", "[observable]") {
  const auto a = gen_random_support(3, 17, 9);
  CHECK(a.entries.size() == 17);
  std::set<std::pair<BasisLabel, BasisLabel>> seen;
  for (const auto& e : a.entries) seen.insert({e.row, e.col});
  CHECK(seen.size() == 17);
}

TEST_CASE("one-sparse all-colors pattern", "[observable]") {
  SECTION("n = 2 seed pattern") {
    const auto a = gen_one_sparse_all_colors(2);
    REQUIRE(a.entries.size() == 4);
    std::set<BasisLabel> keys;
    for (const auto& e : a.entries) keys.insert(e.row ^ e.col);
    CHECK(keys == std::set<BasisLabel>{0, 1, 2, 3});
  }
  SECTION("doubling keeps 1-sparsity and covers every key") {
    for (std::size_t n = 2; n <= 8; ++n) {
      const auto a = gen_one_sparse_all_colors(n);
      REQUIRE(a.entries.size() == dim(n));
      std::set<BasisLabel> rows, cols, keys;
      std::size_t diagonal = 0;
      for (const auto& e : a.entries) {
        rows.insert(e.row);
        cols.insert(e.col);
        keys.insert(e.row ^ e.col);
        if (e.row == e.col) ++diagonal;
      }
      CHECK(rows.size() == dim(n));
      CHECK(cols.size() == dim(n));
      CHECK(keys.size() == dim(n));
      CHECK(diagonal == 1);
    }
  }
  SECTION("rejects n below the seed pattern") {
    CHECK_THROWS_AS(gen_one_sparse_all_colors(1), std::invalid_argument);
  }
}

TEST_CASE("pauli string parsing and support", "[pauli]") {
  const PauliString p = PauliString::parse("XIYYZ");
  CHECK(p.str() == "XIYYZ");
  CHECK(p.letters[0] == PauliLetter::Z);
  CHECK(p.letters[4] == PauliLetter::X);
  CHECK(p.flip_mask() == 0b10110);
  CHECK_FALSE(p.is_diagonal());
  CHECK(PauliString::parse("ZZI").is_diagonal());
}

TEST_CASE("pauli_to_observable matches the dense kron matrix", "[pauli]") {
  for (const char* text : {"X", "Y", "ZZ", "XY", "IZX", "YIX"}) {
    const PauliString p = PauliString::parse(text, {0.5, -1.25});
    const auto a = pauli_to_observable(p);
    const auto dense = oracle::to_dense(a);
    const auto expect = oracle::pauli_matrix(p);
    CHECK(oracle::max_abs_diff(dense, expect) < 1e-12);
  }
}

TEST_CASE("pauli_decompose expands a single ket-bra", "[pauli]") {
  // A = |010><110|: all eight strings carry X or Y on qubit 2 and I/Z
  // elsewhere, with coefficients +-1/8 and +-i/8.
  SparseObservable a;
  a.n = 3;
  a.add(2, 6, {1.0, 0.0});
  const auto strings = pauli_decompose(a);
  REQUIRE(strings.size() == 8);

  const std::map<std::string, Complex> expected = {
      {"XII", {0.125, 0.0}},  {"XIZ", {0.125, 0.0}},  {"XZI", {-0.125, 0.0}},
      {"XZZ", {-0.125, 0.0}}, {"YII", {0.0, 0.125}},  {"YIZ", {0.0, 0.125}},
      {"YZI", {0.0, -0.125}}, {"YZZ", {0.0, -0.125}},
  };
  for (const auto& s : strings) {
    auto it = expected.find(s.str());
    REQUIRE(it != expected.end());
    CHECK(std::abs(s.coefficient - it->second) < 1e-12);
  }

  // Independent check: the weighted strings must sum back to A.
  oracle::Dense sum(8);
  for (const auto& s : strings) {
    const auto m = oracle::pauli_matrix(s);
    for (std::size_t i = 0; i < sum.data.size(); ++i) sum.data[i] += m.data[i];
  }
  CHECK(oracle::max_abs_diff(sum, oracle::to_dense(a)) < 1e-12);
}

TEST_CASE("pauli_decompose of the identity", "[pauli]") {
  SparseObservable a;
  a.n = 3;
  for (BasisLabel b = 0; b < 8; ++b) a.add(b, b, {1.0, 0.0});
  const auto strings = pauli_decompose(a);
  REQUIRE(strings.size() == 1);
  CHECK(strings[0].str() == "III");
  CHECK(std::abs(strings[0].coefficient - Complex{1.0, 0.0}) < 1e-12);
}

TEST_CASE("pauli_decompose reconstructs random matrices", "[pauli]") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const std::size_t n = 1 + seed % 3;
    const auto kind = seed % 2 ? oracle::MatrixKind::Hermitian : oracle::MatrixKind::Sparse;
    const auto a = seed < 6 ? oracle::random_observable(kind, n, seed)
                            : gen_random_band(6, 1 + seed % 3, 1.0, seed);
    const auto strings = pauli_decompose(a);
    if (seed < 6 && kind == oracle::MatrixKind::Hermitian) {
      for (const auto& s : strings) CHECK(std::abs(s.coefficient.imag()) < 1e-12);
    }
    oracle::Dense sum(dim(a.n));
    for (const auto& s : strings) {
      const auto m = oracle::pauli_matrix(s);
      for (std::size_t i = 0; i < sum.data.size(); ++i) sum.data[i] += m.data[i];
    }
    CHECK(oracle::max_abs_diff(sum, oracle::to_dense(a)) < 1e-10);
  }
}

TEST_CASE("pauli_string_count formula", "[pauli]") {
  CHECK(pauli_string_count(2, 3, false) == 16);
  CHECK(pauli_string_count(3, 1, false) == 32);
  for (std::size_t n = 2; n <= 4; ++n) {
    for (BasisLabel k = 0; k < dim(n); ++k) {
      CHECK(pauli_string_count(n, k, true) == 2 * pauli_string_count(n, k, false));
    }
  }
}

TEST_CASE("hermitian detection", "[observable]") {
  auto a = gen_random_band(2, 1, 1.0, 5, BandSymmetry::Hermitian);
  CHECK(a.is_hermitian());
  a.entries[0].value += Complex{0.0, 1.0};
  if (a.entries[0].row == a.entries[0].col) {
    CHECK_FALSE(a.is_hermitian());
  }
}
