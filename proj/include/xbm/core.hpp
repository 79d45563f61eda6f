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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace xbm {

/// Computational-basis label of an n-qubit register. Qubit 0 is the least
/// significant bit, so a label prints as b_{n-1}...b_1 b_0.
using BasisLabel = std::uint64_t;

inline constexpr std::size_t kMaxQubits = 32;

inline constexpr BasisLabel dim(std::size_t n) { return BasisLabel{1} << n; }

/// XOR key of a matrix element: elements with equal row^col share a
/// measurement circuit.
inline constexpr BasisLabel xor_key(BasisLabel b, BasisLabel c) { return b ^ c; }

/// Index of the most significant set bit of l (the pivot qubit of the
/// measurement circuit for key l). l must be nonzero.
inline std::size_t top_set_bit(BasisLabel l) {
  if (l == 0) {
    throw std::invalid_argument("top_set_bit: the diagonal key 0 has no pivot qubit");
  }
  return static_cast<std::size_t>(std::bit_width(l)) - 1;
}

/// Number of CNOT gates needed to measure the (b,c) matrix element:
/// popcount(b^c) - 1, and zero on the diagonal.
inline int cnot_cost(BasisLabel b, BasisLabel c) {
  const int bits = std::popcount(b ^ c);
  return bits > 0 ? bits - 1 : 0;
}

enum class GateKind : std::uint8_t { H, S, Sdg, X, Cnot };

inline const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "Sdg";
    case GateKind::X: return "X";
    case GateKind::Cnot: return "CNOT";
  }
  return "?";
}

/// One gate of a measurement circuit. `control` is meaningful only for CNOT.
struct Gate {
  GateKind kind;
  std::size_t target = 0;
  std::size_t control = 0;

  static Gate h(std::size_t t) { return {GateKind::H, t}; }
  static Gate s(std::size_t t) { return {GateKind::S, t}; }
  static Gate sdg(std::size_t t) { return {GateKind::Sdg, t}; }
  static Gate x(std::size_t t) { return {GateKind::X, t}; }
  static Gate cnot(std::size_t control, std::size_t target) {
    if (control == target) {
      throw std::invalid_argument("cnot: control and target must differ");
    }
    return {GateKind::Cnot, target, control};
  }

  bool operator==(const Gate& other) const {
    if (kind != other.kind || target != other.target) return false;
    return kind != GateKind::Cnot || control == other.control;
  }
};

/// Gate list in application order: gates.front() acts on the state first.
struct MeasurementCircuit {
  std::size_t n = 0;
  std::vector<Gate> gates;

  bool operator==(const MeasurementCircuit& other) const {
    return n == other.n && gates == other.gates;
  }
};

/// Real or imaginary part of an off-diagonal contribution. The diagonal key
/// only ever carries a Re part.
enum class Part : std::uint8_t { Re, Im };

inline const char* part_name(Part s) { return s == Part::Re ? "Re" : "Im"; }

struct GroupKey {
  BasisLabel l = 0;
  Part s = Part::Re;

  bool operator==(const GroupKey&) const = default;
  auto operator<=>(const GroupKey&) const = default;
};

struct GroupKeyHash {
  std::size_t operator()(const GroupKey& k) const {
    return std::hash<std::uint64_t>{}((k.l << 1) | static_cast<std::uint64_t>(k.s));
  }
};

/// Renders a label as the bit string b_{n-1}...b_0.
inline std::string format_bits(BasisLabel b, std::size_t n) {
  std::string out(n, '0');
  for (std::size_t j = 0; j < n; ++j) {
    if ((b >> j) & 1) out[n - 1 - j] = '1';
  }
  return out;
}

/// Uniform double in [0, 1) from the top 53 bits of a generator draw.
/// Unlike std::uniform_real_distribution this is bit-identical across
/// standard libraries, which keeps seeded runs portable.
template <typename Rng>
double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// SplitMix64 step; used to derive independent RNG streams from one seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x51aced1234567ULL));
}

}  // namespace xbm
