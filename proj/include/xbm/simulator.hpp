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
#include <atomic>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <thread>

#include "xbm/core.hpp"
#include "xbm/observable.hpp"

namespace xbm {

/// Worker threads used for amplitude-strided gate application. 0 = one per
/// hardware thread. Small states always run single-threaded.
inline std::atomic<int>& thread_knob() {
  static std::atomic<int> knob{0};
  return knob;
}

inline void set_thread_count(int threads) { thread_knob().store(threads < 0 ? 0 : threads); }

inline int resolved_thread_count() {
  int t = thread_knob().load();
  if (t == 0) t = static_cast<int>(std::thread::hardware_concurrency());
  return t > 0 ? t : 1;
}

namespace detail {

template <typename Fn>
void parallel_for(std::uint64_t count, Fn&& body) {
  const int threads = resolved_thread_count();
  if (threads <= 1 || count < (std::uint64_t{1} << 17)) {
    body(std::uint64_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::uint64_t lo = std::min<std::uint64_t>(t * chunk, count);
    const std::uint64_t hi = std::min<std::uint64_t>(lo + chunk, count);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Dense n-qubit state, 2^n amplitudes, qubit 0 = least significant bit.
struct Statevector {
  std::size_t n = 0;
  std::vector<Complex> amplitudes;

  static Statevector zero(std::size_t n) {
    Statevector s;
    s.n = n;
    s.amplitudes.assign(dim(n), Complex{0.0, 0.0});
    s.amplitudes[0] = 1.0;
    return s;
  }

  static Statevector basis(std::size_t n, BasisLabel b) {
    if (b >= dim(n)) throw std::invalid_argument("basis state out of range");
    Statevector s;
    s.n = n;
    s.amplitudes.assign(dim(n), Complex{0.0, 0.0});
    s.amplitudes[b] = 1.0;
    return s;
  }

  static Statevector from_amplitudes(std::vector<Complex> amps) {
    const std::size_t n = static_cast<std::size_t>(std::bit_width(amps.size())) - 1;
    if (amps.empty() || dim(n) != amps.size()) {
      throw std::invalid_argument("amplitude count must be a power of two");
    }
    Statevector s;
    s.n = n;
    s.amplitudes = std::move(amps);
    return s;
  }

  double norm() const {
    double total = 0.0;
    for (const auto& a : amplitudes) total += std::norm(a);
    return std::sqrt(total);
  }

  void renormalize() {
    const double scale = 1.0 / norm();
    for (auto& a : amplitudes) a *= scale;
  }
};

inline Complex inner_product(const Statevector& a, const Statevector& b) {
  if (a.n != b.n) throw std::invalid_argument("inner_product: dimension mismatch");
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
    acc += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  }
  return acc;
}

/// |<a|b>|; 1 means equal up to global phase.
inline double fidelity(const Statevector& a, const Statevector& b) {
  return std::abs(inner_product(a, b));
}

inline void apply_gate_inplace(Statevector& state, const Gate& g) {
  if (g.target >= state.n || (g.kind == GateKind::Cnot && g.control >= state.n)) {
    throw std::invalid_argument("apply_gate: qubit index out of range");
  }
  auto* amp = state.amplitudes.data();
  const std::uint64_t mask = dim(g.target);
  const std::uint64_t lo_mask = mask - 1;
  const std::uint64_t hi_mask = ~lo_mask;
  const std::uint64_t half = dim(state.n) >> 1;
  constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;

  switch (g.kind) {
    case GateKind::H:
      detail::parallel_for(half, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
          const std::uint64_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
          const std::uint64_t i1 = i0 | mask;
          const Complex a0 = amp[i0], a1 = amp[i1];
          amp[i0] = (a0 + a1) * inv_sqrt2;
          amp[i1] = (a0 - a1) * inv_sqrt2;
        }
      });
      break;
    case GateKind::X:
      detail::parallel_for(half, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
          const std::uint64_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
          std::swap(amp[i0], amp[i0 | mask]);
        }
      });
      break;
    case GateKind::S:
    case GateKind::Sdg: {
      const Complex phase = g.kind == GateKind::S ? Complex{0.0, 1.0} : Complex{0.0, -1.0};
      detail::parallel_for(half, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
          const std::uint64_t i1 = ((i & hi_mask) << 1) | (i & lo_mask) | mask;
          amp[i1] *= phase;
        }
      });
      break;
    }
    case GateKind::Cnot: {
      const std::uint64_t cmask = dim(g.control);
      detail::parallel_for(half, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
          const std::uint64_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
          if (i0 & cmask) std::swap(amp[i0], amp[i0 | mask]);
        }
      });
      break;
    }
  }
}

inline Statevector apply_gate(Statevector state, const Gate& g) {
  apply_gate_inplace(state, g);
  return state;
}

inline void apply_circuit_inplace(Statevector& state, const MeasurementCircuit& c) {
  if (c.n != state.n) throw std::invalid_argument("apply_circuit: dimension mismatch");
  for (const Gate& g : c.gates) apply_gate_inplace(state, g);
}

/// Gates run in list order; an empty circuit is the identity.
inline Statevector apply_circuit(Statevector state, const MeasurementCircuit& c) {
  apply_circuit_inplace(state, c);
  return state;
}

/// Adjoint circuit: reversed gate order, S <-> Sdg.
inline MeasurementCircuit adjoint(const MeasurementCircuit& c) {
  MeasurementCircuit out;
  out.n = c.n;
  out.gates.assign(c.gates.rbegin(), c.gates.rend());
  for (Gate& g : out.gates) {
    if (g.kind == GateKind::S) g.kind = GateKind::Sdg;
    else if (g.kind == GateKind::Sdg) g.kind = GateKind::S;
  }
  return out;
}

inline std::vector<double> probabilities(const Statevector& state) {
  std::vector<double> p(state.amplitudes.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(state.amplitudes[i]);
  return p;
}

struct ShotRecord {
  GroupKey key;
  BasisLabel bitstring = 0;
  std::uint64_t count = 0;
};

/// Inverse-CDF sampling of computational-basis outcomes; deterministic for a
/// fixed seed. Records are aggregated and sorted by bit string.
inline std::vector<ShotRecord> sample(const Statevector& state, std::uint64_t shots,
                                      std::uint64_t seed, GroupKey key = {}) {
  if (shots < 1) throw std::invalid_argument("sample: shots must be >= 1");
  std::vector<double> cdf = probabilities(state);
  for (std::size_t i = 1; i < cdf.size(); ++i) cdf[i] += cdf[i - 1];
  const double total = cdf.back();

  std::mt19937_64 rng(derive_seed(seed, (key.l << 1) | static_cast<std::uint64_t>(key.s)));
  std::map<BasisLabel, std::uint64_t> counts;
  for (std::uint64_t i = 0; i < shots; ++i) {
    const double u = uniform_unit(rng) * total;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    counts[static_cast<BasisLabel>(it - cdf.begin())]++;
  }
  std::vector<ShotRecord> records;
  records.reserve(counts.size());
  for (const auto& [b, c] : counts) records.push_back({key, b, c});
  return records;
}

/// (|0>|psi0> + |1>|psi1>)/sqrt(2); the flag qubit is the new top qubit.
inline Statevector prepare_bipartite(const Statevector& psi0, const Statevector& psi1) {
  if (psi0.n != psi1.n) throw std::invalid_argument("prepare_bipartite: dimension mismatch");
  Statevector out;
  out.n = psi0.n + 1;
  out.amplitudes.resize(dim(out.n));
  constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
  const std::size_t half = psi0.amplitudes.size();
  for (std::size_t i = 0; i < half; ++i) {
    out.amplitudes[i] = psi0.amplitudes[i] * inv_sqrt2;
    out.amplitudes[i + half] = psi1.amplitudes[i] * inv_sqrt2;
  }
  return out;
}

/// Product state from per-qubit Rx(t1) Ry(t2) Rz(t3) |0> with angles uniform
/// in [0, 2pi). R_a(t) = exp(-i t a / 2).
inline Statevector random_state(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, 0x57a7e));
  const auto angle = [&rng] { return 2.0 * std::numbers::pi * uniform_unit(rng); };
  Statevector out = Statevector::zero(n);
  for (std::size_t q = 0; q < n; ++q) {
    const double t1 = angle(), t2 = angle(), t3 = angle();
    // Rz only phases |0>; track the column (v0, v1) of Rx Ry Rz applied to |0>.
    Complex v0 = std::polar(1.0, -t3 / 2.0), v1{0.0, 0.0};
    // Ry
    {
      const double ch = std::cos(t2 / 2.0), sh = std::sin(t2 / 2.0);
      const Complex w0 = ch * v0 - sh * v1;
      const Complex w1 = sh * v0 + ch * v1;
      v0 = w0;
      v1 = w1;
    }
    // Rx
    {
      const double ch = std::cos(t1 / 2.0), sh = std::sin(t1 / 2.0);
      const Complex mi{0.0, -1.0};
      const Complex w0 = ch * v0 + mi * sh * v1;
      const Complex w1 = mi * sh * v0 + ch * v1;
      v0 = w0;
      v1 = w1;
    }
    // Tensor the qubit into the running product state.
    const std::uint64_t mask = dim(q);
    for (std::uint64_t i = 0; i < dim(q); ++i) {
      out.amplitudes[i | mask] = out.amplitudes[i] * v1;
      out.amplitudes[i] *= v0;
    }
  }
  out.renormalize();
  return out;
}

}  // namespace xbm
