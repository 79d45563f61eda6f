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
#include <numeric>

#include "xbm/grouping.hpp"
#include "xbm/simulator.hpp"

namespace xbm {

enum class ModelKind { Uniform, Weighted, Custom };

/// Probability of selecting each measurement group, aligned with the group
/// order of the GroupingResult it was built from.
struct SelectingModel {
  ModelKind kind = ModelKind::Uniform;
  std::vector<double> p;

  void validate(const GroupingResult& groups) const {
    if (p.size() != groups.m()) {
      throw std::invalid_argument("selecting model does not match the grouping");
    }
    double total = 0.0;
    for (std::size_t g = 0; g < p.size(); ++g) {
      if (!(p[g] > 0.0) && !groups.groups[g].outcomes.empty()) {
        throw std::invalid_argument("selecting model assigns zero weight to a live group");
      }
      total += p[g];
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw std::invalid_argument("selecting model probabilities must sum to 1");
    }
  }

  double probability_of(const GroupingResult& groups, GroupKey key) const {
    for (std::size_t g = 0; g < groups.m(); ++g) {
      if (groups.groups[g].key == key) return p[g];
    }
    throw std::invalid_argument("selecting model: unknown group key");
  }
};

inline SelectingModel model_uniform(const GroupingResult& groups) {
  if (groups.m() == 0) throw std::invalid_argument("model_uniform: empty grouping");
  SelectingModel model;
  model.kind = ModelKind::Uniform;
  model.p.assign(groups.m(), 1.0 / double(groups.m()));
  return model;
}

/// p(l,s) proportional to the largest outcome coefficient magnitude of the
/// group, normalized by Z = sum of those maxima.
inline SelectingModel model_weighted(const GroupingResult& groups) {
  if (groups.m() == 0) throw std::invalid_argument("model_weighted: empty grouping");
  SelectingModel model;
  model.kind = ModelKind::Weighted;
  model.p.resize(groups.m());
  double z = 0.0;
  for (std::size_t g = 0; g < groups.m(); ++g) {
    model.p[g] = groups.groups[g].outcomes.max_abs();
    z += model.p[g];
  }
  if (z <= 0.0) throw std::invalid_argument("model_weighted: all weights are zero");
  for (double& w : model.p) w /= z;
  return model;
}

/// Normalization constant of the weighted model (sum of per-group maxima).
inline double weighted_normalizer(const GroupingResult& groups) {
  double z = 0.0;
  for (const auto& g : groups.groups) z += g.outcomes.max_abs();
  return z;
}

/// A grouping is Hermitian-consistent exactly when every outcome coefficient
/// is real (then every exact estimate is real as well).
inline bool hermitian_grouping(const GroupingResult& groups) {
  for (const auto& g : groups.groups) {
    for (const auto& [b, v] : g.outcomes.values) {
      if (v.imag() != 0.0) return false;
    }
  }
  return true;
}

/// Shot-free estimate: sum over groups of sum_b alpha(l,s,b) |<b|M|phi>|^2.
/// Equals <phi|A|phi> exactly up to floating-point rounding.
inline Complex estimate_exact(const GroupingResult& groups, const Statevector& phi) {
  if (dim(groups.n) != phi.amplitudes.size()) {
    throw std::invalid_argument("estimate_exact: dimension mismatch");
  }
  Complex total{0.0, 0.0};
  for (const auto& group : groups.groups) {
    const Statevector rotated = apply_circuit(phi, group.circuit);
    Complex partial{0.0, 0.0};
    for (const auto& [b, alpha] : group.outcomes.values) {
      partial += alpha * std::norm(rotated.amplitudes[b]);
    }
    total += partial;
  }
  return total;
}

/// Exact single-shot variance of the estimator under a selecting model:
/// sum_{l,s,b} |a(l,s,b)|^2 p(l,s,b) - |<A>|^2 with a = alpha/p.
inline double single_shot_variance(const GroupingResult& groups, const SelectingModel& model,
                                   const Statevector& phi) {
  model.validate(groups);
  double second_moment = 0.0;
  Complex mean{0.0, 0.0};
  for (std::size_t g = 0; g < groups.m(); ++g) {
    const auto& group = groups.groups[g];
    const Statevector rotated = apply_circuit(phi, group.circuit);
    for (const auto& [b, alpha] : group.outcomes.values) {
      const double prob_b = std::norm(rotated.amplitudes[b]);
      second_moment += std::norm(alpha) / model.p[g] * prob_b;
      mean += alpha * prob_b;
    }
  }
  return second_moment - std::norm(mean);
}

struct VarianceBounds {
  double uniform = 0.0;        // m^2 max |alpha|^2
  double weighted = 0.0;       // Z^2
  double shadow = 0.0;         // sqrt(9 + 6/2^n) tr(A^2)
  bool shadow_is_proxy = false;  // true when tr(A^dag A) stands in for tr(A^2)
};

inline VarianceBounds variance_bounds(const GroupingResult& groups, const MatrixStats& stats) {
  VarianceBounds out;
  double max_alpha = 0.0;
  for (const auto& g : groups.groups) max_alpha = std::max(max_alpha, g.outcomes.max_abs());
  const double m = double(groups.m());
  out.uniform = m * m * max_alpha * max_alpha;
  const double z = weighted_normalizer(groups);
  out.weighted = z * z;
  out.shadow = std::sqrt(9.0 + 6.0 / double(dim(groups.n))) * stats.trace_sq;
  out.shadow_is_proxy = !hermitian_grouping(groups);
  return out;
}

enum class Aggregator { Mean, MedianOfMeans };
enum class Allocation { Sampled, Proportional };

inline const char* aggregator_name(Aggregator a) {
  return a == Aggregator::Mean ? "mean" : "median-of-means";
}

inline const char* allocation_name(Allocation a) {
  return a == Allocation::Sampled ? "sampled" : "proportional-deterministic";
}

/// Batch count for median-of-means: ceil(2 ln(1/delta)) with delta = 0.05.
inline std::size_t default_batch_count() {
  return static_cast<std::size_t>(std::ceil(2.0 * std::log(1.0 / 0.05)));
}

struct GroupShots {
  GroupKey key;
  std::uint64_t shots = 0;
  Complex partial_sum;  // sum of per-shot outcomes attributed to this group
};

struct EstimationReport {
  Complex estimate{0.0, 0.0};
  std::uint64_t shots_total = 0;
  std::vector<GroupShots> per_group;
  double empirical_variance = 0.0;  // single-shot scale
  VarianceBounds bounds;
  Aggregator aggregator = Aggregator::Mean;
  Allocation allocation = Allocation::Sampled;
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

inline Complex median_complex(const std::vector<Complex>& batch_means) {
  std::vector<double> re(batch_means.size()), im(batch_means.size());
  for (std::size_t i = 0; i < batch_means.size(); ++i) {
    re[i] = batch_means[i].real();
    im[i] = batch_means[i].imag();
  }
  return {median(std::move(re)), median(std::move(im))};
}

struct GroupSampler {
  std::vector<double> cdf;          // cumulative outcome probabilities
  const OutcomeTable* outcomes = nullptr;

  BasisLabel draw(std::mt19937_64& rng) const {
    const double u = uniform_unit(rng) * cdf.back();
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    return static_cast<BasisLabel>(it - cdf.begin());
  }
};

inline GroupSampler make_group_sampler(const MeasurementGroup& group, const Statevector& phi) {
  GroupSampler s;
  s.outcomes = &group.outcomes;
  const Statevector rotated = apply_circuit(phi, group.circuit);
  s.cdf = probabilities(rotated);
  for (std::size_t i = 1; i < s.cdf.size(); ++i) s.cdf[i] += s.cdf[i - 1];
  return s;
}

}  // namespace detail

/// Shot-based estimator. In `Sampled` allocation each shot first draws a
/// group from the selecting model, measures a bit string, and scores
/// alpha(l,s,b)/p(l,s); the aggregator combines the per-shot outcomes. In
/// `Proportional` allocation every group runs round(shots * p) >= 1 shots up
/// front and the per-group sample means are summed without the 1/p factor.
inline EstimationReport estimate_sampled(const GroupingResult& groups, const SelectingModel& model,
                                         const Statevector& phi, std::uint64_t shots,
                                         std::uint64_t seed,
                                         Aggregator aggregator = Aggregator::Mean,
                                         Allocation allocation = Allocation::Sampled) {
  EstimationReport report;
  report.aggregator = aggregator;
  report.allocation = allocation;
  if (groups.m() == 0) return report;
  // The shadow bound needs tr(A^dag A); callers with the matrix at hand fill
  // it via variance_bounds. The group-structure bounds are always available.
  report.bounds = variance_bounds(groups, MatrixStats{});
  report.bounds.shadow = 0.0;
  model.validate(groups);
  if (shots < 1) throw std::invalid_argument("estimate_sampled: shots must be >= 1");
  if (dim(groups.n) != phi.amplitudes.size()) {
    throw std::invalid_argument("estimate_sampled: dimension mismatch");
  }

  const std::size_t m = groups.m();
  report.per_group.resize(m);
  for (std::size_t g = 0; g < m; ++g) report.per_group[g].key = groups.groups[g].key;

  if (allocation == Allocation::Proportional) {
    if (shots < m) {
      throw std::invalid_argument("proportional allocation needs at least one shot per group");
    }
    std::vector<std::uint64_t> quota(m);
    for (std::size_t g = 0; g < m; ++g) {
      quota[g] = std::max<std::uint64_t>(
          1, static_cast<std::uint64_t>(std::llround(double(shots) * model.p[g])));
    }
    const std::size_t batches =
        aggregator == Aggregator::MedianOfMeans
            ? std::max<std::size_t>(1, std::min(default_batch_count(),
                                                *std::min_element(quota.begin(), quota.end())))
            : 1;
    std::vector<Complex> batch_sums(batches, Complex{0.0, 0.0});
    double variance_accum = 0.0;
    for (std::size_t g = 0; g < m; ++g) {
      const auto sampler = detail::make_group_sampler(groups.groups[g], phi);
      std::mt19937_64 rng(derive_seed(seed, g));
      Complex sum{0.0, 0.0};
      double sq = 0.0;
      std::vector<Complex> slice_sums(batches, Complex{0.0, 0.0});
      for (std::uint64_t i = 0; i < quota[g]; ++i) {
        const BasisLabel b = sampler.draw(rng);
        const Complex x = sampler.outcomes->at(b);
        sum += x;
        sq += std::norm(x);
        slice_sums[i % batches] += x;
      }
      const double inv = 1.0 / double(quota[g]);
      report.per_group[g].shots = quota[g];
      report.per_group[g].partial_sum = sum;
      for (std::size_t j = 0; j < batches; ++j) {
        const std::uint64_t slice_count = quota[g] / batches + (j < quota[g] % batches ? 1 : 0);
        if (slice_count > 0) batch_sums[j] += slice_sums[j] / double(slice_count);
      }
      report.shots_total += quota[g];
      // Within-group variance contributes Var_g / n_g to the estimate.
      const double var_g = std::max(0.0, sq * inv - std::norm(sum * inv));
      variance_accum += var_g * inv;
    }
    Complex estimate{0.0, 0.0};
    if (aggregator == Aggregator::MedianOfMeans) {
      estimate = detail::median_complex(batch_sums);
    } else {
      for (std::size_t g = 0; g < m; ++g) {
        estimate += report.per_group[g].partial_sum / double(report.per_group[g].shots);
      }
    }
    report.estimate = estimate;
    // Single-shot-equivalent spread of the stratified estimator.
    report.empirical_variance = variance_accum * double(report.shots_total);
    return report;
  }

  // Stochastic operator selection.
  std::vector<double> group_cdf(model.p);
  for (std::size_t g = 1; g < m; ++g) group_cdf[g] += group_cdf[g - 1];
  std::vector<detail::GroupSampler> samplers(m);
  for (std::size_t g = 0; g < m; ++g) {
    samplers[g] = detail::make_group_sampler(groups.groups[g], phi);
  }

  std::mt19937_64 rng(derive_seed(seed, 0xe571));
  const std::size_t batches =
      aggregator == Aggregator::MedianOfMeans
          ? std::max<std::size_t>(1, std::min<std::uint64_t>(default_batch_count(), shots))
          : 1;
  std::vector<Complex> batch_sums(batches, Complex{0.0, 0.0});
  std::vector<std::uint64_t> batch_counts(batches, 0);
  Complex sum{0.0, 0.0};
  double sq = 0.0;
  for (std::uint64_t i = 0; i < shots; ++i) {
    const double u = uniform_unit(rng) * group_cdf.back();
    const std::size_t g = static_cast<std::size_t>(
        std::lower_bound(group_cdf.begin(), group_cdf.end(), u) - group_cdf.begin());
    const BasisLabel b = samplers[g].draw(rng);
    const Complex x = samplers[g].outcomes->at(b) / model.p[g];
    sum += x;
    sq += std::norm(x);
    report.per_group[g].shots++;
    report.per_group[g].partial_sum += x;
    const std::size_t j = i % batches;
    batch_sums[j] += x;
    batch_counts[j]++;
  }
  report.shots_total = shots;
  const Complex mean = sum / double(shots);
  if (aggregator == Aggregator::MedianOfMeans) {
    std::vector<Complex> batch_means;
    for (std::size_t j = 0; j < batches; ++j) {
      if (batch_counts[j] > 0) batch_means.push_back(batch_sums[j] / double(batch_counts[j]));
    }
    report.estimate = detail::median_complex(batch_means);
  } else {
    report.estimate = mean;
  }
  const double denom = shots > 1 ? double(shots - 1) : 1.0;
  report.empirical_variance =
      std::max(0.0, (sq - double(shots) * std::norm(mean)) / denom);
  return report;
}

/// Keeps the diagonal and Re groups only. Valid whenever the imaginary parts
/// of <phi|b><c|phi> are known to contribute nothing (real matrix with only
/// the real part of the estimate wanted, or real states up to global phase);
/// the caller asserts that, it is not checked.
inline GroupingResult re_part_only(const GroupingResult& groups) {
  GroupingResult out;
  out.n = groups.n;
  for (const auto& g : groups.groups) {
    if (g.key.s == Part::Re) out.groups.push_back(g);
  }
  return out;
}

inline Complex estimate_half_exact(const GroupingResult& groups, const Statevector& phi) {
  return estimate_exact(re_part_only(groups), phi);
}

inline EstimationReport estimate_half_sampled(const GroupingResult& groups,
                                              const Statevector& phi, std::uint64_t shots,
                                              std::uint64_t seed, ModelKind kind = ModelKind::Uniform,
                                              Aggregator aggregator = Aggregator::Mean,
                                              Allocation allocation = Allocation::Sampled) {
  const GroupingResult half = re_part_only(groups);
  const SelectingModel model =
      kind == ModelKind::Weighted ? model_weighted(half) : model_uniform(half);
  return estimate_sampled(half, model, phi, shots, seed, aggregator, allocation);
}

/// <psi0|A'|psi1> via the block embedding and the flagged two-state
/// superposition.
inline Complex estimate_two_state_exact(const SparseObservable& a_prime, const Statevector& psi0,
                                        const Statevector& psi1) {
  const SparseObservable embedded = embed_offdiagonal(a_prime);
  const Statevector phi = prepare_bipartite(psi0, psi1);
  return estimate_exact(group_terms(embedded), phi);
}

inline EstimationReport estimate_two_state_sampled(const SparseObservable& a_prime,
                                                   const Statevector& psi0, const Statevector& psi1,
                                                   std::uint64_t shots, std::uint64_t seed,
                                                   ModelKind kind = ModelKind::Uniform,
                                                   Aggregator aggregator = Aggregator::Mean,
                                                   Allocation allocation = Allocation::Sampled) {
  const SparseObservable embedded = embed_offdiagonal(a_prime);
  const Statevector phi = prepare_bipartite(psi0, psi1);
  const GroupingResult groups = group_terms(embedded);
  if (groups.m() == 0) return {};
  const SelectingModel model =
      kind == ModelKind::Weighted ? model_weighted(groups) : model_uniform(groups);
  EstimationReport report =
      estimate_sampled(groups, model, phi, shots, seed, aggregator, allocation);
  report.bounds = variance_bounds(groups, matrix_stats(embedded));
  return report;
}

struct ShadowSnapshot {
  GroupKey key;
  BasisLabel bitstring = 0;
};

/// Outcome value a(l,s,b) = alpha(l,s,b)/p(l,s) of one recorded snapshot;
/// equals tr(A rho_hat(l,s,b)) for the classical-shadow state of the group.
inline Complex shadow_snapshot_value(const ShadowSnapshot& snapshot, const GroupingResult& groups,
                                     const SelectingModel& model) {
  const MeasurementGroup* group = groups.find(snapshot.key);
  if (group == nullptr) {
    throw std::invalid_argument("shadow_snapshot_value: unknown group key");
  }
  return group->outcomes.at(snapshot.bitstring) / model.probability_of(groups, snapshot.key);
}

}  // namespace xbm
