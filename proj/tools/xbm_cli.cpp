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

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "xbm/baselines.hpp"
#include "xbm/counting.hpp"
#include "xbm/estimation.hpp"
#include "xbm/io.hpp"

namespace {

using namespace xbm;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

/// State specs: "random:SEED", "basis:B", "uniform", "file:PATH".
Statevector parse_state(const std::string& spec, std::size_t n) {
  if (spec == "uniform") {
    auto s = Statevector::zero(n);
    for (std::size_t q = 0; q < n; ++q) apply_gate_inplace(s, Gate::h(q));
    return s;
  }
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "random") return random_state(n, arg.empty() ? 0 : std::stoull(arg));
  if (kind == "basis") return Statevector::basis(n, std::stoull(arg));
  if (kind == "file") {
    std::ifstream in(arg);
    if (!in) throw std::runtime_error("cannot open state file " + arg);
    auto s = statevector_from_json(Json::parse(in));
    if (s.n != n) throw std::runtime_error("state file dimension mismatch");
    return s;
  }
  throw std::runtime_error("unknown state spec: " + spec);
}

Complex dense_expectation_check(const SparseObservable& a, const Statevector& phi) {
  if (a.n > 6) throw std::runtime_error("--check-dense supports up to 6 qubits");
  Complex total{0.0, 0.0};
  for (const auto& e : a.entries) {
    total += std::conj(phi.amplitudes[e.row]) * e.value * phi.amplitudes[e.col];
  }
  return total;
}

struct CommonOptions {
  int threads = -1;  // -1: flag absent, fall back to XBM_THREADS
};

void apply_threads(const CommonOptions& common) {
  int threads = common.threads;
  if (threads < 0) {
    if (const char* env = std::getenv("XBM_THREADS")) threads = std::atoi(env);
  }
  if (threads >= 0) set_thread_count(threads);
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenOptions {
  std::string kind;
  std::size_t n = 2;
  std::uint64_t k = 1;
  double fill = 1.0;
  std::uint64_t d = 1;
  std::uint64_t seed = 1;
  std::string symmetry = "none";
  std::string pauli;
  std::string output;
};

int run_gen(const GenOptions& opt) {
  SparseObservable a;
  if (opt.kind == "band") {
    BandSymmetry sym = BandSymmetry::None;
    if (opt.symmetry == "real-symmetric") sym = BandSymmetry::RealSymmetric;
    else if (opt.symmetry == "hermitian") sym = BandSymmetry::Hermitian;
    else if (opt.symmetry != "none") throw std::runtime_error("unknown symmetry " + opt.symmetry);
    a = gen_random_band(opt.n, opt.k, opt.fill, opt.seed, sym);
  } else if (opt.kind == "random-sparse") {
    a = gen_random_support(opt.n, opt.d, opt.seed);
  } else if (opt.kind == "one-sparse-all-colors") {
    a = gen_one_sparse_all_colors(opt.n);
  } else if (opt.kind == "pauli-string") {
    if (opt.pauli.empty()) throw std::runtime_error("--string is required for pauli-string");
    a = pauli_to_observable(PauliString::parse(opt.pauli));
  } else {
    throw std::runtime_error("unknown kind " + opt.kind);
  }
  Json out = observable_to_json(a);
  out["config"] = {{"command", "gen"},   {"kind", opt.kind},         {"n", opt.n},
                   {"k", opt.k},         {"fill", opt.fill},         {"d", opt.d},
                   {"seed", opt.seed},   {"symmetry", opt.symmetry}, {"string", opt.pauli}};
  write_json(opt.output, out);
  std::cout << "wrote " << opt.output << " (" << a.entries.size() << " entries, n=" << a.n
            << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// group
// ---------------------------------------------------------------------------

struct GroupOptions {
  std::string input;
  std::string output;
  bool summary_only = false;
};

int run_group(const GroupOptions& opt) {
  const SparseObservable a = load_observable(opt.input);
  const MatrixStats stats = matrix_stats(a);
  const auto start = Clock::now();
  const GroupingResult groups = group_terms(a);
  const double elapsed = seconds_since(start);

  const bool has_diagonal = stats.key_set.contains(0);
  Json summary = {{"m", groups.m()},
                  {"n", a.n},
                  {"nnz", stats.nnz},
                  {"bandwidth", stats.bandwidth},
                  {"m_bar", upper_bound_m(a.n, std::max<BasisLabel>(stats.bandwidth, 1),
                                          has_diagonal)},
                  {"grouping_seconds", elapsed}};
  if (stats.bandwidth == 0) summary["m_bar"] = 1;

  Json out;
  out["config"] = {{"command", "group"}, {"input", opt.input}, {"output", opt.output}};
  out["summary"] = summary;
  if (!opt.summary_only) out["grouping"] = grouping_to_json(groups);
  write_json(opt.output, out);
  std::cout << "m=" << groups.m() << " bandwidth=" << stats.bandwidth
            << " m_bar=" << summary["m_bar"] << " seconds=" << elapsed << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

struct EstimateOptions {
  std::string input;
  std::string mode = "exact";
  std::string state = "random:1";
  std::string state0, state1;
  std::string model = "uniform";
  std::uint64_t shots = 0;
  std::uint64_t seed = 1;
  std::string aggregator = "mean";
  std::string allocation = "sampled";
  std::string format = "json";
  std::string output;
  bool check_dense = false;
};

int run_estimate(const EstimateOptions& opt) {
  const SparseObservable a = load_observable(opt.input);
  const Aggregator aggregator =
      opt.aggregator == "median-of-means" ? Aggregator::MedianOfMeans : Aggregator::Mean;
  const Allocation allocation =
      opt.allocation == "proportional" ? Allocation::Proportional : Allocation::Sampled;
  const ModelKind model_kind = opt.model == "weighted" ? ModelKind::Weighted : ModelKind::Uniform;
  if (opt.model != "weighted" && opt.model != "uniform") {
    throw std::runtime_error("unknown model " + opt.model);
  }

  EstimationReport report;
  Complex exact{0.0, 0.0};
  if (opt.mode == "sampled" && opt.shots == 0) {
    throw std::runtime_error("--mode sampled needs --shots >= 1");
  }
  const bool exact_mode = opt.mode == "exact" || opt.shots == 0;
  Statevector phi = Statevector::zero(0);

  if (opt.mode == "two-state") {
    const Statevector psi0 = parse_state(opt.state0, a.n);
    const Statevector psi1 = parse_state(opt.state1, a.n);
    const SparseObservable embedded = embed_offdiagonal(a);
    phi = prepare_bipartite(psi0, psi1);
    const GroupingResult groups = group_terms(embedded);
    exact = estimate_exact(groups, phi);
    if (exact_mode) {
      report.estimate = exact;
      report.bounds = variance_bounds(groups, matrix_stats(embedded));
    } else {
      report = estimate_two_state_sampled(a, psi0, psi1, opt.shots, opt.seed, model_kind,
                                          aggregator, allocation);
    }
    if (opt.check_dense) {
      Complex direct{0.0, 0.0};
      for (const auto& e : a.entries) {
        direct += std::conj(psi0.amplitudes[e.row]) * e.value * psi1.amplitudes[e.col];
      }
      exact = direct;
    }
  } else if (opt.mode == "exact" || opt.mode == "sampled" || opt.mode == "half") {
    phi = parse_state(opt.state, a.n);
    GroupingResult groups = group_terms(a);
    if (opt.mode == "half") groups = re_part_only(groups);
    exact = estimate_exact(groups, phi);
    if (exact_mode || groups.m() == 0) {
      report.estimate = exact;
      report.bounds = variance_bounds(groups, matrix_stats(a));
    } else {
      const SelectingModel model =
          model_kind == ModelKind::Weighted ? model_weighted(groups) : model_uniform(groups);
      report = estimate_sampled(groups, model, phi, opt.shots, opt.seed, aggregator, allocation);
      report.bounds = variance_bounds(groups, matrix_stats(a));
    }
    if (opt.check_dense) exact = dense_expectation_check(a, phi);
  } else {
    throw std::runtime_error("unknown mode " + opt.mode);
  }

  const Json config = {{"command", "estimate"},   {"input", opt.input},
                       {"mode", opt.mode},        {"state", opt.state},
                       {"state0", opt.state0},    {"state1", opt.state1},
                       {"model", opt.model},      {"shots", opt.shots},
                       {"seed", opt.seed},        {"aggregator", opt.aggregator},
                       {"allocation", opt.allocation}, {"format", opt.format}};
  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << "# config: " << config.dump() << "\n";
    csv << report_csv_header() << "\n" << report_to_csv_row(report) << "\n";
    write_text(opt.output, csv.str());
  } else if (opt.format == "json") {
    Json out;
    out["config"] = config;
    out["report"] = report_to_json(report);
    if (opt.check_dense) {
      const double delta = std::abs(report.estimate - exact);
      out["check_dense"] = {{"reference", {exact.real(), exact.imag()}}, {"delta", delta}};
    }
    write_json(opt.output, out);
  } else {
    throw std::runtime_error("unknown format " + opt.format);
  }
  if (opt.check_dense) {
    std::cout << "check-dense delta=" << std::abs(report.estimate - exact) << "\n";
  }
  std::cout << "estimate=(" << report.estimate.real() << ", " << report.estimate.imag()
            << ") shots=" << report.shots_total << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// export-qasm
// ---------------------------------------------------------------------------

struct ExportOptions {
  std::string groups_path;
  std::string outdir;
};

int run_export_qasm(const ExportOptions& opt) {
  std::ifstream in(opt.groups_path);
  if (!in) throw std::runtime_error("cannot open " + opt.groups_path);
  Json j = Json::parse(in);
  if (j.contains("grouping")) j = j["grouping"];
  const GroupingResult groups = grouping_from_json(j);
  std::filesystem::create_directories(opt.outdir);
  for (const auto& g : groups.groups) {
    const auto path = std::filesystem::path(opt.outdir) / qasm_file_name(g.key);
    write_text(path.string(), qasm_for_group(g, groups.n));
  }
  std::cout << "wrote " << groups.m() << " circuits to " << opt.outdir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchOptions {
  std::string suite;
  std::size_t n_min = 2;
  std::size_t n_max = 8;
  std::uint64_t k = 3;
  std::vector<std::uint64_t> d_list = {1, 5, 10, 20, 50, 100};
  std::size_t repeats = 10;
  std::uint64_t seed = 1;
  std::string output;
};

Json bench_config(const BenchOptions& opt, const char* suite) {
  return Json{{"command", "bench"}, {"suite", suite},      {"n_min", opt.n_min},
              {"n_max", opt.n_max}, {"k", opt.k},          {"d_list", opt.d_list},
              {"repeats", opt.repeats}, {"seed", opt.seed}};
}

int run_bench(const BenchOptions& opt) {
  std::ostringstream csv;
  if (opt.suite == "exp1-groups") {
    csv << "# config: " << bench_config(opt, "exp1-groups").dump() << "\n";
    csv << "n,k,nnz,m_xbm,m_xbm_half,m_bar,naive_pauli,qwc,grouping_seconds\n";
    for (std::size_t n = opt.n_min; n <= opt.n_max; ++n) {
      const BasisLabel k = std::min<BasisLabel>(opt.k, dim(n) - 1);
      const auto a = gen_random_band(n, k, 1.0, derive_seed(opt.seed, n));
      const auto start = Clock::now();
      const auto groups = group_terms(a);
      const double elapsed = seconds_since(start);
      const auto strings = pauli_decompose(a);
      const std::size_t qwc_count =
          strings.size() <= 8192 ? qwc_group(strings).size() : 0;
      csv << n << "," << k << "," << a.entries.size() << "," << groups.m() << ","
          << re_part_only(groups).m() << "," << upper_bound_m(n, k, true) << ","
          << strings.size() << "," << qwc_count << "," << elapsed << "\n";
    }
  } else if (opt.suite == "exp2-cnot-map") {
    csv << "# config: " << bench_config(opt, "exp2-cnot-map").dump() << "\n";
    const std::size_t n = opt.n_max;
    csv << "b,c,cnot_cost\n";
    for (BasisLabel b = 0; b < dim(n); ++b) {
      for (BasisLabel c = 0; c < dim(n); ++c) {
        csv << b << "," << c << "," << cnot_cost(b, c) << "\n";
      }
    }
  } else if (opt.suite == "exp3-random-support") {
    csv << "# config: " << bench_config(opt, "exp3-random-support").dump() << "\n";
    csv << "n,d,trial,m,predicted_circuits\n";
    const std::size_t n = opt.n_max;
    for (const std::uint64_t d : opt.d_list) {
      const double prediction = 2.0 * expected_groups(d, dim(n));
      for (std::size_t trial = 0; trial < opt.repeats; ++trial) {
        const auto a = gen_random_support(n, d, derive_seed(opt.seed, d * 1000 + trial));
        csv << n << "," << d << "," << trial << "," << group_terms(a).m() << "," << prediction
            << "\n";
      }
    }
  } else if (opt.suite == "variance-scaling") {
    csv << "# config: " << bench_config(opt, "variance-scaling").dump() << "\n";
    csv << "n,k,nnz,m,var_uniform,var_weighted,tr2,var_uniform_over_tr2,bound_uniform,"
           "bound_weighted,bound_shadow,m2_over_q\n";
    for (std::size_t n = opt.n_min; n <= opt.n_max; ++n) {
      const BasisLabel k = std::min<BasisLabel>(opt.k, dim(n) - 1);
      const auto a =
          gen_random_band(n, k, 1.0, derive_seed(opt.seed, 7 * n), BandSymmetry::RealSymmetric);
      const auto groups = group_terms(a);
      const auto stats = matrix_stats(a);
      const auto phi = random_state(n, derive_seed(opt.seed, 11 * n));
      const double var_u = single_shot_variance(groups, model_uniform(groups), phi);
      const double var_w = single_shot_variance(groups, model_weighted(groups), phi);
      const auto bounds = variance_bounds(groups, stats);
      const double m = double(groups.m());
      csv << n << "," << k << "," << stats.nnz << "," << groups.m() << "," << var_u << ","
          << var_w << "," << stats.trace_sq << "," << var_u / stats.trace_sq << ","
          << bounds.uniform << "," << bounds.weighted << "," << bounds.shadow << ","
          << m * m / double(stats.nnz) << "\n";
    }
  } else {
    throw std::runtime_error("unknown suite " + opt.suite);
  }
  write_text(opt.output, csv.str());
  std::cout << "wrote " << opt.output << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extended Bell measurement toolkit"};
  app.require_subcommand(1);
  CommonOptions common;
  app.add_option("--threads", common.threads,
                 "worker threads for gate application (0 = auto, env XBM_THREADS)");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate an observable");
  gen_cmd->add_option("--kind", gen.kind,
                      "band | random-sparse | one-sparse-all-colors | pauli-string")
      ->required();
  gen_cmd->add_option("--n", gen.n, "qubit count");
  gen_cmd->add_option("--k", gen.k, "bandwidth");
  gen_cmd->add_option("--fill", gen.fill, "band fill density in (0,1]");
  gen_cmd->add_option("--d", gen.d, "number of random nonzeros");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_option("--symmetry", gen.symmetry, "none | real-symmetric | hermitian");
  gen_cmd->add_option("--string", gen.pauli, "Pauli letters, e.g. XIYYZ");
  gen_cmd->add_option("-o,--output", gen.output, "output JSON path")->required();

  GroupOptions group;
  auto* group_cmd = app.add_subcommand("group", "run term grouping");
  group_cmd->add_option("-i,--input", group.input, "observable (.json or .mtx)")->required();
  group_cmd->add_option("-o,--output", group.output, "output JSON path")->required();
  group_cmd->add_flag("--summary-only", group.summary_only, "omit the group tables");

  EstimateOptions est;
  auto* est_cmd = app.add_subcommand("estimate", "estimate an expectation value");
  est_cmd->add_option("-i,--input", est.input, "observable (.json or .mtx)")->required();
  est_cmd->add_option("--mode", est.mode, "exact | sampled | half | two-state");
  est_cmd->add_option("--state", est.state, "random:SEED | basis:B | uniform | file:PATH");
  est_cmd->add_option("--state0", est.state0, "bra state for two-state mode");
  est_cmd->add_option("--state1", est.state1, "ket state for two-state mode");
  est_cmd->add_option("--model", est.model, "uniform | weighted");
  est_cmd->add_option("--shots", est.shots, "total shots (0 = exact)");
  est_cmd->add_option("--seed", est.seed, "RNG seed");
  est_cmd->add_option("--aggregator", est.aggregator, "mean | median-of-means");
  est_cmd->add_option("--allocation", est.allocation, "sampled | proportional");
  est_cmd->add_option("--format", est.format, "json | csv");
  est_cmd->add_option("-o,--output", est.output, "output JSON path")->required();
  est_cmd->add_flag("--check-dense", est.check_dense, "compare against a dense oracle (n <= 6)");

  ExportOptions exp;
  auto* exp_cmd = app.add_subcommand("export-qasm", "write one OpenQASM file per group");
  exp_cmd->add_option("--groups", exp.groups_path, "grouping JSON from `group`")->required();
  exp_cmd->add_option("--outdir", exp.outdir, "output directory")->required();

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "emit benchmark CSV tables");
  bench_cmd->add_option("--suite", bench.suite,
                        "exp1-groups | exp2-cnot-map | exp3-random-support | variance-scaling")
      ->required();
  bench_cmd->add_option("--n-min", bench.n_min, "smallest qubit count");
  bench_cmd->add_option("--n-max", bench.n_max, "largest qubit count");
  bench_cmd->add_option("--k", bench.k, "bandwidth");
  bench_cmd->add_option("--d", bench.d_list, "nonzero counts for exp3");
  bench_cmd->add_option("--repeats", bench.repeats, "trials per configuration");
  bench_cmd->add_option("--seed", bench.seed, "base RNG seed");
  bench_cmd->add_option("-o,--output", bench.output, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    apply_threads(common);
    if (gen_cmd->parsed()) return run_gen(gen);
    if (group_cmd->parsed()) return run_group(group);
    if (est_cmd->parsed()) return run_estimate(est);
    if (exp_cmd->parsed()) return run_export_qasm(exp);
    if (bench_cmd->parsed()) return run_bench(bench);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
