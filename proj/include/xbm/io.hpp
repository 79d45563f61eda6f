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

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "xbm/estimation.hpp"
#include "xbm/grouping.hpp"
#include "xbm/simulator.hpp"

namespace xbm {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Observable JSON: {"n": int, "entries": [[row, col, re, im], ...]}
// ---------------------------------------------------------------------------

inline Json observable_to_json(const SparseObservable& a) {
  Json entries = Json::array();
  for (const auto& e : a.entries) {
    entries.push_back({e.row, e.col, e.value.real(), e.value.imag()});
  }
  return Json{{"n", a.n}, {"entries", std::move(entries)}};
}

inline SparseObservable observable_from_json(const Json& j) {
  SparseObservable a;
  a.n = j.at("n").get<std::size_t>();
  if (a.n > kMaxQubits) throw std::runtime_error("observable: qubit count too large");
  for (const auto& row : j.at("entries")) {
    if (!row.is_array() || row.size() != 4) {
      throw std::runtime_error("observable: entries must be [row, col, re, im]");
    }
    const BasisLabel r = row[0].get<BasisLabel>();
    const BasisLabel c = row[1].get<BasisLabel>();
    if (r >= dim(a.n) || c >= dim(a.n)) throw std::runtime_error("observable: index out of range");
    a.add(r, c, {row[2].get<double>(), row[3].get<double>()});
  }
  a.normalize();
  return a;
}

// ---------------------------------------------------------------------------
// Statevector JSON: [[re, im], ...] (debugging aid, not a stable format)
// ---------------------------------------------------------------------------

inline Json statevector_to_json(const Statevector& s) {
  Json out = Json::array();
  for (const auto& a : s.amplitudes) out.push_back({a.real(), a.imag()});
  return out;
}

inline Statevector statevector_from_json(const Json& j) {
  std::vector<Complex> amps;
  amps.reserve(j.size());
  for (const auto& pair : j) amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  return Statevector::from_amplitudes(std::move(amps));
}

// ---------------------------------------------------------------------------
// Grouping JSON:
// [{"l": int, "s": "Re"|"Im", "circuit": [...], "outcomes": [[b, re, im]]}]
// ---------------------------------------------------------------------------

inline Json gate_to_json(const Gate& g) {
  Json out{{"kind", gate_name(g.kind)}, {"target", g.target}};
  if (g.kind == GateKind::Cnot) out["control"] = g.control;
  return out;
}

inline Gate gate_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const std::size_t target = j.at("target").get<std::size_t>();
  if (kind == "H") return Gate::h(target);
  if (kind == "S") return Gate::s(target);
  if (kind == "Sdg") return Gate::sdg(target);
  if (kind == "X") return Gate::x(target);
  if (kind == "CNOT") return Gate::cnot(j.at("control").get<std::size_t>(), target);
  throw std::runtime_error("unknown gate kind: " + kind);
}

inline Json grouping_to_json(const GroupingResult& groups) {
  Json out = Json::array();
  for (const auto& g : groups.groups) {
    Json circuit = Json::array();
    for (const auto& gate : g.circuit.gates) circuit.push_back(gate_to_json(gate));
    Json outcomes = Json::array();
    for (const auto& [b, v] : g.outcomes.values) outcomes.push_back({b, v.real(), v.imag()});
    out.push_back({{"l", g.key.l},
                   {"s", part_name(g.key.s)},
                   {"circuit", std::move(circuit)},
                   {"outcomes", std::move(outcomes)}});
  }
  return Json{{"n", groups.n}, {"groups", std::move(out)}};
}

inline GroupingResult grouping_from_json(const Json& j) {
  GroupingResult result;
  result.n = j.at("n").get<std::size_t>();
  for (const auto& item : j.at("groups")) {
    MeasurementGroup g;
    g.key.l = item.at("l").get<BasisLabel>();
    g.key.s = item.at("s").get<std::string>() == "Im" ? Part::Im : Part::Re;
    g.circuit.n = result.n;
    for (const auto& gate : item.at("circuit")) g.circuit.gates.push_back(gate_from_json(gate));
    for (const auto& o : item.at("outcomes")) {
      g.outcomes.values.emplace_back(o.at(0).get<BasisLabel>(),
                                     Complex{o.at(1).get<double>(), o.at(2).get<double>()});
    }
    result.groups.push_back(std::move(g));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Estimation report JSON
// ---------------------------------------------------------------------------

inline Json report_to_json(const EstimationReport& r) {
  Json per_group = Json::array();
  for (const auto& g : r.per_group) {
    per_group.push_back({{"l", g.key.l},
                         {"s", part_name(g.key.s)},
                         {"shots", g.shots},
                         {"partial_re", g.partial_sum.real()},
                         {"partial_im", g.partial_sum.imag()}});
  }
  return Json{{"estimate", {r.estimate.real(), r.estimate.imag()}},
              {"shots_total", r.shots_total},
              {"per_group", std::move(per_group)},
              {"empirical_variance", r.empirical_variance},
              {"bound_uniform", r.bounds.uniform},
              {"bound_weighted", r.bounds.weighted},
              {"bound_shadow", r.bounds.shadow},
              {"shadow_is_proxy", r.bounds.shadow_is_proxy},
              {"aggregator", aggregator_name(r.aggregator)},
              {"allocation", allocation_name(r.allocation)}};
}

/// One-line CSV form of a report for benchmark aggregation.
inline std::string report_csv_header() {
  return "estimate_re,estimate_im,shots_total,empirical_variance,bound_uniform,"
         "bound_weighted,bound_shadow,aggregator,allocation";
}

inline std::string report_to_csv_row(const EstimationReport& r) {
  std::ostringstream row;
  row.precision(17);
  row << r.estimate.real() << "," << r.estimate.imag() << "," << r.shots_total << ","
      << r.empirical_variance << "," << r.bounds.uniform << "," << r.bounds.weighted << ","
      << r.bounds.shadow << "," << aggregator_name(r.aggregator) << ","
      << allocation_name(r.allocation);
  return row.str();
}

// ---------------------------------------------------------------------------
// Matrix Market coordinate reader
// ---------------------------------------------------------------------------

/// Parses Matrix Market coordinate files (real/complex/integer/pattern;
/// general/symmetric/skew-symmetric/hermitian). The matrix must be square;
/// the dimension is padded up to the next power of two by leaving the extra
/// rows and columns empty. Duplicate coordinates are summed.
inline SparseObservable load_matrix_market(std::istream& in, std::size_t max_n = 24) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("matrix market: empty file");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") throw std::runtime_error("matrix market: missing banner");
  if (object != "matrix" || format != "coordinate") {
    throw std::runtime_error("matrix market: only coordinate matrices are supported");
  }
  const bool is_complex = field == "complex";
  const bool is_pattern = field == "pattern";
  if (!is_complex && !is_pattern && field != "real" && field != "integer") {
    throw std::runtime_error("matrix market: unknown field " + field);
  }
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric" &&
      symmetry != "hermitian") {
    throw std::runtime_error("matrix market: unknown symmetry " + symmetry);
  }

  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream sizes(line);
  std::uint64_t rows = 0, cols = 0, nnz = 0;
  if (!(sizes >> rows >> cols >> nnz)) throw std::runtime_error("matrix market: bad size line");
  if (rows != cols) throw std::runtime_error("matrix market: matrix must be square");
  if (rows == 0) throw std::runtime_error("matrix market: empty matrix");

  std::size_t n = 0;
  while (dim(n) < rows) ++n;
  if (n > max_n) throw std::runtime_error("matrix market: dimension exceeds the qubit limit");

  SparseObservable a;
  a.n = n;
  a.entries.reserve(nnz * (symmetry == "general" ? 1 : 2));
  for (std::uint64_t k = 0; k < nnz; ++k) {
    if (!std::getline(in, line)) throw std::runtime_error("matrix market: truncated entries");
    if (line.empty() || line[0] == '%') {
      --k;
      continue;
    }
    std::istringstream entry(line);
    std::uint64_t i = 0, j = 0;
    double re = 1.0, im = 0.0;
    if (!(entry >> i >> j)) throw std::runtime_error("matrix market: bad entry line");
    if (!is_pattern) {
      if (!(entry >> re)) throw std::runtime_error("matrix market: bad entry value");
      if (is_complex && !(entry >> im)) throw std::runtime_error("matrix market: bad entry value");
    }
    if (i < 1 || j < 1 || i > rows || j > cols) {
      throw std::runtime_error("matrix market: entry index out of range");
    }
    const BasisLabel r = i - 1, c = j - 1;
    const Complex v{re, im};
    a.add(r, c, v);
    if (r != c) {
      if (symmetry == "symmetric") a.add(c, r, v);
      if (symmetry == "skew-symmetric") a.add(c, r, -v);
      if (symmetry == "hermitian") a.add(c, r, std::conj(v));
    }
  }
  a.normalize();
  return a;
}

inline SparseObservable load_matrix_market(const std::string& path, std::size_t max_n = 24) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_matrix_market(in, max_n);
}

/// Loads an observable from .mtx or .json based on the file suffix.
inline SparseObservable load_observable(const std::string& path, std::size_t max_n = 24) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".mtx") {
    return load_matrix_market(path, max_n);
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return observable_from_json(Json::parse(in));
}

// ---------------------------------------------------------------------------
// OpenQASM 2.0 export
// ---------------------------------------------------------------------------

inline std::string qasm_for_group(const MeasurementGroup& group, std::size_t n) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  out << "qreg q[" << n << "];\n";
  out << "creg c[" << n << "];\n";
  for (const Gate& g : group.circuit.gates) {
    switch (g.kind) {
      case GateKind::H: out << "h q[" << g.target << "];\n"; break;
      case GateKind::S: out << "s q[" << g.target << "];\n"; break;
      case GateKind::Sdg: out << "sdg q[" << g.target << "];\n"; break;
      case GateKind::X: out << "x q[" << g.target << "];\n"; break;
      case GateKind::Cnot:
        out << "cx q[" << g.control << "],q[" << g.target << "];\n";
        break;
    }
  }
  for (std::size_t q = 0; q < n; ++q) out << "measure q[" << q << "] -> c[" << q << "];\n";
  return out.str();
}

/// File name l-<hex>-<Re|Im>.qasm for one group.
inline std::string qasm_file_name(GroupKey key) {
  std::ostringstream name;
  name << "l-" << std::hex << key.l << std::dec << "-" << part_name(key.s) << ".qasm";
  return name.str();
}

}  // namespace xbm
