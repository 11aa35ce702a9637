// Copyright 2026 The qdb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON schemas. A complex number is [re, im]; a matrix is a row-major
// array of rows of complex numbers.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdb/classical.hpp"
#include "qdb/parity.hpp"
#include "qdb/transitions.hpp"

namespace qdb::io {

using nlohmann::json;

/// Malformed or schema-violating input.
class InputError : public Error {
 public:
  using Error::Error;
};

/// 17 significant digits.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InputError("complex number must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const CMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const CVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

inline CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw InputError("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Index>(j.size());
  const auto cols = static_cast<Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) throw InputError("matrix rows have unequal lengths");
    for (Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

inline CVector vector_from_json(const json& j) {
  if (!j.is_array()) throw InputError("vector must be an array");
  CVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j[i]);
  return v;
}

/// Parses text, reporting syntax errors with line and column.
inline json parse(const std::string& text, const std::string& origin = "input") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON: " + e.what());
  }
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

inline void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << '\n';
}

// channel: {"dim_in", "dim_out", "kraus": [...]} or {"choi_std": ...}

inline json channel_to_json(const Channel& ch) {
  return {{"dim_in", ch.dim_in()}, {"dim_out", ch.dim_out()}, {"choi_std", to_json(ch.choi())}};
}

inline json channel_to_json(const std::vector<CMatrix>& kraus) {
  json ops = json::array();
  for (const auto& k : kraus) ops.push_back(to_json(k));
  return {{"dim_in", kraus.front().cols()}, {"dim_out", kraus.front().rows()}, {"kraus", ops}};
}

inline Channel channel_from_json(const json& j, const ToleranceConfig& tol = {}) {
  if (!j.is_object()) throw InputError("channel must be a JSON object");
  const bool has_kraus = j.contains("kraus");
  const bool has_choi = j.contains("choi_std");
  if (has_kraus == has_choi) throw InputError("channel needs exactly one of \"kraus\" or \"choi_std\"");
  std::optional<Index> dim_in, dim_out;
  if (j.contains("dim_in")) dim_in = j.at("dim_in").get<Index>();
  if (j.contains("dim_out")) dim_out = j.at("dim_out").get<Index>();
  Channel ch;
  if (has_kraus) {
    if (!j["kraus"].is_array() || j["kraus"].empty()) throw InputError("\"kraus\" must be a non-empty array");
    std::vector<CMatrix> ops;
    for (const auto& k : j["kraus"]) ops.push_back(matrix_from_json(k));
    try {
      ch = Channel::from_kraus(ops, tol);
    } catch (const DimensionMismatch& e) {
      throw InputError(e.what());
    }
  } else {
    const CMatrix choi = matrix_from_json(j["choi_std"]);
    if (!dim_in || !dim_out) {
      // square maps may omit the dimensions
      const auto side = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(choi.rows()))));
      if (side * side != choi.rows()) throw InputError("choi_std needs dim_in and dim_out");
      dim_in = dim_in.value_or(side);
      dim_out = dim_out.value_or(side);
    }
    if (choi.rows() != *dim_in * *dim_out || choi.cols() != choi.rows()) {
      throw InputError("choi_std size does not match dim_in * dim_out");
    }
    ch = Channel::from_choi(choi, *dim_in, *dim_out, tol);
  }
  if ((dim_in && *dim_in != ch.dim_in()) || (dim_out && *dim_out != ch.dim_out())) {
    throw InputError("declared channel dimensions do not match the data");
  }
  return ch;
}

inline json state_to_json(const DensityMatrix& rho) { return {{"rho", to_json(rho.matrix())}}; }

inline DensityMatrix state_from_json(const json& j, const ToleranceConfig& tol = {}) {
  if (!j.is_object() || !j.contains("rho")) throw InputError("state must be an object with key \"rho\"");
  try {
    return DensityMatrix(matrix_from_json(j["rho"]), tol);
  } catch (const InvalidState& e) {
    throw InputError(e.what());
  }
}

inline json op_to_json(const CMatrix& m, bool antiunitary, const char* kind) {
  return {{"matrix", to_json(m)}, {"antiunitary", antiunitary}, {"kind", kind}};
}

inline json parity_to_json(const ParityOp& p) { return op_to_json(p.matrix, p.antiunitary, "parity"); }
inline json reversing_to_json(const ReversingOp& t) { return op_to_json(t.matrix, t.antiunitary, "reversing"); }

namespace detail {
inline std::pair<CMatrix, bool> read_op(const json& j, const char* kind) {
  if (!j.is_object() || !j.contains("matrix") || !j.contains("antiunitary")) {
    throw InputError(std::string(kind) + " needs \"matrix\" and \"antiunitary\"");
  }
  if (j.contains("kind") && j["kind"] != kind) {
    throw InputError(std::string("expected kind \"") + kind + "\", got " + j["kind"].dump());
  }
  if (!j["antiunitary"].is_boolean()) throw InputError("\"antiunitary\" must be a boolean");
  return {matrix_from_json(j["matrix"]), j["antiunitary"].get<bool>()};
}
}  // namespace detail

inline ParityOp parity_from_json(const json& j, const ToleranceConfig& tol = {}) {
  auto [m, anti] = detail::read_op(j, "parity");
  try {
    return make_parity(std::move(m), anti, tol);
  } catch (const InvalidOperator& e) {
    throw InputError(e.what());
  }
}

inline ReversingOp reversing_from_json(const json& j, const ToleranceConfig& tol = {}) {
  auto [m, anti] = detail::read_op(j, "reversing");
  try {
    return make_reversing(std::move(m), anti, tol);
  } catch (const InvalidOperator& e) {
    throw InputError(e.what());
  }
}

/// Basis override: {"basis": matrix}, columns are the basis vectors.
inline CMatrix basis_from_json(const json& j) {
  if (!j.is_object() || !j.contains("basis")) throw InputError("basis file must be an object with key \"basis\"");
  return matrix_from_json(j["basis"]);
}

inline json basis_to_json(const CMatrix& b) { return {{"basis", to_json(b)}}; }

// chain: {"rho": [...], "tau": [[...]], "pi": [...] (1-based, optional)}

inline json chain_to_json(const MarkovChain& mc, const std::optional<Permutation>& pi = std::nullopt) {
  json rho = json::array();
  for (Index i = 0; i < mc.rho().size(); ++i) rho.push_back(mc.rho()(i));
  json tau = json::array();
  for (Index i = 0; i < mc.tau().rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < mc.tau().cols(); ++k) row.push_back(mc.tau()(i, k));
    tau.push_back(std::move(row));
  }
  json out{{"rho", rho}, {"tau", tau}};
  if (pi) {
    json p = json::array();
    for (Index x : *pi) p.push_back(x + 1);
    out["pi"] = p;
  }
  return out;
}

struct ChainInput {
  MarkovChain chain;
  std::optional<Permutation> pi;
};

inline ChainInput chain_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rho") || !j.contains("tau")) throw InputError("chain needs \"rho\" and \"tau\"");
  try {
    const auto rho_v = j["rho"].get<std::vector<double>>();
    const auto tau_v = j["tau"].get<std::vector<std::vector<double>>>();
    if (tau_v.empty()) throw InputError("\"tau\" is empty");
    Eigen::VectorXd rho = Eigen::Map<const Eigen::VectorXd>(rho_v.data(), static_cast<Index>(rho_v.size()));
    Eigen::MatrixXd tau(static_cast<Index>(tau_v.size()), static_cast<Index>(tau_v.front().size()));
    for (std::size_t i = 0; i < tau_v.size(); ++i) {
      if (tau_v[i].size() != tau_v.front().size()) throw InputError("\"tau\" rows have unequal lengths");
      for (std::size_t k = 0; k < tau_v[i].size(); ++k) tau(static_cast<Index>(i), static_cast<Index>(k)) = tau_v[i][k];
    }
    ChainInput in{MarkovChain(rho, tau), std::nullopt};
    if (j.contains("pi")) {
      Permutation p;
      for (const auto& x : j["pi"]) p.push_back(x.get<Index>() - 1);
      in.pi = std::move(p);
    }
    return in;
  } catch (const json::exception& e) {
    throw InputError(std::string("chain: ") + e.what());
  } catch (const InvalidChain& e) {
    throw InputError(e.what());
  }
}

}  // namespace qdb::io
