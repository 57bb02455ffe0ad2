// serialize.hpp — JSON and CSV output
//
// Complex numbers are [re, im]; matrices are {"rows", "cols", "data"} with
// data row-major. Reals are printed in shortest round-trip form, so output
// is byte-identical for identical inputs.

#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aecp/cp_analysis.hpp"
#include "aecp/elimination.hpp"

namespace aecp {

using json = nlohmann::json;

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidParameter("complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const Eigen::MatrixXcd& m) {
  json data = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) data.push_back(to_json(m(i, j)));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Eigen::MatrixXcd matrix_from_json(const json& j) {
  const Index rows = j.at("rows").get<Index>();
  const Index cols = j.at("cols").get<Index>();
  const json& data = j.at("data");
  if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols) {
    throw DimensionMismatch("matrix JSON: data length does not match rows*cols");
  }
  Eigen::MatrixXcd m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j2 = 0; j2 < cols; ++j2) m(i, j2) = complex_from_json(data[i * cols + j2]);
  }
  return m;
}

inline json to_json(const SuperOperator& S) {
  json j = to_json(S.dense());
  j["dim_in"] = S.dim_in();
  j["dim_out"] = S.dim_out();
  return j;
}

inline SuperOperator superop_from_json(const json& j) {
  return SuperOperator::from_dense(j.at("dim_in").get<Index>(), j.at("dim_out").get<Index>(),
                                   matrix_from_json(j));
}

inline json to_json(const QubitGeneratorCoeffs& c) {
  return {{"omega_B", c.omega_B},
          {"gamma_minus", c.gamma_minus},
          {"gamma_plus", c.gamma_plus},
          {"gamma_phi", c.gamma_phi},
          {"inv_T1", c.inv_T1()},
          {"inv_T2", c.inv_T2()}};
}

inline json to_json(const JCParams& p) {
  return {{"delta_A", p.delta_A}, {"gamma", p.gamma}, {"n_th", p.n_th}, {"g", p.g},
          {"fock_cutoff", p.cutoff()}};
}

/// K_n are stored in full only when include_K is set; they dominate the size.
inline json to_json(const EliminationResult& r, bool include_K = true) {
  json j;
  j["order"] = r.order;
  j["dim_A"] = r.dim_A;
  j["dim_B"] = r.dim_B;
  j["gauge"] = r.gauge;
  j["residual"] = r.residual;
  json ls = json::array(), ks = json::array();
  for (const auto& L : r.Ls) ls.push_back(to_json(L));
  if (include_K) {
    for (const auto& K : r.K) ks.push_back(to_json(K));
  }
  j["Ls"] = std::move(ls);
  j["K"] = std::move(ks);
  return j;
}

inline EliminationResult elimination_from_json(const json& j) {
  EliminationResult r;
  r.order = j.at("order").get<int>();
  r.dim_A = j.at("dim_A").get<Index>();
  r.dim_B = j.at("dim_B").get<Index>();
  r.gauge = j.at("gauge").get<std::string>();
  r.residual = j.at("residual").get<std::vector<double>>();
  for (const auto& L : j.at("Ls")) r.Ls.push_back(superop_from_json(L));
  for (const auto& K : j.at("K")) r.K.push_back(superop_from_json(K));
  return r;
}

// ---------------------------------------------------------------------------
// CSV

/// Shortest representation that reads back to the same double.
inline std::string format_real(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

/// Rows are buffered and written with LF endings; each cell is either a
/// pre-formatted string or a real.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  class Row {
   public:
    Row& operator<<(double x) { return add(format_real(x)); }
    Row& operator<<(int x) { return add(std::to_string(x)); }
    Row& operator<<(bool x) { return add(x ? "true" : "false"); }
    Row& operator<<(const std::string& s) { return add(s); }
    Row& operator<<(const char* s) { return add(s); }

   private:
    friend class CsvTable;
    Row& add(std::string s) {
      cells_.push_back(std::move(s));
      return *this;
    }
    std::vector<std::string> cells_;
  };

  void push(const Row& r) {
    if (r.cells_.size() != header_.size()) {
      throw DimensionMismatch("CsvTable: row has " + std::to_string(r.cells_.size()) +
                              " cells, header has " + std::to_string(header_.size()));
    }
    rows_.push_back(r.cells_);
  }

  std::size_t size() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t k = 0; k < cells.size(); ++k) {
        if (k) out += ',';
        out += cells[k];
      }
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

  void write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidParameter("cannot open " + path + " for writing");
    f << str();
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

inline void write_json(const std::string& path, const json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidParameter("cannot open " + path + " for writing");
  f << j.dump(2) << '\n';
}

}  // namespace aecp
