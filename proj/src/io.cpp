#include "qx/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>


namespace qx {

nlohmann::ordered_json kl_report_json(const KLReport &r) {
  nlohmann::ordered_json j;
  double max_residual = 0;
  for(const auto &b : r.residuals) max_residual = std::max(max_residual, operator_norm(b));
  j["error_count"] = r.error_count;
  j["logical_dim"] = r.logical_dim;
  j["environment_size"] = r.environment_size;
  j["max_residual"] = max_residual;
  j["max_beta"] = r.max_beta();
  j["dt_first_order"] = r.dt_first_order;
  j["dt_exact"] = r.dt_exact;
  j["diamond_bracket"] = {r.diamond_lower, r.diamond_upper};
  j["epsilon"] = r.epsilon;
  j["fidelity"] = r.fidelity;
  j["bures"] = r.bures;
  j["eigenvalues"] = std::vector<double>(r.eigenvalues.data(), r.eigenvalues.data() + r.eigenvalues.size());
  auto rows = nlohmann::ordered_json::array();
  for(Eigen::Index i = 0; i < r.a.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for(Eigen::Index k = 0; k < r.a.cols(); ++k) row.push_back({r.a(i, k).real(), r.a(i, k).imag()});
    rows.push_back(std::move(row));
  }
  j["a"] = std::move(rows);
  auto beta = nlohmann::ordered_json::array();
  for(Eigen::Index i = 0; i < r.beta.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(r.beta.cols()));
    for(Eigen::Index k = 0; k < r.beta.cols(); ++k) row[static_cast<std::size_t>(k)] = r.beta(i, k);
    beta.push_back(row);
  }
  j["beta"] = std::move(beta);
  return j;
}

Matrix read_matrix(std::istream &in) {
  long rows = 0, cols = 0;
  if(!(in >> rows >> cols) || rows < 1 || cols < 1)
    fail(ErrorCode::io_error, "matrix file: expected a positive \"rows cols\" header");
  if(rows * cols > 50'000'000) fail(ErrorCode::io_error, "matrix file: dimensions are unreasonably large");
  Matrix m(rows, cols);
  for(long i = 0; i < rows; ++i)
    for(long k = 0; k < cols; ++k) {
      double re = 0, im = 0;
      if(!(in >> re >> im))
        fail(ErrorCode::io_error, "matrix file: missing entry (" + std::to_string(i) + ", " + std::to_string(k) + ")");
      m(i, k) = cplx(re, im);
    }
  std::string extra;
  if(in >> extra) fail(ErrorCode::io_error, "matrix file: trailing data after the last entry");
  return m;
}

Matrix read_matrix_file(const std::string &path) {
  std::ifstream in(path);
  if(!in) fail(ErrorCode::io_error, "cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

void write_matrix(std::ostream &out, const Matrix &m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for(Eigen::Index i = 0; i < m.rows(); ++i) {
    for(Eigen::Index k = 0; k < m.cols(); ++k) {
      if(k) out << ' ';
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g %.17g", m(i, k).real(), m(i, k).imag());
      out << buf;
    }
    out << '\n';
  }
}

} // namespace qx
