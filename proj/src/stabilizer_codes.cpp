#include "qx/stabilizer_codes.hpp"

#include <cmath>
#include <string>

namespace qx {

Matrix pauli(char label) {
  Matrix m(2, 2);
  switch(label) {
  case 'I': m << 1, 0, 0, 1; break;
  case 'X': m << 0, 1, 1, 0; break;
  case 'Y': m << 0, -kI, kI, 0; break;
  case 'Z': m << 1, 0, 0, -1; break;
  default: fail(ErrorCode::invalid_argument, std::string("unknown Pauli label '") + label + "'");
  }
  return m;
}

Matrix pauli_string(std::string_view labels) {
  if(labels.empty()) fail(ErrorCode::invalid_argument, "empty Pauli string");
  Matrix out = pauli(labels.front());
  for(std::size_t k = 1; k < labels.size(); ++k) out = kron(out, pauli(labels[k]));
  return out;
}

CodeIsometry five_qubit_code() {
  const std::string gen = "XZZXI";
  Matrix proj = Matrix::Identity(32, 32);
  for(int shift = 0; shift < 4; ++shift) {
    std::string s(5, 'I');
    for(int q = 0; q < 5; ++q) s[static_cast<std::size_t>((q + shift) % 5)] = gen[static_cast<std::size_t>(q)];
    proj = proj * (Matrix::Identity(32, 32) + pauli_string(s)) / 2.0;
  }
  Vector zero = proj.col(0);
  zero.normalize();
  Vector one = pauli_string("XXXXX") * zero;
  Matrix v(32, 2);
  v.col(0) = zero;
  v.col(1) = one;
  return CodeIsometry(v);
}

CodeIsometry four_two_two_code() {
  Matrix v = Matrix::Zero(16, 4);
  const int pairs[4][2] = {{0b0000, 0b1111}, {0b0011, 0b1100}, {0b0101, 0b1010}, {0b0110, 0b1001}};
  for(int c = 0; c < 4; ++c) {
    v(pairs[c][0], c) = 1.0 / std::sqrt(2.0);
    v(pairs[c][1], c) = 1.0 / std::sqrt(2.0);
  }
  return CodeIsometry(v);
}

SubsystemSplit five_qubit_with_gauge() {
  return SubsystemSplit(2, 2, kron(five_qubit_code().v(), Matrix::Identity(2, 2)));
}

std::vector<Matrix> weight_one_paulis(int qubits) {
  if(qubits < 1) fail(ErrorCode::invalid_dimension, "weight_one_paulis: need at least one qubit");
  std::vector<Matrix> out;
  for(int q = 0; q < qubits; ++q)
    for(char p : {'X', 'Y', 'Z'}) {
      std::string s(static_cast<std::size_t>(qubits), 'I');
      s[static_cast<std::size_t>(q)] = p;
      out.push_back(pauli_string(s));
    }
  return out;
}

std::vector<Matrix> depolarizing_errors(int qubits, double p) {
  if(!(p >= 0 && p <= 1)) fail(ErrorCode::invalid_argument, "depolarizing_errors: p must lie in [0, 1]");
  auto paulis = weight_one_paulis(qubits);
  std::vector<Matrix> out;
  const int dim = 1 << qubits;
  out.push_back(std::sqrt(1 - p) * Matrix::Identity(dim, dim));
  for(auto &m : paulis) out.push_back(std::sqrt(p / double(paulis.size())) * m);
  return out;
}

} // namespace qx
