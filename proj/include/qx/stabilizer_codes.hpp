#pragma once

#include <string_view>
#include <vector>

#include "qx/qec_core.hpp"

namespace qx {

Matrix pauli(char label);  // one of I, X, Y, Z
/// Tensor product of single-qubit Paulis, leftmost character is the most significant qubit.
Matrix pauli_string(std::string_view labels);

/// [[5,1,3]] code: stabilizers are the cyclic shifts of XZZXI.
CodeIsometry five_qubit_code();
/// [[4,2,2]] code spanned by the even-weight GHZ-like pairs.
CodeIsometry four_two_two_code();
/// [[5,1,3]] logical qubit tensored with a free gauge qubit (column t * 2 + j).
SubsystemSplit five_qubit_with_gauge();

/// All 3n weight-one Paulis on n qubits.
std::vector<Matrix> weight_one_paulis(int qubits);
/// sqrt(1-p) 1 followed by sqrt(p / 3n) times each weight-one Pauli.
std::vector<Matrix> depolarizing_errors(int qubits, double p);

} // namespace qx
