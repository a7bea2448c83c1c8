#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qx {

enum class ErrorCode {
  invalid_dimension,
  invalid_argument,
  index_out_of_range,
  dimension_mismatch,
  inconsistent_basis,
  invalid_unitary,
  non_hermitian,
  dilation_undefined,
  degenerate_noise,
  numerical_failure,
  overlapping_support,
  not_logical,
  degenerate_split,
  dense_cap_exceeded,
  io_error,
};

std::string_view to_string(ErrorCode code);

/// Exception thrown by every qx routine; `code()` identifies the failure class.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what) { throw Error(code, what); }

} // namespace qx
