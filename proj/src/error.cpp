#include "qx/error.hpp"

namespace qx {

std::string_view to_string(ErrorCode code) {
  switch(code) {
    case ErrorCode::invalid_dimension: return "invalid-dimension";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::index_out_of_range: return "index-out-of-range";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::inconsistent_basis: return "inconsistent-basis";
    case ErrorCode::invalid_unitary: return "invalid-unitary";
    case ErrorCode::non_hermitian: return "non-hermitian";
    case ErrorCode::dilation_undefined: return "dilation-undefined";
    case ErrorCode::degenerate_noise: return "degenerate-noise";
    case ErrorCode::numerical_failure: return "numerical-failure";
    case ErrorCode::overlapping_support: return "overlapping-support";
    case ErrorCode::not_logical: return "not-logical";
    case ErrorCode::degenerate_split: return "degenerate-split";
    case ErrorCode::dense_cap_exceeded: return "dense-cap-exceeded";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

} // namespace qx
