#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "qx/qec_core.hpp"

namespace qx {

/// Fixed field order: scalars first, then eigenvalues, a and beta.
nlohmann::ordered_json kl_report_json(const KLReport &report);

/// Plain-text dense complex matrix: a "rows cols" line, then rows*cols "re im"
/// pairs in row-major order (whitespace separated).
Matrix read_matrix(std::istream &in);
Matrix read_matrix_file(const std::string &path);
void write_matrix(std::ostream &out, const Matrix &m);

} // namespace qx
