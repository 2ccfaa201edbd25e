#pragma once

#include <string>

#include "cardmul/dense.hpp"

namespace cardmul {

// Matrix CSV: one row per line, comma separated, '.' decimal, no header.
// Values are written with %.17g so a read-back is bit-exact.

DenseMatrix read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const DenseMatrix& m);
std::string format_csv(const DenseMatrix& m);

}  // namespace cardmul
