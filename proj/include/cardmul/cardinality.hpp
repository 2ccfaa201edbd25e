#pragma once

#include <cstddef>

#include "cardmul/dense.hpp"

namespace cardmul {

enum class FiberMode { ColumnWise, RowWise };

/// Number of distinct values in a strided fiber. With tolerance 0 values
/// are compared by bit pattern; with tolerance e > 0 a value is merged into
/// the first previously seen representative within distance e (scan order).
std::size_t distinct_in_fiber(const double* base, std::size_t len, std::size_t stride,
                              double tolerance);

/// Maximum number of distinct values over the matrix's fibers
/// (columns for ColumnWise, rows for RowWise), tolerance-merged.
std::size_t cardinality_degree(const DenseMatrix& matrix, FiberMode mode,
                               double tolerance = 0.0);

/// True iff every mode-n fiber of the tensor holds at most k distinct
/// values. `fiber_mode` is 1-based, matching the usual mode numbering.
bool is_nk_sparse(const DenseTensor& tensor, std::size_t fiber_mode, std::size_t k,
                  double tolerance = 0.0);

}  // namespace cardmul
