#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace cardmul {

/// Row-major real matrix. Immutable by convention once constructed; all
/// library operations take it by const reference and return fresh values.
class DenseMatrix {
public:
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(check_shape(rows, cols), 0.0) {}

    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != check_shape(rows, cols))
            throw std::invalid_argument("DenseMatrix: data length does not match rows*cols");
    }

    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        if (rows.size() == 0) throw std::invalid_argument("DenseMatrix: no rows");
        const std::size_t cols = rows.begin()->size();
        std::vector<double> data;
        data.reserve(rows.size() * cols);
        for (const auto& r : rows) {
            if (r.size() != cols)
                throw std::invalid_argument("DenseMatrix: ragged rows");
            data.insert(data.end(), r.begin(), r.end());
        }
        return DenseMatrix(rows.size(), cols, std::move(data));
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) {
        return {data_.data() + i * cols_, cols_};
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    DenseMatrix transposed() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    bool operator==(const DenseMatrix& o) const = default;

private:
    static std::size_t check_shape(std::size_t rows, std::size_t cols) {
        if (rows == 0 || cols == 0)
            throw std::invalid_argument("DenseMatrix: rows and cols must be >= 1");
        return rows * cols;
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

/// Order-N real tensor with explicit extents, stored row-major
/// (last index fastest).
class DenseTensor {
public:
    explicit DenseTensor(std::vector<std::size_t> dims)
        : dims_(std::move(dims)), data_(check_dims(dims_), 0.0) {}

    DenseTensor(std::vector<std::size_t> dims, std::vector<double> data)
        : dims_(std::move(dims)), data_(std::move(data)) {
        if (data_.size() != check_dims(dims_))
            throw std::invalid_argument("DenseTensor: data length does not match extents");
    }

    static DenseTensor from_matrix(const DenseMatrix& m) {
        return DenseTensor({m.rows(), m.cols()}, m.data());
    }

    DenseMatrix to_matrix() const {
        if (order() != 2)
            throw std::invalid_argument("DenseTensor: to_matrix requires order 2");
        return DenseMatrix(dims_[0], dims_[1], data_);
    }

    std::size_t order() const { return dims_.size(); }
    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t size() const { return data_.size(); }

    double operator[](std::size_t flat) const { return data_[flat]; }
    double& operator[](std::size_t flat) { return data_[flat]; }

    double at(std::span<const std::size_t> idx) const { return data_[flatten(idx)]; }
    double& at(std::span<const std::size_t> idx) { return data_[flatten(idx)]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    /// Stride of mode `m` (0-based) in the row-major layout.
    std::size_t stride(std::size_t m) const {
        std::size_t s = 1;
        for (std::size_t d = m + 1; d < dims_.size(); ++d) s *= dims_[d];
        return s;
    }

    bool operator==(const DenseTensor& o) const = default;

private:
    std::size_t flatten(std::span<const std::size_t> idx) const {
        std::size_t flat = 0;
        for (std::size_t d = 0; d < dims_.size(); ++d) flat = flat * dims_[d] + idx[d];
        return flat;
    }

    static std::size_t check_dims(const std::vector<std::size_t>& dims) {
        if (dims.empty())
            throw std::invalid_argument("DenseTensor: order must be >= 1");
        std::size_t n = 1;
        for (std::size_t d : dims) {
            if (d == 0) throw std::invalid_argument("DenseTensor: zero extent");
            n *= d;
        }
        return n;
    }

    std::vector<std::size_t> dims_;
    std::vector<double> data_;
};

}  // namespace cardmul
