#pragma once

#include <cstddef>
#include <vector>

namespace acaf {

/// Minimal dense row-major matrix; just enough for score matrices and the
/// information-matrix algebra (dimensions here are at most 13).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// In-place Cholesky factorization attempt of a symmetric matrix.
/// Returns false if the matrix is not numerically positive definite.
bool cholesky(const Matrix& a, Matrix& lower);

/// Inverse of a symmetric positive definite matrix via its Cholesky factor.
/// Returns false on factorization failure.
bool spd_inverse(const Matrix& a, Matrix& inv);

}  // namespace acaf
