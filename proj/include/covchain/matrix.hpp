#pragma once

#include <cstddef>
#include <vector>

namespace covchain {

// Dense row-major matrix of doubles. Sized once, no views.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    double max_abs() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// LU factorization with partial pivoting. perm[i] is the source row of
// factored row i. Throws NumericalError when a pivot collapses.
class LuDecomposition {
public:
    explicit LuDecomposition(Matrix a);

    std::size_t size() const { return lu_.rows(); }
    // Solves A x = rhs for the factored A.
    std::vector<double> solve(const std::vector<double>& rhs) const;

private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
};

std::vector<double> solve_linear(Matrix a, const std::vector<double>& rhs);

} // namespace covchain
