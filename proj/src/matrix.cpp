#include "covchain/matrix.hpp"

#include "covchain/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace covchain {

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::fabs(v));
    return m;
}

LuDecomposition::LuDecomposition(Matrix a) : lu_(std::move(a)) {
    const std::size_t n = lu_.rows();
    if (n != lu_.cols()) throw NumericalError("lu: matrix must be square");
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        double best = std::fabs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            double v = std::fabs(lu_(i, k));
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        if (best < 1e-300) {
            throw NumericalError("lu: singular system at column " + std::to_string(k));
        }
        if (pivot != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(pivot, j));
            std::swap(perm_[k], perm_[pivot]);
        }
        const double d = lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu_(i, k) / d;
            lu_(i, k) = f;
            if (f == 0.0) continue;
            const double* rk = lu_.row(k);
            double* ri = lu_.row(i);
            for (std::size_t j = k + 1; j < n; ++j) ri[j] -= f * rk[j];
        }
    }
}

std::vector<double> LuDecomposition::solve(const std::vector<double>& rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n) throw NumericalError("lu: rhs size mismatch");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
    // L has unit diagonal.
    for (std::size_t i = 1; i < n; ++i) {
        double s = x[i];
        const double* ri = lu_.row(i);
        for (std::size_t j = 0; j < i; ++j) s -= ri[j] * x[j];
        x[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        const double* ri = lu_.row(ii);
        for (std::size_t j = ii + 1; j < n; ++j) s -= ri[j] * x[j];
        x[ii] = s / ri[ii];
    }
    return x;
}

std::vector<double> solve_linear(Matrix a, const std::vector<double>& rhs) {
    return LuDecomposition(std::move(a)).solve(rhs);
}

} // namespace covchain
