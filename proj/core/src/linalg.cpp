#include "acaf/linalg.hpp"

#include <cmath>

namespace acaf {

bool cholesky(const Matrix& a, Matrix& lower) {
    const std::size_t n = a.rows();
    lower = Matrix(n, n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= lower(j, k) * lower(j, k);
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        lower(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
            lower(i, j) = s / lower(j, j);
        }
    }
    return true;
}

bool spd_inverse(const Matrix& a, Matrix& inv) {
    const std::size_t n = a.rows();
    Matrix l;
    if (!cholesky(a, l)) return false;

    inv = Matrix(n, n, 0.0);
    std::vector<double> y(n), x(n);
    for (std::size_t col = 0; col < n; ++col) {
        // forward solve L y = e_col
        for (std::size_t i = 0; i < n; ++i) {
            double s = (i == col) ? 1.0 : 0.0;
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
            y[i] = s / l(i, i);
        }
        // back solve L^T x = y
        for (std::size_t ii = n; ii-- > 0;) {
            double s = y[ii];
            for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
            x[ii] = s / l(ii, ii);
        }
        for (std::size_t i = 0; i < n; ++i) inv(i, col) = x[i];
    }
    return true;
}

}  // namespace acaf
