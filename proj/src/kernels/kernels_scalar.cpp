// Scalar reference kernels.  These define the semantics; SIMD variants are
// equivalence-tested against them.

#include "kernels_impl.hpp"

#include <cmath>

namespace gikop::kernels::detail {

double scalar_dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double scalar_weighted_dot(const double* a, const double* w, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (a[i] * w[i]) * b[i];
    return s;
}

double scalar_max_abs(const double* v, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::fabs(v[i]);
        if (x > m) m = x;
    }
    return m;
}

void scalar_axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace gikop::kernels::detail
