// NEON kernel variants for aarch64.

#if defined(__aarch64__)

#include "kernels_impl.hpp"

#include <arm_neon.h>

#include <cmath>

namespace gikop::kernels::detail {

double neon_dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double neon_weighted_dot(const double* a, const double* w, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t aw = vmulq_f64(vld1q_f64(a + i), vld1q_f64(w + i));
        acc = vfmaq_f64(acc, aw, vld1q_f64(b + i));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += (a[i] * w[i]) * b[i];
    return s;
}

double neon_max_abs(const double* v, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        acc = vmaxq_f64(acc, vabsq_f64(vld1q_f64(v + i)));
    }
    double m = vmaxvq_f64(acc);
    for (; i < n; ++i) {
        const double x = std::fabs(v[i]);
        if (x > m) m = x;
    }
    return m;
}

void neon_axpy(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace gikop::kernels::detail

#endif  // aarch64
