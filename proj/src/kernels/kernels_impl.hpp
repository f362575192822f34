#ifndef GIKOP_KERNELS_IMPL_HPP
#define GIKOP_KERNELS_IMPL_HPP

#include <cstddef>

// Per-backend entry points.  Only the TUs compiled with the matching ISA
// flags define the non-scalar symbols; dispatch.cpp references them behind
// architecture guards.

namespace gikop::kernels::detail {

double scalar_dot(const double* a, const double* b, std::size_t n);
double scalar_weighted_dot(const double* a, const double* w, const double* b, std::size_t n);
double scalar_max_abs(const double* v, std::size_t n);
void scalar_axpy(double alpha, const double* x, double* y, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported();
double avx2_dot(const double* a, const double* b, std::size_t n);
double avx2_weighted_dot(const double* a, const double* w, const double* b, std::size_t n);
double avx2_max_abs(const double* v, std::size_t n);
void avx2_axpy(double alpha, const double* x, double* y, std::size_t n);
#endif

#if defined(__aarch64__)
double neon_dot(const double* a, const double* b, std::size_t n);
double neon_weighted_dot(const double* a, const double* w, const double* b, std::size_t n);
double neon_max_abs(const double* v, std::size_t n);
void neon_axpy(double alpha, const double* x, double* y, std::size_t n);
#endif

}  // namespace gikop::kernels::detail

#endif  // GIKOP_KERNELS_IMPL_HPP
