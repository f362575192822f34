#ifndef GIKOP_KERNELS_HPP
#define GIKOP_KERNELS_HPP

// Low-level arithmetic kernels used by every inner loop in the library:
// weighted dot products (quadrature sums), plain dots, max-abs reductions
// and axpy updates.  Each primitive has a scalar reference implementation
// and SIMD variants (AVX2+FMA on x86-64, NEON on aarch64) selected once at
// startup from the CPU features; the GIKOP_SIMD environment variable
// ("scalar", "avx2", "neon") overrides the choice.
//
// All higher-level identities that the library asserts bit-exactly
// (apply vs. Nystrom matrix action, compose closures vs. matrix products)
// hold because every sum is routed through the same primitive with the
// same operand order; variants agree with the scalar reference only up to
// reassociation of the accumulator.

#include <cstddef>
#include <functional>
#include <span>
#include <string>

namespace gikop::kernels {

enum class Backend { Scalar, Avx2, Neon };

// Backend chosen at startup (cpuid + GIKOP_SIMD override).
Backend active_backend();
bool backend_available(Backend b);
// Throws UsageError if the backend is not available on this machine.
void set_backend(Backend b);
std::string backend_name(Backend b);

// sum_i a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);

// sum_i (a[i] * w[i]) * b[i] -- the discretized integral of a product
// against quadrature weights.  The multiplication order (a*w)*b is part of
// the contract; all call sites rely on it for cross-route exactness.
double weighted_dot(std::span<const double> a, std::span<const double> w,
                    std::span<const double> b);

// max_i |v[i]|; 0 for an empty span.
double max_abs(std::span<const double> v);

// y[i] += alpha * x[i]
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// Thread budget for data-parallel loops (matrix assembly, grid sampling).
// 0 selects the hardware concurrency.  Reductions stay deterministic for
// any thread count.
void set_threads(int n);
int thread_count();

// Runs fn(i) for i in [0, n), possibly split across threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace gikop::kernels

#endif  // GIKOP_KERNELS_HPP
