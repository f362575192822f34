// Runtime backend selection for the arithmetic kernels.

#include "gikop/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "gikop/errors.hpp"
#include "kernels_impl.hpp"

namespace gikop::kernels {

namespace {

struct Vtable {
    double (*dot)(const double*, const double*, std::size_t);
    double (*weighted_dot)(const double*, const double*, const double*, std::size_t);
    double (*max_abs)(const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
};

constexpr Vtable kScalar{detail::scalar_dot, detail::scalar_weighted_dot, detail::scalar_max_abs,
                         detail::scalar_axpy};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Vtable kAvx2{detail::avx2_dot, detail::avx2_weighted_dot, detail::avx2_max_abs,
                       detail::avx2_axpy};
#endif
#if defined(__aarch64__)
constexpr Vtable kNeon{detail::neon_dot, detail::neon_weighted_dot, detail::neon_max_abs,
                       detail::neon_axpy};
#endif

const Vtable* table_for(Backend b) {
    switch (b) {
        case Backend::Scalar:
            return &kScalar;
        case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return &kAvx2;
#else
            return nullptr;
#endif
        case Backend::Neon:
#if defined(__aarch64__)
            return &kNeon;
#else
            return nullptr;
#endif
    }
    return nullptr;
}

Backend pick_default() {
    if (const char* env = std::getenv("GIKOP_SIMD")) {
        const std::string s(env);
        if (s == "scalar") return Backend::Scalar;
        if (s == "avx2" && backend_available(Backend::Avx2)) return Backend::Avx2;
        if (s == "neon" && backend_available(Backend::Neon)) return Backend::Neon;
    }
    if (backend_available(Backend::Avx2)) return Backend::Avx2;
    if (backend_available(Backend::Neon)) return Backend::Neon;
    return Backend::Scalar;
}

std::atomic<Backend> g_backend{pick_default()};
std::atomic<const Vtable*> g_vtable{table_for(pick_default())};
std::atomic<int> g_threads{1};

}  // namespace

bool backend_available(Backend b) {
    switch (b) {
        case Backend::Scalar:
            return true;
        case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return detail::avx2_supported();
#else
            return false;
#endif
        case Backend::Neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (!backend_available(b)) {
        throw UsageError("kernel backend '" + backend_name(b) + "' is not available on this CPU");
    }
    g_backend.store(b, std::memory_order_relaxed);
    g_vtable.store(table_for(b), std::memory_order_relaxed);
}

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar:
            return "scalar";
        case Backend::Avx2:
            return "avx2";
        case Backend::Neon:
            return "neon";
    }
    return "?";
}

double dot(std::span<const double> a, std::span<const double> b) {
    return g_vtable.load(std::memory_order_relaxed)->dot(a.data(), b.data(), a.size());
}

double weighted_dot(std::span<const double> a, std::span<const double> w,
                    std::span<const double> b) {
    return g_vtable.load(std::memory_order_relaxed)
        ->weighted_dot(a.data(), w.data(), b.data(), a.size());
}

double max_abs(std::span<const double> v) {
    return g_vtable.load(std::memory_order_relaxed)->max_abs(v.data(), v.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    g_vtable.load(std::memory_order_relaxed)->axpy(alpha, x.data(), y.data(), x.size());
}

void set_threads(int n) {
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    g_threads.store(n, std::memory_order_relaxed);
}

int thread_count() { return g_threads.load(std::memory_order_relaxed); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int nt = thread_count();
    if (nt <= 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(nt), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;
    const std::size_t chunk = std::max<std::size_t>(1, n / (workers * 8));
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            try {
                for (;;) {
                    const std::size_t begin = next.fetch_add(chunk);
                    if (begin >= n) return;
                    const std::size_t end = std::min(n, begin + chunk);
                    for (std::size_t i = begin; i < end; ++i) fn(i);
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gikop::kernels
