#include "gikop/genfun.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "gikop/errors.hpp"
#include "gikop/kerndsl.hpp"
#include "gikop/kernels.hpp"

namespace gikop {

GeneralizedFunction::GeneralizedFunction(Box domain, EvalFn eval)
    : domain_(std::move(domain)), eval_(std::move(eval)) {
    if (!eval_) throw UsageError("generalized function needs an evaluator");
}

GeneralizedFunction& GeneralizedFunction::with_support(Box support) {
    if (!domain_.contains(support)) {
        throw UsageError("declared support must be contained in the domain");
    }
    support_ = std::move(support);
    return *this;
}

GeneralizedFunction& GeneralizedFunction::with_derivatives(DerivFn deriv, int max_order) {
    if (max_order < 0) throw UsageError("max derivative order must be >= 0");
    deriv_ = std::move(deriv);
    max_order_ = max_order;
    return *this;
}

double GeneralizedFunction::derivative(double eps, Point x, std::span<const int> alpha) const {
    const int total = std::accumulate(alpha.begin(), alpha.end(), 0);
    if (total == 0) return eval_(eps, x);
    if (!deriv_ || total > max_order_) {
        throw MissingDerivativesError("derivative order exceeds the declared evaluator");
    }
    return deriv_(eps, x, alpha);
}

std::vector<double> sample_axis(double lo, double hi, int resolution) {
    if (resolution < 1) throw UsageError("sample resolution must be >= 1");
    if (resolution == 1) return {0.5 * (lo + hi)};
    std::vector<double> xs(static_cast<std::size_t>(resolution));
    const double h = (hi - lo) / (resolution - 1);
    for (int i = 0; i < resolution; ++i) xs[static_cast<std::size_t>(i)] = lo + i * h;
    xs.back() = hi;
    return xs;
}

namespace {

// all multi-indices with |alpha| <= order in `dim` dimensions
void enumerate_multi_indices(int dim, int order, std::vector<std::vector<int>>& out) {
    std::vector<int> alpha(static_cast<std::size_t>(dim), 0);
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == dim) {
            out.push_back(alpha);
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            alpha[static_cast<std::size_t>(pos)] = k;
            rec(pos + 1, remaining - k);
        }
        alpha[static_cast<std::size_t>(pos)] = 0;
    };
    rec(0, order);
}

// Central finite differences, falling back to one-sided stencils where the
// step would leave the domain.  Recurses over the multi-index one
// dimension at a time.
double fd_derivative(const GeneralizedFunction& f, double eps, std::span<const double> x,
                     std::span<const int> alpha, std::span<const double> steps) {
    int dim = -1;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] > 0) {
            dim = static_cast<int>(i);
            break;
        }
    }
    if (dim < 0) return f(eps, x);

    std::vector<int> lower(alpha.begin(), alpha.end());
    lower[static_cast<std::size_t>(dim)] -= 1;

    const double h = steps[static_cast<std::size_t>(dim)];
    const double lo = f.domain().lo()[static_cast<std::size_t>(dim)];
    const double hi = f.domain().hi()[static_cast<std::size_t>(dim)];

    std::vector<double> xp(x.begin(), x.end()), xm(x.begin(), x.end());
    xp[static_cast<std::size_t>(dim)] += h;
    xm[static_cast<std::size_t>(dim)] -= h;

    const bool plus_ok = xp[static_cast<std::size_t>(dim)] <= hi;
    const bool minus_ok = xm[static_cast<std::size_t>(dim)] >= lo;

    if (plus_ok && minus_ok) {
        return (fd_derivative(f, eps, xp, lower, steps) - fd_derivative(f, eps, xm, lower, steps)) /
               (2.0 * h);
    }
    if (plus_ok) {
        return (fd_derivative(f, eps, xp, lower, steps) - fd_derivative(f, eps, x, lower, steps)) /
               h;
    }
    return (fd_derivative(f, eps, x, lower, steps) - fd_derivative(f, eps, xm, lower, steps)) / h;
}

}  // namespace

double seminorm(const GeneralizedFunction& f, const SeminormSpec& spec, double eps) {
    if (!(eps > 0.0) || eps > 1.0) throw UsageError("eps must lie in (0,1]");
    if (!f.domain().contains(spec.compact)) {
        throw UsageError("seminorm compact must be contained in the function domain");
    }
    if (spec.order < 0) throw UsageError("seminorm order must be >= 0");

    const int d = spec.compact.dim();
    const bool use_exact = f.has_derivatives() && spec.order <= f.max_derivative_order();
    if (!use_exact && spec.order > 0 && f.has_derivatives() && !spec.fd_step.has_value()) {
        throw MissingDerivativesError(
            "seminorm order exceeds the declared derivative order and no fd_step was given");
    }

    std::vector<std::vector<double>> axes(static_cast<std::size_t>(d));
    std::vector<double> steps(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        axes[static_cast<std::size_t>(i)] =
            sample_axis(spec.compact.lo()[static_cast<std::size_t>(i)],
                        spec.compact.hi()[static_cast<std::size_t>(i)], spec.sample_resolution);
        const double spacing =
            spec.sample_resolution > 1
                ? (spec.compact.hi()[static_cast<std::size_t>(i)] -
                   spec.compact.lo()[static_cast<std::size_t>(i)]) /
                      (spec.sample_resolution - 1)
                : (spec.compact.hi()[static_cast<std::size_t>(i)] -
                   spec.compact.lo()[static_cast<std::size_t>(i)]);
        steps[static_cast<std::size_t>(i)] = spec.fd_step.value_or(spacing / 8.0);
    }

    std::vector<std::vector<int>> alphas;
    enumerate_multi_indices(d, spec.order, alphas);

    std::size_t total = 1;
    for (const auto& a : axes) total *= a.size();

    std::vector<double> point_max(total, 0.0);
    kernels::parallel_for(total, [&](std::size_t p) {
        std::array<double, 8> x{};
        std::size_t rem = p;
        for (int i = d - 1; i >= 0; --i) {
            const auto& ax = axes[static_cast<std::size_t>(i)];
            x[static_cast<std::size_t>(i)] = ax[rem % ax.size()];
            rem /= ax.size();
        }
        const Point xs{x.data(), static_cast<std::size_t>(d)};
        double m = 0.0;
        for (const auto& alpha : alphas) {
            double v;
            const int total_order = std::accumulate(alpha.begin(), alpha.end(), 0);
            if (total_order == 0) {
                v = f(eps, xs);
            } else if (use_exact) {
                v = f.derivative(eps, xs, alpha);
            } else {
                v = fd_derivative(f, eps, xs, alpha, steps);
            }
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "seminorm sample is not finite at eps=" << eps;
                throw NonFiniteError(os.str());
            }
            m = std::max(m, std::fabs(v));
        }
        point_max[p] = m;
    });

    return kernels::max_abs(point_max);
}

GrowthClass classify_function(const GeneralizedFunction& f, const SeminormSpec& spec,
                              const EpsilonGrid& grid, const ClassifyOptions& opts) {
    return classify([&](double eps) { return seminorm(f, spec, eps); }, grid, opts);
}

namespace {

double mollifier_norm_integral(int dim) {
    // integral of exp(-1/(1-|t|^2)) over the unit ball
    if (dim <= 2) {
        std::vector<double> lo(static_cast<std::size_t>(dim), -1.0);
        std::vector<double> hi(static_cast<std::size_t>(dim), 1.0);
        const QuadratureRule rule =
            tensor_rule(Box(lo, hi), RuleKind::GaussLegendreTensor, 2048, 1u << 24);
        return integrate(
            [dim](Point t) {
                double r2 = 0.0;
                for (int i = 0; i < dim; ++i) r2 += t[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(i)];
                return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
            },
            rule);
    }
    if (dim == 3) {
        // radial reduction: 4*pi * int_0^1 r^2 exp(-1/(1-r^2)) dr
        const QuadratureRule rule =
            tensor_rule(Box::interval(0.0, 1.0), RuleKind::GaussLegendreTensor, 2048);
        const double radial = integrate(
            [](Point r) {
                const double rr = r[0] * r[0];
                return rr < 1.0 ? r[0] * r[0] * std::exp(-1.0 / (1.0 - rr)) : 0.0;
            },
            rule);
        return 4.0 * M_PI * radial;
    }
    throw UsageError("mollifier normalization supports dimensions 1..3");
}

}  // namespace

double mollifier_constant(int dim) {
    static std::mutex mu;
    static std::map<int, double> cache;
    const std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(dim); it != cache.end()) return it->second;
    const double c = 1.0 / mollifier_norm_integral(dim);
    cache.emplace(dim, c);
    return c;
}

double mollifier_value(double radius_sq, int dim) {
    if (!(radius_sq < 1.0)) return 0.0;
    return mollifier_constant(dim) * std::exp(-1.0 / (1.0 - radius_sq));
}

GeneralizedFunction mollifier_embed_delta(std::vector<double> at, const Box& domain) {
    const int d = domain.dim();
    if (static_cast<int>(at.size()) != d) {
        throw UsageError("delta point dimension does not match the domain");
    }
    for (int i = 0; i < d; ++i) {
        if (!(at[static_cast<std::size_t>(i)] > domain.lo()[static_cast<std::size_t>(i)] &&
              at[static_cast<std::size_t>(i)] < domain.hi()[static_cast<std::size_t>(i)])) {
            throw PointOutsideDomainError("delta point must be interior to the domain");
        }
    }
    mollifier_constant(d);  // warm the cache before any concurrent use

    std::vector<double> a = at;
    EvalFn eval = [a, d](double eps, Point x) {
        double r2 = 0.0;
        for (int i = 0; i < d; ++i) {
            const double t = (x[static_cast<std::size_t>(i)] - a[static_cast<std::size_t>(i)]) / eps;
            r2 += t * t;
        }
        return std::pow(eps, -d) * mollifier_value(r2, d);
    };

    // support {|x_i - a_i| <= 1} (eps <= 1) clipped to the domain
    std::vector<double> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        lo[static_cast<std::size_t>(i)] =
            std::max(domain.lo()[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(i)] - 1.0);
        hi[static_cast<std::size_t>(i)] =
            std::min(domain.hi()[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(i)] + 1.0);
    }
    GeneralizedFunction f(domain, std::move(eval));
    f.with_support(Box(std::move(lo), std::move(hi)));
    return f;
}

GeneralizedFunction function_from_expression(const std::string& expr_text, const Box& domain,
                                             bool allow_eps) {
    const int d = domain.dim();
    const std::array<std::string, 1> bases{std::string("x")};
    const auto allowed = kerndsl::variable_names(bases, d, allow_eps);
    const auto ast = kerndsl::parse(expr_text, allowed);

    std::vector<std::string> slots;
    if (d == 1) {
        slots.push_back("x");
    } else {
        for (int i = 1; i <= d; ++i) slots.push_back("x" + std::to_string(i));
    }
    slots.push_back("eps");
    slots.push_back("logeps");
    const kerndsl::CompiledExpr compiled(ast, slots);

    EvalFn eval = [compiled, d](double eps, Point x) {
        std::array<double, 8> vals{};
        for (int i = 0; i < d; ++i) vals[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
        vals[static_cast<std::size_t>(d)] = eps;
        vals[static_cast<std::size_t>(d) + 1] = std::log(1.0 / eps);
        return compiled({vals.data(), static_cast<std::size_t>(d) + 2});
    };
    return GeneralizedFunction(domain, std::move(eval));
}

GeneralizedFunction mollifier_embed_smooth(const std::string& expr_text, const Box& domain) {
    return function_from_expression(expr_text, domain, /*allow_eps=*/false);
}

}  // namespace gikop
