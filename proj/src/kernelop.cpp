#include "gikop/kernelop.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gikop/errors.hpp"
#include "gikop/kerndsl.hpp"
#include "gikop/kernels.hpp"

namespace gikop {

std::vector<double> nystrom_apply(const NystromMatrix& m, std::span<const double> f_samples) {
    if (f_samples.size() != m.rule_y.size()) {
        throw UsageError("sample vector length does not match the y rule");
    }
    std::vector<double> out(m.values.rows());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = kernels::weighted_dot(m.values.row(i), m.weights_y(), f_samples);
    }
    return out;
}

struct CompactKernel::State {
    Box x_box;
    Box y_box;
    Box sup_x;
    Box sup_y;
    KernelEvalFn eval;
    KernelHooks hooks;

    struct CacheKey {
        std::uint64_t eps_bits, fx, fy;
        auto operator<=>(const CacheKey&) const = default;
    };
    mutable std::mutex mu;
    mutable std::map<CacheKey, std::shared_ptr<const NystromMatrix>> cache;

    State(Box xb, Box yb, Box sx, Box sy, KernelEvalFn e, KernelHooks h)
        : x_box(std::move(xb)),
          y_box(std::move(yb)),
          sup_x(std::move(sx)),
          sup_y(std::move(sy)),
          eval(std::move(e)),
          hooks(std::move(h)) {}
};

CompactKernel::CompactKernel(Box x_box, Box y_box, Box support_x, Box support_y, KernelEvalFn eval,
                             KernelHooks hooks) {
    if (x_box.dim() != y_box.dim()) {
        throw DomainMismatchError("kernel X and Y boxes must have the same dimension");
    }
    if (!x_box.contains(support_x) || !y_box.contains(support_y)) {
        throw UsageError("kernel support must be contained in its domain boxes");
    }
    if (!eval) throw UsageError("kernel needs an evaluator");
    s_ = std::make_shared<State>(std::move(x_box), std::move(y_box), std::move(support_x),
                                 std::move(support_y), std::move(eval), std::move(hooks));
}

const Box& CompactKernel::x_box() const { return s_->x_box; }
const Box& CompactKernel::y_box() const { return s_->y_box; }
const Box& CompactKernel::support_x() const { return s_->sup_x; }
const Box& CompactKernel::support_y() const { return s_->sup_y; }
Box CompactKernel::support() const { return s_->sup_x.product(s_->sup_y); }
int CompactKernel::dim() const { return s_->x_box.dim(); }

double CompactKernel::operator()(double eps, Point x, Point y) const {
    return s_->eval(eps, x, y);
}

double CompactKernel::eval_joint(double eps, Point xy) const {
    const std::size_t d = static_cast<std::size_t>(dim());
    return s_->eval(eps, xy.first(d), xy.subspan(d));
}

GeneralizedFunction CompactKernel::as_generalized_function() const {
    auto state = s_;
    const std::size_t d = static_cast<std::size_t>(dim());
    GeneralizedFunction g(s_->x_box.product(s_->y_box), [state, d](double eps, Point xy) {
        return state->eval(eps, xy.first(d), xy.subspan(d));
    });
    g.with_support(support());
    if (s_->hooks.joint_derivative) {
        g.with_derivatives(s_->hooks.joint_derivative, s_->hooks.max_derivative_order);
    }
    return g;
}

namespace {

Matrix materialize_pointwise(const CompactKernel& k, double eps, const QuadratureRule& rx,
                             const QuadratureRule& ry) {
    Matrix m(rx.size(), ry.size());
    kernels::parallel_for(rx.size(), [&](std::size_t i) {
        const Point x = rx.node(i);
        for (std::size_t j = 0; j < ry.size(); ++j) {
            m(i, j) = k(eps, x, ry.node(j));
        }
    });
    return m;
}

void check_finite(const Matrix& m, const char* what) {
    for (double v : m.flat()) {
        if (!std::isfinite(v)) {
            throw NonFiniteError(std::string(what) + " produced a non-finite value");
        }
    }
}

}  // namespace

std::shared_ptr<const NystromMatrix> CompactKernel::discretize(double eps,
                                                               const QuadratureRule& rule_x,
                                                               const QuadratureRule& rule_y) const {
    const State::CacheKey key{std::bit_cast<std::uint64_t>(eps), rule_x.fingerprint(),
                              rule_y.fingerprint()};
    {
        const std::lock_guard<std::mutex> lock(s_->mu);
        if (auto it = s_->cache.find(key); it != s_->cache.end()) return it->second;
    }
    Matrix m = s_->hooks.materialize ? s_->hooks.materialize(eps, rule_x, rule_y)
                                     : materialize_pointwise(*this, eps, rule_x, rule_y);
    check_finite(m, "kernel discretization");
    auto nm = std::make_shared<const NystromMatrix>(NystromMatrix{rule_x, rule_y, std::move(m)});
    const std::lock_guard<std::mutex> lock(s_->mu);
    // first writer wins; concurrent computations of the same key produce
    // identical values
    return s_->cache.try_emplace(key, std::move(nm)).first->second;
}

std::shared_ptr<const NystromMatrix> CompactKernel::seed_discretization(
    double eps, const QuadratureRule& rule_x, const QuadratureRule& rule_y, Matrix values) const {
    check_finite(values, "kernel discretization");
    const State::CacheKey key{std::bit_cast<std::uint64_t>(eps), rule_x.fingerprint(),
                              rule_y.fingerprint()};
    auto nm =
        std::make_shared<const NystromMatrix>(NystromMatrix{rule_x, rule_y, std::move(values)});
    const std::lock_guard<std::mutex> lock(s_->mu);
    return s_->cache.try_emplace(key, std::move(nm)).first->second;
}

GeneralizedFunction apply_with_rule(const CompactKernel& H, const GeneralizedFunction& f,
                                    double eps, const QuadratureRule& rule_y) {
    if (!f.domain().contains(rule_y.box())) {
        throw DomainMismatchError("function domain does not cover the integration rule");
    }
    if (!H.y_box().contains(rule_y.box())) {
        throw DomainMismatchError("integration rule leaves the kernel's Y box");
    }

    std::vector<double> fw(rule_y.size());
    for (std::size_t j = 0; j < rule_y.size(); ++j) {
        fw[j] = f(eps, rule_y.node(j));
        if (!std::isfinite(fw[j])) {
            throw NonFiniteError("function value at a quadrature node is not finite");
        }
    }

    // capture by value: the result is a self-contained fixed-eps slice
    GeneralizedFunction out(
        H.x_box(), [H, rule_y, fw = std::move(fw), eps](double /*eps_slice*/, Point x) {
            std::vector<double> row(rule_y.size());
            for (std::size_t j = 0; j < rule_y.size(); ++j) row[j] = H(eps, x, rule_y.node(j));
            const double v = kernels::weighted_dot(row, rule_y.weights(), fw);
            if (!std::isfinite(v)) throw NonFiniteError("apply produced a non-finite value");
            return v;
        });
    out.with_support(H.support_x());
    return out;
}

GeneralizedFunction apply(const CompactKernel& H, const GeneralizedFunction& f, double eps,
                          const QuadratureRule& rule_y) {
    if (!(rule_y.box() == H.support_y())) {
        throw RuleMismatchError("apply needs the integration rule on the kernel's K2 box");
    }
    return apply_with_rule(H, f, eps, rule_y);
}

CompactKernel compose(const CompactKernel& H, const CompactKernel& K, double eps,
                      const QuadratureRule& rule_mid) {
    if (!(H.y_box() == K.x_box())) {
        throw DomainMismatchError("middle spaces of the composed kernels differ");
    }
    const Box mid_hull = Box::hull(H.support_y(), K.support_x());
    if (!rule_mid.box().contains(mid_hull)) {
        throw RuleMismatchError("middle rule does not cover the merged middle supports");
    }

    KernelEvalFn eval = [H, K, rule_mid, eps](double /*eps_slice*/, Point x, Point y) {
        const std::size_t n = rule_mid.size();
        std::vector<double> a(n), b(n);
        for (std::size_t j = 0; j < n; ++j) {
            const Point xi = rule_mid.node(j);
            a[j] = H(eps, x, xi);
            b[j] = K(eps, xi, y);
        }
        return kernels::weighted_dot(a, rule_mid.weights(), b);
    };

    KernelHooks hooks;
    hooks.materialize = [H, K, rule_mid, eps](double /*eps_slice*/, const QuadratureRule& rx,
                                              const QuadratureRule& ry) {
        const auto mh = H.discretize(eps, rx, rule_mid);
        const auto mk = K.discretize(eps, rule_mid, ry);
        return product_wdiag(mh->values, rule_mid.weights(), mk->values);
    };

    return CompactKernel(H.x_box(), K.y_box(), H.support_x(), K.support_y(), std::move(eval),
                         std::move(hooks));
}

CompactKernel power(const CompactKernel& H, int n, double eps, const QuadratureRule& rule) {
    if (n < 1) throw UsageError("power needs n >= 1");
    if (!(H.x_box() == H.y_box())) {
        throw DomainMismatchError("power needs a kernel on X x X");
    }
    if (!rule.box().contains(H.support_x()) || !rule.box().contains(H.support_y())) {
        throw RuleMismatchError("power rule must cover the K x K support envelope");
    }
    CompactKernel L = H;
    for (int i = 2; i <= n; ++i) L = compose(H, L, eps, rule);
    return L;
}

namespace {

// max |H_eps| over the tensor grid on `box`, restricted by `keep`
std::pair<double, std::vector<double>> sampled_joint_max(
    const CompactKernel& H, double eps, const Box& box, int resolution,
    const std::function<bool(Point)>& keep) {
    const int dims = box.dim();
    std::vector<std::vector<double>> axes(static_cast<std::size_t>(dims));
    for (int i = 0; i < dims; ++i) {
        axes[static_cast<std::size_t>(i)] = sample_axis(box.lo()[static_cast<std::size_t>(i)],
                                                        box.hi()[static_cast<std::size_t>(i)],
                                                        resolution);
    }
    std::size_t total = 1;
    for (const auto& a : axes) total *= a.size();

    std::vector<double> vals(total, 0.0);
    kernels::parallel_for(total, [&](std::size_t p) {
        std::array<double, 8> x{};
        std::size_t rem = p;
        for (int i = dims - 1; i >= 0; --i) {
            const auto& ax = axes[static_cast<std::size_t>(i)];
            x[static_cast<std::size_t>(i)] = ax[rem % ax.size()];
            rem /= ax.size();
        }
        const Point xs{x.data(), static_cast<std::size_t>(dims)};
        if (keep && !keep(xs)) return;
        vals[p] = std::fabs(H.eval_joint(eps, xs));
    });

    double best = 0.0;
    std::size_t best_idx = total;  // total == "none"
    for (std::size_t p = 0; p < total; ++p) {
        if (vals[p] > best) {
            best = vals[p];
            best_idx = p;
        }
    }
    std::vector<double> where;
    if (best_idx < total) {
        std::size_t rem = best_idx;
        where.assign(static_cast<std::size_t>(dims), 0.0);
        for (int i = dims - 1; i >= 0; --i) {
            const auto& ax = axes[static_cast<std::size_t>(i)];
            where[static_cast<std::size_t>(i)] = ax[rem % ax.size()];
            rem /= ax.size();
        }
    }
    return {best, where};
}

}  // namespace

SupportCheckResult support_check(const CompactKernel& H, double eps, const Box& claimed,
                                 double tol, int resolution) {
    const Box domain = H.x_box().product(H.y_box());
    if (!domain.contains(claimed)) {
        throw UsageError("claimed support must be contained in the kernel domain");
    }

    const auto [sup_claimed, ignored] =
        sampled_joint_max(H, eps, claimed, resolution, nullptr);

    const auto [violation, worst] = sampled_joint_max(
        H, eps, domain, resolution, [&claimed](Point p) { return !claimed.contains(p); });

    SupportCheckResult r;
    r.reference = 1.0 + sup_claimed;
    r.max_violation = violation;
    r.worst_point = worst;
    r.pass = violation <= tol * r.reference;
    return r;
}

double reconstruct_kernel(const OperatorFn& op, const Box& y_domain, double eta, Point x,
                          Point y) {
    if (!(eta > 0.0)) throw UsageError("probe scale must be positive");
    const int d = y_domain.dim();
    if (static_cast<int>(y.size()) != d) {
        throw UsageError("probe point dimension does not match the Y domain");
    }
    for (int i = 0; i < d; ++i) {
        if (y[static_cast<std::size_t>(i)] - eta < y_domain.lo()[static_cast<std::size_t>(i)] ||
            y[static_cast<std::size_t>(i)] + eta > y_domain.hi()[static_cast<std::size_t>(i)]) {
            throw ProbeOutsideDomainError("mollified probe support leaves the Y domain");
        }
    }

    std::vector<double> center(y.begin(), y.end());
    PointFn probe = [center, eta, d](Point z) {
        double r2 = 0.0;
        for (int i = 0; i < d; ++i) {
            const double t =
                (z[static_cast<std::size_t>(i)] - center[static_cast<std::size_t>(i)]) / eta;
            r2 += t * t;
        }
        return std::pow(eta, -d) * mollifier_value(r2, d);
    };

    const PointFn image = op(probe);
    return image(x);
}

NullTestResult null_test(const CompactKernel& H, const EpsilonGrid& grid,
                         std::span<const GeneralizedFunction> basis, const SeminormSpec& spec,
                         const ClassifyOptions& opts) {
    NullTestResult out;

    const GeneralizedFunction joint = H.as_generalized_function();
    SeminormSpec kernel_spec;
    kernel_spec.compact = H.support();
    kernel_spec.order = 0;
    kernel_spec.sample_resolution = spec.sample_resolution;
    out.kernel_class = classify_function(joint, kernel_spec, grid, opts);

    const QuadratureRule rule_y =
        tensor_rule(H.support_y(), RuleKind::GaussLegendreTensor, 32);
    for (const GeneralizedFunction& b : basis) {
        std::vector<double> samples(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double eps = grid[j];
            const GeneralizedFunction image = apply(H, b, eps, rule_y);
            samples[j] = seminorm(image, spec, eps);
        }
        out.image_classes.push_back(classify_samples(samples, grid, opts));
    }
    return out;
}

CompactKernel scale_kernel(const CompactKernel& H, double factor) {
    KernelEvalFn eval = [H, factor](double eps, Point x, Point y) {
        return factor * H(eps, x, y);
    };
    KernelHooks hooks;
    hooks.materialize = [H, factor](double eps, const QuadratureRule& rx,
                                    const QuadratureRule& ry) {
        const auto m = H.discretize(eps, rx, ry);
        Matrix out = m->values;
        out.scale(factor);
        return out;
    };
    return CompactKernel(H.x_box(), H.y_box(), H.support_x(), H.support_y(), std::move(eval),
                         std::move(hooks));
}

namespace {

std::vector<int> parse_alpha_key(const std::string& key, int expected_len) {
    std::vector<int> alpha;
    std::istringstream is(key);
    std::string part;
    while (std::getline(is, part, ',')) alpha.push_back(std::stoi(part));
    if (static_cast<int>(alpha.size()) != expected_len) {
        throw UsageError("derivative key '" + key + "' has the wrong number of components");
    }
    return alpha;
}

}  // namespace

CompactKernel kernel_from_expression(const std::string& expr_text, const Box& x_box,
                                     const Box& y_box, const Box& support_x, const Box& support_y,
                                     const std::map<std::string, std::string>& deriv_exprs) {
    const int d = x_box.dim();
    const std::array<std::string, 2> bases{std::string("x"), std::string("y")};
    const auto allowed = kerndsl::variable_names(bases, d, true);
    const auto ast = kerndsl::parse(expr_text, allowed);

    std::vector<std::string> slots;
    if (d == 1) {
        slots = {"x", "y"};
    } else {
        for (int i = 1; i <= d; ++i) slots.push_back("x" + std::to_string(i));
        for (int i = 1; i <= d; ++i) slots.push_back("y" + std::to_string(i));
    }
    slots.push_back("eps");
    slots.push_back("logeps");

    const kerndsl::CompiledExpr compiled(ast, slots);
    const std::size_t nvars = static_cast<std::size_t>(2 * d);

    KernelEvalFn eval = [compiled, d, nvars](double eps, Point x, Point y) {
        std::array<double, 10> vals{};
        for (int i = 0; i < d; ++i) vals[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
        for (int i = 0; i < d; ++i)
            vals[static_cast<std::size_t>(d + i)] = y[static_cast<std::size_t>(i)];
        vals[nvars] = eps;
        vals[nvars + 1] = std::log(1.0 / eps);
        return compiled({vals.data(), nvars + 2});
    };

    if (deriv_exprs.empty()) {
        return CompactKernel(x_box, y_box, support_x, support_y, std::move(eval));
    }

    // exact derivatives: one compiled expression per provided multi-index
    auto table = std::make_shared<std::map<std::vector<int>, kerndsl::CompiledExpr>>();
    int max_total = 0;
    for (const auto& [key, text] : deriv_exprs) {
        const std::vector<int> alpha = parse_alpha_key(key, 2 * d);
        const auto dast = kerndsl::parse(text, allowed);
        table->emplace(alpha, kerndsl::CompiledExpr(dast, slots));
        max_total = std::max(max_total, std::accumulate(alpha.begin(), alpha.end(), 0));
    }

    // certify the largest l with every multi-index of total order <= l
    // present in the table
    int certified = 0;
    for (int l = 1; l <= max_total; ++l) {
        std::function<bool(std::vector<int>&, int, int)> all_present =
            [&](std::vector<int>& alpha, int pos, int remaining) -> bool {
            if (pos == 2 * d) {
                const int total = std::accumulate(alpha.begin(), alpha.end(), 0);
                if (total == 0) return true;
                return table->count(alpha) > 0;
            }
            for (int k = 0; k <= remaining; ++k) {
                alpha[static_cast<std::size_t>(pos)] = k;
                if (!all_present(alpha, pos + 1, remaining - k)) return false;
            }
            alpha[static_cast<std::size_t>(pos)] = 0;
            return true;
        };
        std::vector<int> alpha(static_cast<std::size_t>(2 * d), 0);
        if (!all_present(alpha, 0, l)) break;
        certified = l;
    }

    KernelHooks hooks;
    hooks.max_derivative_order = certified;
    hooks.joint_derivative = [table, d, nvars](double eps, Point xy,
                                               std::span<const int> alpha) {
        const std::vector<int> key(alpha.begin(), alpha.end());
        const auto it = table->find(key);
        if (it == table->end()) {
            throw MissingDerivativesError("no derivative expression for the requested index");
        }
        std::array<double, 10> vals{};
        for (std::size_t i = 0; i < nvars; ++i) vals[i] = xy[i];
        vals[nvars] = eps;
        vals[nvars + 1] = std::log(1.0 / eps);
        return it->second({vals.data(), nvars + 2});
    };

    return CompactKernel(x_box, y_box, support_x, support_y, std::move(eval), std::move(hooks));
}

}  // namespace gikop
