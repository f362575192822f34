#ifndef GIKOP_GENFUN_HPP
#define GIKOP_GENFUN_HPP

// Generalized functions as eps-parameterized evaluators on a domain box,
// with seminorm estimation, growth classification and mollifier embeddings
// of classical data.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gikop/asymptotics.hpp"
#include "gikop/quadrature.hpp"

namespace gikop {

using Point = std::span<const double>;
using EvalFn = std::function<double(double, Point)>;
using DerivFn = std::function<double(double, Point, std::span<const int>)>;

// Computational stand-in for a representative (f_eps): deterministic
// evaluation (eps in (0,1], point in domain) -> real, an optional exact
// derivative evaluator and an optional declared support box.
class GeneralizedFunction {
public:
    GeneralizedFunction(Box domain, EvalFn eval);

    GeneralizedFunction& with_support(Box support);
    GeneralizedFunction& with_derivatives(DerivFn deriv, int max_order);

    const Box& domain() const { return domain_; }
    int dim() const { return domain_.dim(); }
    const std::optional<Box>& support() const { return support_; }
    bool has_derivatives() const { return static_cast<bool>(deriv_); }
    int max_derivative_order() const { return max_order_; }

    double operator()(double eps, Point x) const { return eval_(eps, x); }
    double derivative(double eps, Point x, std::span<const int> alpha) const;

private:
    Box domain_;
    EvalFn eval_;
    DerivFn deriv_;
    int max_order_ = 0;
    std::optional<Box> support_;
};

// p_{K,l} sampling parameters: sup of |d^alpha f| over a tensor grid on
// `compact` (sample_resolution points per dimension, endpoints included)
// for all |alpha| <= order.
struct SeminormSpec {
    Box compact;
    int order = 0;
    int sample_resolution = 33;
    std::optional<double> fd_step;  // finite-difference step override
};

// Sampled seminorm (a lower bound of the true sup).  Derivatives come from
// the exact evaluator when declared and sufficient, otherwise from central
// finite differences (one-sided at the domain boundary) with step
// fd_step, defaulting to grid spacing / 8 per dimension.
double seminorm(const GeneralizedFunction& f, const SeminormSpec& spec, double eps);

GrowthClass classify_function(const GeneralizedFunction& f, const SeminormSpec& spec,
                              const EpsilonGrid& grid, const ClassifyOptions& opts = {});

// Normalization constant c_d with integral of c_d * exp(-1/(1-|t|^2)) over
// the unit ball equal to 1; computed once per dimension and cached.
double mollifier_constant(int dim);

// Normalized mollifier phi(t), t given by its squared radius.
double mollifier_value(double radius_sq, int dim);

// Delta embedding: eval(eps, x) = eps^-d * phi((x-a)/eps); unit mass for
// every eps, support box {|x_i - a_i| <= 1} clipped to the domain.
GeneralizedFunction mollifier_embed_delta(std::vector<double> at, const Box& domain);

// Smooth embedding: constant-in-eps net eval(eps, x) = g(x), g given as a
// kerndsl expression over x (x1..xd for dim > 1).
GeneralizedFunction mollifier_embed_smooth(const std::string& expr_text, const Box& domain);

// General expression bridge: variables x (x1..xd), plus eps and logeps
// when allow_eps is set.
GeneralizedFunction function_from_expression(const std::string& expr_text, const Box& domain,
                                             bool allow_eps = true);

// Uniform inclusive sample coordinates used by seminorm and support_check.
std::vector<double> sample_axis(double lo, double hi, int resolution);

}  // namespace gikop

#endif  // GIKOP_GENFUN_HPP
