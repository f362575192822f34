#ifndef GIKOP_KERNELOP_HPP
#define GIKOP_KERNELOP_HPP

// Compactly supported kernels and their integral operators: application,
// composition, powers, support verification, Nystrom discretization and
// mollified-delta probing.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "gikop/genfun.hpp"
#include "gikop/matrix.hpp"
#include "gikop/quadrature.hpp"

namespace gikop {

// Kernel values at quadrature node pairs: values(i,j) = H_eps(x_i, y_j).
struct NystromMatrix {
    QuadratureRule rule_x;
    QuadratureRule rule_y;
    Matrix values;

    std::span<const double> weights_y() const { return rule_y.weights(); }
};

// M * diag(w_y) * f_samples, row by row through the same weighted-dot
// primitive apply() uses, so the two routes agree bit for bit.
std::vector<double> nystrom_apply(const NystromMatrix& m, std::span<const double> f_samples);

using KernelEvalFn = std::function<double(double, Point, Point)>;

// Optional fast discretization route (composed and exponential kernels
// install one that works at the matrix level) and optional exact joint
// derivatives over the (x..., y...) variables.
struct KernelHooks {
    std::function<Matrix(double, const QuadratureRule&, const QuadratureRule&)> materialize;
    DerivFn joint_derivative;
    int max_derivative_order = 0;
};

// A generalized function on X x Y carrying a declared support box
// K1 x K2 and a per-(eps, rule pair) Nystrom cache.  Values are immutable
// after construction apart from the cache; copies share state.
class CompactKernel {
public:
    CompactKernel(Box x_box, Box y_box, Box support_x, Box support_y, KernelEvalFn eval,
                  KernelHooks hooks = {});

    const Box& x_box() const;
    const Box& y_box() const;
    const Box& support_x() const;
    const Box& support_y() const;
    Box support() const;  // K1 x K2 on the product space
    int dim() const;      // d (the domain is 2d-dimensional)

    double operator()(double eps, Point x, Point y) const;
    double eval_joint(double eps, Point xy) const;

    // View over the joint domain, for seminorms and classification.
    GeneralizedFunction as_generalized_function() const;

    // Cached; throws NonFiniteError if any sampled value is not finite.
    std::shared_ptr<const NystromMatrix> discretize(double eps, const QuadratureRule& rule_x,
                                                    const QuadratureRule& rule_y) const;

    // Pre-populates the cache (used by exp_kernel, which accumulates the
    // node matrix as a by-product).
    std::shared_ptr<const NystromMatrix> seed_discretization(double eps,
                                                             const QuadratureRule& rule_x,
                                                             const QuadratureRule& rule_y,
                                                             Matrix values) const;

private:
    struct State;
    std::shared_ptr<State> s_;
};

// x -> sum_j w_j H_eps(x, y_j) f_eps(y_j); a fixed-eps slice on X (the
// returned evaluator ignores its eps argument).  Declared support is K1.
// Requires rule_y.box == K2 (RuleMismatchError).
GeneralizedFunction apply(const CompactKernel& H, const GeneralizedFunction& f, double eps,
                          const QuadratureRule& rule_y);

// Same sum without the rule_y.box == K2 requirement; the rule may cover
// any box inside f's domain.  Internal building block for composition
// checks, exponentials and probing.
GeneralizedFunction apply_with_rule(const CompactKernel& H, const GeneralizedFunction& f,
                                    double eps, const QuadratureRule& rule_y);

// Composition kernel L(x,y) = sum_j w_j H_eps(x,xi_j) K_eps(xi_j,y), a
// fixed-eps slice with support K1 x K3.  The middle rule must cover the
// hull of H's K2 and K's K2.
CompactKernel compose(const CompactKernel& H, const CompactKernel& K, double eps,
                      const QuadratureRule& rule_mid);

// Iterated composition L_n (L_1 = H); X and Y boxes must coincide and the
// rule must cover the K x K support envelope.
CompactKernel power(const CompactKernel& H, int n, double eps, const QuadratureRule& rule);

struct SupportCheckResult {
    bool pass = true;
    double max_violation = 0.0;
    std::vector<double> worst_point;  // empty when no sample lies outside
    double reference = 0.0;           // 1 + sampled sup over the claimed box
};

// Samples |H_eps| on a tensor grid over the domain minus the claimed box;
// passes iff the max lies below tol * (1 + sup over claimed).
SupportCheckResult support_check(const CompactKernel& H, double eps, const Box& claimed,
                                 double tol, int resolution);

using PointFn = std::function<double(Point)>;
using OperatorFn = std::function<PointFn(const PointFn&)>;

// (op delta_y^eta)(x) for the normalized mollifier probe of scale eta;
// approximates the kernel of op at (x,y) to second order in eta.
double reconstruct_kernel(const OperatorFn& op, const Box& y_domain, double eta, Point x,
                          Point y);

struct NullTestResult {
    GrowthClass kernel_class;
    std::vector<GrowthClass> image_classes;
};

// Classifies the seminorm net of H and of each apply(H, b) over the grid;
// the quantitative direction of "H-hat = 0 iff H = 0".
NullTestResult null_test(const CompactKernel& H, const EpsilonGrid& grid,
                         std::span<const GeneralizedFunction> basis, const SeminormSpec& spec,
                         const ClassifyOptions& opts = {});

// factor * H with the same boxes (factor may be negative or zero).
CompactKernel scale_kernel(const CompactKernel& H, double factor);

// Kernel from a kerndsl expression over x, y (x1.., y1.. for d > 1), eps
// and logeps.  Optional derivative expressions are keyed by the
// comma-separated multi-index over (x..., y...), e.g. "1,0".
CompactKernel kernel_from_expression(const std::string& expr_text, const Box& x_box,
                                     const Box& y_box, const Box& support_x, const Box& support_y,
                                     const std::map<std::string, std::string>& deriv_exprs = {});

}  // namespace gikop

#endif  // GIKOP_KERNELOP_HPP
