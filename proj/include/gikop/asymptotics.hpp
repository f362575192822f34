#ifndef GIKOP_ASYMPTOTICS_HPP
#define GIKOP_ASYMPTOTICS_HPP

// Numerical growth classification of eps-parameterized nets: moderateness
// (|net| = O(eps^-q)), negligibility up to a tested order, and log growth
// (|net| = O(|ln eps|)).

#include <functional>
#include <string>
#include <vector>

namespace gikop {

// Geometric sequence of scale parameters eps_j = start * ratio^j, strictly
// decreasing inside (0,1].  At least 4 points (the regression needs degrees
// of freedom).
class EpsilonGrid {
public:
    EpsilonGrid(double start, double ratio, int count);

    // eps_j = 2^-j for j = 4..19; equispaced in ln(1/eps).
    static EpsilonGrid standard() { return EpsilonGrid(0.0625, 0.5, 16); }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t j) const { return values_[j]; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
};

using ScalarNet = std::function<double(double)>;

enum class GrowthKind { Moderate, LogGrowth, NegligibleUpTo, Indeterminate };

struct GrowthClass {
    GrowthKind kind = GrowthKind::Indeterminate;
    double q = 0.0;  // Moderate exponent estimate
    int p_max = 0;   // certified order for NegligibleUpTo

    // diagnostics (regression on the nonzero samples, when feasible)
    double fitted_slope = 0.0;
    double fit_residual = 0.0;
    double bound_constant = 0.0;  // exp(intercept) of the log-log fit
    bool has_fit = false;
    bool all_zero = false;  // every sample was exactly zero
};

std::string to_string(GrowthKind k);
std::string describe(const GrowthClass& c);

struct ClassifyOptions {
    double slope_tol = 0.05;
    int p_max = 10;
    double log_ratio_tol = 2.0;
};

// Least-squares slope of ln|net| against ln(1/eps) over the grid points
// with nonzero samples, and the max absolute fit residual.
// Throws NonFiniteError / InsufficientSamplesError.
std::pair<double, double> estimate_exponent(const ScalarNet& net, const EpsilonGrid& grid);

// Decision order: negligible up to p_max, then log growth, then moderate;
// Indeterminate when the log-log fit residual exceeds slope_tol.
GrowthClass classify(const ScalarNet& net, const EpsilonGrid& grid,
                     const ClassifyOptions& opts = {});

}  // namespace gikop

#endif  // GIKOP_ASYMPTOTICS_HPP
