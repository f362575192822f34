#include "gikop/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "gikop/errors.hpp"

namespace gikop {

EpsilonGrid::EpsilonGrid(double start, double ratio, int count) {
    if (!(start > 0.0) || start > 1.0) throw UsageError("eps grid start must lie in (0,1]");
    if (!(ratio > 0.0) || !(ratio < 1.0)) throw UsageError("eps grid ratio must lie in (0,1)");
    if (count < 4) throw UsageError("eps grid needs at least 4 points");
    values_.resize(static_cast<std::size_t>(count));
    double e = start;
    for (int j = 0; j < count; ++j) {
        values_[static_cast<std::size_t>(j)] = e;
        e *= ratio;
    }
}

std::string to_string(GrowthKind k) {
    switch (k) {
        case GrowthKind::Moderate:
            return "Moderate";
        case GrowthKind::LogGrowth:
            return "LogGrowth";
        case GrowthKind::NegligibleUpTo:
            return "NegligibleUpTo";
        case GrowthKind::Indeterminate:
            return "Indeterminate";
    }
    return "?";
}

std::string describe(const GrowthClass& c) {
    std::ostringstream os;
    switch (c.kind) {
        case GrowthKind::Moderate:
            os << "Moderate(" << c.q << ")";
            break;
        case GrowthKind::NegligibleUpTo:
            os << "NegligibleUpTo(" << c.p_max << ")";
            break;
        default:
            os << to_string(c.kind);
    }
    return os.str();
}

namespace {

std::vector<double> sample_net(const ScalarNet& net, const EpsilonGrid& grid) {
    std::vector<double> vals(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        vals[j] = net(grid[j]);
        if (!std::isfinite(vals[j])) {
            std::ostringstream os;
            os << "net value at eps=" << grid[j] << " is not finite";
            throw NonFiniteError(os.str());
        }
    }
    return vals;
}

struct Fit {
    double slope, intercept, max_residual;
};

// ln|v| against ln(1/eps) over nonzero samples; caller guarantees >= 4.
Fit log_log_fit(const EpsilonGrid& grid, const std::vector<double>& vals) {
    double sx = 0, sy = 0;
    std::size_t n = 0;
    for (std::size_t j = 0; j < vals.size(); ++j) {
        if (vals[j] == 0.0) continue;
        sx += std::log(1.0 / grid[j]);
        sy += std::log(std::fabs(vals[j]));
        ++n;
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t j = 0; j < vals.size(); ++j) {
        if (vals[j] == 0.0) continue;
        const double dx = std::log(1.0 / grid[j]) - mx;
        const double dy = std::log(std::fabs(vals[j])) - my;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    Fit f{};
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.max_residual = 0.0;
    for (std::size_t j = 0; j < vals.size(); ++j) {
        if (vals[j] == 0.0) continue;
        const double r = std::log(std::fabs(vals[j])) -
                         (f.slope * std::log(1.0 / grid[j]) + f.intercept);
        f.max_residual = std::max(f.max_residual, std::fabs(r));
    }
    return f;
}

std::size_t count_nonzero(const std::vector<double>& vals) {
    std::size_t n = 0;
    for (double v : vals)
        if (v != 0.0) ++n;
    return n;
}

// eps^-p * |v| with v == 0 short-circuited so huge eps^-p cannot produce
// 0 * inf.
double chain_value(double eps, int p, double v) {
    if (v == 0.0) return 0.0;
    return std::pow(eps, -static_cast<double>(p)) * std::fabs(v);
}

bool negligible_up_to(const EpsilonGrid& grid, const std::vector<double>& vals, int p_max) {
    for (int p = 0; p <= p_max; ++p) {
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < vals.size(); ++j) {
            const double c = chain_value(grid[j], p, vals[j]);
            if (!(c <= prev)) return false;  // also rejects overflow to inf/NaN
            prev = c;
        }
        if (!(prev < 1.0)) return false;
    }
    return true;
}

bool log_growth(const EpsilonGrid& grid, const std::vector<double>& vals, double ratio_tol) {
    // ratio |v| / |ln eps|, skipping points where ln eps vanishes
    std::vector<double> r;
    r.reserve(vals.size());
    for (std::size_t j = 0; j < vals.size(); ++j) {
        const double l = std::fabs(std::log(grid[j]));
        if (l < 1e-12) continue;
        r.push_back(std::fabs(vals[j]) / l);
    }
    if (r.size() < 4) return false;
    double rmax = r[0], rmin = r[0];
    for (double x : r) {
        rmax = std::max(rmax, x);
        rmin = std::min(rmin, x);
    }
    if (rmin <= 0.0) return false;
    // bounded above relative to the first point, and bounded away from zero
    // across the grid: a genuine Theta(|ln eps|) signature.  (Nets with
    // ratio drifting to 0, e.g. constants, belong to the moderate branch.)
    if (!(rmax <= ratio_tol * r[0])) return false;
    return rmax / rmin <= ratio_tol;
}

}  // namespace

std::pair<double, double> estimate_exponent(const ScalarNet& net, const EpsilonGrid& grid) {
    const std::vector<double> vals = sample_net(net, grid);
    if (count_nonzero(vals) < 4) {
        throw InsufficientSamplesError("estimate_exponent needs at least 4 nonzero samples");
    }
    const Fit f = log_log_fit(grid, vals);
    return {f.slope, f.max_residual};
}

GrowthClass classify(const ScalarNet& net, const EpsilonGrid& grid, const ClassifyOptions& opts) {
    const std::vector<double> vals = sample_net(net, grid);
    GrowthClass out;

    const std::size_t nonzero = count_nonzero(vals);
    if (nonzero >= 4) {
        const Fit f = log_log_fit(grid, vals);
        out.fitted_slope = f.slope;
        out.fit_residual = f.max_residual;
        out.bound_constant = std::exp(f.intercept);
        out.has_fit = true;
    }
    if (nonzero == 0) {
        out.kind = GrowthKind::NegligibleUpTo;
        out.p_max = opts.p_max;
        out.all_zero = true;
        return out;
    }

    if (negligible_up_to(grid, vals, opts.p_max)) {
        out.kind = GrowthKind::NegligibleUpTo;
        out.p_max = opts.p_max;
        return out;
    }

    if (log_growth(grid, vals, opts.log_ratio_tol)) {
        out.kind = GrowthKind::LogGrowth;
        return out;
    }

    if (out.has_fit && out.fit_residual <= opts.slope_tol) {
        out.kind = GrowthKind::Moderate;
        out.q = out.fitted_slope;
        return out;
    }

    out.kind = GrowthKind::Indeterminate;
    return out;
}

}  // namespace gikop
