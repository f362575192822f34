#include "gikop/quadrature.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <sstream>

#include "gikop/errors.hpp"
#include "gikop/kernels.hpp"

namespace gikop {

namespace {

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace

Box::Box(std::vector<double> lo, std::vector<double> hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.empty() || lo_.size() != hi_.size()) {
        throw InvalidBoxError("box bounds must be non-empty and of equal dimension");
    }
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        if (!(lo_[i] < hi_[i]) || !std::isfinite(lo_[i]) || !std::isfinite(hi_[i])) {
            std::ostringstream os;
            os << "box requires finite lo < hi in every dimension (dim " << i << ": lo=" << lo_[i]
               << ", hi=" << hi_[i] << ")";
            throw InvalidBoxError(os.str());
        }
    }
}

double Box::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lo_.size(); ++i) v *= hi_[i] - lo_[i];
    return v;
}

bool Box::contains(std::span<const double> point) const {
    if (point.size() != lo_.size()) return false;
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        if (point[i] < lo_[i] || point[i] > hi_[i]) return false;
    }
    return true;
}

bool Box::contains(const Box& inner) const {
    if (inner.dim() != dim()) return false;
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        if (inner.lo_[i] < lo_[i] || inner.hi_[i] > hi_[i]) return false;
    }
    return true;
}

Box Box::product(const Box& other) const {
    std::vector<double> lo = lo_, hi = hi_;
    lo.insert(lo.end(), other.lo_.begin(), other.lo_.end());
    hi.insert(hi.end(), other.hi_.begin(), other.hi_.end());
    return Box(std::move(lo), std::move(hi));
}

Box Box::hull(const Box& a, const Box& b) {
    if (a.dim() != b.dim()) throw InvalidBoxError("hull of boxes with different dimensions");
    std::vector<double> lo(a.lo_), hi(a.hi_);
    for (int i = 0; i < a.dim(); ++i) {
        lo[i] = std::min(lo[i], b.lo_[i]);
        hi[i] = std::max(hi[i], b.hi_[i]);
    }
    return Box(std::move(lo), std::move(hi));
}

void gauss_legendre_reference(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    static std::mutex mu;
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    {
        const std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(n); it != cache.end()) {
            nodes = it->second.first;
            weights = it->second.second;
            return;
        }
    }

    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // i-th root of P_n counted from +1, standard Chebyshev initial guess
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p1 = 0.0, p2 = 0.0, dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            p1 = 1.0;
            p2 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * k + 1.0) * z * p2 - k * p3) / (k + 1.0);
            }
            dp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }

    const std::lock_guard<std::mutex> lock(mu);
    cache.emplace(n, std::make_pair(nodes, weights));
}

QuadratureRule::QuadratureRule(Box box, RuleKind kind, int resolution, std::vector<double> nodes,
                               std::vector<double> weights)
    : box_(std::move(box)),
      kind_(kind),
      resolution_(resolution),
      nodes_(std::move(nodes)),
      weights_(std::move(weights)) {
    std::uint64_t h = fnv1a(&kind_, sizeof kind_);
    h = fnv1a(&resolution_, sizeof resolution_, h);
    h = fnv1a(box_.lo().data(), box_.lo().size() * sizeof(double), h);
    h = fnv1a(box_.hi().data(), box_.hi().size() * sizeof(double), h);
    fingerprint_ = h;
}

QuadratureRule tensor_rule(const Box& box, RuleKind kind, int resolution,
                           std::size_t node_budget) {
    if (resolution < 1) throw UsageError("quadrature resolution must be >= 1");
    const int d = box.dim();
    double budget_check = static_cast<double>(d);
    for (int i = 0; i < d; ++i) budget_check *= static_cast<double>(resolution);
    if (budget_check > static_cast<double>(node_budget)) {
        std::ostringstream os;
        os << "tensor rule needs d*resolution^d = " << budget_check << " > budget "
           << node_budget;
        throw BudgetExceededError(os.str());
    }

    // per-dimension nodes/weights
    std::vector<std::vector<double>> axis_nodes(d), axis_weights(d);
    for (int i = 0; i < d; ++i) {
        const double a = box.lo()[i], b = box.hi()[i];
        if (kind == RuleKind::GaussLegendreTensor) {
            std::vector<double> t, w;
            gauss_legendre_reference(resolution, t, w);
            axis_nodes[i].resize(resolution);
            axis_weights[i].resize(resolution);
            for (int k = 0; k < resolution; ++k) {
                axis_nodes[i][k] = 0.5 * (a + b) + 0.5 * (b - a) * t[k];
                axis_weights[i][k] = 0.5 * (b - a) * w[k];
            }
        } else {
            const double h = (b - a) / resolution;
            axis_nodes[i].resize(resolution);
            axis_weights[i].assign(resolution, h);
            for (int k = 0; k < resolution; ++k) axis_nodes[i][k] = a + (k + 0.5) * h;
        }
    }

    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(resolution);

    std::vector<double> nodes(total * static_cast<std::size_t>(d));
    std::vector<double> weights(total, 1.0);
    std::vector<int> idx(d, 0);
    for (std::size_t p = 0; p < total; ++p) {
        for (int i = 0; i < d; ++i) {
            nodes[p * d + i] = axis_nodes[i][idx[i]];
            weights[p] *= axis_weights[i][idx[i]];
        }
        for (int i = d - 1; i >= 0; --i) {
            if (++idx[i] < resolution) break;
            idx[i] = 0;
        }
    }

    return QuadratureRule(box, kind, resolution, std::move(nodes), std::move(weights));
}

double integrate(const std::function<double(std::span<const double>)>& f,
                 const QuadratureRule& rule) {
    std::vector<double> vals(rule.size());
    kernels::parallel_for(rule.size(), [&](std::size_t i) { vals[i] = f(rule.node(i)); });
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (!std::isfinite(vals[i])) {
            throw NonFiniteError("integrand is not finite at a quadrature node");
        }
    }
    return kernels::dot(rule.weights(), vals);
}

}  // namespace gikop
