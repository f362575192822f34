#ifndef GIKOP_QUADRATURE_HPP
#define GIKOP_QUADRATURE_HPP

// Boxes and tensor-product quadrature rules: the single discretization
// contract behind every integral in the library.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace gikop {

// Axis-aligned product of compact intervals; lo_i < hi_i in every
// dimension, so the volume is positive.
class Box {
public:
    Box(std::vector<double> lo, std::vector<double> hi);

    static Box interval(double a, double b) { return Box({a}, {b}); }

    int dim() const { return static_cast<int>(lo_.size()); }
    double volume() const;
    const std::vector<double>& lo() const { return lo_; }
    const std::vector<double>& hi() const { return hi_; }

    bool contains(std::span<const double> point) const;
    bool contains(const Box& inner) const;

    // Concatenated box on the product space (K1 x K2).
    Box product(const Box& other) const;
    // Smallest box containing both (same dimension).
    static Box hull(const Box& a, const Box& b);

    bool operator==(const Box& other) const = default;

private:
    std::vector<double> lo_, hi_;
};

enum class RuleKind { GaussLegendreTensor, CompositeMidpoint };

// Immutable tensor-product rule on a box: positive weights summing to the
// box volume, nodes stored flat (size() points of box.dim() coordinates).
class QuadratureRule {
public:
    const Box& box() const { return box_; }
    RuleKind kind() const { return kind_; }
    int resolution() const { return resolution_; }

    std::size_t size() const { return weights_.size(); }
    std::span<const double> node(std::size_t i) const {
        return {nodes_.data() + i * static_cast<std::size_t>(box_.dim()),
                static_cast<std::size_t>(box_.dim())};
    }
    std::span<const double> weights() const { return weights_; }

    // Hash of (kind, resolution, box bounds); identifies a rule for the
    // Nystrom cache.
    std::uint64_t fingerprint() const { return fingerprint_; }

private:
    friend QuadratureRule tensor_rule(const Box&, RuleKind, int, std::size_t);
    QuadratureRule(Box box, RuleKind kind, int resolution, std::vector<double> nodes,
                   std::vector<double> weights);

    Box box_;
    RuleKind kind_;
    int resolution_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::uint64_t fingerprint_;
};

QuadratureRule tensor_rule(const Box& box, RuleKind kind, int resolution,
                           std::size_t node_budget = 10'000'000);

double integrate(const std::function<double(std::span<const double>)>& f,
                 const QuadratureRule& rule);

// Gauss-Legendre nodes/weights on [-1,1], Newton iteration on the Legendre
// recurrence (cached per order).
void gauss_legendre_reference(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace gikop

#endif  // GIKOP_QUADRATURE_HPP
