#pragma once

#include <vector>

#include "lwrt/jet.hpp"

namespace lwrt {

struct UniformAxis {
    double min = 0.0;
    double max = 1.0;
    int n = 2;

    double step() const { return (max - min) / (n - 1); }
    double node(int i) const { return i == n - 1 ? max : min + i * step(); }
    bool contains(double x, double slack = 1e-12) const {
        return x >= min - slack * (max - min) && x <= max + slack * (max - min);
    }
};

// Lagrange cardinal weights of a local stencil: value = sum_i w[i] * data[first + i].
struct Stencil {
    int first = 0;
    std::vector<double> weights;
};

// Local Lagrange interpolation with `points` consecutive nodes, stencil kept
// inside node window [lo, hi].  points == 2 is piecewise linear.
Stencil lagrange_stencil(const UniformAxis& axis, double x, int points, int lo, int hi);
Stencil lagrange_stencil(const UniformAxis& axis, double x, int points);

// Barycentric interpolation on Chebyshev points of the second kind
// (see chebyshev_points); values may be scalars or jets.
class ChebyshevInterpolant {
public:
    ChebyshevInterpolant() = default;
    ChebyshevInterpolant(double a, double b, int degree);

    const std::vector<double>& nodes() const { return nodes_; }
    int degree() const { return degree_; }
    double lower() const { return a_; }
    double upper() const { return b_; }

    // Cardinal weights at x (length degree+1).
    void cardinal(double x, std::vector<double>& out) const;
    double evaluate(const std::vector<double>& values, double x) const;
    Jet evaluate(const std::vector<Jet>& values, double x) const;

private:
    double a_ = 0.0, b_ = 1.0;
    int degree_ = 0;
    std::vector<double> nodes_;
    std::vector<double> bary_;
};

}  // namespace lwrt
