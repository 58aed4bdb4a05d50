#include "lwrt/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lwrt/quadrature.hpp"

namespace lwrt {

Stencil lagrange_stencil(const UniformAxis& axis, double x, int points, int lo, int hi) {
    lo = std::max(lo, 0);
    hi = std::min(hi, axis.n - 1);
    if (hi < lo) throw std::invalid_argument("lagrange_stencil: empty node window");
    points = std::min(points, hi - lo + 1);
    const double h = axis.step();
    const double t = (x - axis.min) / h;
    int cell = static_cast<int>(std::floor(t));
    int first = cell - points / 2 + 1;
    if (points % 2 == 1) first = static_cast<int>(std::lround(t)) - points / 2;
    first = std::clamp(first, lo, hi - points + 1);

    Stencil s;
    s.first = first;
    s.weights.assign(points, 0.0);
    // Exact node hit: unit cardinal.
    for (int i = 0; i < points; ++i) {
        if (std::abs(t - (first + i)) < 1e-13) {
            s.weights[i] = 1.0;
            return s;
        }
    }
    for (int i = 0; i < points; ++i) {
        double w = 1.0;
        for (int j = 0; j < points; ++j) {
            if (j == i) continue;
            w *= (t - (first + j)) / static_cast<double>(i - j);
        }
        s.weights[i] = w;
    }
    return s;
}

Stencil lagrange_stencil(const UniformAxis& axis, double x, int points) {
    return lagrange_stencil(axis, x, points, 0, axis.n - 1);
}

ChebyshevInterpolant::ChebyshevInterpolant(double a, double b, int degree)
    : a_(a), b_(b), degree_(degree), nodes_(chebyshev_points(degree, a, b)), bary_(degree + 1) {
    for (int i = 0; i <= degree; ++i) {
        double w = (i % 2 == 0) ? 1.0 : -1.0;
        if (i == 0 || i == degree) w *= 0.5;
        bary_[i] = w;
    }
}

void ChebyshevInterpolant::cardinal(double x, std::vector<double>& out) const {
    out.assign(degree_ + 1, 0.0);
    if (degree_ == 0) {
        out[0] = 1.0;
        return;
    }
    double denom = 0.0;
    for (int i = 0; i <= degree_; ++i) {
        const double d = x - nodes_[i];
        if (d == 0.0) {
            std::fill(out.begin(), out.end(), 0.0);
            out[i] = 1.0;
            return;
        }
        out[i] = bary_[i] / d;
        denom += out[i];
    }
    for (double& w : out) w /= denom;
}

double ChebyshevInterpolant::evaluate(const std::vector<double>& values, double x) const {
    std::vector<double> w;
    cardinal(x, w);
    double s = 0.0;
    for (int i = 0; i <= degree_; ++i) s += w[i] * values[i];
    return s;
}

Jet ChebyshevInterpolant::evaluate(const std::vector<Jet>& values, double x) const {
    std::vector<double> w;
    cardinal(x, w);
    Jet s(values[0].order(), 0.0);
    for (int i = 0; i <= degree_; ++i) {
        Jet t = values[i];
        t *= w[i];
        s += t;
    }
    return s;
}

}  // namespace lwrt
