#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "lwrt/jet.hpp"

namespace lwrt {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

// Gauss-Legendre rule with n points; cached, thread-safe.
const GaussRule& gauss_legendre(int n);

// Integral of f over [a,b] with a fixed n-point Gauss rule.
double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n);

template <class V>
struct QuadResult {
    V value{};
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Jet& v) { return v.max_abs(); }
inline double magnitude(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline void accumulate(double& acc, double w, double v) { acc += w * v; }
inline void accumulate(Jet& acc, double w, const Jet& v) {
    Jet t = v;
    t *= w;
    acc += t;
}
inline void accumulate(std::vector<double>& acc, double w, const std::vector<double>& v) {
    if (acc.size() < v.size()) acc.resize(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] += w * v[i];
}

template <class V>
V zero_like(const V& v) {
    V z = v;
    if constexpr (std::is_same_v<V, double>) {
        z = 0.0;
    } else if constexpr (std::is_same_v<V, Jet>) {
        z = Jet(v.order(), 0.0);
    } else {
        std::fill(z.begin(), z.end(), 0.0);
    }
    return z;
}

template <class V>
V difference(const V& a, const V& b) {
    if constexpr (std::is_same_v<V, std::vector<double>>) {
        V d = a;
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b[i];
        return d;
    } else {
        return a - b;
    }
}

// Kronrod 15 / Gauss 7 pair.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V, class F>
void gk15(F& f, double a, double b, V& kronrod, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    V fc = f(c);
    kronrod = zero_like(fc);
    V gauss = zero_like(fc);
    accumulate(kronrod, kWgk[7] * h, fc);
    accumulate(gauss, kWg[3] * h, fc);
    for (int j = 0; j < 7; ++j) {
        V f1 = f(c - h * kXgk[j]);
        V f2 = f(c + h * kXgk[j]);
        accumulate(kronrod, kWgk[j] * h, f1);
        accumulate(kronrod, kWgk[j] * h, f2);
        if (j % 2 == 1) {
            accumulate(gauss, kWg[j / 2] * h, f1);
            accumulate(gauss, kWg[j / 2] * h, f2);
        }
    }
    err = magnitude(difference(kronrod, gauss));
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (15 points) quadrature.  Works for
// double, Jet and std::vector<double> valued integrands.
template <class V, class F>
QuadResult<V> adaptive_integrate(F&& f, double a, double b, double abs_tol, double rel_tol,
                                 int max_intervals = 2000) {
    struct Panel {
        double a, b;
        V value;
        double error;
        bool operator<(const Panel& o) const { return error < o.error; }
    };
    QuadResult<V> result;
    if (a == b) {
        V probe = f(a);
        result.value = detail::zero_like(probe);
        result.converged = true;
        return result;
    }
    std::priority_queue<Panel> heap;
    Panel first{a, b, V{}, 0.0};
    detail::gk15<V>(f, a, b, first.value, first.error);
    result.evaluations = 15;
    V total = first.value;
    double total_err = first.error;
    heap.push(std::move(first));
    int intervals = 1;
    while (true) {
        const double target = std::max(abs_tol, rel_tol * detail::magnitude(total));
        if (total_err <= target) {
            result.converged = true;
            break;
        }
        if (intervals >= max_intervals) break;
        Panel worst = heap.top();
        if (worst.b - worst.a <= 1e-14 * std::max(1.0, std::abs(worst.a))) break;
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left{worst.a, mid, V{}, 0.0}, right{mid, worst.b, V{}, 0.0};
        detail::gk15<V>(f, left.a, left.b, left.value, left.error);
        detail::gk15<V>(f, right.a, right.b, right.value, right.error);
        result.evaluations += 30;
        detail::accumulate(total, -1.0, worst.value);
        detail::accumulate(total, 1.0, left.value);
        detail::accumulate(total, 1.0, right.value);
        total_err += left.error + right.error - worst.error;
        heap.push(std::move(left));
        heap.push(std::move(right));
        ++intervals;
    }
    if (!result.converged) {
        // Final sum from the panels, free of running-update drift.
        total = detail::zero_like(total);
        total_err = 0.0;
        while (!heap.empty()) {
            detail::accumulate(total, 1.0, heap.top().value);
            total_err += heap.top().error;
            heap.pop();
        }
    }
    result.value = total;
    result.error = total_err;
    return result;
}

// Scalar convenience wrapper.
QuadResult<double> integrate(const std::function<double(double)>& f, double a, double b,
                             double abs_tol = 1e-12, double rel_tol = 1e-12, int max_intervals = 2000);

// Chebyshev points of the second kind on [a,b], n+1 points, ascending.
std::vector<double> chebyshev_points(int n, double a, double b);

}  // namespace lwrt
