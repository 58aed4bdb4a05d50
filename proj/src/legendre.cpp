#include "lwrt/legendre.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lwrt/quadrature.hpp"

namespace lwrt {

double legendre_poly(int n, double x) {
    if (n < 0) throw std::invalid_argument("legendre_poly: negative degree");
    if (n == 0) return 1.0;
    double p0 = 1.0, p1 = x;
    for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double legendre_normalized(int n, double x) { return std::sqrt((2.0 * n + 1.0) / 2.0) * legendre_poly(n, x); }

namespace {

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    long double r = 1.0L;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<double>(std::round(r));
}

// c_{n,k} = (-1)^k C(n,k) C(2n-2k,n) / 2^n, in long double.
long double explicit_coefficient(int n, int k) {
    long double c = static_cast<long double>(binomial(n, k)) * binomial(2 * n - 2 * k, n);
    c = std::ldexp(c, -n);
    return (k % 2 == 0) ? c : -c;
}

struct Neumaier {
    long double sum = 0.0L, comp = 0.0L;
    void add(long double v) {
        const long double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) comp += (sum - t) + v;
        else comp += (v - t) + sum;
        sum = t;
    }
    long double value() const { return sum + comp; }
};

}  // namespace

double legendre_poly_explicit(int n, double x) {
    Neumaier s;
    for (int k = 0; k <= n / 2; ++k) s.add(explicit_coefficient(n, k) * std::pow(static_cast<long double>(x), n - 2 * k));
    return static_cast<double>(s.value());
}

double LegendreSeries::operator()(double x) const {
    double s = 0.0;
    if (a.empty()) return 0.0;
    // Recurrence on the fly.
    double p0 = 1.0, p1 = x;
    s += a[0] * std::sqrt(0.5);
    if (a.size() > 1) s += a[1] * std::sqrt(1.5) * x;
    for (std::size_t n = 1; n + 1 < a.size(); ++n) {
        const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
        p0 = p1;
        p1 = p2;
        s += a[n + 1] * std::sqrt((2.0 * (n + 1) + 1.0) / 2.0) * p2;
    }
    return s;
}

FLResult fl_coefficients_from_samples(const std::vector<double>& values, int N) {
    const int points = static_cast<int>(values.size());
    if (N < 0 || N >= points)
        throw std::invalid_argument("fl_coefficients: N=" + std::to_string(N) + " too large for " +
                                    std::to_string(points) + "-point grid");
    const GaussRule& rule = gauss_legendre(points);
    FLResult r;
    r.series.a.assign(N + 1, 0.0);
    double norm2 = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = rule.nodes[i], w = rule.weights[i] * values[i];
        norm2 += rule.weights[i] * values[i] * values[i];
        double p0 = 1.0, p1 = x;
        r.series.a[0] += w * std::sqrt(0.5);
        if (N >= 1) r.series.a[1] += w * std::sqrt(1.5) * x;
        for (int n = 1; n < N; ++n) {
            const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
            p0 = p1;
            p1 = p2;
            r.series.a[n + 1] += w * std::sqrt((2.0 * n + 3.0) / 2.0) * p2;
        }
    }
    double sum2 = 0.0;
    for (double a : r.series.a) sum2 += a * a;
    r.parseval_defect = std::abs(norm2 - sum2);
    return r;
}

FLResult fl_coefficients(const std::function<double(double)>& g, int N, int points) {
    if (points <= 0) points = 2 * N + 64;
    const GaussRule& rule = gauss_legendre(points);
    std::vector<double> values(points);
    for (int i = 0; i < points; ++i) values[i] = g(rule.nodes[i]);
    return fl_coefficients_from_samples(values, N);
}

std::vector<std::vector<double>> moment_map_matrix(int N) {
    if (N < 0 || N > kMomentMapCeiling)
        throw std::invalid_argument("moments_to_coefficients: N=" + std::to_string(N) + " exceeds ceiling " +
                                    std::to_string(kMomentMapCeiling));
    std::vector<std::vector<double>> T(N + 1, std::vector<double>(N + 1, 0.0));
    for (int n = 0; n <= N; ++n) {
        const long double norm = std::sqrt((2.0L * n + 1.0L) / 2.0L);
        for (int k = 0; k <= n / 2; ++k) T[n][n - 2 * k] = static_cast<double>(norm * explicit_coefficient(n, k));
    }
    return T;
}

LegendreSeries moments_to_coefficients(const MomentVector& m) {
    const int N = m.N();
    if (N > kMomentMapCeiling)
        throw std::invalid_argument("moments_to_coefficients: N=" + std::to_string(N) + " exceeds ceiling " +
                                    std::to_string(kMomentMapCeiling));
    LegendreSeries s;
    s.a.assign(N + 1, 0.0);
    for (int n = 0; n <= N; ++n) {
        const long double norm = std::sqrt((2.0L * n + 1.0L) / 2.0L);
        Neumaier acc;
        for (int k = 0; k <= n / 2; ++k) acc.add(explicit_coefficient(n, k) * static_cast<long double>(m.m[n - 2 * k]));
        const long double v = norm * acc.value();
        if (!std::isfinite(static_cast<double>(v))) throw std::overflow_error("moments_to_coefficients: overflow");
        s.a[n] = static_cast<double>(v);
    }
    return s;
}

CoefficientBoundReport coefficient_bound_check(const MomentVector& m, const LegendreSeries& a) {
    if (m.N() != a.N()) throw std::invalid_argument("coefficient_bound_check: inconsistent N");
    CoefficientBoundReport r;
    double running = 0.0;
    for (int n = 0; n <= a.N(); ++n) {
        running = std::max(running, std::abs(m.m[n]));
        const double denom = std::pow(4.0 * std::numbers::sqrt2, n) * running;
        const double ratio = denom > 0.0 ? std::abs(a.a[n]) / denom : (a.a[n] == 0.0 ? 0.0 : INFINITY);
        r.ratios.push_back(ratio);
        r.max_ratio = std::max(r.max_ratio, ratio);
    }
    return r;
}

double tail_bound(int N, double alpha, double C0, double A0) {
    if (N < 1) throw std::invalid_argument("tail_bound: N must be >= 1");
    return std::numbers::sqrt2 * A0 * C0 * std::pow(2.0 / N, alpha);
}

double normalized_sup_bound(int n) {
    if (n < 0) throw std::invalid_argument("normalized_sup_bound: negative degree");
    if (n == 0) return std::sqrt(0.5);
    return std::pow(2.0, 0.25) * std::sqrt((2.0 * n + 1.0) / (std::numbers::pi * n));
}

double normalized_sup_on_half(int n, int grid_points) {
    double best = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double x = -0.5 + static_cast<double>(i) / (grid_points - 1);
        best = std::max(best, std::abs(legendre_normalized(n, x)));
    }
    return best;
}

}  // namespace lwrt
