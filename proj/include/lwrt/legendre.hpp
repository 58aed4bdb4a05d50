#pragma once

#include <functional>
#include <vector>

namespace lwrt {

struct MomentVector {
    std::vector<double> m;  // m_0..m_N
    int N() const { return static_cast<int>(m.size()) - 1; }
};

// Coefficients against the L2-normalized polynomials sqrt((2n+1)/2) P_n.
struct LegendreSeries {
    std::vector<double> a;
    int N() const { return static_cast<int>(a.size()) - 1; }
    double operator()(double x) const;
};

constexpr int kMomentMapCeiling = 40;

double legendre_poly(int n, double x);
double legendre_normalized(int n, double x);
// Explicit sum 2^{-n} sum_{k<=floor(n/2)} (-1)^k C(n,k) C(2n-2k,n) x^{n-2k}.
double legendre_poly_explicit(int n, double x);

struct FLResult {
    LegendreSeries series;
    double parseval_defect = 0.0;  // | ||g||^2 - sum a_n^2 |
};

// Coefficients by Gauss-Legendre quadrature with `points` nodes (default 2N+64).
// Requires N < points.
FLResult fl_coefficients(const std::function<double(double)>& g, int N, int points = 0);
// Same for samples of g at the nodes of gauss_legendre(values.size()).
FLResult fl_coefficients_from_samples(const std::vector<double>& values, int N);

// Exact moment -> coefficient map, compensated summation; N <= 40.
LegendreSeries moments_to_coefficients(const MomentVector& m);
// Monomial-coefficient table: a_n = sum_k T[n][k] m_k.
std::vector<std::vector<double>> moment_map_matrix(int N);

struct CoefficientBoundReport {
    std::vector<double> ratios;  // |a_n| / ((4 sqrt 2)^n max_{k<=n} |m_k|)
    double max_ratio = 0.0;
};
CoefficientBoundReport coefficient_bound_check(const MomentVector& m, const LegendreSeries& a);

double tail_bound(int N, double alpha, double C0, double A0);
double normalized_sup_bound(int n);
// sup over a uniform grid on |x| <= 1/2 of |P~_n|.
double normalized_sup_on_half(int n, int grid_points = 20001);

}  // namespace lwrt
