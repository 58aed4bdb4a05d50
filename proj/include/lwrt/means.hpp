#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lwrt/phantoms.hpp"
#include "lwrt/test_functions.hpp"
#include "lwrt/weights.hpp"

namespace lwrt {

struct MeanProfile {
    std::vector<double> x;
    std::vector<double> values;
    double epsilon = 0.0;
    double gamma = 0.0;
    bool weighted = false;
    std::string test_function;
};

// Right end of the support of the mean: positive root of c x^2 = eps x + gamma.
double mean_support_radius(double epsilon, double gamma, double support_c = 1.0);

// gamma raised to eps^2/4 when smaller (the moment formula needs it).
double effective_gamma(double epsilon, double gamma);

// Chebyshev grid of n points on [-1, 1].
std::vector<double> chebyshev_grid(int n = 257);

// M(x) = int f(x, gamma + eps|x| t) [m_gamma] phi(t) dt; M(0) = f(0, gamma)[m(0,0,gamma)].
double mean_value(const PhantomSpec& f, const Weight* m, const TestFunction& phi, double epsilon, double gamma,
                  double x);
MeanProfile mean_profile(const PhantomSpec& f, const Weight* m, const TestFunction& phi, double epsilon, double gamma,
                         const std::vector<double>& x_grid);

// int x^k M(x) dx for k = 0..K over the support, composite Gauss.
std::vector<double> mean_moments(const PhantomSpec& f, const Weight* m, const TestFunction& phi, double epsilon,
                                 double gamma, int K, int panels = 64);

// L2 norm on [-1,1] of M - S where S is any function, by composite Gauss over the mean's support
// and the rest of [-1,1].
double mean_l2_distance(const PhantomSpec& f, const Weight* m, const TestFunction& phi, double epsilon, double gamma,
                        const std::function<double(double)>& other, int panels = 64);

struct GapReport {
    double gap = 0.0;        // sup |M - f(x,gamma)[m_gamma]|
    double max_ratio = 0.0;  // sup |M - f| / (C_0 (eps |x|)^alpha), over x != 0
};
GapReport convergence_gap(const PhantomSpec& f, const Weight* m, const TestFunction& phi, double epsilon,
                          double gamma, const std::vector<double>& x_grid, double holder_bound);

// max over grid pairs of |M(x)-M(y)|/|x-y|^alpha.
double holder_check_of_mean(const MeanProfile& M, double alpha);

}  // namespace lwrt
