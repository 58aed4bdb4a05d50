#include "lwrt/means.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lwrt/parallel.hpp"
#include "lwrt/quadrature.hpp"

namespace lwrt {

double mean_support_radius(double epsilon, double gamma, double support_c) {
    return (epsilon + std::sqrt(epsilon * epsilon + 4.0 * support_c * gamma)) / (2.0 * support_c);
}

double effective_gamma(double epsilon, double gamma) { return std::max(gamma, epsilon * epsilon / 4.0); }

std::vector<double> chebyshev_grid(int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = -std::cos(std::numbers::pi * i / (n - 1));
    x.front() = -1.0;
    x.back() = 1.0;
    if (n % 2 == 1) x[n / 2] = 0.0;
    return x;
}

namespace {

// Panels in t in [-1, 1] following the test function's breakpoints.
struct TRule {
    std::vector<double> t, w;
};

TRule t_rule(const TestFunction& phi) {
    TRule r;
    std::vector<double> cuts = phi.knots();
    int points;
    if (cuts.empty()) {
        for (int i = 1; i < 32; ++i) cuts.push_back(-1.0 + i / 16.0);
        points = 16;
    } else {
        points = std::max(8, phi.index() / 2 + 6);
    }
    cuts.insert(cuts.begin(), -1.0);
    cuts.push_back(1.0);
    const GaussRule& g = gauss_legendre(points);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double mid = 0.5 * (cuts[c] + cuts[c + 1]), half = 0.5 * (cuts[c + 1] - cuts[c]);
        for (int q = 0; q < points; ++q) {
            r.t.push_back(mid + half * g.nodes[q]);
            r.w.push_back(half * g.weights[q] * phi.value(mid + half * g.nodes[q]));
        }
    }
    return r;
}

double mean_with_rule(const PhantomSpec& f, const Weight* m, const TRule& rule, double epsilon, double gamma,
                      double x) {
    if (x == 0.0) {
        const double base = eval_phantom(f, 0.0, gamma);
        return m ? base * eval_weight(*m, 0.0, 0.0, gamma) : base;
    }
    const double s = epsilon * std::abs(x);
    double total = 0.0;
    for (std::size_t q = 0; q < rule.t.size(); ++q) {
        if (rule.w[q] == 0.0) continue;
        const double y = gamma + s * rule.t[q];
        const double fv = eval_phantom(f, x, y);
        if (fv == 0.0) continue;
        // m_gamma(x, y) = m(x, (y - gamma)/x, gamma)
        const double wv = m ? eval_weight(*m, x, (y - gamma) / x, gamma) : 1.0;
        total += rule.w[q] * fv * wv;
    }
    return total;
}

}  // namespace

double mean_value(const PhantomSpec& f, const Weight* m, const TestFunction& phi, double epsilon, double gamma,
                  double x) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("mean: epsilon must be positive");
    return mean_with_rule(f, m, t_rule(phi), epsilon, effective_gamma(epsilon, gamma), x);
}

MeanProfile mean_profile(const PhantomSpec& f, const Weight* m, const TestFunction& phi, double epsilon, double gamma,
                         const std::vector<double>& x_grid) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("mean_profile: epsilon must be positive");
    MeanProfile M;
    M.x = x_grid;
    M.values.assign(x_grid.size(), 0.0);
    M.epsilon = epsilon;
    M.gamma = effective_gamma(epsilon, gamma);
    M.weighted = m != nullptr;
    M.test_function = phi.id();
    const TRule rule = t_rule(phi);
    parallel_for(x_grid.size(),
                 [&](std::size_t i) { M.values[i] = mean_with_rule(f, m, rule, epsilon, M.gamma, x_grid[i]); });
    return M;
}

std::vector<double> mean_moments(const PhantomSpec& f, const Weight* m, const TestFunction& phi, double epsilon,
                                 double gamma, int K, int panels) {
    const double g = effective_gamma(epsilon, gamma);
    const double R = std::min(1.0, mean_support_radius(epsilon, g, f.support_c));
    const TRule rule = t_rule(phi);
    const GaussRule& gr = gauss_legendre(16);
    std::vector<double> out(K + 1, 0.0);
    // Panels on [-R, 0] and [0, R]: M is smooth there and x = 0 is a panel end.
    for (int side = -1; side <= 1; side += 2) {
        for (int p = 0; p < panels; ++p) {
            const double a = side * R * p / panels, b = side * R * (p + 1) / panels;
            const double mid = 0.5 * (a + b), half = 0.5 * std::abs(b - a);
            for (int q = 0; q < 16; ++q) {
                const double x = mid + half * gr.nodes[q];
                const double v = half * gr.weights[q] * mean_with_rule(f, m, rule, epsilon, g, x);
                double xp = 1.0;
                for (int k = 0; k <= K; ++k) {
                    out[k] += v * xp;
                    xp *= x;
                }
            }
        }
    }
    return out;
}

double mean_l2_distance(const PhantomSpec& f, const Weight* m, const TestFunction& phi, double epsilon, double gamma,
                        const std::function<double(double)>& other, int panels) {
    const double g = effective_gamma(epsilon, gamma);
    const double R = std::min(1.0, mean_support_radius(epsilon, g, f.support_c));
    const TRule rule = t_rule(phi);
    const GaussRule& gr = gauss_legendre(16);
    double total = 0.0;
    auto add_panel = [&](double a, double b, bool inside) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int q = 0; q < 16; ++q) {
            const double x = mid + half * gr.nodes[q];
            const double mv = inside ? mean_with_rule(f, m, rule, epsilon, g, x) : 0.0;
            const double d = mv - other(x);
            total += half * gr.weights[q] * d * d;
        }
    };
    for (int p = 0; p < panels; ++p) {
        add_panel(-R + R * p / panels, -R + R * (p + 1) / panels, true);
        add_panel(R * p / panels, R * (p + 1) / panels, true);
    }
    if (R < 1.0) {
        const int outer = std::max(8, panels / 4);
        for (int p = 0; p < outer; ++p) {
            add_panel(-1.0 + (1.0 - R) * p / outer, -1.0 + (1.0 - R) * (p + 1) / outer, false);
            add_panel(R + (1.0 - R) * p / outer, R + (1.0 - R) * (p + 1) / outer, false);
        }
    }
    return std::sqrt(total);
}

GapReport convergence_gap(const PhantomSpec& f, const Weight* m, const TestFunction& phi, double epsilon,
                          double gamma, const std::vector<double>& x_grid, double holder_bound) {
    const MeanProfile M = mean_profile(f, m, phi, epsilon, gamma, x_grid);
    GapReport r;
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const double x = x_grid[i];
        double target = eval_phantom(f, x, M.gamma);
        if (m) target *= (x == 0.0) ? eval_weight(*m, 0.0, 0.0, M.gamma) : eval_weight(*m, x, 0.0, M.gamma);
        const double d = std::abs(M.values[i] - target);
        r.gap = std::max(r.gap, d);
        if (x != 0.0) {
            const double bound = holder_bound * std::pow(epsilon * std::abs(x), f.holder_alpha);
            r.max_ratio = std::max(r.max_ratio, d / bound);
        } else if (d > 0.0) {
            r.max_ratio = INFINITY;
        }
    }
    return r;
}

double holder_check_of_mean(const MeanProfile& M, double alpha) {
    double best = 0.0;
    for (std::size_t i = 0; i < M.x.size(); ++i)
        for (std::size_t j = i + 1; j < M.x.size(); ++j) {
            const double d = std::abs(M.x[i] - M.x[j]);
            if (d == 0.0) continue;
            best = std::max(best, std::abs(M.values[i] - M.values[j]) / std::pow(d, alpha));
        }
    return best;
}

}  // namespace lwrt
