#include "lwrt/transform.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lwrt/parallel.hpp"

namespace lwrt {

Sinogram::Sinogram(UniformAxis xi_axis, UniformAxis eta_axis)
    : xi(xi_axis), eta(eta_axis),
      values(static_cast<std::size_t>(xi_axis.n) * eta_axis.n, 0.0),
      failed(values.size(), 0) {}

void Sinogram::validate() const {
    if (xi.n < 2 || eta.n < 2 || !(xi.max > xi.min) || !(eta.max > eta.min))
        throw std::invalid_argument("sinogram grid must be strictly increasing with at least 2 nodes per axis");
    if (values.size() != static_cast<std::size_t>(xi.n) * eta.n)
        throw std::invalid_argument("sinogram value count does not match grid");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("sinogram contains non-finite values");
}

QuadResult<double> radon_detailed(const PhantomSpec& f, const Weight& m, int k, double xi, double eta, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("radon: tol must be positive");
    if (k < 0) throw std::invalid_argument("radon_moment: k must be >= 0");
    QuadResult<double> none;
    none.converged = true;
    const double c = f.support_c;
    const double disc = xi * xi + 4.0 * c * eta;
    if (disc <= 0.0) return none;
    const double r = std::sqrt(disc);
    const Box box = phantom_bounding_box(f);
    const double lo = std::max((xi - r) / (2.0 * c), box.x_min);
    const double hi = std::min((xi + r) / (2.0 * c), box.x_max);
    if (hi <= lo) return none;
    const bool unit = m.kind == WeightKind::Constant;
    auto integrand = [&](double x) {
        const double fv = eval_phantom(f, x, xi * x + eta);
        if (fv == 0.0) return 0.0;
        const double w = unit ? m.constant_value : eval_weight(m, x, xi, eta);
        return (k == 0 ? 1.0 : std::pow(x, k)) * fv * w;
    };
    return adaptive_integrate<double>(integrand, lo, hi, tol, tol, 4000);
}

double radon_moment(const PhantomSpec& f, const Weight& m, int k, double xi, double eta, double tol) {
    auto res = radon_detailed(f, m, k, xi, eta, tol);
    if (!res.converged)
        throw NumericError("radon: quadrature did not converge at (xi=" + std::to_string(xi) + ", eta=" +
                           std::to_string(eta) + "), achieved error " + std::to_string(res.error));
    return res.value;
}

double radon(const PhantomSpec& f, const Weight& m, double xi, double eta, double tol) {
    return radon_moment(f, m, 0, xi, eta, tol);
}

Sinogram sinogram(const PhantomSpec& f, const Weight& m, const SinogramGrid& grid, double noise_sigma,
                  std::uint64_t seed, double tol) {
    Sinogram g(grid.xi, grid.eta);
    g.validate();
    g.noise_sigma = noise_sigma;
    g.seed = seed;
    g.provenance = to_string(f.kind) + "|" + m.describe();
    parallel_for(static_cast<std::size_t>(grid.xi.n), [&](std::size_t i) {
        const double xi = grid.xi.node(static_cast<int>(i));
        for (int j = 0; j < grid.eta.n; ++j) {
            auto res = radon_detailed(f, m, 0, xi, grid.eta.node(j), tol);
            if (res.converged) {
                g.at(static_cast<int>(i), j) = res.value;
            } else {
                g.at(static_cast<int>(i), j) = 0.0;
                g.failed[i * grid.eta.n + j] = 1;
            }
        }
    });
    if (noise_sigma > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, noise_sigma);
        for (double& v : g.values) v += noise(rng);
    }
    return g;
}

double interpolate_sinogram(const Sinogram& g, double xi, double eta, int points) {
    if (!g.xi.contains(xi) || !g.eta.contains(eta))
        throw std::out_of_range("sinogram interpolation outside grid at (" + std::to_string(xi) + ", " +
                                std::to_string(eta) + ")");
    const Stencil sx = lagrange_stencil(g.xi, xi, points);
    const Stencil se = lagrange_stencil(g.eta, eta, points);
    double s = 0.0;
    for (std::size_t a = 0; a < sx.weights.size(); ++a) {
        if (sx.weights[a] == 0.0) continue;
        double row = 0.0;
        for (std::size_t b = 0; b < se.weights.size(); ++b)
            row += se.weights[b] * g.at(sx.first + static_cast<int>(a), se.first + static_cast<int>(b));
        s += sx.weights[a] * row;
    }
    return s;
}

double eta_line_integral(const Sinogram& g, double xi, double lo, double hi,
                         const std::function<double(double)>& kernel, int points, int gauss_points) {
    if (hi <= lo) return 0.0;
    if (!g.eta.contains(lo) || !g.eta.contains(hi))
        throw std::out_of_range("eta integration range outside sinogram grid");
    const Stencil sx = lagrange_stencil(g.xi, xi, points);
    const GaussRule& rule = gauss_legendre(gauss_points);
    const double h = g.eta.step();
    const int first_cell = std::clamp(static_cast<int>(std::floor((lo - g.eta.min) / h)), 0, g.eta.n - 2);
    double total = 0.0;
    for (int c = first_cell; c < g.eta.n - 1; ++c) {
        const double a = std::max(lo, g.eta.node(c)), b = std::min(hi, g.eta.node(c + 1));
        if (a >= hi) break;
        if (b <= a) continue;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int q = 0; q < gauss_points; ++q) {
            const double e = mid + half * rule.nodes[q];
            const Stencil se = lagrange_stencil(g.eta, e, points);
            double v = 0.0;
            for (std::size_t ia = 0; ia < sx.weights.size(); ++ia) {
                if (sx.weights[ia] == 0.0) continue;
                double row = 0.0;
                for (std::size_t ib = 0; ib < se.weights.size(); ++ib)
                    row += se.weights[ib] * g.at(sx.first + static_cast<int>(ia), se.first + static_cast<int>(ib));
                v += sx.weights[ia] * row;
            }
            total += half * rule.weights[q] * kernel(e) * v;
        }
    }
    return total;
}

double dual_radon(const Sinogram& g, const Weight& m, double x, double y) {
    return dual_radon(g, m, x, y, g.xi.min, g.xi.max);
}

double dual_radon(const Sinogram& g, const Weight& m, double x, double y, double xi_lo, double xi_hi) {
    if (!g.xi.contains(xi_lo) || !g.xi.contains(xi_hi)) throw std::out_of_range("dual_radon: xi window exits grid");
    if (!g.eta.contains(y - xi_lo * x) || !g.eta.contains(y - xi_hi * x))
        throw std::out_of_range("dual_radon: window exits grid in eta");
    const int cells = std::max(1, static_cast<int>(std::ceil((xi_hi - xi_lo) / g.xi.step())));
    const GaussRule& rule = gauss_legendre(4);
    const double w = (xi_hi - xi_lo) / cells;
    double total = 0.0;
    for (int c = 0; c < cells; ++c) {
        const double mid = xi_lo + (c + 0.5) * w;
        for (int q = 0; q < 4; ++q) {
            const double xi = mid + 0.5 * w * rule.nodes[q];
            const double eta = y - xi * x;
            total += 0.5 * w * rule.weights[q] * interpolate_sinogram(g, xi, eta, 2) * eval_weight(m, x, xi, eta);
        }
    }
    return total;
}

namespace {

// Composite Gauss nodes/weights over [a, b].
void composite_rule(double a, double b, int panels, int points, std::vector<double>& x, std::vector<double>& w) {
    const GaussRule& rule = gauss_legendre(points);
    x.clear();
    w.clear();
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (int q = 0; q < points; ++q) {
            x.push_back(mid + 0.5 * h * rule.nodes[q]);
            w.push_back(0.5 * h * rule.weights[q]);
        }
    }
}

}  // namespace

double check_adjoint(const PhantomSpec& f, const Weight& m, const SeparableTest& phi, int panels) {
    std::vector<double> xs, xw, es, ew;
    // <R_m f, phi>: radon on a tensor rule in (xi, eta).
    composite_rule(phi.xi_lo, phi.xi_hi, panels, 8, xs, xw);
    composite_rule(phi.eta_lo, phi.eta_hi, panels, 8, es, ew);
    double lhs = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double pxi = phi.in_xi(xs[i]);
        if (pxi == 0.0) continue;
        double row = 0.0;
        for (std::size_t j = 0; j < es.size(); ++j) {
            const double pe = phi.in_eta(es[j]);
            if (pe == 0.0) continue;
            row += ew[j] * pe * radon(f, m, xs[i], es[j], 1e-13);
        }
        lhs += xw[i] * pxi * row;
    }
    // <f, R_m^* phi>: tensor rule in (x, y), inner adaptive integral over xi.
    const Box box = phantom_bounding_box(f);
    std::vector<double> px, pw, py, qw;
    composite_rule(box.x_min, box.x_max, panels, 8, px, pw);
    composite_rule(box.y_min, box.y_max, panels, 8, py, qw);
    double rhs = 0.0;
    for (std::size_t i = 0; i < px.size(); ++i) {
        for (std::size_t j = 0; j < py.size(); ++j) {
            const double fv = eval_phantom(f, px[i], py[j]);
            if (fv == 0.0) continue;
            auto inner = [&](double xi) {
                const double eta = py[j] - xi * px[i];
                if (eta < phi.eta_lo || eta > phi.eta_hi) return 0.0;
                return phi.in_xi(xi) * phi.in_eta(eta) * eval_weight(m, px[i], xi, eta);
            };
            // Breakpoints where eta leaves the test-function support.
            std::vector<double> cuts = {phi.xi_lo, phi.xi_hi};
            if (px[i] != 0.0) {
                for (double e : {phi.eta_lo, phi.eta_hi}) {
                    const double xi = (py[j] - e) / px[i];
                    if (xi > phi.xi_lo && xi < phi.xi_hi) cuts.push_back(xi);
                }
            }
            std::sort(cuts.begin(), cuts.end());
            double dual = 0.0;
            for (std::size_t c = 0; c + 1 < cuts.size(); ++c)
                dual += adaptive_integrate<double>(inner, cuts[c], cuts[c + 1], 1e-14, 1e-12).value;
            rhs += pw[i] * qw[j] * fv * dual;
        }
    }
    return std::abs(lhs - rhs);
}

double heaviside_convolution(const Sinogram& g, int k, double xi, double eta, int points) {
    if (k < 1) throw std::invalid_argument("heaviside_convolution: k must be >= 1");
    if (!g.eta.contains(eta)) throw std::out_of_range("heaviside_convolution: eta outside grid");
    const double kf = factorial(k - 1);
    auto kernel = [&](double e) { return std::pow(eta - e, k - 1) / kf; };
    const int gauss = std::max(8, (points + k) / 2 + 2);
    return eta_line_integral(g, xi, g.eta.min, eta, kernel, points, gauss);
}

std::vector<double> central_difference_weights(int k, int radius) {
    // Fornberg's algorithm on nodes -radius..radius evaluated at 0.
    const int n = 2 * radius + 1;
    std::vector<double> nodes(n);
    for (int i = 0; i < n; ++i) nodes[i] = i - radius;
    std::vector<std::vector<double>> c(n, std::vector<double>(k + 1, 0.0));
    double c1 = 1.0, c4 = nodes[0];
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, k);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i];
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int s = mn; s >= 1; --s) c[i][s] = c1 * (s * c[i - 1][s - 1] - c5 * c[i - 1][s]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int s = mn; s >= 1; --s) c[j][s] = (c4 * c[j][s] - s * c[j][s - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = c[i][k];
    return w;
}

double check_moment_identity(const PhantomSpec& f, int k, const std::vector<std::array<double, 2>>& points, double h) {
    if (k < 1 || k > 4) throw std::invalid_argument("check_moment_identity: k must be in [1, 4]");
    const Weight unit = constant_weight();
    const std::vector<double> w = central_difference_weights(k, 5);
    const double scale = std::pow(h, k);
    double worst = 0.0;
    for (const auto& [xi, eta] : points) {
        auto d_xi_k = [&](double e) {
            double s = 0.0;
            for (int i = 0; i < 11; ++i) s += w[i] * radon(f, unit, xi + (i - 5) * h, e, 1e-14);
            return s / scale;
        };
        const double kf = factorial(k - 1);
        auto integrand = [&](double e) { return std::pow(eta - e, k - 1) / kf * d_xi_k(e); };
        // Every line of the stencil misses the support below this level.
        const double reach = std::abs(xi) + 5 * h;
        const double lower = -reach * reach / (4.0 * f.support_c);
        double lhs = 0.0;
        if (eta > lower) lhs = adaptive_integrate<double>(integrand, lower, eta, 1e-12, 1e-10).value;
        const double rhs = radon_moment(f, unit, k, xi, eta, 1e-14);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

double check_transport_identity(const PhantomSpec& f, const Weight& m, const AnalyticField& a, const AnalyticField& b,
                                const std::vector<std::array<double, 2>>& points, double h) {
    static const double d1[5] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
    double worst = 0.0;
    for (const auto& [xi, eta] : points) {
        double d_xi = 0.0, d_eta = 0.0;
        for (int i = 0; i < 5; ++i) {
            if (d1[i] == 0.0) continue;
            d_xi += d1[i] * radon_moment(f, m, 0, xi + (i - 2) * h, eta, 1e-14);
            d_eta += d1[i] * radon_moment(f, m, 1, xi, eta + (i - 2) * h, 1e-14);
        }
        d_xi /= h;
        d_eta /= h;
        const double r0 = radon_moment(f, m, 0, xi, eta, 1e-14);
        const double r1 = radon_moment(f, m, 1, xi, eta, 1e-14);
        const double res = d_xi - b.value(xi, eta) * r0 - d_eta - a.value(xi, eta) * r1;
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

}  // namespace lwrt
