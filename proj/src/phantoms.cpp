#include "lwrt/phantoms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace lwrt {

std::string to_string(PhantomKind kind) {
    switch (kind) {
        case PhantomKind::SmoothBump: return "smooth-bump";
        case PhantomKind::PolynomialTimesBump: return "polynomial-times-bump";
        case PhantomKind::Oscillatory: return "oscillatory";
        case PhantomKind::Tabulated: return "tabulated";
    }
    return "unknown";
}

PhantomKind phantom_kind_from_string(const std::string& name) {
    if (name == "smooth-bump") return PhantomKind::SmoothBump;
    if (name == "polynomial-times-bump") return PhantomKind::PolynomialTimesBump;
    if (name == "oscillatory") return PhantomKind::Oscillatory;
    if (name == "tabulated") return PhantomKind::Tabulated;
    throw std::invalid_argument("unknown phantom kind '" + name + "'");
}

void validate_phantom(const PhantomSpec& p) {
    if (!(p.holder_alpha > 0.0 && p.holder_alpha <= 1.0)) throw std::invalid_argument("phantom.holder_alpha must be in (0,1]");
    if (!(p.holder_bound > 0.0)) throw std::invalid_argument("phantom.holder_bound must be positive");
    if (!(p.support_c >= 1.0)) throw std::invalid_argument("phantom.support_c must be >= 1");
    if (p.kind == PhantomKind::Tabulated) {
        if (!p.table) throw std::invalid_argument("phantom.table missing for tabulated phantom");
        if (p.table->values.size() != static_cast<std::size_t>(p.table->x.n) * p.table->y.n)
            throw std::invalid_argument("phantom.table has inconsistent size");
        return;
    }
    if (!(p.width > 0.0)) throw std::invalid_argument("phantom.width must be positive");
    if (p.center_y - p.support_c * p.center_x * p.center_x <= 0.0)
        throw std::invalid_argument("phantom.center must lie inside the parabola y > c x^2");
    if (p.kind == PhantomKind::Oscillatory && !(p.lambda > 0.0))
        throw std::invalid_argument("phantom.lambda must be positive");
}

namespace {

// Bump times parabola cutoff, normalized to `amplitude` at the center.
double bump_value(const PhantomSpec& p, double x, double y) {
    const double s = y - p.support_c * x * x;
    if (s <= 0.0) return 0.0;
    const double dx = (x - p.center_x) / p.width, dy = (y - p.center_y) / p.width;
    const double r2 = dx * dx + dy * dy;
    if (r2 >= 1.0) return 0.0;
    const double sc = p.center_y - p.support_c * p.center_x * p.center_x;
    return p.amplitude * std::exp(1.0 - 1.0 / (1.0 - r2) + 1.0 / sc - 1.0 / s);
}

double tabulated_value(const TabulatedGrid& t, double x, double y) {
    if (x < t.x.min || x > t.x.max || y < t.y.min || y > t.y.max) return 0.0;
    const double fx = (x - t.x.min) / t.x.step(), fy = (y - t.y.min) / t.y.step();
    const int ix = std::min(static_cast<int>(fx), t.x.n - 2);
    const int iy = std::min(static_cast<int>(fy), t.y.n - 2);
    const double u = fx - ix, v = fy - iy;
    return (1 - u) * (1 - v) * t.at(ix, iy) + u * (1 - v) * t.at(ix + 1, iy) + (1 - u) * v * t.at(ix, iy + 1) +
           u * v * t.at(ix + 1, iy + 1);
}

}  // namespace

double eval_phantom(const PhantomSpec& p, double x, double y) {
    if (y < p.support_c * x * x) return 0.0;
    switch (p.kind) {
        case PhantomKind::SmoothBump: return bump_value(p, x, y);
        case PhantomKind::PolynomialTimesBump: {
            const double b = bump_value(p, x, y);
            if (b == 0.0) return 0.0;
            const double v[2] = {x, y};
            return b * p.polynomial.evaluate(std::span<const double>(v, 2));
        }
        case PhantomKind::Oscillatory: return bump_value(p, x, y) * std::cos(p.lambda * x) / p.lambda;
        case PhantomKind::Tabulated: return tabulated_value(*p.table, x, y);
    }
    return 0.0;
}

PhantomSpec smooth_bump(double cx, double cy, double width, double amplitude, double holder_bound,
                        double support_c) {
    PhantomSpec p;
    p.kind = PhantomKind::SmoothBump;
    p.center_x = cx;
    p.center_y = cy;
    p.width = width;
    p.amplitude = amplitude;
    p.holder_bound = holder_bound;
    p.support_c = support_c;
    validate_phantom(p);
    return p;
}

PhantomSpec default_bump() { return smooth_bump(0.0, 0.45, 0.35, 1.0, 14.0); }

PhantomSpec polynomial_times_bump(const PhantomSpec& bump, const std::string& polynomial, double holder_bound) {
    PhantomSpec p = bump;
    p.kind = PhantomKind::PolynomialTimesBump;
    p.polynomial = Expression::parse(polynomial, {"x", "y"});
    p.holder_bound = holder_bound;
    validate_phantom(p);
    return p;
}

PhantomSpec tabulated_phantom(std::shared_ptr<const TabulatedGrid> table, double support_c, double holder_alpha,
                              double holder_bound) {
    PhantomSpec p;
    p.kind = PhantomKind::Tabulated;
    p.table = std::move(table);
    p.support_c = support_c;
    p.holder_alpha = holder_alpha;
    p.holder_bound = holder_bound;
    validate_phantom(p);
    return p;
}

PhantomSpec oscillatory_phantom(const PhantomSpec& q, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("oscillatory_phantom: lambda must be positive");
    if (q.kind != PhantomKind::SmoothBump) throw std::invalid_argument("oscillatory_phantom: base must be a smooth bump");
    PhantomSpec p = q;
    p.kind = PhantomKind::Oscillatory;
    p.lambda = lambda;
    p.holder_alpha = 1.0;
    p.holder_bound = phantom_sup(q) + grid_gradient_bound(q) / lambda;
    return p;
}

Box phantom_bounding_box(const PhantomSpec& p) {
    if (p.kind == PhantomKind::Tabulated)
        return {p.table->x.min, p.table->x.max, std::max(p.table->y.min, 0.0), p.table->y.max};
    return {p.center_x - p.width, p.center_x + p.width, std::max(p.center_y - p.width, 0.0), p.center_y + p.width};
}

double holder_seminorm_estimate(const PhantomSpec& p, double alpha, int budget, std::uint64_t seed) {
    if (budget < 2) throw std::invalid_argument("holder_seminorm_estimate: budget must be >= 2");
    const Box b = phantom_bounding_box(p);
    const double diam = std::hypot(b.x_max - b.x_min, b.y_max - b.y_min);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(b.x_min, b.x_max), uy(b.y_min, b.y_max), angle(0.0, 6.283185307179586);
    std::uniform_real_distribution<double> log_scale(std::log(1e-4), std::log(0.5));
    double best = 0.0;
    for (int i = 0; i < budget; ++i) {
        const double x1 = ux(rng), y1 = uy(rng);
        double x2, y2;
        if (i % 2 == 0) {
            // Local pair: catches gradient-scale quotients.
            const double r = std::exp(log_scale(rng)) * diam, t = angle(rng);
            x2 = x1 + r * std::cos(t);
            y2 = y1 + r * std::sin(t);
        } else {
            x2 = ux(rng);
            y2 = uy(rng);
        }
        const double d = std::hypot(x2 - x1, y2 - y1);
        if (d == 0.0) continue;
        const double q = std::abs(eval_phantom(p, x1, y1) - eval_phantom(p, x2, y2)) / std::pow(d, alpha);
        best = std::max(best, q);
    }
    return best;
}

double phantom_sup(const PhantomSpec& p, int n) {
    const Box b = phantom_bounding_box(p);
    double best = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = b.x_min + (b.x_max - b.x_min) * i / (n - 1);
            const double y = b.y_min + (b.y_max - b.y_min) * j / (n - 1);
            best = std::max(best, std::abs(eval_phantom(p, x, y)));
        }
    return best;
}

double grid_gradient_bound(const PhantomSpec& p, int n) {
    const Box b = phantom_bounding_box(p);
    const double h = 1e-6 * std::max(b.x_max - b.x_min, b.y_max - b.y_min);
    double best = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = b.x_min + (b.x_max - b.x_min) * i / (n - 1);
            const double y = b.y_min + (b.y_max - b.y_min) * j / (n - 1);
            const double gx = (eval_phantom(p, x + h, y) - eval_phantom(p, x - h, y)) / (2 * h);
            const double gy = (eval_phantom(p, x, y + h) - eval_phantom(p, x, y - h)) / (2 * h);
            best = std::max(best, std::hypot(gx, gy));
        }
    return best;
}

}  // namespace lwrt
