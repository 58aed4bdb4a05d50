#include "lwrt/weights.hpp"

#include <cmath>
#include <stdexcept>

#include "lwrt/quadrature.hpp"

namespace lwrt {

namespace {

const std::vector<std::string> kFieldVars = {"xi", "eta"};
const std::vector<std::string> kProfileVars = {"x", "s"};

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double u = std::exp(-1.0 / t), v = std::exp(-1.0 / (1.0 - t));
    return u / (u + v);
}

}  // namespace

AnalyticField::AnalyticField() : expr_(Expression::constant(0.0, kFieldVars)) {}

AnalyticField::AnalyticField(const std::string& expression, int jet_order)
    : expr_(Expression::parse(expression, kFieldVars)), jet_order_(jet_order) {
    if (jet_order < 0 || jet_order > Jet::kMaxOrder)
        throw std::invalid_argument("field jet_order out of range");
}

AnalyticField AnalyticField::zero() { return AnalyticField(); }

AnalyticField AnalyticField::constant(double value) {
    AnalyticField f;
    f.expr_ = Expression::constant(value, kFieldVars);
    return f;
}

AnalyticField& AnalyticField::with_window(double gamma, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("field window width must be positive");
    windowed_ = true;
    window_gamma_ = gamma;
    window_width_ = width;
    return *this;
}

double AnalyticField::window(double eta) const {
    return windowed_ ? smooth_step((eta + window_gamma_) / window_width_) : 1.0;
}

double AnalyticField::value(double xi, double eta) const {
    const double w = window(eta);
    if (w == 0.0) return 0.0;
    const double v[2] = {xi, eta};
    return w * expr_.evaluate(std::span<const double>(v, 2));
}

Jet AnalyticField::jet(double xi, double eta, int order) const {
    if (order > jet_order_)
        throw std::invalid_argument("field '" + expr_.text() + "': jet order " + std::to_string(order) +
                                    " exceeds declared jet_order " + std::to_string(jet_order_));
    const double w = window(eta);
    if (w == 0.0) return Jet(order, 0.0);
    const Jet v[2] = {Jet::variable(order, xi), Jet::constant(order, eta)};
    Jet r = expr_.evaluate(std::span<const Jet>(v, 2));
    r *= w;
    return r;
}

std::optional<double> AnalyticField::constant_value() const {
    if (windowed_ || !expr_.is_constant()) return std::nullopt;
    return value(0.0, 0.0);
}

Jet field_antiderivative_jet(const AnalyticField& a, double xi, double eta, double gamma, int order, double tol) {
    if (eta > gamma * (1 + 1e-12) + 1e-12)
        throw std::invalid_argument("field_antiderivative_eta: eta must not exceed gamma");
    if (auto c = a.constant_value()) {
        Jet r(order, *c * (eta + gamma));
        return r;
    }
    auto integrand = [&](double t) { return a.jet(xi, t, order); };
    auto res = adaptive_integrate<Jet>(integrand, -gamma, eta, tol, tol);
    if (!res.converged)
        throw std::runtime_error("field_antiderivative_eta: quadrature did not converge (error " +
                                 std::to_string(res.error) + ")");
    return res.value;
}

double field_antiderivative_eta(const AnalyticField& a, double xi, double eta, double gamma, int n) {
    return field_antiderivative_jet(a, xi, eta, gamma, n).derivative(n);
}

std::string to_string(WeightKind kind) {
    switch (kind) {
        case WeightKind::Constant: return "constant";
        case WeightKind::FromAB: return "from_ab";
        case WeightKind::Attenuation: return "attenuation";
    }
    return "unknown";
}

WeightKind weight_kind_from_string(const std::string& name) {
    if (name == "constant") return WeightKind::Constant;
    if (name == "from_ab") return WeightKind::FromAB;
    if (name == "attenuation") return WeightKind::Attenuation;
    throw std::invalid_argument("unknown weight kind '" + name + "'");
}

std::string Weight::describe() const {
    switch (kind) {
        case WeightKind::Constant: return "constant";
        case WeightKind::FromAB: return "from_ab(a=" + a.text() + ", b=" + b.text() + ")";
        case WeightKind::Attenuation: return "attenuation";
    }
    return "unknown";
}

Weight constant_weight(double value) {
    if (!(value > 0.0)) throw std::invalid_argument("constant weight must be positive");
    Weight w;
    w.constant_value = value;
    return w;
}

Weight weight_from_ab(const AnalyticField& a, const AnalyticField& b, const std::string& m0) {
    Weight w;
    w.kind = WeightKind::FromAB;
    w.a = a;
    w.b = b;
    w.m0 = Expression::parse(m0, kProfileVars);
    for (double x = -1.0; x <= 1.0; x += 0.125)
        for (double s = -2.0; s <= 2.0; s += 0.125) {
            const double v[2] = {x, s};
            if (!(w.m0.evaluate(std::span<const double>(v, 2)) > 0.0))
                throw std::invalid_argument("weight.m0 must be positive on [-1,1]x[-2,2]");
        }
    return w;
}

Weight attenuation_weight(const PhantomSpec& mu) {
    validate_phantom(mu);
    Weight w;
    w.kind = WeightKind::Attenuation;
    w.mu = mu;
    return w;
}

double eval_weight(const Weight& w, double x, double xi, double eta) {
    switch (w.kind) {
        case WeightKind::Constant: return w.constant_value;
        case WeightKind::FromAB: {
            const double v[2] = {x, eta + x * xi};
            const double base = w.m0.evaluate(std::span<const double>(v, 2));
            const auto ca = w.a.constant_value(), cb = w.b.constant_value();
            if (ca && cb) return base * std::exp(xi * (x * *ca + *cb));
            auto integrand = [&](double s) {
                const double e = eta + x * (xi - s);
                return x * w.a.value(s, e) + w.b.value(s, e);
            };
            auto res = adaptive_integrate<double>(integrand, 0.0, xi, 1e-14, w.quad_tol);
            if (!res.converged) throw std::runtime_error("weight_from_ab: characteristic quadrature did not converge");
            return base * std::exp(res.value);
        }
        case WeightKind::Attenuation: {
            const PhantomSpec& mu = *w.mu;
            const Box box = phantom_bounding_box(mu);
            const double upper = box.x_max;
            if (x >= upper) return 1.0;
            // Chord of the line y = xi t + eta with the parabola region.
            const double c = mu.support_c;
            const double disc = xi * xi + 4.0 * c * eta;
            if (disc <= 0.0) return 1.0;
            const double r = std::sqrt(disc);
            const double lo = std::max(x, (xi - r) / (2.0 * c)), hi = std::min(upper, (xi + r) / (2.0 * c));
            if (hi <= lo) return 1.0;
            auto integrand = [&](double t) { return eval_phantom(mu, t, xi * t + eta); };
            auto res = adaptive_integrate<double>(integrand, lo, hi, 1e-14, w.quad_tol);
            if (!res.converged) throw std::runtime_error("attenuation_weight: ray quadrature did not converge");
            return std::exp(-res.value);
        }
    }
    return 1.0;
}

double pde_residual(const Weight& m, const AnalyticField& a, const AnalyticField& b,
                    const std::vector<std::array<double, 3>>& points, double h) {
    double worst = 0.0;
    for (const auto& [x, xi, eta] : points) {
        const double m_xi = (eval_weight(m, x, xi + h, eta) - eval_weight(m, x, xi - h, eta)) / (2 * h);
        const double m_eta = (eval_weight(m, x, xi, eta + h) - eval_weight(m, x, xi, eta - h)) / (2 * h);
        const double mv = eval_weight(m, x, xi, eta);
        const double r = m_xi - x * m_eta - (x * a.value(xi, eta) + b.value(xi, eta)) * mv;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

std::function<double(double, double)> corrected_weight(const Weight& m, double gamma) {
    if (m.kind == WeightKind::Constant) {
        const double c = m.constant_value;
        return [c](double, double) { return c; };
    }
    return [m, gamma](double x, double y) {
        if (x == 0.0) return eval_weight(m, 0.0, 0.0, gamma);
        return eval_weight(m, x, (y - gamma) / x, gamma);
    };
}

}  // namespace lwrt
