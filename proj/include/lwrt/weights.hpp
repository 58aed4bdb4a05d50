#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lwrt/expression.hpp"
#include "lwrt/jet.hpp"
#include "lwrt/phantoms.hpp"

namespace lwrt {

// Closed-form field c(xi, eta) with exact xi-jets up to jet_order.  With a
// window, the field is multiplied by a smooth step that vanishes for
// eta <= -window_gamma and equals 1 for eta >= -window_gamma + window_width.
class AnalyticField {
public:
    AnalyticField();
    explicit AnalyticField(const std::string& expression, int jet_order = 24);
    static AnalyticField zero();
    static AnalyticField constant(double value);

    AnalyticField& with_window(double gamma, double width);

    double value(double xi, double eta) const;
    Jet jet(double xi, double eta, int order) const;

    int jet_order() const { return jet_order_; }
    bool is_zero() const { return expr_.is_constant() && value(0.0, 0.0) == 0.0 && !windowed_; }
    // Constant in both variables, unwindowed.
    std::optional<double> constant_value() const;
    bool windowed() const { return windowed_; }
    const std::string& text() const { return expr_.text(); }

private:
    double window(double eta) const;

    Expression expr_;
    int jet_order_ = 24;
    bool windowed_ = false;
    double window_gamma_ = 0.0;
    double window_width_ = 0.0;
};

// A(xi, eta) = int_{-gamma}^{eta} a(xi, t) dt as a xi-jet (adaptive quadrature of jets).
Jet field_antiderivative_jet(const AnalyticField& a, double xi, double eta, double gamma, int order,
                             double tol = 1e-13);
// n-th xi-derivative of A.
double field_antiderivative_eta(const AnalyticField& a, double xi, double eta, double gamma, int n);

enum class WeightKind { Constant, FromAB, Attenuation };

std::string to_string(WeightKind kind);
WeightKind weight_kind_from_string(const std::string& name);

struct Weight {
    WeightKind kind = WeightKind::Constant;
    double constant_value = 1.0;
    AnalyticField a, b;
    Expression m0;  // over (x, s); empty means 1
    std::optional<PhantomSpec> mu;
    double quad_tol = 1e-13;

    std::string describe() const;
};

Weight constant_weight(double value = 1.0);
Weight weight_from_ab(const AnalyticField& a, const AnalyticField& b, const std::string& m0 = "1");
Weight attenuation_weight(const PhantomSpec& mu);

double eval_weight(const Weight& w, double x, double xi, double eta);

// max over points of |d_xi m - x d_eta m - (x a + b) m| by central differences.
double pde_residual(const Weight& m, const AnalyticField& a, const AnalyticField& b,
                    const std::vector<std::array<double, 3>>& points, double h = 1e-5);

// m_gamma(x, y) = m(x, (y - gamma)/x, gamma), with m(0, 0, gamma) at x = 0.
std::function<double(double, double)> corrected_weight(const Weight& m, double gamma);

}  // namespace lwrt
