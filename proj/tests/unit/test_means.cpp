#include <cmath>
#include <memory>

#include "doctest.h"
#include "lwrt/means.hpp"

using namespace lwrt;

namespace {

PhantomSpec linear_in_y() {
    auto t = std::make_shared<TabulatedGrid>();
    t->x = {-1, 1, 21};
    t->y = {0, 2, 21};
    for (int i = 0; i < t->x.n; ++i)
        for (int j = 0; j < t->y.n; ++j) t->values.push_back(t->y.node(j));
    return tabulated_phantom(t, 1.0, 1.0, 1.0);
}

}  // namespace

TEST_CASE("support radius and effective gamma") {
    CHECK(mean_support_radius(0.2, 0.3) == doctest::Approx((0.2 + std::sqrt(0.04 + 1.2)) / 2));
    CHECK(effective_gamma(0.2, 0.3) == 0.3);
    CHECK(effective_gamma(0.4, 0.01) == doctest::Approx(0.04));
}

TEST_CASE("mean of a linear function is its value at gamma") {
    const auto f = linear_in_y();
    const auto phi = TestFunction::hormander(4);
    for (double x : {-0.5, -0.2, 0.0, 0.1, 0.45})
        CHECK(mean_value(f, nullptr, phi, 0.2, 0.5, x) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("mean of zero") {
    PhantomSpec z = default_bump();
    z.amplitude = 0.0;
    const auto phi = TestFunction::hormander(4);
    CHECK(mean_value(z, nullptr, phi, 0.2, 0.3, 0.1) == 0.0);
    const auto gap = convergence_gap(z, nullptr, phi, 0.1, 0.3, chebyshev_grid(65), 14.0);
    CHECK(gap.gap == 0.0);
    CHECK(gap.max_ratio == 0.0);
}

TEST_CASE("mean against a midpoint rule") {
    const auto f = smooth_bump(0.1, 0.45, 0.35, 1, 14);
    const auto phi = TestFunction::hormander(6);
    const double eps = 0.05, gamma = 0.3;
    const int n = 100000;
    for (int i = 0; i < 20; ++i) {
        const double x = -0.55 + i * 0.06;
        double s = 0;
        for (int k = 0; k < n; ++k) {
            const double t = -1 + (k + 0.5) * 2.0 / n;
            s += eval_phantom(f, x, gamma + eps * std::abs(x) * t) * phi.value(t);
        }
        s *= 2.0 / n;
        const double v = mean_value(f, nullptr, phi, eps, gamma, x);
        if (std::abs(s) < 1e-12)
            CHECK(std::abs(v) <= 1e-12);
        else
            CHECK(v == doctest::Approx(s).epsilon(1e-6));
    }
}

TEST_CASE("mean value property and support") {
    const auto f = default_bump();
    const auto phi = TestFunction::hormander(5);
    const double eps = 0.2, gamma = 0.3;
    const auto prof = mean_profile(f, nullptr, phi, eps, gamma, chebyshev_grid(129));
    const double r = mean_support_radius(eps, gamma);
    for (std::size_t i = 0; i < prof.x.size(); ++i) {
        const double x = prof.x[i];
        if (std::abs(x) > r) CHECK(prof.values[i] == 0.0);
        double lo = 1e300, hi = -1e300;
        for (int k = 0; k <= 200; ++k) {
            const double v = eval_phantom(f, x, gamma + eps * std::abs(x) * (-1 + k / 100.0));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(prof.values[i] >= lo - 1e-12);
        CHECK(prof.values[i] <= hi + 1e-12);
    }
}

TEST_CASE("convergence gap") {
    const auto f = default_bump();
    const auto phi = TestFunction::hormander(4);
    const auto grid = chebyshev_grid(129);
    double prev = 0;
    for (double eps : {0.1, 0.05, 0.025}) {
        const auto g = convergence_gap(f, nullptr, phi, eps, 0.3, grid, f.holder_bound);
        CHECK(g.max_ratio <= 1.0);
        if (prev > 0) {
            CHECK(prev / g.gap > 1.6);
            CHECK(prev / g.gap < 4.5);
        }
        prev = g.gap;
    }
}

TEST_CASE("holder quotient of the mean") {
    MeanProfile c;
    c.x = chebyshev_grid(33);
    c.values.assign(c.x.size(), 0.7);
    CHECK(holder_check_of_mean(c, 1.0) == 0.0);

    const auto phi = TestFunction::hormander(4);
    const auto grid = chebyshev_grid(257);
    const auto f = default_bump();
    const auto m1 = mean_profile(f, nullptr, phi, 0.2, 0.3, grid);
    const double q1 = holder_check_of_mean(m1, 1.0);
    CHECK(q1 <= std::sqrt(2.0) * f.holder_bound);
    const auto m2 = mean_profile(smooth_bump(0.0, 0.45, 0.35, 2.0, 28), nullptr, phi, 0.2, 0.3, grid);
    CHECK(holder_check_of_mean(m2, 1.0) == doctest::Approx(2 * q1).epsilon(1e-12));
}

TEST_CASE("weighted means use the corrected weight") {
    const auto f = smooth_bump(0.1, 0.45, 0.35, 1, 14);
    const auto phi = TestFunction::hormander(4);
    const auto one = constant_weight();
    CHECK(mean_value(f, &one, phi, 0.2, 0.3, 0.15) ==
          doctest::Approx(mean_value(f, nullptr, phi, 0.2, 0.3, 0.15)).epsilon(1e-14));
    const auto wb = weight_from_ab(AnalyticField::zero(), AnalyticField::constant(1.0));
    const auto m = corrected_weight(wb, 0.3);
    const double x = 0.15, eps = 0.2, gamma = 0.3;
    double s = 0;
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
        const double t = -1 + (k + 0.5) * 2.0 / n, y = gamma + eps * x * t;
        s += eval_phantom(f, x, y) * m(x, y) * phi.value(t);
    }
    CHECK(mean_value(f, &wb, phi, eps, gamma, x) == doctest::Approx(s * 2.0 / n).epsilon(1e-6));
}

TEST_CASE("moments of the mean") {
    const auto f = smooth_bump(0.1, 0.45, 0.35, 1, 14);
    const auto phi = TestFunction::hormander(4);
    const auto mm = mean_moments(f, nullptr, phi, 0.2, 0.3, 3);
    const double r = mean_support_radius(0.2, 0.3);
    double s = 0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double x = -r + (k + 0.5) * 2 * r / n;
        s += x * x * mean_value(f, nullptr, phi, 0.2, 0.3, x);
    }
    CHECK(mm[2] == doctest::Approx(s * 2 * r / n).epsilon(1e-6));
    CHECK(mean_l2_distance(f, nullptr, phi, 0.2, 0.3, [&](double x) { return mean_value(f, nullptr, phi, 0.2, 0.3, x); }) <=
          1e-12);
}
