#include <cmath>
#include <random>

#include "doctest.h"
#include "lwrt/quadrature.hpp"
#include "lwrt/test_functions.hpp"

using namespace lwrt;

namespace {

// Composite Gauss on [-1, 1] split at the knots.
double integrate(const std::function<double(double)>& f, const TestFunction& tf) {
    std::vector<double> cuts = {-1.0};
    for (double k : tf.knots()) cuts.push_back(k);
    cuts.push_back(1.0);
    double s = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        for (int p = 0; p < 8; ++p) {
            const double a = cuts[i] + (cuts[i + 1] - cuts[i]) * p / 8.0;
            s += gauss_integrate(f, a, a + (cuts[i + 1] - cuts[i]) / 8.0, 24);
        }
    return s;
}

}  // namespace

TEST_CASE("hormander functions: mass, parity, support") {
    for (int N : {1, 2, 3, 5, 8, 13, 24}) {
        const auto tf = TestFunction::hormander(N);
        CHECK(integrate([&](double x) { return tf.value(x); }, tf) == doctest::Approx(1.0).epsilon(1e-10));
        for (double x : {0.05, 0.3, 0.61, 0.9}) {
            CHECK(tf.value(-x) == doctest::Approx(tf.value(x)).epsilon(1e-13));
            CHECK(tf.value(x) >= 0.0);
        }
        CHECK(tf.value(1.0) == 0.0);
        CHECK(tf.value(-1.2) == 0.0);
    }
    CHECK_THROWS(TestFunction::hormander(0));
    CHECK_THROWS(hormander_sequence(25, 24));
}

TEST_CASE("hormander values") {
    const auto h1 = TestFunction::hormander(1);
    CHECK(h1.value(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(h1.value(0.3) == doctest::Approx(0.82).epsilon(1e-14));
    CHECK(h1.value(0.7) == doctest::Approx(0.18).epsilon(1e-14));
    CHECK(h1.derivative(1, 0.3) == doctest::Approx(-1.2).epsilon(1e-14));
    const auto h2 = TestFunction::hormander(2);
    CHECK(h2.value(0.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(h2.value(0.3) == doctest::Approx(0.8293333333333333).epsilon(1e-13));
    CHECK(h2.value(0.7) == doctest::Approx(0.072).epsilon(1e-13));
    CHECK(h2.derivative(1, 0.3) == doctest::Approx(-2.64).epsilon(1e-13));
}

TEST_CASE("derivatives") {
    const auto tf = TestFunction::hormander(4);
    CHECK(derivative(tf, 0)(0.37) == tf.value(0.37));
    CHECK(integrate(derivative(tf, 1), tf) == doctest::Approx(0.0).epsilon(1e-10));

    // Finite differences of phi itself.
    const auto t6 = TestFunction::hormander(6);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    const double h = 4e-4;
    int checked = 0;
    for (int i = 0; i < 50; ++i) {
        const double x = u(rng);
        const double fd = (-t6.value(x - 2 * h) + 2 * t6.value(x - h) - 2 * t6.value(x + h) + t6.value(x + 2 * h)) /
                          (2 * h * h * h);
        const double exact = t6.derivative(3, x);
        if (std::abs(exact) < 1e-2) continue;
        // the stencil must not straddle a knot
        bool near = false;
        for (double k : t6.knots()) near = near || std::abs(x - k) < 2.5 * h;
        if (near) continue;
        ++checked;
        CHECK(fd == doctest::Approx(exact).epsilon(1e-4));
    }
    CHECK(checked > 30);
    CHECK_THROWS(t6.derivative(7, 0.1));
}

TEST_CASE("gevrey bump") {
    const auto g = gevrey_bump(2.0);
    CHECK(g.value(1.0) == 0.0);
    CHECK(g.value(-1.0) == 0.0);
    CHECK(g.value(0.0) > 0.0);
    CHECK(integrate([&](double x) { return g.value(x); }, g) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(g.value(0.4) == doctest::Approx(g.value(-0.4)).epsilon(1e-14));
    CHECK_THROWS(gevrey_bump(1.0));

    // Twelfth derivatives against an arbitrary-precision reference.
    CHECK(TestFunction::gevrey(2.0).derivative(12, 0.0) == doctest::Approx(-610130345.7849191).epsilon(1e-9));
    CHECK(TestFunction::gevrey(1.5).derivative(12, 0.0) == doctest::Approx(291654345808393.44).epsilon(1e-9));
    CHECK(TestFunction::gevrey(3.0).derivative(12, 0.0) == doctest::Approx(18545612.838001397).epsilon(1e-9));
    CHECK(TestFunction::gevrey(2.0).derivative(12, 0.5) == doctest::Approx(-158685375826.38318).epsilon(1e-9));
    CHECK(TestFunction::gevrey(3.0).derivative(12, 0.5) == doctest::Approx(24604687651.357918).epsilon(1e-9));
}

TEST_CASE("dilation") {
    const auto tf = TestFunction::hormander(5);
    const auto d1 = dilate(tf, 1.0);
    for (double x : {-0.7, 0.0, 0.2}) CHECK(d1(x) == tf.value(x));
    const auto d = dilate(tf, 0.1);
    double s = 0;
    for (int p = 0; p < 200; ++p) s += gauss_integrate(d, -0.1 + p * 0.001, -0.1 + (p + 1) * 0.001, 16);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
    double sup1 = 0, sups = 0;
    for (int i = 0; i <= 4000; ++i) {
        const double x = -1 + i / 2000.0;
        sup1 = std::max(sup1, std::abs(tf.derivative(1, x)));
        sups = std::max(sups, std::abs(dilated_derivative(tf, 0.25, 1, 0.25 * x)));
    }
    CHECK(sups == doctest::Approx(sup1 / (0.25 * 0.25)).epsilon(1e-12));
}

TEST_CASE("derivative bound certification") {
    auto h1 = TestFunction::hormander(1);
    const auto r1 = verify_derivative_bounds(h1, 1);
    CHECK(r1.certified_constant >= 0.5);
    CHECK(r1.certified_constant == doctest::Approx(1.41421).epsilon(1e-4));
    CHECK(h1.certified_constant() == r1.certified_constant);

    for (int N : {8, 12}) {
        auto tf = TestFunction::hormander(N);
        const auto r = verify_derivative_bounds(tf, N);
        for (double q : r.ratios) CHECK(q <= 1.0);
    }
    auto h8 = TestFunction::hormander(8);
    CHECK(verify_derivative_bounds(h8, 8).certified_constant == doctest::Approx(1.67218).epsilon(1e-4));

    auto g2 = TestFunction::gevrey(2.0);
    const auto rg = verify_derivative_bounds(g2, 10);
    for (double q : rg.ratios) CHECK(q <= 1.0);

    auto g15 = TestFunction::gevrey(1.5), g3 = TestFunction::gevrey(3.0);
    const double c15 = verify_derivative_bounds(g15, 12).certified_constant;
    const double c3 = verify_derivative_bounds(g3, 12).certified_constant;
    CHECK(c3 <= c15);
    CHECK(c15 == doctest::Approx(4.20985).epsilon(1e-4));
}
