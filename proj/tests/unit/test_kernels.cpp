#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "lwrt/kernels.hpp"

using namespace lwrt;

namespace {

std::vector<KernelSample> grid_samples() {
    std::vector<KernelSample> s;
    for (double x : {-0.3, 0.0, 0.3})
        for (double e : {-0.3, 0.0, 0.3})
            for (double ep : {-0.3, -0.1, 0.1}) s.push_back({x, e, ep});
    return s;
}

Sinogram filled(UniformAxis xi, UniformAxis eta, const std::function<double(double, double)>& g) {
    Sinogram s(xi, eta);
    for (int i = 0; i < xi.n; ++i)
        for (int j = 0; j < eta.n; ++j) s.at(i, j) = g(xi.node(i), eta.node(j));
    return s;
}

double fact(int n) { return n <= 1 ? 1.0 : n * fact(n - 1); }

}  // namespace

TEST_CASE("base kernels") {
    const auto z = base_kernels(AnalyticField::zero(), AnalyticField::zero(), 0.3, 8);
    CHECK(z.P.value(0.1, 0.2, -0.1) == doctest::Approx(1.0));
    CHECK(z.Q.value(0.1, 0.2, -0.1) == 0.0);

    const auto one = base_kernels(AnalyticField::constant(1.0), AnalyticField::zero(), 0.3, 8);
    const Jet p1 = one.P(0.1, 0.2, -0.1, 2);
    CHECK(p1[0] == doctest::Approx(std::exp(-0.3)).epsilon(1e-14));
    CHECK(std::abs(p1[1]) <= 1e-15);

    const auto xi = base_kernels(AnalyticField("xi"), AnalyticField::zero(), 0.3, 8);
    const Jet p = xi.P(0.2, 0.25, -0.15, 2);
    CHECK(p[0] == doctest::Approx(std::exp(0.2 * (-0.4))).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(-0.4 * std::exp(0.2 * (-0.4))).epsilon(1e-13));

    CHECK_THROWS(base_kernels(AnalyticField("xi", 4), AnalyticField::zero(), 0.3, 8));
}

TEST_CASE("composition") {
    const auto one = constant_kernel(1.0, 2);
    const auto r = compose(one, one);
    CHECK(r.value(0.0, 0.4, -0.1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r.factor_exponent == 1);

    KernelJet lin;
    lin.max_order = 2;
    lin.factor_exponent = 1;
    lin.evaluator = [](double, double e, double ep, int order) { return Jet(order, e - ep); };
    const auto r2 = compose(lin, one);
    CHECK(r2.value(0.0, 0.4, -0.1) == doctest::Approx(0.125).epsilon(1e-14));

    // Smooth kernels against a midpoint rule.
    KernelJet p, q;
    p.max_order = q.max_order = 1;
    p.evaluator = [](double x, double e, double v, int order) { return Jet(order, std::cos(e * v + x)); };
    q.evaluator = [](double x, double v, double ep, int order) { return Jet(order, std::exp(v - 2 * ep) * (1 + x)); };
    const double x = 0.1, e = 0.35, ep = -0.2;
    const int n = 100000;
    double s = 0;
    for (int i = 0; i < n; ++i) {
        const double v = ep + (i + 0.5) * (e - ep) / n;
        s += std::cos(e * v + x) * std::exp(v - 2 * ep) * (1 + x);
    }
    CHECK(compose(p, q).value(x, e, ep) == doctest::Approx(s * (e - ep) / n).epsilon(1e-6));
}

TEST_CASE("families for vanishing fields") {
    const auto base = base_kernels(AnalyticField::zero(), AnalyticField::zero(), 0.3, 8);
    for (int k = 1; k <= 4; ++k) {
        const auto F = sjk_family(base, k);
        const double d = 0.45;
        for (int j = 0; j <= k; ++j) {
            const double v = F.S[j].value(0.05, 0.2, 0.2 - d);
            if (j == k)
                CHECK(v == doctest::Approx(std::pow(d, k - 1) / fact(k - 1)).epsilon(1e-12));
            else
                CHECK(std::abs(v) <= 1e-14);
        }
    }
}

TEST_CASE("recursion against nested quadrature") {
    const auto base = base_kernels(AnalyticField("xi"), AnalyticField::zero(), 0.3, 24);
    const auto F = sjk_family(base, 2);
    CHECK(F.S[0].value(0.1, 0.2, -0.25) == doctest::Approx(0.043557635266020615).epsilon(1e-12));
    CHECK(F.S[1].value(0.1, 0.2, -0.25) == doctest::Approx(0.29038423510680410).epsilon(1e-12));
    CHECK(F.S[2].value(0.1, 0.2, -0.25) == doctest::Approx(0.43019886682489496).epsilon(1e-12));

    const auto sc = base_kernels(AnalyticField("0.5*sin(xi)"), AnalyticField("0.5*cos(eta)"), 0.3, 24);
    for (int k = 1; k <= 3; ++k) {
        const auto A = sjk_family(sc, k);
        const auto B = sjk_family_nested(sc, k, 16);
        for (int j = 0; j <= k; ++j) {
            const double a = A.S[j].value(0.1, 0.2, -0.25), b = B.S[j].value(0.1, 0.2, -0.25);
            CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)));
        }
    }
}

TEST_CASE("kernels vanish to the expected order on the diagonal") {
    const auto base = base_kernels(AnalyticField("0.5*sin(xi)"), AnalyticField("0.5*cos(eta)"), 0.3, 24);
    const int k = 3;
    const auto F = sjk_family(base, k);
    for (int j = 0; j <= k; ++j) {
        std::vector<double> q;
        for (double d = 0.2; d > 1e-3; d /= 2) q.push_back(std::abs(F.S[j].value(0.1, 0.2, 0.2 - d)) / std::pow(d, k - 1));
        const double top = *std::max_element(q.begin(), q.end());
        CHECK(q.back() <= 2 * top);
        CHECK(std::isfinite(top));
    }
}

TEST_CASE("bound certification") {
    const double beta = 1 + std::sqrt(3.0);
    const auto samples = grid_samples();
    const auto z = base_kernels(AnalyticField::zero(), AnalyticField::zero(), 0.3, 24);
    const double Cz = std::max(1.0, certify_base_constant(z, samples, 8));
    CHECK(verify_kernel_bounds(z, 4, Cz, beta, samples).max_ratio <= 1.0);

    const auto xi = base_kernels(AnalyticField("xi"), AnalyticField::zero(), 0.3, 24);
    const double C1 = certify_base_constant(xi, samples, 20);
    CHECK(C1 == doctest::Approx(1.197).epsilon(2e-3));
    CHECK(verify_kernel_bounds(xi, 4, C1, beta, samples).max_ratio <= 1.0);
}

TEST_CASE("applying a kernel to data") {
    const UniformAxis xi{-0.2, 0.2, 5}, eta{-0.4, 0.4, 161};
    const auto zero = filled(xi, eta, [](double, double) { return 0.0; });
    const auto ones = filled(xi, eta, [](double, double) { return 1.0; });
    const auto one = constant_kernel(1.0, 0);
    CHECK(apply_kernel(one, zero, 0.1, 0.2, 0.5) == 0.0);
    CHECK(apply_kernel(one, ones, 0.1, 0.2, 0.5) == doctest::Approx(0.6).epsilon(1e-13));

    KernelJet h2;
    h2.max_order = 0;
    h2.evaluator = [](double, double e, double ep, int order) { return Jet(order, e - ep); };
    const auto g = filled(xi, eta, [](double x, double y) { return std::sin(2 * y + x) + y * y; });
    CHECK(apply_kernel(h2, g, 0.1, 0.3, 0.5, 8) == doctest::Approx(heaviside_convolution(g, 2, 0.1, 0.3, 8)).epsilon(1e-10));
}

TEST_CASE("commutator identity") {
    const std::vector<std::array<double, 2>> pts = {{0.1, 0.2}, {-0.2, 0.05}, {0.25, -0.1}};
    auto g = [](double x, double y) { return std::exp(x - y * y) * std::cos(x * y + 0.3); };
    CHECK(commutator_check(AnalyticField::zero(), AnalyticField::zero(), g, pts) <= 1e-6);
    CHECK(commutator_check(AnalyticField("xi"), AnalyticField("-eta"), g, pts) <= 1e-5);
    CHECK(commutator_check(AnalyticField::zero(), AnalyticField("eta"), g, pts) <= 1e-5);
    CHECK(commutator_check(AnalyticField("eta^2"), AnalyticField::zero(), g, pts) <= 1e-5);
}
