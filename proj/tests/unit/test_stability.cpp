#include <cmath>
#include <random>

#include "doctest.h"
#include "lwrt/stability.hpp"

using namespace lwrt;

namespace {

Sinogram constant_sinogram(UniformAxis xi, UniformAxis eta, double v) {
    Sinogram s(xi, eta);
    for (double& x : s.values) x = v;
    return s;
}

SinogramGrid default_grid() {
    SinogramGrid g;
    g.xi = {-0.3, 0.3, 61};
    g.eta = {-0.4, 0.4, 401};
    return g;
}

}  // namespace

TEST_CASE("data norm") {
    const UniformAxis xi{-0.3, 0.3, 61}, eta{-0.4, 0.4, 81};
    CHECK(data_norm(constant_sinogram(xi, eta, 0.0), 0.1, 0.3) == 0.0);
    CHECK(data_norm(constant_sinogram(xi, eta, 1.0), 0.1, 0.3) == doctest::Approx(0.2).epsilon(1e-12));
    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 5; ++t) {
        Sinogram s(xi, eta);
        for (double& v : s.values) v = nd(rng);
        CHECK(data_norm(s, 0.1, 0.3) <= data_norm(s, 0.2, 0.3) + 1e-15);
    }
}

TEST_CASE("truncation order") {
    BoundConstants c;
    const double eps = 0.1;
    c.C = std::exp(1.0) * eps;
    CHECK(truncation_order(std::exp(-20.0) * c.M(), c, eps, ReconstructionMode::Analytic) == 19);
    CHECK(truncation_order(std::exp(-100.0) * c.M(), c, eps, ReconstructionMode::Gevrey) == 21);
    CHECK_THROWS_AS(truncation_order(c.M(), c, eps, ReconstructionMode::Analytic), std::domain_error);
    CHECK_THROWS_AS(truncation_order(2 * c.M(), c, eps, ReconstructionMode::Gevrey), std::domain_error);
}

TEST_CASE("bounds") {
    BoundConstants c;
    c.C = 2.0;
    const double H = 1e-8, eps = 0.2;
    const double L = std::log(c.C / eps), lg = std::log(c.M() / H);
    CHECK(main_bound(H, c, eps) == doctest::Approx(4 * c.M() * L / lg));
    CHECK(gevrey_mean_bound(H, c, eps) == doctest::Approx(4 * c.M() * L * std::log(lg) / lg));
    CHECK(main_bound(1e-10, c, eps) < main_bound(1e-8, c, eps));
    CHECK(slice_epsilon(1e-8, c, 0.3) == doctest::Approx(2 / lg));
    CHECK_THROWS(slice_epsilon(1.0, c, 0.3));
}

TEST_CASE("moments from zero data") {
    const auto g = constant_sinogram({-0.3, 0.3, 61}, {-0.4, 0.4, 401}, 0.0);
    const auto phi = TestFunction::hormander(6);
    for (double v : moments_from_sinogram_unweighted(g, phi, 0.2, 0.3, 6).m) CHECK(v == 0.0);
    const auto base = base_kernels(AnalyticField::constant(1.0), AnalyticField::zero(), 0.3, 24);
    for (double v : moments_from_sinogram_weighted(g, base, TestFunction::hormander(2), 0.2, 0.3, 2).m) CHECK(v == 0.0);
}

TEST_CASE("moments from data match the moments of the mean") {
    const auto f = smooth_bump(0.1, 0.45, 0.35, 1, 14);
    const auto g = sinogram(f, constant_weight(), default_grid());
    const auto phi = TestFunction::hormander(6);
    const auto m = moments_from_sinogram_unweighted(g, phi, 0.2, 0.3, 6);
    const auto d = mean_moments(f, nullptr, phi, 0.2, 0.3, 6);
    CHECK(m.m[0] == doctest::Approx(d[0]).epsilon(1e-5));
    for (int k = 1; k <= 6; ++k) CHECK(m.m[k] == doctest::Approx(d[k]).epsilon(1e-4));

    // vanishing fields reduce the weighted extraction to the unweighted one
    const auto base = base_kernels(AnalyticField::zero(), AnalyticField::zero(), 0.3, 24);
    const auto w = moments_from_sinogram_weighted(g, base, TestFunction::hormander(3), 0.2, 0.3, 3);
    const auto u = moments_from_sinogram_unweighted(g, TestFunction::hormander(3), 0.2, 0.3, 3);
    for (int k = 0; k <= 3; ++k) CHECK(std::abs(w.m[k] - u.m[k]) <= 1e-10);
}

TEST_CASE("weighted moments for the exponential weight") {
    const auto f = smooth_bump(0.1, 0.45, 0.35, 1, 14);
    const auto wt = weight_from_ab(AnalyticField::constant(1.0), AnalyticField::zero());
    const auto g = sinogram(f, wt, default_grid());
    const auto base = base_kernels(AnalyticField::constant(1.0), AnalyticField::zero(), 0.3, 24);
    const auto phi = TestFunction::hormander(4);
    const auto m = moments_from_sinogram_weighted(g, base, phi, 0.2, 0.3, 4);
    const auto d = mean_moments(f, &wt, phi, 0.2, 0.3, 4);
    for (int k = 0; k <= 4; ++k) CHECK(m.m[k] == doctest::Approx(d[k]).epsilon(1e-3));
}

TEST_CASE("zero data reconstructs to zero") {
    const auto g = constant_sinogram({-0.3, 0.3, 61}, {-0.4, 0.4, 401}, 0.0);
    ReconstructionSetup s;
    s.eps = 0.2;
    BoundConstants c;
    c.C = 3.0;
    const auto r = reconstruct_mean(g, s, c);
    CHECK(r.N == 0);
    for (double v : r.profile.values) CHECK(v == 0.0);
    for (double v : r.series.a) CHECK(v == 0.0);
    const auto audit = moment_bound_audit(g, s, c, 6);
    CHECK(audit.max_ratio == 0.0);
}

TEST_CASE("analytic reconstruction within the bound") {
    const auto f = default_bump();
    const auto grid = default_grid();
    const auto g = sinogram(f, constant_weight(), grid);
    ReconstructionSetup s;
    s.eps = 0.2;
    s.gamma = 0.3;
    BoundConstants c;
    c.C = calibrate_envelope(grid.xi, grid.eta, s, c).C;
    CHECK(c.C / s.eps >= std::exp(1.0));
    const auto rep = stability_curve(f, nullptr, g, {1e-4, 1e-6, 1e-8}, s, c, 5);
    REQUIRE(rep.rows.size() == 3);
    for (const auto& row : rep.rows) {
        CHECK(row.l2_error <= row.bound);
        CHECK(row.bound == doctest::Approx(main_bound(row.H, c, s.eps)));
    }
    CHECK(rep.rows[2].l2_error <= rep.rows[0].l2_error);
    CHECK(rep.rows[0].N <= rep.rows[2].N);
    CHECK_THROWS_AS(reconstruct_mean(g, s, c, 10 * c.M()), std::domain_error);
}

TEST_CASE("moment audit with a fitted constant") {
    const auto grid = default_grid();
    ReconstructionSetup s;
    s.eps = 0.2;
    BoundConstants c;
    c.C = 3.0;
    const auto a1 = moment_bound_audit(sinogram(default_bump(), constant_weight(), grid), s, c, 12);
    const auto a2 = moment_bound_audit(sinogram(smooth_bump(0.1, 0.45, 0.35, 1, 14), constant_weight(), grid), s, c, 12);
    CHECK(std::isfinite(a1.fitted_C));
    CHECK(a1.max_ratio <= 1.0);
    CHECK(a2.max_ratio <= 1.0);
    CHECK(a2.fitted_C == doctest::Approx(a1.fitted_C).epsilon(0.2));
}

TEST_CASE("slice preconditions") {
    const auto g = constant_sinogram({-0.3, 0.3, 121}, {-0.4, 0.4, 401}, 0.0);
    ReconstructionSetup s;
    BoundConstants c;
    CHECK_THROWS(reconstruct_slice(g, s, c, 0.3, 1.0));
}

TEST_CASE("oscillatory phantoms") {
    SinogramGrid grid;
    grid.xi = {-0.3, 0.3, 31};
    grid.eta = {-0.2, 1.2, 561};
    const auto q = smooth_bump(0.0, 0.5, 0.35, 1.0, 14);
    const auto rows = counterexample_experiment(q, {1, 10, 20}, grid, 201);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].f_norm / rows[2].f_norm == doctest::Approx(2.0).epsilon(0.2));
    CHECK(rows[0].radon_norm / rows[0].f_norm > 0.1);
    CHECK(rows[0].radon_norm / rows[0].f_norm < 10.0);
    CHECK(rows[2].slope < 0.0);
}

TEST_CASE("noise is seeded") {
    const auto g = constant_sinogram({-0.3, 0.3, 11}, {-0.4, 0.4, 11}, 0.0);
    CHECK(add_noise(g, 1e-3, 9).values == add_noise(g, 1e-3, 9).values);
    CHECK(add_noise(g, 1e-3, 9).values != add_noise(g, 1e-3, 10).values);
}
