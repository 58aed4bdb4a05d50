#include <cmath>
#include <random>

#include "doctest.h"
#include "lwrt/phantoms.hpp"

using namespace lwrt;

namespace {

// Hand-coded closed form of the bump.
double bump_oracle(double cx, double cy, double w, double amp, double x, double y) {
    const double s = y - x * x;
    if (s <= 0) return 0;
    const double r2 = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (w * w);
    if (r2 >= 1) return 0;
    return amp * std::exp(1.0 - 1.0 / (1.0 - r2)) * std::exp(1.0 / (cy - cx * cx) - 1.0 / s);
}

double grid_l2(const PhantomSpec& p, int n = 801) {
    const Box b = phantom_bounding_box(p);
    const double hx = (b.x_max - b.x_min) / (n - 1), hy = (b.y_max - b.y_min) / (n - 1);
    double s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = eval_phantom(p, b.x_min + i * hx, b.y_min + j * hy);
            s += v * v;
        }
    return std::sqrt(s * hx * hy);
}

}  // namespace

TEST_CASE("outside the parabola the phantom vanishes") {
    CHECK(eval_phantom(default_bump(), 0.5, 0.1) == 0.0);
    CHECK(eval_phantom(smooth_bump(0.1, 0.45, 0.35, 1, 14), 0.5, 0.1) == 0.0);
    CHECK(eval_phantom(oscillatory_phantom(default_bump(), 3.0), 0.5, 0.1) == 0.0);
}

TEST_CASE("bump equals its amplitude at the center") {
    CHECK(eval_phantom(smooth_bump(0.0, 0.5, 0.35, 1.0, 14), 0.0, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_phantom(smooth_bump(0.1, 0.45, 0.2, 2.5, 14), 0.1, 0.45) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("bump agrees with an independent closed form") {
    const auto p = smooth_bump(0.1, 0.45, 0.35, 1.3, 14);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-0.3, 0.5), uy(0.05, 0.85);
    for (int i = 0; i < 64; ++i) {
        const double x = ux(rng), y = uy(rng);
        CHECK(std::abs(eval_phantom(p, x, y) - bump_oracle(0.1, 0.45, 0.35, 1.3, x, y)) <= 1e-14);
    }
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(smooth_bump(0.0, 0.0, 0.35, 1.0, 14), std::invalid_argument);
    CHECK_THROWS_AS(smooth_bump(0.0, 0.5, -1.0, 1.0, 14), std::invalid_argument);
    CHECK_THROWS_AS(oscillatory_phantom(default_bump(), 0.0), std::invalid_argument);
}

TEST_CASE("oscillatory phantom") {
    const auto q = smooth_bump(0.0, 0.5, 0.35, 1.0, 14);
    CHECK(eval_phantom(oscillatory_phantom(q, 1.0), 0.0, 0.5) == doctest::Approx(1.0));
    const double r = grid_l2(oscillatory_phantom(q, 10.0)) / grid_l2(oscillatory_phantom(q, 20.0));
    CHECK(r == doctest::Approx(2.0).epsilon(0.1));
    // sup|q| + sup|grad q| / lambda
    const auto f = oscillatory_phantom(q, 10.0);
    CHECK(f.holder_bound == doctest::Approx(phantom_sup(q) + grid_gradient_bound(q) / 10.0));
}

TEST_CASE("holder seminorm estimate") {
    PhantomSpec zero = default_bump();
    zero.amplitude = 0.0;
    CHECK(holder_seminorm_estimate(zero, 1.0, 2000) == 0.0);

    const auto full = default_bump();
    const auto half = smooth_bump(0.0, 0.45, 0.35, 0.5, 7.0);
    const double e1 = holder_seminorm_estimate(full, 1.0, 20000);
    const double e2 = holder_seminorm_estimate(half, 1.0, 20000);
    CHECK(e2 == doctest::Approx(e1 / 2).epsilon(1e-12));
    CHECK(e1 <= full.holder_bound);

    // dense-grid gradient oracle for the default bump
    CHECK(grid_gradient_bound(full) == doctest::Approx(13.31).epsilon(1e-3));
    CHECK(grid_gradient_bound(full) <= full.holder_bound);
    CHECK(phantom_sup(full) == doctest::Approx(1.40241).epsilon(1e-4));
}

TEST_CASE("tabulated phantom interpolates bilinearly") {
    auto t = std::make_shared<TabulatedGrid>();
    t->x = {-1, 1, 3};
    t->y = {0, 2, 3};
    t->values = {0, 0, 0, 0, 1, 2, 0, 0, 0};
    const auto p = tabulated_phantom(t, 1.0, 1.0, 4.0);
    CHECK(eval_phantom(p, 0.0, 1.0) == doctest::Approx(1.0));
    CHECK(eval_phantom(p, 0.0, 1.5) == doctest::Approx(1.5));
    CHECK(eval_phantom(p, 0.5, 0.1) == 0.0);
}

TEST_CASE("string round trip of kinds") {
    for (auto k : {PhantomKind::SmoothBump, PhantomKind::PolynomialTimesBump, PhantomKind::Oscillatory,
                   PhantomKind::Tabulated})
        CHECK(phantom_kind_from_string(to_string(k)) == k);
    CHECK_THROWS(phantom_kind_from_string("nope"));
}
