#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lwrt/expression.hpp"
#include "lwrt/interpolation.hpp"

namespace lwrt {

enum class PhantomKind { SmoothBump, PolynomialTimesBump, Oscillatory, Tabulated };

std::string to_string(PhantomKind kind);
PhantomKind phantom_kind_from_string(const std::string& name);

// Samples on a rectangular grid, values[ix * y.n + iy].
struct TabulatedGrid {
    UniformAxis x, y;
    std::vector<double> values;

    double at(int ix, int iy) const { return values[static_cast<std::size_t>(ix) * y.n + iy]; }
};

struct PhantomSpec {
    PhantomKind kind = PhantomKind::SmoothBump;
    double center_x = 0.0;
    double center_y = 0.45;
    double width = 0.35;
    double amplitude = 1.0;
    double support_c = 1.0;
    double holder_alpha = 1.0;
    double holder_bound = 14.0;
    double lambda = 1.0;                      // oscillatory only
    Expression polynomial;                   // polynomial-times-bump only, variables (x, y)
    std::shared_ptr<const TabulatedGrid> table;  // tabulated only
};

// Throws std::invalid_argument naming the offending field.
void validate_phantom(const PhantomSpec& p);

// f(x, y); exactly zero where y < c x^2.
double eval_phantom(const PhantomSpec& p, double x, double y);

// Bump centered at (cx, cy) with value `amplitude` at its center.
PhantomSpec smooth_bump(double cx, double cy, double width, double amplitude, double holder_bound,
                        double support_c = 1.0);
// Default corpus bump: center (0, 0.45), width 0.35, Lipschitz bound 14.
PhantomSpec default_bump();
PhantomSpec polynomial_times_bump(const PhantomSpec& bump, const std::string& polynomial, double holder_bound);
PhantomSpec tabulated_phantom(std::shared_ptr<const TabulatedGrid> table, double support_c, double holder_alpha,
                              double holder_bound);

// f_lambda = q cos(lambda x) / lambda.  Its holder_bound is the Lipschitz
// bound sup|q| + sup|grad q| / lambda from dense sampling.
PhantomSpec oscillatory_phantom(const PhantomSpec& q, double lambda);

struct Box {
    double x_min, x_max, y_min, y_max;
};
// Rectangle containing the support.
Box phantom_bounding_box(const PhantomSpec& p);

// Empirical max of |f(p)-f(q)| / |p-q|^alpha over `budget` random pairs.
double holder_seminorm_estimate(const PhantomSpec& p, double alpha, int budget, std::uint64_t seed = 20240601);

// max |f| and max |grad f| on an n x n grid over the bounding box (central differences).
double phantom_sup(const PhantomSpec& p, int n = 401);
double grid_gradient_bound(const PhantomSpec& p, int n = 401);

}  // namespace lwrt
