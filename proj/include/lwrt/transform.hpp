#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lwrt/interpolation.hpp"
#include "lwrt/phantoms.hpp"
#include "lwrt/quadrature.hpp"
#include "lwrt/weights.hpp"

namespace lwrt {

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Sinogram {
    UniformAxis xi, eta;
    std::vector<double> values;       // values[i * eta.n + j] = g(xi_i, eta_j)
    std::vector<std::uint8_t> failed;  // per-cell quadrature failure flags
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    std::string provenance;

    Sinogram() = default;
    Sinogram(UniformAxis xi_axis, UniformAxis eta_axis);

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * eta.n + j]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * eta.n + j]; }
    void validate() const;
};

struct SinogramGrid {
    UniformAxis xi{-0.3, 0.3, 61};
    UniformAxis eta{-0.4, 0.4, 401};
};

// R_m[x^k f](xi, eta) with quadrature diagnostics.
QuadResult<double> radon_detailed(const PhantomSpec& f, const Weight& m, int k, double xi, double eta, double tol);
double radon(const PhantomSpec& f, const Weight& m, double xi, double eta, double tol = 1e-12);
double radon_moment(const PhantomSpec& f, const Weight& m, int k, double xi, double eta, double tol = 1e-12);

// Samples radon on the grid, then adds seeded N(0, sigma^2) noise per cell.
Sinogram sinogram(const PhantomSpec& f, const Weight& m, const SinogramGrid& grid, double noise_sigma = 0.0,
                  std::uint64_t seed = 0, double tol = 1e-13);

// Tensor local-Lagrange interpolation of sinogram data; points == 2 is bilinear.
double interpolate_sinogram(const Sinogram& g, double xi, double eta, int points = 2);

// int k(eta') g~(xi, eta') d eta' over [lo, hi] with Gauss panels between grid nodes.
double eta_line_integral(const Sinogram& g, double xi, double lo, double hi,
                         const std::function<double(double)>& kernel, int points = 8, int gauss_points = 8);

// Dual transform: integral over xi in [xi_lo, xi_hi] of g(xi, y - xi x) m(x, xi, y - xi x), bilinear data.
double dual_radon(const Sinogram& g, const Weight& m, double x, double y);
double dual_radon(const Sinogram& g, const Weight& m, double x, double y, double xi_lo, double xi_hi);

struct SeparableTest {
    std::function<double(double)> in_xi, in_eta;
    double xi_lo, xi_hi, eta_lo, eta_hi;
};

// |<R_m f, phi> - <f, R_m^* phi>| by two independent nested quadratures.
double check_adjoint(const PhantomSpec& f, const Weight& m, const SeparableTest& phi, int panels = 24);

// int_{eta_min}^{eta} ((eta - eta')^{k-1} / (k-1)!) g(xi, eta') d eta'.
double heaviside_convolution(const Sinogram& g, int k, double xi, double eta, int points = 8);

// max over points of |(H_k * d_xi^k R f) - R[x^k f]|, d_xi^k by an 11-node central stencil of spacing h.
double check_moment_identity(const PhantomSpec& f, int k, const std::vector<std::array<double, 2>>& points,
                             double h = 1e-2);

// max over points of |d_xi R_m f - b R_m f - d_eta R_m[x f] - a R_m[x f]| (5-point differences).
double check_transport_identity(const PhantomSpec& f, const Weight& m, const AnalyticField& a, const AnalyticField& b,
                                const std::vector<std::array<double, 2>>& points, double h = 1e-3);

// Central finite-difference weights for the k-th derivative on 2r+1 equispaced nodes (unit spacing).
std::vector<double> central_difference_weights(int k, int radius);

}  // namespace lwrt
