#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lwrt/kernels.hpp"
#include "lwrt/legendre.hpp"
#include "lwrt/means.hpp"
#include "lwrt/test_functions.hpp"
#include "lwrt/transform.hpp"

namespace lwrt {

enum class ReconstructionMode { Analytic, Gevrey };
std::string to_string(ReconstructionMode mode);
ReconstructionMode reconstruction_mode_from_string(const std::string& name);

struct BoundConstants {
    double C0 = 14.0;     // Hoelder bound of the phantom
    double alpha = 1.0;   // Hoelder exponent
    double A0 = 3.0;      // Jackson constant
    double C = 0.0;       // envelope constant; C/eps enters the moment bounds
    double beta = 1.0 + 1.7320508075688772;
    double sigma = 2.0;   // Gevrey index
    double rho = 0.49;    // sup-estimate exponent
    double M() const { return 4.0 * A0 * C0; }
    double s() const { return sigma - 1.0; }
    void validate() const;
};

// Floor applied to H before it enters a logarithm.
constexpr double kDataNormFloor = 1e-14;

// sup over eta rows with |eta| <= gamma of the trapezoid L1 norm over xi nodes with |xi| <= eps.
double data_norm(const Sinogram& g, double eps, double gamma);

// Linear functionals m_k = sum_{i,l} W[k][i,l] g(xi_i, eta_l) over the window
// |xi| <= eps, -gamma <= eta <= gamma.
struct ExtractionWeights {
    int i0 = 0, i1 = -1;  // xi node range, inclusive
    int l0 = 0, l1 = -1;  // eta node range, inclusive
    std::vector<std::vector<double>> W;  // W[k][(i - i0) * (l1 - l0 + 1) + (l - l0)]
    std::vector<double> tau;              // trapezoid weights of the xi window
    int rows() const { return i1 - i0 + 1; }
    int cols() const { return l1 - l0 + 1; }
    int N() const { return static_cast<int>(W.size()) - 1; }
    MomentVector apply(const Sinogram& g) const;
    // sum_l max_i |W[k][i,l]| / tau_i: |m_k(n)| <= dual_norm(k) * data_norm(n).
    double dual_norm(int k) const;
};

struct ExtractionOptions {
    int points = 8;        // local Lagrange order for data interpolation
    int gauss_points = 8;  // per panel
};

ExtractionWeights extraction_weights_unweighted(const UniformAxis& xi, const UniformAxis& eta, const TestFunction& phi,
                                                double eps, double gamma, int N, const ExtractionOptions& opt = {});
ExtractionWeights extraction_weights_weighted(const UniformAxis& xi, const UniformAxis& eta, const BaseKernels& base,
                                              const TestFunction& phi, double eps, double gamma, int N,
                                              int k_max = 6, const ExtractionOptions& opt = {});

MomentVector moments_from_sinogram_unweighted(const Sinogram& g, const TestFunction& phi, double eps, double gamma,
                                              int N, const ExtractionOptions& opt = {});
MomentVector moments_from_sinogram_weighted(const Sinogram& g, const BaseKernels& base, const TestFunction& phi,
                                            double eps, double gamma, int N, int k_max = 6,
                                            const ExtractionOptions& opt = {});

// Analytic: largest N with N <= (log(M/H) - log(C/eps)) / log(C/eps).
// Gevrey: floor(y / log y), y = log(M/H) / log(C/eps).
int truncation_order(double H, const BoundConstants& consts, double eps, ReconstructionMode mode);

// Pipeline setup shared by calibration and reconstruction.
struct ReconstructionSetup {
    double eps = 0.1;
    double gamma = 0.3;
    ReconstructionMode mode = ReconstructionMode::Analytic;
    std::optional<BaseKernels> kernels;  // weighted data when set
    int k_max = 6;
    int n_ceiling = 24;  // cap on N (Hormander index, Gevrey derivative order, moment map)
    ExtractionOptions extraction;
};

// Test function used at truncation order N.
TestFunction setup_test_function(const ReconstructionSetup& setup, const BoundConstants& consts, int N);
ExtractionWeights setup_extraction(const ReconstructionSetup& setup, const BoundConstants& consts,
                                   const UniformAxis& xi, const UniformAxis& eta, int N);
int setup_order_cap(const ReconstructionSetup& setup);

// Noise amplification B_N = ||T_N W_N||_{data norm -> l2}, bounded through dual norms.
double noise_amplification(const ExtractionWeights& W);

struct CalibrationReport {
    double C = 0.0;
    std::vector<double> B;  // B[N], N = 1..cap (B[0] unused)
};
// Smallest C with (C/eps)^{N+1} >= B_N N^alpha (analytic) or (C/eps)^{N+1} N^{sN} >= B_N N^alpha
// (Gevrey) for all N up to the cap, and C/eps >= e.
CalibrationReport calibrate_envelope(const UniformAxis& xi, const UniformAxis& eta, const ReconstructionSetup& setup,
                                     const BoundConstants& consts);

struct ReconstructionResult {
    LegendreSeries series;
    MeanProfile profile;  // estimate on a Chebyshev grid
    int N = 0;
    double H = 0.0;       // floored data norm entering the rule
    double bound = 0.0;   // displayed theorem bound at H
    std::string test_function;
    MomentVector moments;
};

double main_bound(double H, const BoundConstants& consts, double eps);          // 4M (log(C/eps)/log(M/H))^alpha
double gevrey_mean_bound(double H, const BoundConstants& consts, double eps);   // with loglog factor
double slice_bound(double H, const BoundConstants& consts);                     // analytic slice
double gevrey_slice_bound(double H, const BoundConstants& consts);              // Gevrey slice

// H = data_error_norm when given (norm of the data perturbation), else data_norm(g).
// H == 0 returns the zero profile with N = 0.
ReconstructionResult reconstruct_mean(const Sinogram& g, const ReconstructionSetup& setup,
                                      const BoundConstants& consts, std::optional<double> data_error_norm = {});

struct SliceResult {
    ReconstructionResult mean;
    double eps = 0.0;
    double C = 0.0;  // envelope constant calibrated at eps
    double bound = 0.0;
    std::optional<double> l2_error;   // vs f(., gamma) m(., 0, gamma) on [-1, 1]
    std::optional<double> sup_error;  // on |x| <= 1/2
};
// eps = 2 / log(M/H); requires eps < eps0.
double slice_epsilon(double H, const BoundConstants& consts, double eps0);
SliceResult reconstruct_slice(const Sinogram& g, ReconstructionSetup setup, const BoundConstants& consts, double eps0,
                              std::optional<double> data_error_norm = {}, const PhantomSpec* truth = nullptr,
                              const Weight* weight = nullptr);

struct MomentAuditReport {
    double H = 0.0;
    double fitted_C = 0.0;
    std::vector<double> moments;
    std::vector<double> ratios;  // |m_k| / ((C/eps)^{k+1} envelope(k) H)
    double max_ratio = 0.0;
};
// Envelope e^N (analytic) or (k!)^s (Gevrey).
MomentAuditReport moment_bound_audit(const Sinogram& g, const ReconstructionSetup& setup,
                                     const BoundConstants& consts, int N);

struct StabilityRow {
    double noise_sigma = 0.0;
    double H = 0.0;
    int N = 0;
    double l2_error = 0.0;
    double sup_error = 0.0;  // |x| <= 1/2
    double bound = 0.0;
};
struct StabilityReport {
    std::vector<StabilityRow> rows;  // H descending
    double alpha_hat = 0.0;          // error ~ const * log(1/H)^{-alpha_hat}
    double fit_const = 0.0;
    double C = 0.0;
};
StabilityReport stability_curve(const PhantomSpec& f, const Weight* m, const Sinogram& clean,
                                const std::vector<double>& noise_levels, const ReconstructionSetup& setup,
                                const BoundConstants& consts, std::uint64_t seed = 1);

// Adds seeded N(0, sigma^2) noise to a copy of g.
Sinogram add_noise(const Sinogram& g, double sigma, std::uint64_t seed);

struct CounterexampleRow {
    double lambda = 0.0;
    double f_norm = 0.0;
    double radon_norm = 0.0;
    double slope = 0.0;  // d log ||R f|| / d log lambda against the previous row (0 on the first)
};
std::vector<CounterexampleRow> counterexample_experiment(const PhantomSpec& q, const std::vector<double>& lambdas,
                                                         const SinogramGrid& grid, int image_points = 401);

}  // namespace lwrt
