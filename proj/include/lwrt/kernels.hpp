#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "lwrt/interpolation.hpp"
#include "lwrt/jet.hpp"
#include "lwrt/transform.hpp"
#include "lwrt/weights.hpp"

namespace lwrt {

// Volterra kernel s(xi, eta, eta') evaluated as a xi-jet of the requested order.
struct KernelJet {
    std::function<Jet(double xi, double eta, double etap, int order)> evaluator;
    int max_order = 0;
    int factor_exponent = 0;  // s carries a factor (eta - eta')^factor_exponent

    Jet operator()(double xi, double eta, double etap, int order) const { return evaluator(xi, eta, etap, order); }
    double value(double xi, double eta, double etap) const { return evaluator(xi, eta, etap, 0)[0]; }
};

KernelJet zero_kernel(int max_order);
KernelJet constant_kernel(double value, int max_order);
// Kernel of d_xi applied to the kernel (order reduced by one).
KernelJet xi_derivative(const KernelJet& s);
KernelJet kernel_sum(const std::vector<std::pair<double, KernelJet>>& terms);

// Composition r(eta, eta') = int_{eta'}^{eta} p(eta, v) q(v, eta') dv in the rescaled
// form v = eta' + v1 (eta - eta'), Gauss in v1.
KernelJet compose(const KernelJet& P, const KernelJet& Q, int gauss_points = 32);

struct BaseKernels {
    KernelJet P;   // psi_A = exp(A(xi, eta') - A(xi, eta))
    KernelJet Q;   // -b(xi, eta') psi_A
    KernelJet Q1;  // Q - d_xi P: the zero-order part when D_a^{-1} D_b = d_xi o P + Q1
    AnalyticField a, b;
    double gamma = 0.0;
    int max_order = 0;
};

BaseKernels base_kernels(const AnalyticField& a, const AnalyticField& b, double gamma, int max_order = 24);

struct SjkFamily {
    int k = 0;
    std::vector<KernelJet> S;  // S[j] = S_{j,k}
};

// Family S_{0..k,k} by the recursion S_{0,k+1} = S_{0,k}Q1 - (d S_{0,k})P,
// S_{j,k+1} = S_{j,k}Q1 - (d S_{j,k})P + S_{j-1,k}P, S_{k+1,k+1} = S_{k,k}P,
// starting from S_{0,1} = Q1, S_{1,1} = P.  Evaluation tabulates, for each
// (xi, eta), the rows eta' -> s_{j,l}(xi, eta, eta') of every level l <= k on a
// Chebyshev grid (see KernelRows), so cost is polynomial in k.
SjkFamily sjk_family(const BaseKernels& base, int k, int k_max = 6);
// The same family built by nesting compose() lazily: cost grows like
// (3 * gauss_points)^(k-1); intended as an independent oracle for small k.
SjkFamily sjk_family_nested(const BaseKernels& base, int k, int gauss_points = 32);

struct KernelRowOptions {
    int chebyshev_degree = 48;
    int gauss_points = 32;
    int antiderivative_degree = 64;
};

// Rows s_{j,l}(xi, anchor, eta') for eta' in [lower, anchor], all l <= levels,
// as xi-jets of order final_order + levels - l.
class KernelRows {
public:
    KernelRows(const BaseKernels& base, double xi, double anchor, double lower, int levels, int final_order = 0,
               const KernelRowOptions& options = {});

    int levels() const { return levels_; }
    double xi() const { return xi_; }
    double anchor() const { return anchor_; }
    double lower() const { return lower_; }
    int order_at(int level) const { return final_order_ + levels_ - level; }
    // s_{j,l}(xi, anchor, etap).
    Jet row(int j, int level, double etap) const;
    double row_value(int j, int level, double etap) const { return row(j, level, etap)[0]; }

private:
    const std::vector<Jet>& table(int j, int level) const { return rows_[level][j]; }

    int levels_;
    int final_order_;
    double xi_, anchor_, lower_;
    ChebyshevInterpolant grid_;
    std::vector<std::vector<std::vector<Jet>>> rows_;  // [level][j][node]
};

// Jets of A(xi, .) - A(xi, lower) on a Chebyshev grid of [lower, upper].
class AntiderivativeTable {
public:
    AntiderivativeTable(const AnalyticField& a, double xi, double lower, double upper, int order, int degree);
    Jet operator()(double eta) const;

private:
    bool constant_ = false;
    double constant_value_ = 0.0;
    double lower_ = 0.0;
    int order_ = 0;
    ChebyshevInterpolant grid_;
    std::vector<Jet> values_;
};

struct KernelSample {
    double xi, eta, etap;
};

struct KernelBoundReport {
    double C = 0.0;
    double beta = 0.0;
    // ratio[k-1][j] = max over samples of |s_{j,k}| / ((beta C)^{2k-j} (k-j)! (eta-eta')^{k-1}/(k-1)!)
    std::vector<std::vector<double>> ratio;
    double max_ratio = 0.0;
};

// C = max over samples and n <= n_max of (|d^n p|/n!, |d^n q|/n!, |d^n q1|/n!)^{1/(n+1)}.
double certify_base_constant(const BaseKernels& base, const std::vector<KernelSample>& samples, int n_max);

// Bound audit for all families up to k_max; kernels evaluated through KernelRows.
KernelBoundReport verify_kernel_bounds(const BaseKernels& base, int k_max, double C, double beta,
                                       const std::vector<KernelSample>& samples);

// int_{eta_min}^{eta} s(xi, eta, eta') g(xi, eta') d eta' with local Lagrange
// interpolation of g (points == 2 is bilinear), Gauss panels between grid nodes.
double apply_kernel(const KernelJet& S, const Sinogram& g, double xi, double eta, double gamma, int points = 2);

// max over points of |D_a D_b g - D_b D_a g + g (d_eta b + d_xi a)| by central differences,
// with D_a = d_eta + a and D_b = d_xi - b.
double commutator_check(const AnalyticField& a, const AnalyticField& b,
                        const std::function<double(double, double)>& g,
                        const std::vector<std::array<double, 2>>& points, double h = 1e-3);

}  // namespace lwrt
