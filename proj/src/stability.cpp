#include "lwrt/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "lwrt/parallel.hpp"
#include "lwrt/quadrature.hpp"

namespace lwrt {

std::string to_string(ReconstructionMode mode) { return mode == ReconstructionMode::Analytic ? "analytic" : "gevrey"; }

ReconstructionMode reconstruction_mode_from_string(const std::string& name) {
    if (name == "analytic") return ReconstructionMode::Analytic;
    if (name == "gevrey") return ReconstructionMode::Gevrey;
    throw std::invalid_argument("unknown reconstruction mode '" + name + "'");
}

void BoundConstants::validate() const {
    if (!(C0 > 0.0)) throw std::invalid_argument("constants.C0 must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("constants.alpha must be in (0,1]");
    if (!(A0 > 0.0)) throw std::invalid_argument("constants.A0 must be positive");
    if (!(beta > 0.0)) throw std::invalid_argument("constants.beta must be positive");
    if (!(sigma > 1.0)) throw std::invalid_argument("constants.sigma must exceed 1");
    if (!(rho > 0.0)) throw std::invalid_argument("constants.rho must be positive");
}

namespace {

struct NodeRange {
    int lo, hi;
};

// Nodes of `axis` inside [a, b].
NodeRange window(const UniformAxis& axis, double a, double b, const char* what) {
    const double slack = 1e-9;
    if (a < axis.min - slack * axis.step() || b > axis.max + slack * axis.step())
        throw std::out_of_range(std::string(what) + " window exceeds the sinogram grid");
    const int lo = std::max(0, static_cast<int>(std::ceil((a - axis.min) / axis.step() - slack)));
    const int hi = std::min(axis.n - 1, static_cast<int>(std::floor((b - axis.min) / axis.step() + slack)));
    if (hi < lo) throw std::invalid_argument(std::string(what) + " window contains no grid node");
    return {lo, hi};
}

std::vector<double> trapezoid(const UniformAxis& axis, NodeRange r) {
    std::vector<double> tau(r.hi - r.lo + 1, 0.0);
    for (int i = r.lo; i < r.hi; ++i) {
        const double h = axis.node(i + 1) - axis.node(i);
        tau[i - r.lo] += 0.5 * h;
        tau[i + 1 - r.lo] += 0.5 * h;
    }
    return tau;
}

// Panels between window nodes and extra cuts, restricted to [a, b].
std::vector<double> panel_cuts(const UniformAxis& axis, NodeRange r, double a, double b, std::vector<double> extra) {
    for (int i = r.lo; i <= r.hi; ++i) extra.push_back(axis.node(i));
    extra.push_back(a);
    extra.push_back(b);
    std::vector<double> cuts;
    for (double c : extra)
        if (c >= a && c <= b) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> out;
    for (double c : cuts)
        if (out.empty() || c - out.back() > 1e-14 * (b - a)) out.push_back(c);
    return out;
}

template <class F>
void for_each_gauss_point(const std::vector<double>& cuts, int points, F&& body) {
    const GaussRule& g = gauss_legendre(points);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double mid = 0.5 * (cuts[c] + cuts[c + 1]), half = 0.5 * (cuts[c + 1] - cuts[c]);
        for (int q = 0; q < points; ++q) body(mid + half * g.nodes[q], half * g.weights[q]);
    }
}

// alpha[j][i] = int phi_eps^(j)(xi) L_i(xi) d xi over [-eps, eps].
std::vector<std::vector<double>> xi_weights(const UniformAxis& xi, NodeRange r, const TestFunction& phi, double eps,
                                            int N, const ExtractionOptions& opt) {
    if (N > phi.derivative_order_max())
        throw std::invalid_argument("moments_from_sinogram: order " + std::to_string(N) +
                                    " exceeds the test function's derivative order " +
                                    std::to_string(phi.derivative_order_max()));
    if (r.hi - r.lo + 1 < 2 * opt.points)
        throw std::invalid_argument("moments_from_sinogram: xi grid too coarse for the window (need at least " +
                                    std::to_string(2 * opt.points) + " nodes in |xi| <= eps)");
    std::vector<double> extra;
    int gp;
    if (phi.kind() == TestFunctionKind::Hormander) {
        for (double k : phi.knots()) extra.push_back(eps * k);
        gp = std::max(opt.gauss_points, N / 2 + 6);
    } else {
        for (int i = 1; i < 64; ++i) extra.push_back(eps * (-1.0 + i / 32.0));
        gp = std::max(opt.gauss_points, 16);
    }
    const auto cuts = panel_cuts(xi, r, -eps, eps, extra);
    std::vector<std::vector<double>> alpha(N + 1, std::vector<double>(r.hi - r.lo + 1, 0.0));
    for_each_gauss_point(cuts, gp, [&](double x, double w) {
        const auto d = phi.derivatives(N, x / eps);
        const Stencil st = lagrange_stencil(xi, x, opt.points, r.lo, r.hi);
        double scale = w / eps;
        for (int j = 0; j <= N; ++j) {
            const double v = d[j] * scale;
            scale /= eps;
            if (v == 0.0) continue;
            for (std::size_t s = 0; s < st.weights.size(); ++s) alpha[j][st.first + s - r.lo] += v * st.weights[s];
        }
    });
    return alpha;
}

ExtractionWeights empty_weights(NodeRange rx, NodeRange re, int N) {
    ExtractionWeights W;
    W.i0 = rx.lo;
    W.i1 = rx.hi;
    W.l0 = re.lo;
    W.l1 = re.hi;
    W.W.assign(N + 1, std::vector<double>(static_cast<std::size_t>(W.rows()) * W.cols(), 0.0));
    return W;
}

void check_window_args(double eps, double gamma, int N) {
    if (!(eps > 0.0)) throw std::invalid_argument("moments_from_sinogram: eps must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("moments_from_sinogram: gamma must be positive");
    if (gamma < eps * eps / 4.0 * (1.0 - 1e-12))
        throw std::invalid_argument("moments_from_sinogram: gamma must be at least eps^2/4");
    if (N < 0) throw std::invalid_argument("moments_from_sinogram: N must be >= 0");
}

}  // namespace

double data_norm(const Sinogram& g, double eps, double gamma) {
    const NodeRange rx = window(g.xi, -eps, eps, "data_norm: xi");
    const NodeRange re = window(g.eta, -gamma, gamma, "data_norm: eta");
    const auto tau = trapezoid(g.xi, rx);
    double best = 0.0;
    for (int l = re.lo; l <= re.hi; ++l) {
        double s = 0.0;
        for (int i = rx.lo; i <= rx.hi; ++i) s += tau[i - rx.lo] * std::abs(g.at(i, l));
        best = std::max(best, s);
    }
    return best;
}

MomentVector ExtractionWeights::apply(const Sinogram& g) const {
    MomentVector m;
    m.m.assign(W.size(), 0.0);
    for (std::size_t k = 0; k < W.size(); ++k) {
        double s = 0.0;
        for (int i = i0; i <= i1; ++i)
            for (int l = l0; l <= l1; ++l) s += W[k][static_cast<std::size_t>(i - i0) * cols() + (l - l0)] * g.at(i, l);
        m.m[k] = s;
    }
    return m;
}

double ExtractionWeights::dual_norm(int k) const {
    double s = 0.0;
    for (int l = 0; l < cols(); ++l) {
        double best = 0.0;
        for (int i = 0; i < rows(); ++i) {
            const double w = W[k][static_cast<std::size_t>(i) * cols() + l];
            if (w == 0.0) continue;
            if (tau[i] == 0.0) return INFINITY;
            best = std::max(best, std::abs(w) / tau[i]);
        }
        s += best;
    }
    return s;
}

ExtractionWeights extraction_weights_unweighted(const UniformAxis& xi, const UniformAxis& eta, const TestFunction& phi,
                                                double eps, double gamma, int N, const ExtractionOptions& opt) {
    check_window_args(eps, gamma, N);
    const NodeRange rx = window(xi, -eps, eps, "moments_from_sinogram: xi");
    const NodeRange re = window(eta, -gamma, gamma, "moments_from_sinogram: eta");
    const auto alpha = xi_weights(xi, rx, phi, eps, N, opt);
    ExtractionWeights W = empty_weights(rx, re, N);
    W.tau = trapezoid(xi, rx);

    // beta[k][l] = int_{-gamma}^{gamma} (gamma - eta)^{k-1}/(k-1)! L_l(eta) d eta; k = 0 samples at gamma.
    std::vector<std::vector<double>> beta(N + 1, std::vector<double>(W.cols(), 0.0));
    {
        const Stencil st = lagrange_stencil(eta, gamma, opt.points, re.lo, re.hi);
        for (std::size_t s = 0; s < st.weights.size(); ++s) beta[0][st.first + s - re.lo] = st.weights[s];
    }
    if (N >= 1) {
        const auto cuts = panel_cuts(eta, re, -gamma, gamma, {});
        const int gp = std::max(opt.gauss_points, (N + opt.points) / 2 + 1);
        for_each_gauss_point(cuts, gp, [&](double e, double w) {
            const Stencil st = lagrange_stencil(eta, e, opt.points, re.lo, re.hi);
            double kernel = w;  // (gamma - e)^{k-1}/(k-1)! times w
            for (int k = 1; k <= N; ++k) {
                if (k > 1) kernel *= (gamma - e) / (k - 1);
                for (std::size_t s = 0; s < st.weights.size(); ++s) beta[k][st.first + s - re.lo] += kernel * st.weights[s];
            }
        });
    }
    for (int k = 0; k <= N; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        for (int i = 0; i < W.rows(); ++i)
            for (int l = 0; l < W.cols(); ++l)
                W.W[k][static_cast<std::size_t>(i) * W.cols() + l] = sign * alpha[k][i] * beta[k][l];
    }
    return W;
}

ExtractionWeights extraction_weights_weighted(const UniformAxis& xi, const UniformAxis& eta, const BaseKernels& base,
                                              const TestFunction& phi, double eps, double gamma, int N, int k_max,
                                              const ExtractionOptions& opt) {
    check_window_args(eps, gamma, N);
    if (N > k_max)
        throw std::invalid_argument("moments_from_sinogram_weighted: order " + std::to_string(N) +
                                    " exceeds kernel k_max " + std::to_string(k_max));
    if (N + 1 > base.max_order)
        throw std::invalid_argument("moments_from_sinogram_weighted: kernel jet order too small for N=" +
                                    std::to_string(N));
    const NodeRange rx = window(xi, -eps, eps, "moments_from_sinogram: xi");
    const NodeRange re = window(eta, -gamma, gamma, "moments_from_sinogram: eta");
    const auto alpha = xi_weights(xi, rx, phi, eps, N, opt);
    ExtractionWeights W = empty_weights(rx, re, N);
    W.tau = trapezoid(xi, rx);
    const int cols = W.cols();

    std::vector<double> delta(cols, 0.0);
    {
        const Stencil st = lagrange_stencil(eta, gamma, opt.points, re.lo, re.hi);
        for (std::size_t s = 0; s < st.weights.size(); ++s) delta[st.first + s - re.lo] = st.weights[s];
    }
    const auto cuts = panel_cuts(eta, re, -gamma, gamma, {});
    const int gp = std::max(opt.gauss_points, opt.points / 2 + 8);

    parallel_for(static_cast<std::size_t>(W.rows()), [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        const double x = xi.node(rx.lo + i);
        for (int l = 0; l < cols; ++l) W.W[0][static_cast<std::size_t>(i) * cols + l] = alpha[0][i] * delta[l];
        if (N == 0) return;
        const KernelRows rows(base, x, gamma, -gamma, N);
        // sigma[k][l] = sum_j (-1)^j alpha[j][i] int s_{j,k}(x, gamma, e) L_l(e) de
        std::vector<std::vector<double>> acc(N + 1, std::vector<double>(cols, 0.0));
        for_each_gauss_point(cuts, gp, [&](double e, double w) {
            const Stencil st = lagrange_stencil(eta, e, opt.points, re.lo, re.hi);
            for (int k = 1; k <= N; ++k) {
                double v = 0.0;
                for (int j = 0; j <= k; ++j) {
                    const double a = alpha[j][i];
                    if (a == 0.0) continue;
                    v += ((j % 2 == 0) ? a : -a) * rows.row_value(j, k, e);
                }
                v *= w;
                for (std::size_t s = 0; s < st.weights.size(); ++s) acc[k][st.first + s - re.lo] += v * st.weights[s];
            }
        });
        for (int k = 1; k <= N; ++k)
            for (int l = 0; l < cols; ++l) W.W[k][static_cast<std::size_t>(i) * cols + l] = acc[k][l];
    });
    return W;
}

MomentVector moments_from_sinogram_unweighted(const Sinogram& g, const TestFunction& phi, double eps, double gamma,
                                              int N, const ExtractionOptions& opt) {
    return extraction_weights_unweighted(g.xi, g.eta, phi, eps, gamma, N, opt).apply(g);
}

MomentVector moments_from_sinogram_weighted(const Sinogram& g, const BaseKernels& base, const TestFunction& phi,
                                            double eps, double gamma, int N, int k_max,
                                            const ExtractionOptions& opt) {
    return extraction_weights_weighted(g.xi, g.eta, base, phi, eps, gamma, N, k_max, opt).apply(g);
}

int truncation_order(double H, const BoundConstants& consts, double eps, ReconstructionMode mode) {
    const double M = consts.M();
    if (!(H > 0.0)) throw std::invalid_argument("truncation_order: H must be positive");
    if (H >= M) throw std::domain_error("data too noisy for method: H >= M");
    if (!(consts.C > 0.0)) throw std::invalid_argument("truncation_order: constants.C must be positive");
    const double L = std::log(consts.C / eps);
    if (!(L > 0.0)) throw std::invalid_argument("truncation_order: C/eps must exceed 1");
    const double logMH = std::log(M / H);
    double N;
    if (mode == ReconstructionMode::Analytic) {
        N = std::floor((logMH - L) / L + 1e-9);
    } else {
        const double y = logMH / L;
        N = y > 1.0 ? std::floor(y / std::log(y) + 1e-9) : 0.0;
    }
    if (N < 1.0) throw std::domain_error("data too noisy for method: truncation order N < 1");
    return static_cast<int>(std::min(N, 1e6));
}

int setup_order_cap(const ReconstructionSetup& setup) {
    int cap = std::min(setup.n_ceiling, kMomentMapCeiling);
    if (setup.kernels) cap = std::min(cap, setup.k_max);
    return cap;
}

TestFunction setup_test_function(const ReconstructionSetup& setup, const BoundConstants& consts, int N) {
    if (setup.mode == ReconstructionMode::Analytic) return TestFunction::hormander(std::max(N, 1));
    return TestFunction::gevrey(consts.sigma, std::max(N, 1));
}

ExtractionWeights setup_extraction(const ReconstructionSetup& setup, const BoundConstants& consts,
                                   const UniformAxis& xi, const UniformAxis& eta, int N) {
    const TestFunction phi = setup_test_function(setup, consts, N);
    if (setup.kernels)
        return extraction_weights_weighted(xi, eta, *setup.kernels, phi, setup.eps, setup.gamma, N, setup.k_max,
                                           setup.extraction);
    return extraction_weights_unweighted(xi, eta, phi, setup.eps, setup.gamma, N, setup.extraction);
}

double noise_amplification(const ExtractionWeights& W) {
    const int N = W.N();
    const auto T = moment_map_matrix(N);
    std::vector<double> d(N + 1);
    for (int k = 0; k <= N; ++k) d[k] = W.dual_norm(k);
    double s = 0.0;
    for (int n = 0; n <= N; ++n) {
        double row = 0.0;
        for (int k = 0; k <= n; ++k) row += std::abs(T[n][k]) * d[k];
        s += row * row;
    }
    return std::sqrt(s);
}

CalibrationReport calibrate_envelope(const UniformAxis& xi, const UniformAxis& eta, const ReconstructionSetup& setup,
                                     const BoundConstants& consts) {
    consts.validate();
    const int cap = setup_order_cap(setup);
    CalibrationReport rep;
    rep.B.assign(cap + 1, 0.0);
    double ratio = std::numbers::e;  // C/eps
    for (int N = 1; N <= cap; ++N) {
        const double B = noise_amplification(setup_extraction(setup, consts, xi, eta, N));
        rep.B[N] = B;
        double need = B * std::pow(N, consts.alpha);
        if (setup.mode == ReconstructionMode::Gevrey) need /= std::pow(N, consts.s() * N);
        ratio = std::max(ratio, std::pow(need, 1.0 / (N + 1)));
    }
    rep.C = setup.eps * ratio;
    return rep;
}

double main_bound(double H, const BoundConstants& consts, double eps) {
    const double M = consts.M();
    H = std::max(H, kDataNormFloor);
    return 4.0 * M * std::pow(std::log(consts.C / eps) / std::log(M / H), consts.alpha);
}

double gevrey_mean_bound(double H, const BoundConstants& consts, double eps) {
    const double M = consts.M();
    H = std::max(H, kDataNormFloor);
    const double L = std::log(M / H);
    return 4.0 * M * std::pow(std::log(consts.C / eps) * std::log(L) / L, consts.alpha);
}

double slice_bound(double H, const BoundConstants& consts) {
    const double M = consts.M();
    H = std::max(H, kDataNormFloor);
    const double L = std::log(M / H);
    const double top = std::max(0.0, std::log(consts.C) + std::log(L));
    return 4.0 * M * std::pow(top / L, consts.alpha) + consts.C0 * std::pow(2.0 / L, consts.alpha);
}

double gevrey_slice_bound(double H, const BoundConstants& consts) {
    const double M = consts.M();
    H = std::max(H, kDataNormFloor);
    const double L = std::log(M / H);
    const double top = std::max(0.0, (std::log(consts.C) + std::log(L)) * std::log(L));
    return 4.0 * M * std::pow(top / L, consts.alpha) + consts.C0 * std::pow(2.0 / L, consts.alpha);
}

ReconstructionResult reconstruct_mean(const Sinogram& g, const ReconstructionSetup& setup,
                                      const BoundConstants& consts, std::optional<double> data_error_norm) {
    consts.validate();
    g.validate();
    ReconstructionResult r;
    const auto grid = chebyshev_grid();
    r.profile.x = grid;
    r.profile.epsilon = setup.eps;
    r.profile.gamma = setup.gamma;
    r.profile.weighted = setup.kernels.has_value();

    const double norm = data_norm(g, setup.eps, setup.gamma);
    if (norm == 0.0) {
        r.profile.values.assign(grid.size(), 0.0);
        r.series.a.assign(1, 0.0);
        r.moments.m.assign(1, 0.0);
        r.test_function = "none";
        return r;
    }
    r.H = std::max(data_error_norm ? *data_error_norm : norm, kDataNormFloor);
    const int N = std::min(truncation_order(r.H, consts, setup.eps, setup.mode), setup_order_cap(setup));
    r.N = N;
    const TestFunction phi = setup_test_function(setup, consts, N);
    r.test_function = phi.id();
    r.moments = setup_extraction(setup, consts, g.xi, g.eta, N).apply(g);
    r.series = moments_to_coefficients(r.moments);
    r.profile.test_function = r.test_function;
    r.profile.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) r.profile.values[i] = r.series(grid[i]);
    r.bound = setup.mode == ReconstructionMode::Analytic ? main_bound(r.H, consts, setup.eps)
                                                         : gevrey_mean_bound(r.H, consts, setup.eps);
    return r;
}

double slice_epsilon(double H, const BoundConstants& consts, double eps0) {
    H = std::max(H, kDataNormFloor);
    const double M = consts.M();
    if (H >= M) throw std::domain_error("H too large for eps-selection rule: H >= M");
    const double eps = 2.0 / std::log(M / H);
    if (!(eps < eps0)) throw std::domain_error("H too large for eps-selection rule: 2/log(M/H) >= eps0");
    return eps;
}

SliceResult reconstruct_slice(const Sinogram& g, ReconstructionSetup setup, const BoundConstants& consts, double eps0,
                              std::optional<double> data_error_norm, const PhantomSpec* truth, const Weight* weight) {
    SliceResult out;
    const double H = data_error_norm ? *data_error_norm : data_norm(g, eps0, setup.gamma);
    out.eps = slice_epsilon(H, consts, eps0);
    setup.eps = out.eps;
    BoundConstants c = consts;
    c.C = calibrate_envelope(g.xi, g.eta, setup, consts).C;
    out.mean = reconstruct_mean(g, setup, c, data_error_norm);
    out.C = c.C;
    out.bound = setup.mode == ReconstructionMode::Analytic ? slice_bound(std::max(H, kDataNormFloor), c)
                                                           : gevrey_slice_bound(std::max(H, kDataNormFloor), c);
    if (truth) {
        auto slice = [&](double x) {
            const double v = eval_phantom(*truth, x, setup.gamma);
            return weight ? v * eval_weight(*weight, x, 0.0, setup.gamma) : v;
        };
        const auto& series = out.mean.series;
        const GaussRule& gr = gauss_legendre(16);
        double l2 = 0.0;
        const int panels = 128;
        for (int p = 0; p < panels; ++p) {
            const double a = -1.0 + 2.0 * p / panels, h = 1.0 / panels;
            for (int q = 0; q < 16; ++q) {
                const double x = a + h * (gr.nodes[q] + 1.0);
                const double d = series(x) - slice(x);
                l2 += h * gr.weights[q] * d * d;
            }
        }
        out.l2_error = std::sqrt(l2);
        double sup = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double x = -0.5 + i / 1000.0;
            sup = std::max(sup, std::abs(series(x) - slice(x)));
        }
        out.sup_error = sup;
    }
    return out;
}

MomentAuditReport moment_bound_audit(const Sinogram& g, const ReconstructionSetup& setup,
                                     const BoundConstants& consts, int N) {
    MomentAuditReport rep;
    rep.H = data_norm(g, setup.eps, setup.gamma);
    rep.moments = setup_extraction(setup, consts, g.xi, g.eta, N).apply(g).m;
    rep.ratios.assign(N + 1, 0.0);
    if (rep.H == 0.0) return rep;
    auto envelope = [&](int k) {
        return setup.mode == ReconstructionMode::Analytic ? std::exp(static_cast<double>(N))
                                                           : std::pow(factorial(k), consts.s());
    };
    double ratio = 0.0;  // fitted C/eps
    for (int k = 0; k <= N; ++k)
        ratio = std::max(ratio, std::pow(std::abs(rep.moments[k]) / (envelope(k) * rep.H), 1.0 / (k + 1)));
    ratio *= 1.0 + 1e-14;  // rounding margin
    rep.fitted_C = setup.eps * ratio;
    for (int k = 0; k <= N; ++k) {
        const double bound = std::pow(ratio, k + 1) * envelope(k) * rep.H;
        rep.ratios[k] = bound > 0.0 ? std::abs(rep.moments[k]) / bound : 0.0;
        rep.max_ratio = std::max(rep.max_ratio, rep.ratios[k]);
    }
    return rep;
}

Sinogram add_noise(const Sinogram& g, double sigma, std::uint64_t seed) {
    Sinogram out = g;
    out.noise_sigma = sigma;
    out.seed = seed;
    if (sigma == 0.0) return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (double& v : out.values) v += noise(rng);
    return out;
}

StabilityReport stability_curve(const PhantomSpec& f, const Weight* m, const Sinogram& clean,
                                const std::vector<double>& noise_levels, const ReconstructionSetup& setup,
                                const BoundConstants& consts, std::uint64_t seed) {
    StabilityReport rep;
    rep.C = consts.C;
    rep.rows.resize(noise_levels.size());
    parallel_for(noise_levels.size(), [&](std::size_t r) {
        StabilityRow& row = rep.rows[r];
        row.noise_sigma = noise_levels[r];
        const Sinogram noisy = add_noise(clean, noise_levels[r], seed + r);
        Sinogram diff = noisy;
        for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= clean.values[i];
        const auto res = reconstruct_mean(noisy, setup, consts, data_norm(diff, setup.eps, setup.gamma));
        row.H = res.H;
        row.N = res.N;
        row.bound = res.bound;
        const TestFunction phi = setup_test_function(setup, consts, res.N);
        const auto& series = res.series;
        row.l2_error =
            mean_l2_distance(f, m, phi, setup.eps, setup.gamma, [&](double x) { return series(x); });
        double sup = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double x = -0.5 + i / 200.0;
            sup = std::max(sup, std::abs(series(x) - mean_value(f, m, phi, setup.eps, setup.gamma, x)));
        }
        row.sup_error = sup;
    });
    std::sort(rep.rows.begin(), rep.rows.end(), [](const auto& a, const auto& b) { return a.H > b.H; });
    // log err = log c - alpha_hat log log(1/H)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& row : rep.rows) {
        if (!(row.l2_error > 0.0) || !(row.H < 1.0)) continue;
        const double x = std::log(std::log(1.0 / row.H)), y = std::log(row.l2_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n >= 2 && n * sxx - sx * sx > 0.0) {
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        rep.alpha_hat = -slope;
        rep.fit_const = std::exp((sy - slope * sx) / n);
    }
    return rep;
}

std::vector<CounterexampleRow> counterexample_experiment(const PhantomSpec& q, const std::vector<double>& lambdas,
                                                         const SinogramGrid& grid, int image_points) {
    if (lambdas.size() < 2) throw std::invalid_argument("counterexample: need at least two lambda values");
    for (std::size_t i = 1; i < lambdas.size(); ++i)
        if (!(lambdas[i] > lambdas[i - 1])) throw std::invalid_argument("counterexample: lambda list must increase");
    std::vector<CounterexampleRow> rows(lambdas.size());
    const Weight one = constant_weight(1.0);
    parallel_for(lambdas.size(), [&](std::size_t r) {
        const PhantomSpec f = oscillatory_phantom(q, lambdas[r]);
        const Box box = phantom_bounding_box(f);
        const double hx = (box.x_max - box.x_min) / (image_points - 1);
        const double hy = (box.y_max - box.y_min) / (image_points - 1);
        double s = 0.0;
        for (int i = 0; i < image_points; ++i)
            for (int j = 0; j < image_points; ++j) {
                const double v = eval_phantom(f, box.x_min + i * hx, box.y_min + j * hy);
                s += v * v;
            }
        rows[r].lambda = lambdas[r];
        rows[r].f_norm = std::sqrt(s * hx * hy);
        const Sinogram g = sinogram(f, one, grid, 0.0, 0, 1e-15);
        double t = 0.0;
        for (double v : g.values) t += v * v;
        rows[r].radon_norm = std::sqrt(t * g.xi.step() * g.eta.step());
    });
    for (std::size_t r = 1; r < rows.size(); ++r)
        rows[r].slope = std::log(rows[r].radon_norm / rows[r - 1].radon_norm) /
                        std::log(rows[r].lambda / rows[r - 1].lambda);
    return rows;
}

}  // namespace lwrt
