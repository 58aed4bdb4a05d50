// One PASS/FAIL line per acceptance criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lwrt/stability.hpp"

using namespace lwrt;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = budget_s <= 0 || dt <= budget_s;
    const bool ok = o.pass && in_time;
    if (!ok) ++failures;
    if (budget_s > 0)
        std::printf("%s %2d %s: %s [%.1f s of %.0f s]\n", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), dt, budget_s);
    else
        std::printf("%s %2d %s: %s [%.1f s]\n", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), dt);
    std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Family {
    const char* name;
    AnalyticField a, b;
    Weight w;
};

std::vector<Family> weight_families() {
    const AnalyticField z = AnalyticField::zero(), one = AnalyticField::constant(1.0);
    const AnalyticField sa("0.5*sin(xi)"), cb("0.5*cos(eta)");
    return {{"m=1", z, z, constant_weight()},
            {"m=exp(x xi)", one, z, weight_from_ab(one, z)},
            {"sin/cos", sa, cb, weight_from_ab(sa, cb)}};
}

SinogramGrid grid(int nxi, double xi_max = 0.3) {
    SinogramGrid g;
    g.xi = {-xi_max, xi_max, nxi};
    g.eta = {-0.4, 0.4, 401};
    return g;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Outcome identity_suite() {
    const auto bump = default_bump();
    const std::vector<PhantomSpec> phantoms = {bump, smooth_bump(0.1, 0.45, 0.35, 1.0, 14.0),
                                               polynomial_times_bump(smooth_bump(-0.05, 0.4, 0.3, 1.0, 14.0),
                                                                     "1 + x - y^2", 20.0)};
    const std::vector<std::array<double, 2>> pts = {{0.0, 0.3}, {0.1, 0.35}, {-0.15, 0.25}, {0.2, 0.4}};
    double mom = 0, tr = 0;
    for (const auto& f : phantoms) {
        for (int k = 1; k <= 3; ++k) mom = std::max(mom, check_moment_identity(f, k, pts));
        for (const auto& fam : weight_families())
            tr = std::max(tr, check_transport_identity(f, fam.w, fam.a, fam.b, pts));
    }
    return {mom <= 1e-3 && tr <= 1e-4,
            "moment identity residual " + fmt("%.2e", mom) + " (<= 1e-3), transport residual " + fmt("%.2e", tr) +
                " (<= 1e-4)"};
}

Outcome means_oracle() {
    const auto f = smooth_bump(0.1, 0.45, 0.35, 1.0, 14.0);
    const auto g = sinogram(f, constant_weight(), grid(61));
    const auto phi = TestFunction::hormander(6);
    double worst = 0;
    const double pairs[5][2] = {{0.1, 0.3}, {0.2, 0.3}, {0.3, 0.2}, {0.2, 0.4}, {0.15, 0.35}};
    for (const auto& p : pairs) {
        const auto m = moments_from_sinogram_unweighted(g, phi, p[0], p[1], 6);
        const auto d = mean_moments(f, nullptr, phi, p[0], p[1], 6);
        for (int k = 0; k <= 6; ++k) worst = std::max(worst, rel(m.m[k], d[k]));
    }
    const auto one = AnalyticField::constant(1.0), z = AnalyticField::zero();
    const auto w = weight_from_ab(one, z);
    const auto gw = sinogram(f, w, grid(61));
    const auto base = base_kernels(one, z, 0.3, 24);
    const auto phi4 = TestFunction::hormander(4);
    const auto mw = moments_from_sinogram_weighted(gw, base, phi4, 0.2, 0.3, 4);
    const auto dw = mean_moments(f, &w, phi4, 0.2, 0.3, 4);
    double wworst = 0;
    for (int k = 0; k <= 4; ++k) wworst = std::max(wworst, rel(mw.m[k], dw[k]));
    return {worst <= 1e-4 && wworst <= 1e-3, "unweighted k<=6 max rel " + fmt("%.2e", worst) +
                                                 " (<= 1e-4), weighted k<=4 max rel " + fmt("%.2e", wworst) +
                                                 " (<= 1e-3)"};
}

Outcome kernel_certification() {
    std::vector<KernelSample> samples;
    for (double x : {-0.3, 0.0, 0.3})
        for (double e : {-0.3, 0.0, 0.3})
            for (double ep : {-0.3, -0.1, 0.1}) samples.push_back({x, e, ep});
    const std::vector<KernelSample> probes = {{0.1, 0.2, -0.25}, {-0.2, 0.0, -0.3}, {0.25, 0.3, 0.05}};
    double worst_rel = 0, worst_ratio = 0;
    std::string consts;
    for (auto [as, bs] : {std::pair{"xi", "0"}, std::pair{"0.5*sin(xi)", "0.5*cos(eta)"}}) {
        const auto base = base_kernels(AnalyticField(as), AnalyticField(bs), 0.3, 24);
        for (int k = 1; k <= 3; ++k) {
            const auto A = sjk_family(base, k);
            const auto B = sjk_family_nested(base, k, 16);
            for (const auto& p : probes)
                for (int j = 0; j <= k; ++j) {
                    const double a = A.S[j].value(p.xi, p.eta, p.etap), b = B.S[j].value(p.xi, p.eta, p.etap);
                    worst_rel = std::max(worst_rel, std::abs(a - b) / std::max(std::abs(b), 1e-12));
                }
        }
        const double C = certify_base_constant(base, samples, 20);
        const auto rep = verify_kernel_bounds(base, 4, C, 1.0 + std::sqrt(3.0), samples);
        worst_ratio = std::max(worst_ratio, rep.max_ratio);
        consts += fmt(" C=%.4g", C);
    }
    return {worst_rel <= 1e-5 && worst_ratio <= 1.0, "recursion vs nested max rel " + fmt("%.2e", worst_rel) +
                                                         " (<= 1e-5), bound ratio " + fmt("%.3f", worst_ratio) +
                                                         " (<= 1)," + consts};
}

Outcome legendre_suite() {
    const auto& g = gauss_legendre(80);
    double orth = 0;
    for (int i = 0; i <= 30; ++i)
        for (int j = 0; j <= 30; ++j) {
            double s = 0;
            for (std::size_t q = 0; q < g.nodes.size(); ++q)
                s += g.weights[q] * legendre_normalized(i, g.nodes[q]) * legendre_normalized(j, g.nodes[q]);
            orth = std::max(orth, std::abs(s - (i == j)));
        }

    // moments -> coefficients -> moments
    std::mt19937_64 rng(99);
    std::normal_distribution<double> nd;
    double trip = 0;
    for (int N = 1; N <= 30; ++N) {
        LegendreSeries s;
        for (int n = 0; n <= N; ++n) s.a.push_back(nd(rng));
        MomentVector m;
        for (int k = 0; k <= N; ++k) {
            double v = 0;
            for (std::size_t q = 0; q < g.nodes.size(); ++q) v += g.weights[q] * std::pow(g.nodes[q], k) * s(g.nodes[q]);
            m.m.push_back(v);
        }
        const auto back = moments_to_coefficients(m);
        for (int k = 0; k <= N; ++k) {
            double v = 0;
            for (std::size_t q = 0; q < g.nodes.size(); ++q)
                v += g.weights[q] * std::pow(g.nodes[q], k) * back(g.nodes[q]);
            trip = std::max(trip, std::abs(v - m.m[k]) / std::max(1.0, std::abs(m.m[k])));
        }
    }

    double coef = 0;
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_int_distribution<int> deg(0, 20);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> c(deg(rng) + 1);
        for (double& v : c) v = u(rng);
        MomentVector m;
        for (int k = 0; k <= 20; ++k) {
            double s = 0;
            for (std::size_t j = 0; j < c.size(); ++j)
                if ((k + j) % 2 == 0) s += c[j] * 2.0 / (k + j + 1);
            m.m.push_back(s);
        }
        coef = std::max(coef, coefficient_bound_check(m, moments_to_coefficients(m)).max_ratio);
    }

    double sup = 0;
    for (int n = 0; n <= 50; ++n) sup = std::max(sup, normalized_sup_on_half(n) / normalized_sup_bound(n));
    return {orth <= 1e-12 && trip <= 1e-10 && coef <= 1.0 && sup <= 1.0,
            "orthonormality " + fmt("%.1e", orth) + ", round trip " + fmt("%.1e", trip) + ", coefficient ratio " +
                fmt("%.3g", coef) + ", sup ratio " + fmt("%.3f", sup)};
}

Outcome test_function_certification() {
    double h = 0, gv = 0;
    for (int N = 1; N <= 24; ++N) {
        auto tf = TestFunction::hormander(N);
        for (double r : verify_derivative_bounds(tf, N).ratios) h = std::max(h, r);
    }
    std::string cs;
    for (double sigma : {1.5, 2.0, 3.0}) {
        auto tf = TestFunction::gevrey(sigma, 12);
        const auto rep = verify_derivative_bounds(tf, 12);
        for (double r : rep.ratios) gv = std::max(gv, r);
        cs += fmt(" %.4g", rep.certified_constant);
    }
    return {h <= 1.0 && gv <= 1.0, "Hormander N<=24 max ratio " + fmt("%.3f", h) + ", Gevrey k<=12 max ratio " +
                                       fmt("%.3f", gv) + ", Gevrey C:" + cs};
}

Outcome stability(ReconstructionMode mode) {
    const auto f = default_bump();
    const auto G = grid(61);
    const std::vector<double> levels = {1e-4, 1e-6, 1e-8, 1e-10};
    Outcome o;
    for (const auto& fam : weight_families()) {
        if (std::string(fam.name) == "sin/cos") continue;
        ReconstructionSetup s;
        s.eps = 0.2;
        s.gamma = 0.3;
        s.mode = mode;
        const bool weighted = fam.w.kind != WeightKind::Constant;
        if (weighted) s.kernels = base_kernels(fam.a, fam.b, s.gamma, 24);
        BoundConstants c;
        c.C = calibrate_envelope(G.xi, G.eta, s, c).C;
        const auto g = sinogram(f, fam.w, G);
        const auto rep = stability_curve(f, weighted ? &fam.w : nullptr, g, levels, s, c, 1);
        double worst = 0;
        for (const auto& row : rep.rows) {
            const double b = mode == ReconstructionMode::Analytic ? main_bound(row.H, c, s.eps)
                                                                  : gevrey_mean_bound(row.H, c, s.eps);
            worst = std::max(worst, row.l2_error / b);
            if (!(row.l2_error <= b)) o.pass = false;
        }
        if (rep.rows.size() != levels.size()) o.pass = false;
        o.detail += std::string(o.detail.empty() ? "" : "; ") + fam.name + fmt(": C/eps=%.3g", c.C / s.eps) +
                    fmt(", errors %.3g", rep.rows.front().l2_error) + fmt("..%.3g", rep.rows.back().l2_error) +
                    fmt(", max error/bound %.2e", worst);
    }
    return o;
}

Outcome slice_estimate() {
    const auto f = default_bump();
    const auto G = grid(121);
    Outcome o;
    double worst = 0, gap = 0;
    struct Run {
        ReconstructionMode mode;
        int family;
    };
    const auto fams = weight_families();
    for (Run run : {Run{ReconstructionMode::Analytic, 0}, Run{ReconstructionMode::Analytic, 1},
                    Run{ReconstructionMode::Gevrey, 0}}) {
        const auto& fam = fams[run.family];
        const bool weighted = run.family != 0;
        ReconstructionSetup s;
        s.gamma = 0.3;
        s.mode = run.mode;
        if (weighted) s.kernels = base_kernels(fam.a, fam.b, s.gamma, 24);
        const BoundConstants c;
        const auto clean = sinogram(f, fam.w, G);
        for (double sigma : {1e-4, 1e-7, 1e-10}) {
            const auto noisy = add_noise(clean, sigma, 3);
            Sinogram diff = noisy;
            for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= clean.values[i];
            const double H = data_norm(diff, 0.3, s.gamma);
            const auto r = reconstruct_slice(noisy, s, c, 0.3, H, &f, weighted ? &fam.w : nullptr);
            worst = std::max(worst, *r.l2_error / r.bound);
            if (!(*r.l2_error <= r.bound)) o.pass = false;
            ReconstructionSetup at = s;
            at.eps = r.eps;
            BoundConstants cc = c;
            cc.C = r.C;
            const TestFunction phi = setup_test_function(at, cc, r.mean.N);
            const auto gr = convergence_gap(f, weighted ? &fam.w : nullptr, phi, r.eps, s.gamma, chebyshev_grid(257),
                                            f.holder_bound);
            gap = std::max(gap, gr.max_ratio);
            if (!(gr.max_ratio <= 1.0)) o.pass = false;
        }
    }
    o.detail = "max error/bound " + fmt("%.2e", worst) + ", max gap ratio " + fmt("%.3f", gap);
    return o;
}

Outcome counterexample() {
    SinogramGrid G;
    G.xi = {-0.3, 0.3, 31};
    G.eta = {-0.2, 1.2, 561};
    const auto q = smooth_bump(0.0, 0.5, 0.35, 1.0, 14.0);
    const auto rows = counterexample_experiment(q, {10, 20, 40, 80}, G);
    double lo = 1e300, hi = 0;
    for (const auto& r : rows) {
        lo = std::min(lo, r.f_norm * r.lambda);
        hi = std::max(hi, r.f_norm * r.lambda);
    }
    bool monotone = true;
    for (std::size_t i = 2; i < rows.size(); ++i) monotone = monotone && rows[i].slope < rows[i - 1].slope;
    const double last = rows.back().slope;
    std::string slopes;
    for (std::size_t i = 1; i < rows.size(); ++i) slopes += fmt(" %.2f", rows[i].slope);
    return {hi / lo <= 2.0 && monotone && std::abs(last) > 3.0,
            "f*lambda spread " + fmt("%.3f", hi / lo) + " (<= 2), slopes" + slopes};
}

Outcome zero_data() {
    Sinogram g(UniformAxis{-0.3, 0.3, 61}, UniformAxis{-0.4, 0.4, 401});
    for (double& v : g.values) v = 0.0;
    bool ok = true;
    for (auto mode : {ReconstructionMode::Analytic, ReconstructionMode::Gevrey}) {
        ReconstructionSetup s;
        s.eps = 0.2;
        s.mode = mode;
        BoundConstants c;
        c.C = 1.0;
        const auto r = reconstruct_mean(g, s, c);
        ok = ok && r.N == 0 && data_norm(g, s.eps, s.gamma) == 0.0;
        for (double v : r.profile.values) ok = ok && v == 0.0;
        for (double x = -1; x <= 1; x += 0.01) ok = ok && r.series(x) == 0.0;
    }
    return {ok, ok ? "reconstruction identically zero" : "nonzero output on zero data"};
}

}  // namespace

int main() {
    criterion(1, "identity suite", 120, identity_suite);
    criterion(2, "means oracle", 300, means_oracle);
    criterion(3, "kernel certification", 300, kernel_certification);
    criterion(4, "Legendre suite", 60, legendre_suite);
    criterion(5, "test-function certification", 120, test_function_certification);
    criterion(6, "analytic stability", 600, [] { return stability(ReconstructionMode::Analytic); });
    criterion(7, "Gevrey stability", 600, [] { return stability(ReconstructionMode::Gevrey); });
    criterion(8, "slice estimate", 0, slice_estimate);
    criterion(9, "counterexample", 180, counterexample);
    criterion(10, "zero-data soundness", 0, zero_data);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
