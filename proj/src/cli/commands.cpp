#include "lwrt/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include "json.hpp"
#include "lwrt/cli/csv_io.hpp"
#include "lwrt/legendre.hpp"
#include "lwrt/quadrature.hpp"

namespace lwrt::cli {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Context {
    ExperimentConfig cfg;
    bool quiet = false;
    std::filesystem::path out;
    json artifacts = json::array();
    json results = json::object();

    void log(const std::string& msg) const {
        if (!quiet) std::cout << msg << '\n';
    }
    std::string file(const std::string& name) {
        artifacts.push_back(name);
        return (out / name).string();
    }
};

void write_json(const std::string& path, const json& j) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + path + "'");
    os << j.dump(2) << '\n';
}

void write_manifest(Context& ctx, const std::string& command) {
    json m;
    m["command"] = command;
    m["config_hash"] = fnv1a_hex(ctx.cfg.source_text);
    m["seed"] = ctx.cfg.seed;
    m["version"] = kVersion;
#ifdef __VERSION__
    m["compiler"] = __VERSION__;
#endif
    m["artifacts"] = ctx.artifacts;
    m["results"] = ctx.results;
    write_json((ctx.out / "manifest.json").string(), m);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

ReconstructionSetup make_setup(const ExperimentConfig& cfg, double eps) {
    ReconstructionSetup s;
    s.eps = eps;
    s.gamma = cfg.gamma;
    s.mode = cfg.mode;
    s.k_max = cfg.k_max;
    s.n_ceiling = cfg.n_ceiling;
    if (cfg.weighted)
        s.kernels = base_kernels(AnalyticField(cfg.weight_a), AnalyticField(cfg.weight_b), cfg.gamma,
                                 std::max(24, cfg.k_max + 2));
    return s;
}

void require_reconstructible(const ExperimentConfig& cfg) {
    if (cfg.weight.kind == WeightKind::Attenuation)
        throw ConfigError("weight.kind", "reconstruction needs a constant or from_ab weight");
}

struct Data {
    Sinogram g;
    std::optional<double> error_norm;
    bool synthesized = false;
};

Data obtain_data(Context& ctx, double eps_for_norm) {
    const auto& cfg = ctx.cfg;
    Data d;
    if (cfg.input_sinogram) {
        d.g = read_sinogram_csv(*cfg.input_sinogram);
        d.error_norm = cfg.data_error_norm;
        return d;
    }
    const Sinogram clean = sinogram(cfg.phantom, cfg.weight, cfg.grid, 0.0, 0, cfg.radon_tol);
    d.g = add_noise(clean, cfg.noise_sigma, cfg.seed);
    d.synthesized = true;
    if (cfg.data_error_norm) {
        d.error_norm = cfg.data_error_norm;
    } else {
        Sinogram diff = d.g;
        for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= clean.values[i];
        d.error_norm = data_norm(diff, eps_for_norm, cfg.gamma);
    }
    return d;
}

BoundConstants constants_for(const ExperimentConfig& cfg, const ReconstructionSetup& setup, const Sinogram& g) {
    BoundConstants c = cfg.constants;
    if (!(c.C > 0.0)) c.C = calibrate_envelope(g.xi, g.eta, setup, c).C;
    return c;
}

const Weight* weight_ptr(const ExperimentConfig& cfg) {
    return cfg.weight.kind == WeightKind::Constant && cfg.weight.constant_value == 1.0 ? nullptr : &cfg.weight;
}

void cmd_sinogram(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const Sinogram clean = sinogram(cfg.phantom, cfg.weight, cfg.grid, 0.0, 0, cfg.radon_tol);
    const Sinogram g = add_noise(clean, cfg.noise_sigma, cfg.seed);
    write_sinogram_csv(g, ctx.file("sinogram.csv"));
    int failed = 0;
    for (auto f : clean.failed) failed += f;
    ctx.results["failed_cells"] = failed;
    ctx.results["noise_sigma"] = cfg.noise_sigma;
    ctx.results["data_norm"] = data_norm(g, std::min(cfg.epsilon, std::abs(g.xi.max)), cfg.gamma);
    ctx.log("sinogram " + std::to_string(g.xi.n) + "x" + std::to_string(g.eta.n) + " written, " +
            std::to_string(failed) + " cells flagged");
}

void cmd_reconstruct(Context& ctx) {
    const auto& cfg = ctx.cfg;
    require_reconstructible(cfg);
    const Data d = obtain_data(ctx, cfg.epsilon);
    const ReconstructionSetup setup = make_setup(cfg, cfg.epsilon);
    const BoundConstants c = constants_for(cfg, setup, d.g);
    const auto r = reconstruct_mean(d.g, setup, c, d.error_norm);
    ctx.results["N"] = r.N;
    ctx.results["H"] = r.H;
    ctx.results["C"] = c.C;
    ctx.results["M"] = c.M();
    ctx.results["bound"] = r.bound;
    ctx.results["test_function"] = r.test_function;
    ctx.results["moments"] = r.moments.m;
    ctx.results["coefficients"] = r.series.a;

    // With file input the configured phantom serves as reference.
    const bool truth = r.N > 0;
    std::vector<std::string> cols = {"x", "estimate"};
    if (truth) cols.push_back("truth");
    CsvWriter csv(ctx.file("profile.csv"), cols);
    if (truth) {
        const TestFunction phi = setup_test_function(setup, c, r.N);
        const Weight* w = weight_ptr(cfg);
        const auto& series = r.series;
        const double l2 = mean_l2_distance(cfg.phantom, w, phi, cfg.epsilon, cfg.gamma,
                                           [&](double x) { return series(x); });
        ctx.results["l2_error"] = l2;
        ctx.results["within_bound"] = l2 <= r.bound;
        for (std::size_t i = 0; i < r.profile.x.size(); ++i)
            csv.row({r.profile.x[i], r.profile.values[i],
                     mean_value(cfg.phantom, w, phi, cfg.epsilon, cfg.gamma, r.profile.x[i])});
        ctx.log("reconstruct: N=" + std::to_string(r.N) + " H=" + fmt(r.H) + " L2 error=" + fmt(l2) +
                " bound=" + fmt(r.bound));
    } else {
        for (std::size_t i = 0; i < r.profile.x.size(); ++i) csv.row({r.profile.x[i], r.profile.values[i]});
        ctx.log("reconstruct: N=" + std::to_string(r.N) + " H=" + fmt(r.H) + " bound=" + fmt(r.bound));
    }
}

void cmd_slice(Context& ctx) {
    const auto& cfg = ctx.cfg;
    require_reconstructible(cfg);
    const Data d = obtain_data(ctx, cfg.epsilon0);
    const ReconstructionSetup setup = make_setup(cfg, cfg.epsilon0);
    const Weight* w = weight_ptr(cfg);
    const auto r = reconstruct_slice(d.g, setup, cfg.constants, cfg.epsilon0, d.error_norm,
                                     d.synthesized ? &cfg.phantom : nullptr, w);
    ctx.results["epsilon"] = r.eps;
    ctx.results["N"] = r.mean.N;
    ctx.results["H"] = r.mean.H;
    ctx.results["C"] = r.C;
    ctx.results["bound"] = r.bound;
    if (r.l2_error) {
        ctx.results["l2_error"] = *r.l2_error;
        ctx.results["sup_error_half"] = *r.sup_error;
        ctx.results["within_bound"] = *r.l2_error <= r.bound;
    }
    // Dividing out the weight is offered only where it stays above the threshold.
    bool divide = false;
    if (w) {
        double lo = INFINITY;
        const double R = std::sqrt(cfg.gamma / cfg.phantom.support_c);
        for (int i = 0; i <= 200; ++i) lo = std::min(lo, std::abs(eval_weight(*w, -R + 2.0 * R * i / 200, 0.0, cfg.gamma)));
        divide = lo >= cfg.min_weight;
        ctx.results["min_weight_on_slice"] = lo;
    }
    std::vector<std::string> cols = {"x", "estimate"};
    if (divide) cols.push_back("estimate_over_weight");
    if (d.synthesized) cols.push_back("truth");
    CsvWriter csv(ctx.file("slice.csv"), cols);
    for (std::size_t i = 0; i < r.mean.profile.x.size(); ++i) {
        const double x = r.mean.profile.x[i];
        std::vector<double> row = {x, r.mean.profile.values[i]};
        const double mw = w ? eval_weight(*w, x, 0.0, cfg.gamma) : 1.0;
        if (divide) row.push_back(r.mean.profile.values[i] / mw);
        if (d.synthesized) row.push_back(eval_phantom(cfg.phantom, x, cfg.gamma) * mw);
        csv.row(row);
    }
    ctx.log("slice: eps=" + fmt(r.eps) + " N=" + std::to_string(r.mean.N) + " bound=" + fmt(r.bound) +
            (r.l2_error ? " L2 error=" + fmt(*r.l2_error) : ""));
}

void cmd_sweep(Context& ctx) {
    const auto& cfg = ctx.cfg;
    require_reconstructible(cfg);
    const Sinogram clean = sinogram(cfg.phantom, cfg.weight, cfg.grid, 0.0, 0, cfg.radon_tol);
    const ReconstructionSetup setup = make_setup(cfg, cfg.epsilon);
    const BoundConstants c = constants_for(cfg, setup, clean);
    const auto rep = stability_curve(cfg.phantom, weight_ptr(cfg), clean, cfg.noise_levels, setup, c, cfg.seed);
    CsvWriter csv(ctx.file("sweep.csv"), {"noise_sigma", "H", "N", "l2_error", "sup_error_half", "bound"});
    bool ok = true;
    for (const auto& row : rep.rows) {
        csv.row({row.noise_sigma, row.H, static_cast<double>(row.N), row.l2_error, row.sup_error, row.bound});
        ok = ok && row.l2_error <= row.bound;
        ctx.log("  H=" + fmt(row.H) + " N=" + std::to_string(row.N) + " L2=" + fmt(row.l2_error) +
                " bound=" + fmt(row.bound));
    }
    ctx.results["C"] = c.C;
    ctx.results["alpha_hat"] = rep.alpha_hat;
    ctx.results["fit_const"] = rep.fit_const;
    ctx.results["all_within_bound"] = ok;
    ctx.log("sweep: alpha_hat=" + fmt(rep.alpha_hat) + (ok ? ", all rows within bound" : ", BOUND VIOLATED"));
}

void cmd_counterexample(Context& ctx) {
    const auto& cfg = ctx.cfg;
    PhantomSpec q = cfg.phantom;
    if (q.kind == PhantomKind::Oscillatory) q.kind = PhantomKind::SmoothBump;
    if (q.kind != PhantomKind::SmoothBump) throw ConfigError("phantom.kind", "counterexample needs a smooth bump");
    const auto rows = counterexample_experiment(q, cfg.lambdas, cfg.counterexample_grid);
    CsvWriter csv(ctx.file("counterexample.csv"), {"lambda", "f_norm", "radon_norm", "slope", "f_norm_times_lambda"});
    for (const auto& r : rows) {
        csv.row({r.lambda, r.f_norm, r.radon_norm, r.slope, r.f_norm * r.lambda});
        ctx.log("  lambda=" + fmt(r.lambda) + " |f|=" + fmt(r.f_norm) + " |Rf|=" + fmt(r.radon_norm) +
                " slope=" + fmt(r.slope));
    }
    ctx.results["rows"] = rows.size();
}

std::vector<KernelSample> kernel_samples(const ExperimentConfig& cfg) {
    std::vector<KernelSample> s;
    const int n = cfg.kernels.samples;
    const double eps = std::min(cfg.epsilon, std::max(std::abs(cfg.grid.xi.min), std::abs(cfg.grid.xi.max)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                const double xi = -eps + 2.0 * eps * i / (n - 1);
                const double eta = -cfg.gamma + 2.0 * cfg.gamma * (j + 1) / n;
                const double etap = -cfg.gamma + (eta + cfg.gamma) * l / n;
                s.push_back({xi, eta, etap});
            }
    return s;
}

void cmd_kernels(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const AnalyticField a = [&] {
        try {
            return AnalyticField(cfg.kernels.a);
        } catch (const std::exception& e) {
            throw ConfigError("kernels.a", e.what());
        }
    }();
    const AnalyticField b = [&] {
        try {
            return AnalyticField(cfg.kernels.b);
        } catch (const std::exception& e) {
            throw ConfigError("kernels.b", e.what());
        }
    }();
    const auto base = base_kernels(a, b, cfg.gamma, std::max(24, std::max(cfg.kernels.n_max, cfg.k_max) + 2));
    const auto samples = kernel_samples(cfg);
    const double C = certify_base_constant(base, samples, cfg.kernels.n_max);
    const auto rep = verify_kernel_bounds(base, cfg.k_max, C, cfg.constants.beta, samples);
    CsvWriter csv(ctx.file("kernel_bounds.csv"), {"k", "j", "max_ratio"});
    for (int k = 1; k <= cfg.k_max; ++k)
        for (int j = 0; j <= k; ++j) csv.row({double(k), double(j), rep.ratio[k - 1][j]});

    // Recursion against nested composition for small k.
    double worst = 0.0;
    CsvWriter oracle(ctx.file("kernel_oracle.csv"), {"k", "j", "xi", "eta", "eta_prime", "rows", "nested", "rel"});
    for (int k = 1; k <= std::min(3, cfg.k_max); ++k) {
        const auto fam = sjk_family(base, k, cfg.k_max);
        const auto ref = sjk_family_nested(base, k, 16);
        for (std::size_t si = 0; si < samples.size(); si += std::max<std::size_t>(1, samples.size() / 8)) {
            const auto& s = samples[si];
            if (!(s.eta > s.etap)) continue;
            for (int j = 0; j <= k; ++j) {
                const double v = fam.S[j].value(s.xi, s.eta, s.etap), r = ref.S[j].value(s.xi, s.eta, s.etap);
                const double rel = std::abs(v - r) / std::max(std::abs(r), 1e-300);
                if (std::abs(r) > 1e-12) worst = std::max(worst, rel);
                oracle.row({double(k), double(j), s.xi, s.eta, s.etap, v, r, rel});
            }
        }
    }
    ctx.results["C"] = C;
    ctx.results["beta"] = cfg.constants.beta;
    ctx.results["max_ratio"] = rep.max_ratio;
    ctx.results["oracle_max_rel"] = worst;
    ctx.log("kernels: C=" + fmt(C) + " max bound ratio=" + fmt(rep.max_ratio) + " oracle rel=" + fmt(worst));
}

struct Check {
    std::string name;
    double value, threshold;
    bool pass() const { return value <= threshold; }
};

void cmd_verify(Context& ctx) {
    const auto& cfg = ctx.cfg;
    std::vector<Check> checks;
    auto add = [&](const std::string& name, double v, double t) {
        checks.push_back({name, v, t});
        ctx.log(std::string(v <= t ? "PASS " : "FAIL ") + name + " value=" + fmt(v) + " threshold=" + fmt(t));
    };
    const PhantomSpec& f = cfg.phantom;
    const std::vector<std::array<double, 2>> pts = {{-0.1, 0.2}, {0.05, 0.35}, {0.15, 0.3}};

    for (int k = 1; k <= 3; ++k) add("moment_identity_k" + std::to_string(k), check_moment_identity(f, k, pts), 1e-3);
    {
        const AnalyticField a(cfg.weighted ? cfg.weight_a : "0"), b(cfg.weighted ? cfg.weight_b : "0");
        const Weight w = cfg.weighted ? cfg.weight : constant_weight(1.0);
        add("transport_identity", check_transport_identity(f, w, a, b, pts), 1e-4);
    }

    const Sinogram clean = sinogram(f, cfg.weight, cfg.grid, 0.0, 0, cfg.radon_tol);
    const ReconstructionSetup setup = make_setup(cfg, cfg.epsilon);
    const double eps = cfg.epsilon, gamma = cfg.gamma;
    {
        const int K = cfg.weighted ? std::min(4, cfg.k_max) : 6;
        const TestFunction phi = TestFunction::hormander(6);
        const MomentVector m = cfg.weighted
                                   ? moments_from_sinogram_weighted(clean, *setup.kernels, phi, eps, gamma, K, cfg.k_max)
                                   : moments_from_sinogram_unweighted(clean, phi, eps, gamma, K);
        const auto ref = mean_moments(f, weight_ptr(cfg), phi, eps, gamma, K);
        double worst = 0.0;
        for (int k = 0; k <= K; ++k) worst = std::max(worst, std::abs(m.m[k] - ref[k]) / std::abs(ref[k]));
        add("moments_vs_means", worst, cfg.weighted ? 1e-3 : 1e-4);
    }
    if (cfg.weighted) {
        const auto samples = kernel_samples(cfg);
        const double C = certify_base_constant(*setup.kernels, samples, cfg.kernels.n_max);
        add("kernel_bounds", verify_kernel_bounds(*setup.kernels, std::min(4, cfg.k_max), C, cfg.constants.beta,
                                                  samples).max_ratio,
            1.0);
    }
    {
        const GaussRule& g = gauss_legendre(40);
        double worst = 0.0;
        for (int n = 0; n <= 30; ++n)
            for (int m = 0; m <= n; ++m) {
                double s = 0.0;
                for (std::size_t q = 0; q < g.nodes.size(); ++q)
                    s += g.weights[q] * legendre_normalized(n, g.nodes[q]) * legendre_normalized(m, g.nodes[q]);
                worst = std::max(worst, std::abs(s - (n == m ? 1.0 : 0.0)));
            }
        add("legendre_orthonormality", worst, 1e-12);
    }
    {
        double worst = 0.0;
        for (int N : {1, 8, 24}) {
            TestFunction tf = TestFunction::hormander(N);
            const auto rep = verify_derivative_bounds(tf, N, 1 << 12);
            for (double r : rep.ratios) worst = std::max(worst, r);
        }
        add("hormander_derivative_bounds", worst, 1.0 + 1e-12);
    }
    {
        BoundConstants c = constants_for(cfg, setup, clean);
        const auto audit = moment_bound_audit(clean, setup, c, std::min(6, setup_order_cap(setup)));
        add("moment_bound_audit", audit.max_ratio, 1.0 + 1e-12);
        const auto r = reconstruct_mean(clean, setup, c, kDataNormFloor);
        const TestFunction phi = setup_test_function(setup, c, r.N);
        const auto& series = r.series;
        const double l2 =
            mean_l2_distance(f, weight_ptr(cfg), phi, eps, gamma, [&](double x) { return series(x); });
        add("noiseless_reconstruction_vs_bound", l2 / r.bound, 1.0);
        Sinogram zero = clean;
        std::fill(zero.values.begin(), zero.values.end(), 0.0);
        const auto z = reconstruct_mean(zero, setup, c);
        double zmax = 0.0;
        for (double v : z.profile.values) zmax = std::max(zmax, std::abs(v));
        add("zero_data_zero_reconstruction", zmax, 0.0);
    }
    CsvWriter csv(ctx.file("verify.csv"), {"check_index", "value", "threshold", "pass"});
    json names = json::array();
    int failed = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        csv.row({double(i), checks[i].value, checks[i].threshold, checks[i].pass() ? 1.0 : 0.0});
        names.push_back({{"name", checks[i].name}, {"value", checks[i].value}, {"pass", checks[i].pass()}});
        failed += !checks[i].pass();
    }
    ctx.results["checks"] = names;
    ctx.results["failed"] = failed;
    if (failed) throw NumericError("verify: " + std::to_string(failed) + " audit(s) failed");
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = {"sinogram", "reconstruct", "slice", "sweep",
                                                   "counterexample", "verify", "kernels"};
    return names;
}

void run_command(const std::string& subcommand, ExperimentConfig config, bool quiet) {
    Context ctx;
    ctx.cfg = std::move(config);
    ctx.quiet = quiet;
    ctx.out = ctx.cfg.output_dir;
    std::filesystem::create_directories(ctx.out);
    std::exception_ptr failure;
    try {
        if (subcommand == "sinogram") cmd_sinogram(ctx);
        else if (subcommand == "reconstruct") cmd_reconstruct(ctx);
        else if (subcommand == "slice") cmd_slice(ctx);
        else if (subcommand == "sweep") cmd_sweep(ctx);
        else if (subcommand == "counterexample") cmd_counterexample(ctx);
        else if (subcommand == "verify") cmd_verify(ctx);
        else if (subcommand == "kernels") cmd_kernels(ctx);
        else throw ConfigError("<subcommand>", "unknown subcommand '" + subcommand + "'");
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        failure = std::current_exception();
    }
    write_manifest(ctx, subcommand);
    if (failure) std::rethrow_exception(failure);
}

int run(const std::string& subcommand, const RunOptions& options) {
    try {
        ExperimentConfig cfg = options.config_path ? load_config(*options.config_path) : default_config();
        if (options.out_dir) cfg.output_dir = *options.out_dir;
        if (options.seed) cfg.seed = *options.seed;
        run_command(subcommand, std::move(cfg), options.quiet);
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure in " << subcommand << ": " << e.what() << '\n';
        return kExitNumeric;
    }
}

}  // namespace lwrt::cli
