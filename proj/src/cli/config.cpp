#include "lwrt/cli/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lwrt/cli/csv_io.hpp"

namespace lwrt::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void allow_keys(const json& j, const std::string& path, std::set<std::string> allowed) {
    if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw ConfigError(join(path, k), "unknown key");
}

double number(const json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError(key, "expected a number");
    return j.get<double>();
}

double positive(const json& j, const std::string& key) {
    const double v = number(j, key);
    if (!(v > 0.0)) throw ConfigError(key, "must be positive");
    return v;
}

int integer(const json& j, const std::string& key) {
    if (!j.is_number_integer()) throw ConfigError(key, "expected an integer");
    return j.get<int>();
}

std::string text(const json& j, const std::string& key) {
    if (j.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << j.get<double>();
        return os.str();
    }
    if (!j.is_string()) throw ConfigError(key, "expected a string");
    return j.get<std::string>();
}

std::vector<double> number_list(const json& j, const std::string& key) {
    if (!j.is_array()) throw ConfigError(key, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], key + "[" + std::to_string(i) + "]"));
    return out;
}

UniformAxis axis(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(key, "expected [min, max, n]");
    UniformAxis a{number(j[0], key + "[0]"), number(j[1], key + "[1]"), integer(j[2], key + "[2]")};
    if (!(a.max > a.min)) throw ConfigError(key, "max must exceed min");
    if (a.n < 2) throw ConfigError(key, "n must be at least 2");
    return a;
}

SinogramGrid grid(const json& j, const std::string& path, SinogramGrid g) {
    allow_keys(j, path, {"xi", "eta"});
    if (j.contains("xi")) g.xi = axis(j["xi"], join(path, "xi"));
    if (j.contains("eta")) g.eta = axis(j["eta"], join(path, "eta"));
    return g;
}

template <class F>
auto guarded(const std::string& key, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(key, e.what());
    }
}

PhantomSpec phantom(const json& j, const std::string& path, const std::string& base_dir) {
    allow_keys(j, path,
               {"kind", "center", "width", "amplitude", "support_c", "holder_alpha", "holder_bound", "lambda",
                "polynomial", "table"});
    const std::string kind = j.contains("kind") ? text(j["kind"], join(path, "kind")) : "smooth-bump";
    PhantomSpec p;
    p.kind = guarded(join(path, "kind"), [&] { return phantom_kind_from_string(kind); });
    if (j.contains("center")) {
        const auto c = number_list(j["center"], join(path, "center"));
        if (c.size() != 2) throw ConfigError(join(path, "center"), "expected [x, y]");
        p.center_x = c[0];
        p.center_y = c[1];
    }
    if (j.contains("width")) p.width = positive(j["width"], join(path, "width"));
    if (j.contains("amplitude")) p.amplitude = number(j["amplitude"], join(path, "amplitude"));
    if (j.contains("support_c")) p.support_c = number(j["support_c"], join(path, "support_c"));
    if (j.contains("holder_alpha")) p.holder_alpha = number(j["holder_alpha"], join(path, "holder_alpha"));
    if (j.contains("holder_bound")) p.holder_bound = number(j["holder_bound"], join(path, "holder_bound"));
    switch (p.kind) {
        case PhantomKind::SmoothBump: break;
        case PhantomKind::PolynomialTimesBump: {
            const std::string key = join(path, "polynomial");
            if (!j.contains("polynomial")) throw ConfigError(key, "required for polynomial-times-bump");
            PhantomSpec bump = p;
            bump.kind = PhantomKind::SmoothBump;
            p = guarded(key, [&] { return polynomial_times_bump(bump, text(j["polynomial"], key), p.holder_bound); });
            break;
        }
        case PhantomKind::Oscillatory: {
            const std::string key = join(path, "lambda");
            if (!j.contains("lambda")) throw ConfigError(key, "required for oscillatory phantoms");
            PhantomSpec bump = p;
            bump.kind = PhantomKind::SmoothBump;
            const double lambda = positive(j["lambda"], key);
            p = guarded(key, [&] { return oscillatory_phantom(bump, lambda); });
            break;
        }
        case PhantomKind::Tabulated: {
            const std::string key = join(path, "table");
            if (!j.contains("table")) throw ConfigError(key, "required for tabulated phantoms");
            std::filesystem::path file = text(j["table"], key);
            if (file.is_relative()) file = std::filesystem::path(base_dir) / file;
            auto table = guarded(key, [&] { return std::make_shared<const TabulatedGrid>(read_table_csv(file.string())); });
            p = guarded(path, [&] { return tabulated_phantom(table, p.support_c, p.holder_alpha, p.holder_bound); });
            break;
        }
    }
    guarded(path, [&] {
        validate_phantom(p);
        return 0;
    });
    return p;
}

}  // namespace

ExperimentConfig default_config() {
    ExperimentConfig c;
    c.phantom = smooth_bump(0.1, 0.45, 0.35, 1.0, 14.0);
    c.weight = constant_weight(1.0);
    c.grid.xi = {-0.3, 0.3, 121};
    c.constants.C0 = c.phantom.holder_bound;
    c.constants.alpha = c.phantom.holder_alpha;
    return c;
}

ExperimentConfig parse_config(const std::string& source, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(source);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    allow_keys(j, "",
               {"phantom", "weight", "grid", "test_function", "window", "noise", "seed", "constants", "counterexample",
                "kernels", "input", "output"});
    ExperimentConfig c = default_config();
    c.source_text = source;
    bool explicit_C0 = false, explicit_alpha = false;

    if (j.contains("phantom")) c.phantom = phantom(j["phantom"], "phantom", base_dir);

    if (j.contains("weight")) {
        const json& w = j["weight"];
        allow_keys(w, "weight", {"kind", "value", "a", "b", "m0", "mu", "quad_tol"});
        const std::string kind = w.contains("kind") ? text(w["kind"], "weight.kind") : "constant";
        const WeightKind wk = guarded("weight.kind", [&] { return weight_kind_from_string(kind); });
        if (wk == WeightKind::Constant) {
            c.weight = constant_weight(w.contains("value") ? positive(w["value"], "weight.value") : 1.0);
        } else if (wk == WeightKind::FromAB) {
            c.weight_a = w.contains("a") ? text(w["a"], "weight.a") : "0";
            c.weight_b = w.contains("b") ? text(w["b"], "weight.b") : "0";
            const std::string m0 = w.contains("m0") ? text(w["m0"], "weight.m0") : "1";
            const AnalyticField a = guarded("weight.a", [&] { return AnalyticField(c.weight_a); });
            const AnalyticField b = guarded("weight.b", [&] { return AnalyticField(c.weight_b); });
            c.weight = guarded("weight.m0", [&] { return weight_from_ab(a, b, m0); });
            c.weighted = true;
        } else {
            if (!w.contains("mu")) throw ConfigError("weight.mu", "required for attenuation weights");
            const PhantomSpec mu = phantom(w["mu"], "weight.mu", base_dir);
            c.weight = guarded("weight.mu", [&] { return attenuation_weight(mu); });
        }
        if (w.contains("quad_tol")) c.weight.quad_tol = positive(w["quad_tol"], "weight.quad_tol");
    }

    if (j.contains("grid")) c.grid = grid(j["grid"], "grid", c.grid);

    if (j.contains("test_function")) {
        const json& t = j["test_function"];
        allow_keys(t, "test_function", {"mode", "sigma"});
        if (t.contains("mode"))
            c.mode = guarded("test_function.mode",
                             [&] { return reconstruction_mode_from_string(text(t["mode"], "test_function.mode")); });
        if (t.contains("sigma")) {
            c.constants.sigma = number(t["sigma"], "test_function.sigma");
            if (!(c.constants.sigma > 1.0)) throw ConfigError("test_function.sigma", "must exceed 1");
        }
    }

    if (j.contains("window")) {
        const json& w = j["window"];
        allow_keys(w, "window", {"epsilon", "gamma", "epsilon0"});
        if (w.contains("epsilon")) c.epsilon = positive(w["epsilon"], "window.epsilon");
        if (w.contains("gamma")) c.gamma = positive(w["gamma"], "window.gamma");
        if (w.contains("epsilon0")) c.epsilon0 = positive(w["epsilon0"], "window.epsilon0");
    }

    if (j.contains("noise")) {
        const json& n = j["noise"];
        allow_keys(n, "noise", {"sigma", "levels", "data_error_norm"});
        if (n.contains("sigma")) {
            c.noise_sigma = number(n["sigma"], "noise.sigma");
            if (c.noise_sigma < 0.0) throw ConfigError("noise.sigma", "must be nonnegative");
        }
        if (n.contains("levels")) {
            c.noise_levels = number_list(n["levels"], "noise.levels");
            for (double v : c.noise_levels)
                if (!(v > 0.0)) throw ConfigError("noise.levels", "levels must be positive");
        }
        if (n.contains("data_error_norm")) {
            c.data_error_norm = number(n["data_error_norm"], "noise.data_error_norm");
            if (*c.data_error_norm < 0.0) throw ConfigError("noise.data_error_norm", "must be nonnegative");
        }
    }

    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }

    if (j.contains("constants")) {
        const json& k = j["constants"];
        allow_keys(k, "constants",
                   {"C0", "alpha", "A0", "C", "rho", "k_max", "n_ceiling", "radon_tol", "min_weight"});
        if (k.contains("C0")) {
            c.constants.C0 = positive(k["C0"], "constants.C0");
            explicit_C0 = true;
        }
        if (k.contains("alpha")) {
            c.constants.alpha = positive(k["alpha"], "constants.alpha");
            if (c.constants.alpha > 1.0) throw ConfigError("constants.alpha", "must be in (0, 1]");
            explicit_alpha = true;
        }
        if (k.contains("A0")) c.constants.A0 = positive(k["A0"], "constants.A0");
        if (k.contains("C")) c.constants.C = positive(k["C"], "constants.C");
        if (k.contains("rho")) c.constants.rho = positive(k["rho"], "constants.rho");
        if (k.contains("k_max")) {
            c.k_max = integer(k["k_max"], "constants.k_max");
            if (c.k_max < 1 || c.k_max > 20) throw ConfigError("constants.k_max", "must be in [1, 20]");
        }
        if (k.contains("n_ceiling")) {
            c.n_ceiling = integer(k["n_ceiling"], "constants.n_ceiling");
            if (c.n_ceiling < 1 || c.n_ceiling > kMomentMapCeiling)
                throw ConfigError("constants.n_ceiling", "must be in [1, " + std::to_string(kMomentMapCeiling) + "]");
        }
        if (k.contains("radon_tol")) c.radon_tol = positive(k["radon_tol"], "constants.radon_tol");
        if (k.contains("min_weight")) c.min_weight = positive(k["min_weight"], "constants.min_weight");
    }
    if (!explicit_C0) c.constants.C0 = c.phantom.holder_bound;
    if (!explicit_alpha) c.constants.alpha = c.phantom.holder_alpha;

    if (j.contains("counterexample")) {
        const json& x = j["counterexample"];
        allow_keys(x, "counterexample", {"lambdas", "grid"});
        if (x.contains("lambdas")) c.lambdas = number_list(x["lambdas"], "counterexample.lambdas");
        if (x.contains("grid")) c.counterexample_grid = grid(x["grid"], "counterexample.grid", c.counterexample_grid);
    }

    c.kernels.a = c.weight_a;
    c.kernels.b = c.weight_b;
    if (j.contains("kernels")) {
        const json& k = j["kernels"];
        allow_keys(k, "kernels", {"a", "b", "samples", "n_max"});
        if (k.contains("a")) c.kernels.a = text(k["a"], "kernels.a");
        if (k.contains("b")) c.kernels.b = text(k["b"], "kernels.b");
        if (k.contains("samples")) c.kernels.samples = integer(k["samples"], "kernels.samples");
        if (k.contains("n_max")) c.kernels.n_max = integer(k["n_max"], "kernels.n_max");
        if (c.kernels.samples < 2) throw ConfigError("kernels.samples", "must be at least 2");
        if (c.kernels.n_max < 1 || c.kernels.n_max > 23) throw ConfigError("kernels.n_max", "must be in [1, 23]");
    }

    if (j.contains("input")) {
        const json& in = j["input"];
        allow_keys(in, "input", {"sinogram"});
        if (in.contains("sinogram")) {
            std::filesystem::path file = text(in["sinogram"], "input.sinogram");
            if (file.is_relative()) file = std::filesystem::path(base_dir) / file;
            c.input_sinogram = file.string();
        }
    }
    if (j.contains("output")) c.output_dir = text(j["output"], "output");

    if (c.gamma < c.epsilon * c.epsilon / 4.0) throw ConfigError("window.gamma", "must be at least epsilon^2/4");
    if (c.noise_levels.empty()) throw ConfigError("noise.levels", "must not be empty");
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("--config", "cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_config(ss.str(), dir.empty() ? "." : dir.string());
}

std::string config_reference() {
    return R"(Configuration (JSON object; every key optional):
  phantom.kind            smooth-bump | polynomial-times-bump | oscillatory | tabulated
  phantom.center          [x, y] bump center (default [0.1, 0.45])
  phantom.width           bump radius (0.35)
  phantom.amplitude       value at the center (1)
  phantom.support_c       support lies in y >= c x^2 (1)
  phantom.holder_alpha    Hoelder exponent alpha (1)
  phantom.holder_bound    Hoelder bound C_0 (14)
  phantom.lambda          frequency of the oscillatory phantom
  phantom.polynomial      polynomial in x, y multiplying the bump
  phantom.table           CSV file for tabulated phantoms (# x: / # y: headers)
  weight.kind             constant | from_ab | attenuation
  weight.value            constant weight value (1)
  weight.a, weight.b      expressions in xi, eta for the weight equation
  weight.m0               initial weight m(x, 0, s) as an expression in x, s (1)
  weight.mu               phantom object used as attenuation map
  weight.quad_tol         quadrature tolerance of the weight (1e-13)
  grid.xi, grid.eta       [min, max, n] sinogram axes
  test_function.mode      analytic (Hormander sequence) | gevrey
  test_function.sigma     Gevrey index (2)
  window.epsilon          half-width of the xi window (0.2)
  window.gamma            slice height (0.3)
  window.epsilon0         upper limit for the slice epsilon rule (0.3)
  noise.sigma             noise level of the `sinogram` command (0)
  noise.levels            noise levels of the `sweep` command
  noise.data_error_norm   known norm of the data perturbation
  seed                    noise seed (1)
  constants.C0, .alpha    override the phantom's Hoelder data
  constants.A0            Jackson constant (3)
  constants.C             envelope constant; calibrated when absent
  constants.rho           sup-estimate exponent (0.49)
  constants.k_max         highest kernel order for weighted data (6)
  constants.n_ceiling     cap on the truncation order (24)
  constants.radon_tol     forward-transform quadrature tolerance (1e-13)
  constants.min_weight    weight threshold for dividing out m on the slice (1e-3)
  counterexample.lambdas  increasing list of frequencies
  counterexample.grid     sinogram grid of the counterexample
  kernels.a, kernels.b    fields for the `kernels` command (default: weight.a, weight.b)
  kernels.samples         sample points per axis (5)
  kernels.n_max           Taylor order used for the certified constant (16)
  input.sinogram          sinogram CSV used instead of synthesized data
  output                  output directory (lwrt_out)
)";
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace lwrt::cli
