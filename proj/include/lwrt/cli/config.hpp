#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lwrt/phantoms.hpp"
#include "lwrt/stability.hpp"
#include "lwrt/transform.hpp"
#include "lwrt/weights.hpp"

namespace lwrt::cli {

// Invalid configuration; `key` is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct KernelConfig {
    std::string a = "0", b = "0";
    int samples = 5;  // per axis in (xi, eta, eta')
    int n_max = 16;   // Taylor order for the certified constant
};

struct ExperimentConfig {
    std::string source_text;  // raw config contents, hashed into the manifest
    PhantomSpec phantom;
    Weight weight;
    bool weighted = false;  // weight built from (a, b)
    std::string weight_a = "0", weight_b = "0";
    SinogramGrid grid;
    ReconstructionMode mode = ReconstructionMode::Analytic;
    double epsilon = 0.2, gamma = 0.3, epsilon0 = 0.3;
    double noise_sigma = 0.0;
    std::vector<double> noise_levels = {1e-4, 1e-6, 1e-8, 1e-10};
    std::optional<double> data_error_norm;
    std::uint64_t seed = 1;
    BoundConstants constants;
    int k_max = 6;
    int n_ceiling = 24;
    double radon_tol = 1e-13;
    double min_weight = 1e-3;
    std::vector<double> lambdas = {10, 20, 40, 80};
    SinogramGrid counterexample_grid{{-0.3, 0.3, 31}, {-0.2, 1.2, 561}};
    KernelConfig kernels;
    std::optional<std::string> input_sinogram;
    std::string output_dir = "lwrt_out";
};

// Parses a JSON document; unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);
ExperimentConfig default_config();

// Text listing every configuration key, for --help.
std::string config_reference();

// 64-bit FNV-1a, hex.
std::string fnv1a_hex(const std::string& data);

}  // namespace lwrt::cli
