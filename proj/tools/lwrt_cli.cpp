#include <cstdint>
#include <string>

#include "CLI11.hpp"
#include "lwrt/cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Local weighted Radon transform experiments"};
    app.footer(lwrt::cli::config_reference());
    app.require_subcommand(1, 1);

    lwrt::cli::RunOptions opt;
    std::string config, out;
    std::uint64_t seed = 0;
    auto* config_opt = app.add_option("--config", config, "JSON experiment configuration");
    auto* out_opt = app.add_option("--out", out, "output directory (overrides `output`)");
    auto* seed_opt = app.add_option("--seed", seed, "noise seed (overrides `seed`)");
    app.add_flag("--quiet", opt.quiet, "suppress progress output");

    const char* help[] = {"synthesize a sinogram and write it as CSV",
                          "reconstruct the local mean profile from data",
                          "estimate the slice f(., gamma) with the epsilon rule",
                          "stability curve over the configured noise levels",
                          "oscillatory counterexample over lambda",
                          "run the invariant and audit suite",
                          "build and certify the Volterra kernel families"};
    for (std::size_t i = 0; i < lwrt::cli::subcommands().size(); ++i)
        app.add_subcommand(lwrt::cli::subcommands()[i], help[i])->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : lwrt::cli::kExitConfig;
    }
    if (*config_opt) opt.config_path = config;
    if (*out_opt) opt.out_dir = out;
    if (*seed_opt) opt.seed = seed;
    return lwrt::cli::run(app.get_subcommands().front()->get_name(), opt);
}
