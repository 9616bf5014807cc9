#include <cstdlib>
#include <iostream>
#include <utility>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cli.hpp"

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("sfl");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* lvl = std::getenv("SFL_LOG")) spdlog::set_level(spdlog::level::from_str(lvl));
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    sfl::cli::Options opt;
    std::string sigma;
    CLI::App app{"Schottky group Fourier and stationary-measure lab"};
    app.require_subcommand(1);
    const std::pair<const char*, const char*> commands[] = {
        {"validate", "check a group config, print residuals as JSON"},
        {"delta", "critical exponent by transfer-matrix bisection"},
        {"measure", "Patterson-Sullivan cylinder masses"},
        {"partition", "the partition Z(tau)"},
        {"fourier", "|mu_hat| along directions and the fitted decay exponent"},
        {"nonconc", "triple determinant counts over a sigma grid"},
        {"walk", "shell iteration toward a stationary measure"},
        {"lemmas", "numerical checks of the measure regularity statements"},
    };
    for (const auto& [name, about] : commands) {
        auto* sub = app.add_subcommand(name, about);
        sub->add_option("--group", opt.group, "group config JSON")->required();
        if (std::string(name) == "validate") continue;
        sub->add_option("--depth", opt.depth, "word depth")->check(CLI::Range(2, 12));
        sub->add_option("--tau", opt.tau, "partition scale")->check(CLI::Range(1e-9, 1.0));
        sub->add_option("--tmin", opt.tmin);
        sub->add_option("--tmax", opt.tmax);
        sub->add_option("--tsteps", opt.tsteps)->check(CLI::Range(3, 10000));
        sub->add_option("--k", opt.k)->check(CLI::Range(1, 3));
        sub->add_option("--sigma-grid", sigma, "comma separated sigma values");
        sub->add_option("--c0", opt.c0, "shadow aperture, 0 picks it from the shell-1 cover");
        sub->add_option("--beta", opt.beta);
        sub->add_option("--eps1", opt.eps1);
        sub->add_option("--stages", opt.stages, "walk iterations M")->check(CLI::Range(0, 5));
        sub->add_option("--seed", opt.seed);
        sub->add_option("--threads", opt.threads, "worker threads, 0 = all cores");
        sub->add_option("--out", opt.out, "output directory");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    opt.command = app.get_subcommands().front()->get_name();
    try {
        if (!sigma.empty()) opt.sigma_grid = sfl::cli::parse_grid(sigma);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return sfl::cli::run(opt, std::cout, std::cerr);
}
