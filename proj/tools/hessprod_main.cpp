#include "hessprod/cli.hpp"
#include "hessprod/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv)
{
    namespace cli = hessprod::cli;

    CLI::App app{"hessprod: numerics for u11 u22 = 1"};
    app.require_subcommand(1);

    cli::Options opts;
    std::string range_text;
    std::size_t samples = 0;

    // Shared flags on every subcommand; each only reads the ones it needs.
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "configuration file (solve)");
        sub->add_option("--out", opts.out, "output directory");
        sub->add_option("--samples", samples, "number of samples")->check(CLI::PositiveNumber);
        sub->add_option("--range", range_text, "sample range A:B");
        sub->add_option("--seed", opts.seed, "probe seed");
    };
    common(app.add_subcommand("entire", "entire one-variable profile f with f f'' = 1"));
    common(app.add_subcommand("box", "box profile g with g g'' = -1 on [-1, 1]"));
    auto* barrier = app.add_subcommand("barrier", "strict-convexity barrier and its Hessian product");
    common(barrier);
    barrier->add_option("--lambda", opts.lambda, "barrier parameter");
    common(app.add_subcommand("singular3d", "singular three-dimensional solution"));
    common(app.add_subcommand("solve", "penalized Dirichlet solver"));
    auto* verify = app.add_subcommand("verify", "verification suites");
    common(verify);
    verify->add_option("selector", opts.selector, "suite name or 'default'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::exit_config;
    }

    if (samples > 0) opts.samples = samples;
    if (!range_text.empty()) {
        try {
            opts.range = cli::parse_range(range_text);
        } catch (const hessprod::ConfigError& e) {
            std::cerr << "error: " << e.what() << " [key: " << e.key() << "]\n";
            return cli::exit_config;
        }
    }
    const std::string command = app.get_subcommands().front()->get_name();
    return cli::run(command, opts, std::cout, std::cerr);
}
