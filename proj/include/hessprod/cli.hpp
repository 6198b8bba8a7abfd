#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

namespace hessprod::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_numerical = 3;

struct Options {
    std::optional<std::string> config;
    std::optional<std::string> out;
    std::optional<std::size_t> samples;
    std::optional<std::pair<double, double>> range;
    std::uint64_t seed = 0x5EED;
    double lambda = 0.1;
    std::string selector = "default";
};

/// Parses "A:B" with A < B; throws ConfigError.
std::pair<double, double> parse_range(const std::string& text);

/// %.17g with '.' as decimal separator regardless of locale.
std::string format_real(double v);

/// Runs one subcommand, mapping errors to the exit-code contract: 0 success,
/// 2 configuration error, 3 numerical failure (including failed checks).
int run(const std::string& command, const Options& opts, std::ostream& out, std::ostream& err);

int run_entire(const Options& opts, std::ostream& out);
int run_box(const Options& opts, std::ostream& out);
int run_barrier(const Options& opts, std::ostream& out);
int run_singular3d(const Options& opts, std::ostream& out);
int run_solve(const Options& opts, std::ostream& out, std::ostream& err);
int run_verify(const Options& opts, std::ostream& out);

} // namespace hessprod::cli
