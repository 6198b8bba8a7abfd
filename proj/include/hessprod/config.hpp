#pragma once

// Flat `key = value` configuration for the solve command. Lines starting
// with '#' and blank lines are ignored; unknown and repeated keys are errors.

#include "hessprod/dirichlet.hpp"
#include "hessprod/domain.hpp"

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace hessprod {

struct SolveConfig {
    DomainSpec spec;
    std::size_t n1 = 65, n2 = 65;
    ContinuationConfig continuation;
    std::string output_dir;
    std::uint64_t seed = 0x5EED;
};

std::vector<std::string> config_keys();

/// Raw key-value pairs; throws ConfigError on malformed lines, unknown keys
/// or repeated keys.
std::map<std::string, std::string> parse_key_values(std::istream& in);

/// Locale-independent number parsing; throws ConfigError naming `key`.
double parse_real(const std::string& text, const std::string& key);
std::uint64_t parse_unsigned(const std::string& text, const std::string& key);
std::vector<double> parse_real_list(const std::string& text, const std::string& key);

SolveConfig parse_solve_config(std::istream& in);
SolveConfig load_solve_config(const std::string& path);

} // namespace hessprod
