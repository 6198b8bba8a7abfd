#include "hessprod/config.hpp"

#include "hessprod/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hessprod {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

Bounds parse_bounds(const std::string& text, const std::string& key)
{
    const auto v = parse_real_list(text, key);
    if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3])) {
        throw ConfigError(key + " must be x1min,x1max,x2min,x2max with min < max", key);
    }
    return {v[0], v[1], v[2], v[3]};
}

std::size_t parse_count(const std::string& text, const std::string& key, std::size_t min)
{
    const std::uint64_t v = parse_unsigned(text, key);
    if (v < min) throw ConfigError(key + " must be at least " + std::to_string(min), key);
    return static_cast<std::size_t>(v);
}

} // namespace

std::vector<std::string> config_keys()
{
    return {"domain.kind",   "domain.params",    "domain.seed_point", "boundary.phi",    "grid.n1",
            "grid.n2",       "box.bounds",       "penalty.delta",     "schedule.epsilon", "schedule.t_steps",
            "newton.tol",    "newton.max_iter",  "output.dir",        "seed"};
}

std::map<std::string, std::string> parse_key_values(std::istream& in)
{
    const auto keys = config_keys();
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value", t);
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'", key);
        }
        if (!out.emplace(key, value).second) {
            throw ConfigError("line " + std::to_string(lineno) + ": repeated key '" + key + "'", key);
        }
    }
    return out;
}

double parse_real(const std::string& text, const std::string& key)
{
    const std::string t = trim(text);
    double v = 0.0;
    const char* b = t.data();
    const char* e = b + t.size();
    if (!t.empty() && *b == '+') ++b;
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (t.empty() || ec != std::errc() || ptr != e || !std::isfinite(v)) {
        throw ConfigError("'" + t + "' is not a finite number", key);
    }
    return v;
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& key)
{
    const std::string t = trim(text);
    std::uint64_t v = 0;
    int base = 10;
    std::size_t skip = 0;
    if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X')) {
        base = 16;
        skip = 2;
    }
    const auto [ptr, ec] = std::from_chars(t.data() + skip, t.data() + t.size(), v, base);
    if (t.size() == skip || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError("'" + t + "' is not a non-negative integer", key);
    }
    return v;
}

std::vector<double> parse_real_list(const std::string& text, const std::string& key)
{
    std::vector<double> out;
    if (trim(text).empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(item, key));
    return out;
}

SolveConfig parse_solve_config(std::istream& in)
{
    const auto kv = parse_key_values(in);
    auto get = [&kv](const std::string& key) -> const std::string* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };

    SolveConfig cfg;
    if (const auto* v = get("grid.n1")) cfg.n1 = parse_count(*v, "grid.n1", 3);
    if (const auto* v = get("grid.n2")) cfg.n2 = parse_count(*v, "grid.n2", 3);
    if (const auto* v = get("schedule.epsilon")) cfg.continuation.epsilon = parse_real_list(*v, "schedule.epsilon");
    if (const auto* v = get("schedule.t_steps")) cfg.continuation.t_steps = parse_count(*v, "schedule.t_steps", 2);
    if (const auto* v = get("newton.tol")) cfg.continuation.newton_tol = parse_real(*v, "newton.tol");
    if (const auto* v = get("newton.max_iter")) {
        cfg.continuation.max_newton = static_cast<int>(parse_count(*v, "newton.max_iter", 1));
    }
    if (const auto* v = get("output.dir")) cfg.output_dir = *v;
    if (const auto* v = get("seed")) cfg.seed = parse_unsigned(*v, "seed");
    cfg.continuation.validate();

    Polynomial2 phi;
    if (const auto* v = get("boundary.phi"); v && trim(*v) != "zero") {
        phi = Polynomial2(parse_real_list(*v, "boundary.phi"));
    }

    const std::string kind_name = get("domain.kind") ? trim(*get("domain.kind")) : "disk";
    const DomainKind kind = parse_domain_kind(kind_name);
    const std::vector<double> params = get("domain.params") ? parse_real_list(*get("domain.params"), "domain.params")
                                                            : std::vector<double>{};
    switch (kind) {
    case DomainKind::disk:
        if (params.size() > 1) throw ConfigError("disk takes at most one parameter (radius)", "domain.params");
        cfg.spec = DomainSpec::disk(params.empty() ? 1.0 : params[0], phi, 1.0);
        break;
    case DomainKind::quartic:
        if (!params.empty()) throw ConfigError("quartic takes no parameters", "domain.params");
        cfg.spec = DomainSpec::quartic(phi, 1.0);
        break;
    case DomainKind::rectangle:
        if (!params.empty()) throw ConfigError("rectangle bounds are given by box.bounds", "domain.params");
        cfg.spec = DomainSpec::rectangle({-1.0, 1.0, -1.0, 1.0}, phi);
        break;
    case DomainKind::custom:
        if (params.empty()) throw ConfigError("custom domain needs the coefficients of w", "domain.params");
        if (!get("box.bounds")) throw ConfigError("custom domain needs box.bounds", "box.bounds");
        if (!get("domain.seed_point")) throw ConfigError("custom domain needs domain.seed_point", "domain.seed_point");
        cfg.spec = DomainSpec::custom(Polynomial2(params), phi, {-1, 1, -1, 1}, {}, 1.0);
        break;
    }
    if (const auto* v = get("box.bounds")) {
        cfg.spec.box = parse_bounds(*v, "box.bounds");
        if (kind == DomainKind::rectangle) {
            cfg.spec.seed_point = {0.5 * (cfg.spec.box[0] + cfg.spec.box[1]), 0.5 * (cfg.spec.box[2] + cfg.spec.box[3])};
        }
    }
    if (const auto* v = get("domain.seed_point")) {
        const auto p = parse_real_list(*v, "domain.seed_point");
        if (p.size() != 2) throw ConfigError("domain.seed_point must be x1,x2", "domain.seed_point");
        cfg.spec.seed_point = {p[0], p[1]};
    }
    const double h = std::max((cfg.spec.box[1] - cfg.spec.box[0]) / static_cast<double>(cfg.n1 - 1),
                              (cfg.spec.box[3] - cfg.spec.box[2]) / static_cast<double>(cfg.n2 - 1));
    cfg.spec.delta = 4.0 * h;
    if (const auto* v = get("penalty.delta")) {
        cfg.spec.delta = parse_real(*v, "penalty.delta");
        if (!(cfg.spec.delta > 0.0)) throw ConfigError("penalty.delta must be positive", "penalty.delta");
    }
    return cfg;
}

SolveConfig load_solve_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'", "--config");
    return parse_solve_config(in);
}

} // namespace hessprod
