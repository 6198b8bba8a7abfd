#include "hessprod/cli.hpp"
#include "hessprod/config.hpp"
#include "hessprod/errors.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hessprod;
namespace cli = hessprod::cli;

namespace {

std::string key_of(const std::string& text)
{
    std::istringstream in(text);
    try {
        parse_solve_config(in);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<accepted>";
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST(Config, DefaultsAndOverrides)
{
    std::istringstream in("# comment\n\ndomain.kind = quartic\nboundary.phi = 0,0,0,0.5,0,0.5\n"
                          "grid.n1 = 41\ngrid.n2=41\nschedule.epsilon = 1, 0.1\nnewton.tol = 1e-9\nseed = 0x10\n");
    const SolveConfig c = parse_solve_config(in);
    EXPECT_EQ(c.spec.kind, DomainKind::quartic);
    EXPECT_EQ(c.n1, 41u);
    EXPECT_EQ(c.continuation.epsilon.size(), 2u);
    EXPECT_EQ(c.continuation.newton_tol, 1e-9);
    EXPECT_EQ(c.seed, 16u);
    // default delta = 4 h
    EXPECT_NEAR(c.spec.delta, 4.0 * 1.25 / 40.0, 1e-15);
}

TEST(Config, ErrorsNameTheKey)
{
    EXPECT_EQ(key_of("colour = red\n"), "colour");
    EXPECT_EQ(key_of("grid.n1 = 9\ngrid.n1 = 9\n"), "grid.n1");
    EXPECT_EQ(key_of("grid.n1 = nine\n"), "grid.n1");
    EXPECT_EQ(key_of("newton.tol = inf\n"), "newton.tol");
    EXPECT_EQ(key_of("schedule.epsilon = 0.1, 1\n"), "schedule.epsilon");
    EXPECT_EQ(key_of("domain.kind = blob\n"), "domain.kind");
    EXPECT_EQ(key_of("domain.kind = custom\n"), "domain.params");
    EXPECT_EQ(key_of("no equals sign\n"), "no equals sign");
    EXPECT_EQ(key_of("grid.n1 = 33\n"), "<accepted>");
}

TEST(Config, LocaleIndependentNumbers)
{
    EXPECT_EQ(parse_real("+2.5e-1", "k"), 0.25);
    EXPECT_THROW(parse_real("2,5", "k"), ConfigError);
    EXPECT_THROW(parse_real("1.0x", "k"), ConfigError);
    EXPECT_EQ(parse_unsigned("0x5EED", "k"), 0x5EEDu);
}

TEST(Cli, FormatsSeventeenDigits)
{
    EXPECT_EQ(cli::format_real(0.1), "0.10000000000000001");
    EXPECT_EQ(cli::format_real(1.0), "1");
    EXPECT_EQ(cli::format_real(-0.0 / 1.0 * 0.0), "-0");
    EXPECT_EQ(cli::parse_range("-2:3.5"), (std::pair{-2.0, 3.5}));
    EXPECT_THROW(cli::parse_range("3"), ConfigError);
}

TEST(Cli, EntireCsvShapeAndOrigin)
{
    cli::Options o;
    o.samples = 5;
    o.range = {-2.0, 2.0};
    std::ostringstream out, err;
    EXPECT_EQ(cli::run("entire", o, out, err), cli::exit_ok);
    EXPECT_EQ(lines(out.str()), 6u);
    EXPECT_NE(out.str().find("\n0,1,0,1,0\n"), std::string::npos);
}

TEST(Cli, ExitCodes)
{
    std::ostringstream out, err;
    cli::Options o;
    o.selector = "nope";
    EXPECT_EQ(cli::run("verify", o, out, err), cli::exit_config);
    EXPECT_EQ(cli::run("solve", cli::Options{}, out, err), cli::exit_config);
    o = {};
    o.config = "/nonexistent/file.cfg";
    EXPECT_EQ(cli::run("solve", o, out, err), cli::exit_config);
    o = {};
    o.lambda = -1.0;
    EXPECT_EQ(cli::run("barrier", o, out, err), cli::exit_config);
    o = {};
    o.range = {-2.0, 0.0};
    EXPECT_EQ(cli::run("box", o, out, err), cli::exit_config);
}

TEST(Cli, SolverFailureExitsWithThreeAndStage)
{
    const auto dir = std::filesystem::temp_directory_path() / "hessprod_cli_fail";
    std::filesystem::create_directories(dir);
    const auto cfg = dir / "fail.cfg";
    // One Newton iteration cannot reach 1e-10 from the seed.
    std::ofstream(cfg) << "domain.kind = disk\nboundary.phi = 0,0,0,1,0,0.25\ngrid.n1 = 33\ngrid.n2 = 33\n"
                          "newton.max_iter = 1\n";
    cli::Options o;
    o.config = cfg.string();
    std::ostringstream out, err;
    EXPECT_EQ(cli::run("solve", o, out, err), cli::exit_numerical);
    EXPECT_NE(err.str().find("stage="), std::string::npos) << err.str();
}

TEST(Cli, VerifySelectorRunsOnlyThatSuite)
{
    cli::Options o;
    o.selector = "barrier";
    std::ostringstream out, err;
    EXPECT_EQ(cli::run("verify", o, out, err), cli::exit_ok);
    std::istringstream in(out.str());
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        EXPECT_EQ(line.rfind("check=barrier", 0), 0u) << line;
    }
    EXPECT_EQ(n, 2u);
}

TEST(Cli, OutDirectoryReceivesFiles)
{
    const auto dir = std::filesystem::temp_directory_path() / "hessprod_cli_out";
    std::filesystem::remove_all(dir);
    cli::Options o;
    o.out = dir.string();
    o.samples = 3;
    std::ostringstream out, err;
    EXPECT_EQ(cli::run("box", o, out, err), cli::exit_ok);
    std::ifstream f(dir / "box.csv");
    std::string header;
    std::getline(f, header);
    EXPECT_EQ(header, "x,g,g1,g2,residual");
}
