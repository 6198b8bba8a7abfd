#pragma once

// Penalized Dirichlet problem for u11 u22 = 1 in log form,
//     F(u) = log A1 + log A2 - log(t + (1 - t) g),  A_i = D_ii u - (u - phi) rho / eps,
// solved by damped Newton along t in [0, 1] for each eps of a decreasing
// schedule. Boundary nodes of the grid are pinned to phi.

#include "hessprod/domain.hpp"
#include "hessprod/errors.hpp"
#include "hessprod/grid.hpp"
#include "hessprod/sparse.hpp"

#include <limits>
#include <string>
#include <vector>

namespace hessprod {

struct ContinuationConfig {
    std::vector<double> epsilon{1.0, 0.3, 0.1, 0.03, 0.01};
    std::size_t t_steps = 11; // uniform t nodes including 0 and 1
    double newton_tol = 1e-10;
    int max_newton = 50;
    double damping = 0.5;
    int max_halvings = 30;
    double theta = 1e-12;
    int max_t_bisections = 8;
    LinearSolve linear;

    std::vector<double> t_schedule() const;
    /// Throws ConfigError naming the offending setting.
    void validate() const;
};

/// Grid data of one problem. For rectangles rho is identically zero and
/// `barrier` is the bubble (x1 - a)(x1 - b) + (x2 - c)(x2 - d); otherwise
/// `barrier` is the defining function w.
struct PenalizedProblem {
    Grid2D grid;
    ScalarField2D phi;
    ScalarField2D rho;
    ScalarField2D barrier;
    ScalarField2D base; // added to the seed: Coons patch of phi for rectangles, else zero
    bool penalized = true;

    static PenalizedProblem from_spec(const DomainSpec& spec, const Grid2D& grid);
    /// Rectangle equal to the grid's bounds with boundary data phi.
    static PenalizedProblem rectangle(const Grid2D& grid, const PointFunction& phi);
};

struct ResidualFields {
    ScalarField2D F, A1, A2;
};

/// F, A1, A2 at u. Throws PositivityError naming the worst node when some
/// A_i <= theta.
ResidualFields penalized_residual(const ScalarField2D& u, const PenalizedProblem& p, double eps, double t,
                                  const ScalarField2D& g_field, double theta = 1e-12);

struct GField {
    ScalarField2D g;
    ScalarField2D seed; // u0 = base + C0 w - K0 inside, phi on the boundary
    double C0 = 1.0;
    double K0 = 1.0;
};

/// Doubles C0 (when the worst node has rho = 0) or K0 (otherwise) from
/// (1, 1) until g = A1 A2 (u0) >= 1.05 at every interior node.
/// Throws ConfigError when either constant exceeds 2^30.
GField build_g_field(const PenalizedProblem& p, double eps);

struct NewtonResult {
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> history; // sup |F| before each step and at exit
    std::size_t linear_iterations = 0;
};

/// Newton failure at one (eps, t) stage.
class StageFailure : public NumericalError {
public:
    StageFailure(const std::string& what, std::string stage, NewtonResult partial)
        : NumericalError(what), stage_(std::move(stage)), partial_(std::move(partial)) {}
    const std::string& stage() const noexcept { return stage_; }
    const NewtonResult& partial() const noexcept { return partial_; }

private:
    std::string stage_;
    NewtonResult partial_;
};

/// Damped Newton on F at fixed (eps, t), updating u in place.
NewtonResult newton_stage(ScalarField2D& u, const PenalizedProblem& p, double eps, double t,
                          const ScalarField2D& g_field, const ContinuationConfig& cfg);

struct StageRecord {
    double eps = 0.0;
    double t = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

struct EpsilonRecord {
    double eps = 0.0;
    double phi_minus_u = 0.0; // sup (phi - u)^+ over nodes with rho > 0
    double u_minus_phi = 0.0; // sup (u - phi)^+ over nodes with rho > 0
    bool fresh_seed = false;
};

struct SolveReport {
    static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<StageRecord> stages;
    std::vector<EpsilonRecord> epsilons;
    double final_residual = nan;
    double phi_minus_u = nan;      // at the last eps
    double min_argument = nan;     // min A_i over interior nodes
    double convexity_probe = nan;  // u(0, 1/2) + u(0, -1/2) - 2 u(0, 0) when these are nodes
    double interior_d2_sup = nan;  // max D_ii u over interior nodes with rho = 0
    double C0 = nan, K0 = nan;
    std::size_t newton_iterations = 0;
    std::size_t linear_iterations = 0;
    std::string failed_stage;
};

struct SolveResult {
    ScalarField2D u;
    SolveReport report;
};

/// Solver failure with the report accumulated so far.
class SolveFailure : public NumericalError {
public:
    SolveFailure(const std::string& what, SolveReport report)
        : NumericalError(what), report_(std::move(report)) {}
    const SolveReport& report() const noexcept { return report_; }

private:
    SolveReport report_;
};

/// Continuation over the eps and t schedules. Later eps stages restart the
/// t homotopy from the previous solution with g = A1 A2 evaluated there,
/// falling back to a fresh seed if that leaves the cone. A failed t step is
/// bisected up to cfg.max_t_bisections times.
SolveResult continuation_solve(const PenalizedProblem& p, const ContinuationConfig& cfg = {});
SolveResult continuation_solve(const DomainSpec& spec, const Grid2D& grid, const ContinuationConfig& cfg = {});

/// Plain Dirichlet problem on the grid's rectangle (no penalty).
SolveResult solve_rectangle(const Bounds& bounds, const PointFunction& phi, const Grid2D& grid,
                            const ContinuationConfig& cfg = {});

/// Strict-convexity probe u(0, 1/2) + u(0, -1/2) - 2 u(0, 0); NaN unless all
/// three points are grid nodes.
double convexity_probe(const ScalarField2D& u);

} // namespace hessprod
