#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace hessprod {

/// Settings for adaptive Gauss-Kronrod quadrature of integrands with at most
/// an inverse-square-root singularity at one endpoint.
struct Quadrature {
    double abs_tol = 1e-10;
    /// Added to abs_tol as rel_tol * |estimate|; keeps huge integrals attainable.
    double rel_tol = 1e-15;
    /// Maximum number of interval bisections.
    int max_refinements = 4000;
    static constexpr double singular_exponent = -0.5;
};

enum class SingularEnd { none, a, b };

/// Integrand receiving both the abscissa x and its distance d >= 0 from the
/// singular endpoint (from `a` when there is none). d is exact where x is
/// not, which lets integrands like 1/sqrt(log x) near x = 1 use log1p(d).
using OffsetIntegrand = std::function<double(double x, double d)>;
using RealFunction = std::function<double(double)>;

/// Improper integral of `f` over [a, b]. A singular end is removed by the
/// substitution x = end -/+ s^2 before adaptive GK15 refinement.
/// Throws QuadratureFailure carrying the last two estimates.
double integrate_singular(const OffsetIntegrand& f, double a, double b, SingularEnd end, const Quadrature& q = {});
double integrate_singular(const RealFunction& f, double a, double b, SingularEnd end, const Quadrature& q = {});

/// Adaptive GK15 on a smooth integrand; building block of integrate_singular.
double integrate_adaptive(const RealFunction& f, double a, double b, const Quadrature& q = {});

/// Solves F(t) = y for increasing F on [lo, hi]. Bisection always; Newton
/// steps are taken inside the bracket when a derivative is supplied.
double invert_monotone(const RealFunction& F, double y, double lo, double hi, double tol,
                       const RealFunction& dF = nullptr);

/// Root of a continuous f with f(a) f(b) < 0 by bisection to interval width tol.
double bisect_root(const RealFunction& f, double a, double b, double tol);

/// Cumulative integral F(d) = int_0^d phi, with phi > 0 and phi ~ d^(-1/2)
/// at 0, tabulated on a geometric mesh so that evaluation and inversion only
/// integrate over one mesh cell.
class CumulativeIntegral {
public:
    using Density = std::function<double(double d)>;

    CumulativeIntegral(Density phi, double d_max, const Quadrature& q = {}, double first_cell = 1e-4,
                       double ratio = 1.25);

    double value(double d) const;
    double density(double d) const { return phi_(d); }
    /// d in [0, d_max] with F(d) = y to within the table's rounding.
    double inverse(double y) const;

    double d_max() const noexcept { return mesh_.back(); }
    double total() const noexcept { return cumulative_.back(); }
    std::size_t cells() const noexcept { return mesh_.size() - 1; }

private:
    double cell_integral(std::size_t cell, double upto) const;

    Density phi_;
    Quadrature q_;
    std::vector<double> mesh_;
    std::vector<double> cumulative_;
};

} // namespace hessprod
