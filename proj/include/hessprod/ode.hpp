#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hessprod {

/// Fixed-step sample path of an ODE system y' = F(t, y).
struct Trajectory {
    double t0 = 0.0;
    double step = 0.0;
    std::size_t dim = 0;
    std::vector<double> states; // node-major, dim entries per node
    std::vector<double> rates;  // F(t_k, y_k), same layout

    std::size_t nodes() const noexcept { return dim == 0 ? 0 : states.size() / dim; }
    double t(std::size_t k) const noexcept { return t0 + static_cast<double>(k) * step; }
    std::span<const double> state(std::size_t k) const { return {states.data() + k * dim, dim}; }
    std::span<const double> rate(std::size_t k) const { return {rates.data() + k * dim, dim}; }
    double t_end() const noexcept { return t(nodes() - 1); }
};

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
/// Called at every accepted node; may throw to abort the integration.
using NodeCheck = std::function<void(std::size_t k, double t, std::span<const double> y,
                                     std::span<const double> dydt)>;

/// Classical RK4 with fixed step from t0 until the first node >= t_end.
/// Throws BlowUp with the last good node when the rhs or state is not finite.
Trajectory rk_integrate(const OdeRhs& rhs, std::span<const double> y0, double t_end, double step,
                        double t0 = 0.0, const NodeCheck& check = nullptr);

/// Value and derivatives of a tabulated profile at one point.
struct Jet {
    double v = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
};

/// Tabulated function on a uniform mesh with derivatives up to order 3.
/// Values are interpolated by quintic Hermite polynomials. Without a third
/// derivative, d1 and d2 are derivatives of that quintic; with one, d1 is a
/// quintic in (d1, d2, d3) and d2 a cubic in (d2, d3), which keeps rounding
/// at the level of the tabulated data.
class Profile1D {
public:
    Profile1D() = default;
    Profile1D(double t0, double step, std::vector<double> v, std::vector<double> d1, std::vector<double> d2,
              std::vector<double> d3 = {});

    Jet eval(double t) const;
    Jet node(std::size_t k) const;
    double t0() const noexcept { return t0_; }
    double step() const noexcept { return step_; }
    double t_end() const noexcept { return t0_ + static_cast<double>(v_.size() - 1) * step_; }
    std::size_t size() const noexcept { return v_.size(); }
    bool has_third() const noexcept { return !d3_.empty(); }
    bool empty() const noexcept { return v_.empty(); }

private:
    double t0_ = 0.0, step_ = 0.0;
    std::vector<double> v_, d1_, d2_, d3_;
};

} // namespace hessprod
