#include "hessprod/ode.hpp"

#include "hessprod/errors.hpp"

#include <cmath>
#include <sstream>

namespace hessprod {

namespace {

bool all_finite(std::span<const double> v)
{
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

} // namespace

Trajectory rk_integrate(const OdeRhs& rhs, std::span<const double> y0, double t_end, double step, double t0,
                        const NodeCheck& check)
{
    if (!(step > 0.0) || !(t_end > t0)) {
        throw ConfigError("rk_integrate needs step > 0 and t_end > t0");
    }
    const std::size_t dim = y0.size();
    const auto steps = static_cast<std::size_t>(std::ceil((t_end - t0) / step - 1e-9));

    Trajectory out;
    out.t0 = t0;
    out.step = step;
    out.dim = dim;
    out.states.reserve((steps + 1) * dim);
    out.rates.reserve((steps + 1) * dim);

    std::vector<double> y(y0.begin(), y0.end());
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

    auto fail = [](std::size_t k, double t) {
        std::ostringstream msg;
        msg << "non-finite state or rate after node " << k << " (t = " << t << ")";
        throw BlowUp(msg.str(), k);
    };

    rhs(t0, y, k1);
    if (!all_finite(y) || !all_finite(k1)) fail(0, t0);
    for (std::size_t k = 0;; ++k) {
        const double t = out.t(k);
        out.states.insert(out.states.end(), y.begin(), y.end());
        out.rates.insert(out.rates.end(), k1.begin(), k1.end());
        if (check) check(k, t, y, k1);
        if (k == steps) break;

        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * step * k1[i];
        rhs(t + 0.5 * step, tmp, k2);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * step * k2[i];
        rhs(t + 0.5 * step, tmp, k3);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + step * k3[i];
        rhs(out.t(k + 1), tmp, k4);
        for (std::size_t i = 0; i < dim; ++i) {
            y[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if (!all_finite(y)) fail(k, t);
        rhs(out.t(k + 1), y, k1);
        if (!all_finite(k1)) fail(k, t);
    }
    return out;
}

Profile1D::Profile1D(double t0, double step, std::vector<double> v, std::vector<double> d1, std::vector<double> d2,
                     std::vector<double> d3)
    : t0_(t0), step_(step), v_(std::move(v)), d1_(std::move(d1)), d2_(std::move(d2)), d3_(std::move(d3))
{
    if (v_.size() < 2 || d1_.size() != v_.size() || d2_.size() != v_.size()
        || (!d3_.empty() && d3_.size() != v_.size()) || !(step_ > 0.0)) {
        throw ConfigError("inconsistent profile table");
    }
}

Jet Profile1D::node(std::size_t k) const
{
    return {v_[k], d1_[k], d2_[k], d3_.empty() ? 0.0 : d3_[k]};
}

Jet Profile1D::eval(double t) const
{
    if (v_.empty()) {
        throw StateError("profile not constructed");
    }
    const double pos = (t - t0_) / step_;
    const double last = static_cast<double>(v_.size() - 1);
    if (pos < -1e-9 || pos > last + 1e-9) {
        std::ostringstream msg;
        msg << "profile evaluated at " << t << " outside [" << t0_ << ", " << t_end() << "]";
        throw DomainError(msg.str());
    }
    auto k = static_cast<std::size_t>(std::floor(pos));
    if (k >= v_.size() - 1) k = v_.size() - 2;
    const double s = pos - static_cast<double>(k);
    if (s == 0.0) return node(k);
    const double h = step_;

    const double y0 = v_[k], y1 = v_[k + 1];
    const double p0 = h * d1_[k], p1 = h * d1_[k + 1];
    const double q0 = h * h * d2_[k], q1 = h * h * d2_[k + 1];
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;

    // Quintic Hermite basis on [0, 1] and its first two derivatives.
    const double H0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    const double H1 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const double H2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
    const double H3 = 0.5 * (s3 - 2 * s4 + s5);
    const double H4 = -4 * s3 + 7 * s4 - 3 * s5;
    const double H5 = 10 * s3 - 15 * s4 + 6 * s5;

    const double dH0 = -30 * s2 + 60 * s3 - 30 * s4;
    const double dH1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
    const double dH2 = 0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4);
    const double dH3 = 0.5 * (3 * s2 - 8 * s3 + 5 * s4);
    const double dH4 = -12 * s2 + 28 * s3 - 15 * s4;
    const double dH5 = -dH0;

    const double ddH0 = -60 * s + 180 * s2 - 120 * s3;
    const double ddH1 = -36 * s + 96 * s2 - 60 * s3;
    const double ddH2 = 0.5 * (2 - 18 * s + 36 * s2 - 20 * s3);
    const double ddH3 = 0.5 * (6 * s - 24 * s2 + 20 * s3);
    const double ddH4 = -24 * s + 84 * s2 - 60 * s3;
    const double ddH5 = -ddH0;

    Jet j;
    j.v = y0 * H0 + p0 * H1 + q0 * H2 + q1 * H3 + p1 * H4 + y1 * H5;
    if (d3_.empty()) {
        j.d1 = (y0 * dH0 + p0 * dH1 + q0 * dH2 + q1 * dH3 + p1 * dH4 + y1 * dH5) / h;
        j.d2 = (y0 * ddH0 + p0 * ddH1 + q0 * ddH2 + q1 * ddH3 + p1 * ddH4 + y1 * ddH5) / (h * h);
        return j;
    }
    // Differentiating the value interpolant twice divides its rounding by
    // h^2. With the third derivative tabulated, d1 gets its own quintic
    // from (d1, d2, d3) and d2 a cubic from (d2, d3), so no division occurs.
    const double a0 = d1_[k], a1 = d1_[k + 1];
    const double b0 = h * d2_[k], b1 = h * d2_[k + 1];
    const double c0 = h * h * d3_[k], c1 = h * h * d3_[k + 1];
    j.d1 = a0 * H0 + b0 * H1 + c0 * H2 + c1 * H3 + b1 * H4 + a1 * H5;

    const double r0 = d2_[k], r1 = d2_[k + 1];
    const double e0 = h * d3_[k], e1 = h * d3_[k + 1];
    const double C0 = 1 - 3 * s2 + 2 * s3, C1 = s - 2 * s2 + s3, C2 = -s2 + s3, C3 = 3 * s2 - 2 * s3;
    const double dC0 = -6 * s + 6 * s2, dC1 = 1 - 4 * s + 3 * s2, dC2 = -2 * s + 3 * s2;
    j.d2 = r0 * C0 + e0 * C1 + e1 * C2 + r1 * C3;
    j.d3 = (r0 * dC0 + e0 * dC1 + e1 * dC2 - r1 * dC0) / h;
    return j;
}

} // namespace hessprod
