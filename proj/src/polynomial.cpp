#include "hessprod/polynomial.hpp"

#include "hessprod/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hessprod {

namespace {

std::size_t degree_for(std::size_t count)
{
    std::size_t d = 0;
    while (Polynomial2::slot(0, d) + 1 < count) ++d;
    return d;
}

// x^n with x^n = 0 for n < 0 handled by the callers' coefficient checks.
double ipow(double x, std::size_t n)
{
    double r = 1.0;
    for (std::size_t i = 0; i < n; ++i) r *= x;
    return r;
}

} // namespace

Polynomial2::Polynomial2(std::vector<double> coefficients) : c_(std::move(coefficients))
{
    for (double v : c_) {
        if (!std::isfinite(v)) throw ConfigError("polynomial coefficient is not finite");
    }
    degree_ = c_.empty() ? 0 : degree_for(c_.size());
    c_.resize(slot(0, degree_) + 1, 0.0);
}

double Polynomial2::operator()(double x1, double x2) const { return jet(x1, x2).u; }

PointSolution Polynomial2::jet(double x1, double x2) const
{
    PointSolution out;
    for (std::size_t d = 0; d <= degree_ && !c_.empty(); ++d) {
        for (std::size_t b = 0; b <= d; ++b) {
            const std::size_t a = d - b;
            const double c = c_[slot(a, b)];
            if (c == 0.0) continue;
            const double da = static_cast<double>(a), db = static_cast<double>(b);
            out.u += c * ipow(x1, a) * ipow(x2, b);
            if (a >= 1) out.gradient.x1 += c * da * ipow(x1, a - 1) * ipow(x2, b);
            if (b >= 1) out.gradient.x2 += c * db * ipow(x1, a) * ipow(x2, b - 1);
            if (a >= 2) out.hessian.h11 += c * da * (da - 1) * ipow(x1, a - 2) * ipow(x2, b);
            if (a >= 1 && b >= 1) out.hessian.h12 += c * da * db * ipow(x1, a - 1) * ipow(x2, b - 1);
            if (b >= 2) out.hessian.h22 += c * db * (db - 1) * ipow(x1, a) * ipow(x2, b - 2);
        }
    }
    return out;
}

Polynomial2 Polynomial2::operator+(const Polynomial2& other) const
{
    std::vector<double> c(std::max(c_.size(), other.c_.size()), 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
    for (std::size_t i = 0; i < other.c_.size(); ++i) c[i] += other.c_[i];
    return Polynomial2(std::move(c));
}

Polynomial2 Polynomial2::operator*(double s) const
{
    std::vector<double> c = c_;
    for (double& v : c) v *= s;
    return Polynomial2(std::move(c));
}

std::string Polynomial2::str() const
{
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i) out << ',';
        out << c_[i];
    }
    return out.str();
}

} // namespace hessprod
