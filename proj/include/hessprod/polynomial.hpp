#pragma once

#include "hessprod/exact2d.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace hessprod {

/// Polynomial in (x1, x2) with coefficients in graded lexicographic order:
/// 1, x1, x2, x1^2, x1 x2, x2^2, x1^3, x1^2 x2, ...
/// A trailing incomplete degree block is allowed and padded with zeros.
class Polynomial2 {
public:
    Polynomial2() = default;
    explicit Polynomial2(std::vector<double> coefficients);

    double operator()(double x1, double x2) const;
    /// Value, gradient and Hessian at a point.
    PointSolution jet(double x1, double x2) const;

    std::size_t degree() const noexcept { return degree_; }
    const std::vector<double>& coefficients() const noexcept { return c_; }

    /// Index of x1^a x2^b in graded lexicographic order.
    static std::size_t slot(std::size_t a, std::size_t b) noexcept { return (a + b) * (a + b + 1) / 2 + b; }

    Polynomial2 operator+(const Polynomial2& other) const;
    Polynomial2 operator*(double s) const;

    std::string str() const;

private:
    std::vector<double> c_;
    std::size_t degree_ = 0;
};

} // namespace hessprod
