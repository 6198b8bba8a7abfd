#pragma once

#include "hessprod/kernels.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hessprod {

/// ILU(0) of a five-point matrix. For this pattern the incomplete factors
/// keep the off-diagonals of A and only the pivots change:
///     M = (D + L) D^{-1} (D + U).
class Ilu0 {
public:
    explicit Ilu0(const FivePointMatrix& a);
    /// z = M^{-1} r, serial sweeps in index order.
    void solve(std::span<const double> r, std::span<double> z) const;

private:
    const FivePointMatrix* a_;
    std::vector<double> pivot_;
};

struct LinearSolve {
    double rel_tol = 1e-12;
    std::size_t max_iter = 4000;
};

struct LinearSolveResult {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Right-preconditioned BiCGSTAB for A x = b with ILU(0), starting from the
/// given x. Inner products and updates use the OpenMP kernels, whose fixed
/// reduction order keeps the iterates independent of the thread count.
LinearSolveResult bicgstab(const FivePointMatrix& a, std::span<const double> b, std::span<double> x,
                           const LinearSolve& opts = {});

} // namespace hessprod
