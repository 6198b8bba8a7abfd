#include "hessprod/sparse.hpp"

#include "hessprod/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hessprod {

Ilu0::Ilu0(const FivePointMatrix& a) : a_(&a), pivot_(a.size())
{
    const std::size_t n1 = a.n1;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double d = a.center[k];
        if (k >= 1 && a.west[k] != 0.0) d -= a.west[k] * a.east[k - 1] / pivot_[k - 1];
        if (k >= n1 && a.south[k] != 0.0) d -= a.south[k] * a.north[k - n1] / pivot_[k - n1];
        if (!(std::abs(d) > 0.0) || !std::isfinite(d)) {
            std::ostringstream msg;
            msg << "zero pivot in incomplete factorization at row " << k;
            throw NumericalError(msg.str());
        }
        pivot_[k] = d;
    }
}

void Ilu0::solve(std::span<const double> r, std::span<double> z) const
{
    const FivePointMatrix& a = *a_;
    const std::size_t n = a.size(), n1 = a.n1;
    for (std::size_t k = 0; k < n; ++k) {
        double v = r[k];
        if (k >= 1) v -= a.west[k] * z[k - 1];
        if (k >= n1) v -= a.south[k] * z[k - n1];
        z[k] = v / pivot_[k];
    }
    for (std::size_t k = n; k-- > 0;) {
        double v = 0.0;
        if (k + 1 < n) v += a.east[k] * z[k + 1];
        if (k + n1 < n) v += a.north[k] * z[k + n1];
        z[k] -= v / pivot_[k];
    }
}

LinearSolveResult bicgstab(const FivePointMatrix& a, std::span<const double> b, std::span<double> x,
                           const LinearSolve& opts)
{
    namespace K = kernels::omp;
    const std::size_t n = a.size();
    if (b.size() != n || x.size() != n) throw ConfigError("linear system size mismatch");

    const Ilu0 m(a);
    std::vector<double> r(n), r0(n), p(n), v(n), s(n), t(n), ph(n), sh(n);

    LinearSolveResult res;
    const double bnorm = std::sqrt(K::dot(b, b));
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        res.converged = true;
        return res;
    }

    auto true_residual = [&] {
        K::apply(a, x, r);
        K::axpby(1.0, b, -1.0, r); // r = b - A x
        return std::sqrt(K::dot(r, r)) / bnorm;
    };

    res.relative_residual = true_residual();
    int stalls = 0;
    while (res.iterations < opts.max_iter && res.relative_residual > opts.rel_tol) {
        // (Re)start from the current true residual.
        r0.assign(r.begin(), r.end());
        std::fill(p.begin(), p.end(), 0.0);
        std::fill(v.begin(), v.end(), 0.0);
        double rho = 1.0, alpha = 1.0, omega = 1.0;
        const double start = res.relative_residual;
        while (res.iterations < opts.max_iter) {
            const double rho_new = K::dot(r0, r);
            if (rho_new == 0.0 || !std::isfinite(rho_new)) break;
            const double beta = (rho_new / rho) * (alpha / omega);
            rho = rho_new;
            K::axpby(-omega, v, 1.0, p);
            K::axpby(1.0, r, beta, p); // p = r + beta (p - omega v)
            m.solve(p, ph);
            K::apply(a, ph, v);
            const double r0v = K::dot(r0, v);
            if (r0v == 0.0 || !std::isfinite(r0v)) break;
            alpha = rho / r0v;
            s.assign(r.begin(), r.end());
            K::axpby(-alpha, v, 1.0, s); // s = r - alpha v
            K::axpby(alpha, ph, 1.0, x);
            ++res.iterations;
            if (std::sqrt(K::dot(s, s)) / bnorm <= opts.rel_tol) break;
            m.solve(s, sh);
            K::apply(a, sh, t);
            const double tt = K::dot(t, t);
            if (tt == 0.0 || !std::isfinite(tt)) break;
            omega = K::dot(t, s) / tt;
            K::axpby(omega, sh, 1.0, x);
            r.assign(s.begin(), s.end());
            K::axpby(-omega, t, 1.0, r); // r = s - omega t
            if (std::sqrt(K::dot(r, r)) / bnorm <= opts.rel_tol || omega == 0.0) break;
        }
        res.relative_residual = true_residual();
        if (!std::isfinite(res.relative_residual)) break;
        // Give up after a few restarts that do not halve the residual.
        if (!(res.relative_residual < 0.5 * start) && ++stalls > 3) break;
    }
    res.converged = res.relative_residual <= opts.rel_tol;
    return res;
}

} // namespace hessprod
