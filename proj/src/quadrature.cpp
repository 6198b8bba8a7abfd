#include "hessprod/quadrature.hpp"

#include "hessprod/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace hessprod {

namespace {

constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5 and the center.
constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& other) const { return error < other.error; }
};

Piece gk15(const RealFunction& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = fc * kronrod_weights[7];
    double gauss = fc * gauss_weights[3];
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = r * kronrod_nodes[i];
        const double pair = f(c - dx) + f(c + dx);
        kronrod += kronrod_weights[i] * pair;
        if (i % 2 == 1) {
            gauss += gauss_weights[i / 2] * pair;
        }
    }
    kronrod *= r;
    gauss *= r;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

bool unrefinable(const Piece& p)
{
    const double scale = std::max({std::abs(p.a), std::abs(p.b), std::numeric_limits<double>::min()});
    return (p.b - p.a) <= 64.0 * std::numeric_limits<double>::epsilon() * scale;
}

} // namespace

double integrate_adaptive(const RealFunction& f, double a, double b, const Quadrature& q)
{
    if (a == b) {
        return 0.0;
    }
    if (b < a) {
        return -integrate_adaptive(f, b, a, q);
    }
    std::priority_queue<Piece> open;
    double settled_value = 0.0;
    double settled_error = 0.0;
    Piece first = gk15(f, a, b);
    double value = first.value;
    double error = first.error;
    double previous = std::numeric_limits<double>::quiet_NaN();
    open.push(first);
    for (int it = 0;; ++it) {
        const double tol = q.abs_tol + q.rel_tol * std::abs(value);
        if (!std::isfinite(value)) {
            throw QuadratureFailure("non-finite quadrature estimate", value, previous);
        }
        if (error <= tol || open.empty()) {
            return value;
        }
        if (it >= q.max_refinements) {
            std::ostringstream msg;
            msg << "quadrature tolerance " << tol << " not met after " << q.max_refinements
                << " refinements (error estimate " << error << ")";
            throw QuadratureFailure(msg.str(), value, previous);
        }
        const Piece worst = open.top();
        open.pop();
        previous = value;
        if (unrefinable(worst)) {
            settled_value += worst.value;
            settled_error += worst.error;
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        const Piece left = gk15(f, worst.a, mid);
        const Piece right = gk15(f, mid, worst.b);
        open.push(left);
        open.push(right);
        value += (left.value + right.value) - worst.value;
        error += (left.error + right.error) - worst.error;
        if (error <= q.abs_tol + q.rel_tol * std::abs(value) || open.size() % 64 == 0) {
            // Resum in heap order to stop drift from the incremental updates.
            value = settled_value;
            error = settled_error;
            auto copy = open;
            while (!copy.empty()) {
                value += copy.top().value;
                error += copy.top().error;
                copy.pop();
            }
        }
    }
}

double integrate_singular(const OffsetIntegrand& f, double a, double b, SingularEnd end, const Quadrature& q)
{
    if (a == b) {
        return 0.0;
    }
    const double len = std::abs(b - a);
    const double dir = b > a ? 1.0 : -1.0;
    switch (end) {
    case SingularEnd::none:
        return integrate_adaptive([&](double x) { return f(x, std::abs(x - a)); }, a, b, q);
    case SingularEnd::a: {
        // x = a + dir s^2, dx = 2 dir s ds
        auto g = [&](double s) {
            if (s == 0.0) return 0.0;
            const double d = s * s;
            return 2.0 * s * f(a + dir * d, d);
        };
        return dir * integrate_adaptive(g, 0.0, std::sqrt(len), q);
    }
    case SingularEnd::b: {
        auto g = [&](double s) {
            if (s == 0.0) return 0.0;
            const double d = s * s;
            return 2.0 * s * f(b - dir * d, d);
        };
        return dir * integrate_adaptive(g, 0.0, std::sqrt(len), q);
    }
    }
    return 0.0;
}

double integrate_singular(const RealFunction& f, double a, double b, SingularEnd end, const Quadrature& q)
{
    return integrate_singular([&](double x, double) { return f(x); }, a, b, end, q);
}

double invert_monotone(const RealFunction& F, double y, double lo, double hi, double tol, const RealFunction& dF)
{
    double flo = F(lo) - y;
    double fhi = F(hi) - y;
    if (std::abs(flo) <= tol) return lo;
    if (std::abs(fhi) <= tol) return hi;
    if (flo > 0.0 || fhi < 0.0) {
        std::ostringstream msg;
        msg << "bracket [" << lo << ", " << hi << "] does not straddle y = " << y;
        throw BracketError(msg.str());
    }
    double t = 0.5 * (lo + hi);
    double best = t;
    double best_residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 400; ++it) {
        const double ft = F(t) - y;
        if (std::abs(ft) < best_residual) {
            best_residual = std::abs(ft);
            best = t;
        }
        if (std::abs(ft) <= tol) {
            return t;
        }
        if (ft < 0.0) {
            lo = t;
        } else {
            hi = t;
        }
        if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) {
            return best;
        }
        double next = 0.5 * (lo + hi);
        if (dF) {
            const double slope = dF(t);
            if (slope > 0.0 && std::isfinite(slope)) {
                const double newton = t - ft / slope;
                if (newton > lo && newton < hi) {
                    next = newton;
                }
            }
        }
        if (next == t) {
            return best;
        }
        t = next;
    }
    return best;
}

double bisect_root(const RealFunction& f, double a, double b, double tol)
{
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (!(fa * fb < 0.0)) {
        std::ostringstream msg;
        msg << "no sign change on [" << a << ", " << b << "]";
        throw BracketError(msg.str());
    }
    while (std::abs(b - a) > tol) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

CumulativeIntegral::CumulativeIntegral(Density phi, double d_max, const Quadrature& q, double first_cell,
                                       double ratio)
    : phi_(std::move(phi)), q_(q)
{
    if (!(d_max > 0.0) || !(first_cell > 0.0) || !(ratio > 1.0)) {
        throw ConfigError("cumulative integral needs d_max > 0, first_cell > 0, ratio > 1");
    }
    mesh_.push_back(0.0);
    double d = std::min(first_cell, d_max);
    while (true) {
        mesh_.push_back(d);
        if (d >= d_max) break;
        d = std::min(d * ratio, d_max);
    }
    cumulative_.assign(mesh_.size(), 0.0);
    for (std::size_t k = 0; k + 1 < mesh_.size(); ++k) {
        cumulative_[k + 1] = cumulative_[k] + cell_integral(k, mesh_[k + 1]);
    }
}

double CumulativeIntegral::cell_integral(std::size_t cell, double upto) const
{
    const double lo = mesh_[cell];
    if (upto <= lo) return 0.0;
    Quadrature q = q_;
    q.abs_tol = q_.abs_tol * 1e-3;
    if (cell == 0) {
        return integrate_singular([this](double, double d) { return phi_(d); }, 0.0, upto, SingularEnd::a, q);
    }
    return integrate_adaptive(phi_, lo, upto, q);
}

double CumulativeIntegral::value(double d) const
{
    if (d <= 0.0) return 0.0;
    if (d > mesh_.back()) {
        std::ostringstream msg;
        msg << "cumulative integral evaluated at " << d << " beyond table end " << mesh_.back();
        throw DomainError(msg.str());
    }
    const auto it = std::upper_bound(mesh_.begin(), mesh_.end(), d);
    const auto cell = static_cast<std::size_t>(std::distance(mesh_.begin(), it)) - 1;
    if (mesh_[cell] == d) return cumulative_[cell];
    return cumulative_[cell] + cell_integral(cell, d);
}

double CumulativeIntegral::inverse(double y) const
{
    if (y <= 0.0) return 0.0;
    if (y > cumulative_.back()) {
        std::ostringstream msg;
        msg << "value " << y << " beyond table range " << cumulative_.back();
        throw DomainError(msg.str());
    }
    const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), y);
    const auto hi = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
    if (cumulative_[hi] == y) return mesh_[hi];
    const std::size_t cell = hi - 1;
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * y;
    return invert_monotone([this, cell](double d) { return cumulative_[cell] + cell_integral(cell, d); }, y,
                           mesh_[cell], mesh_[hi], tol, phi_);
}

} // namespace hessprod
