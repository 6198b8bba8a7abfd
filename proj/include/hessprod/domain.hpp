#pragma once

// Coordinate-convex domains {w < 0}, boundary data and the penalty profile.

#include "hessprod/exact2d.hpp"
#include "hessprod/grid.hpp"
#include "hessprod/polynomial.hpp"

#include <array>
#include <string>
#include <vector>

namespace hessprod {

enum class DomainKind { disk, quartic, rectangle, custom };

DomainKind parse_domain_kind(const std::string& name);
std::string to_string(DomainKind kind);

/// Box bounds as {x1 min, x1 max, x2 min, x2 max}.
using Bounds = std::array<double, 4>;

struct DomainSpec {
    DomainKind kind = DomainKind::disk;
    Polynomial2 w;     // defining function; unused for rectangles
    Polynomial2 phi;   // boundary data
    Bounds box{-1.25, 1.25, -1.25, 1.25};
    double delta = 0.1;
    Vec2 seed_point;

    /// |x|^2 - r^2 on [-1.25 r, 1.25 r]^2.
    static DomainSpec disk(double radius, Polynomial2 phi, double delta);
    /// |x|^4 + |x|^2 - 4 x1 x2 on [0, 1.25]^2, which meets only the
    /// first-quadrant component of {w < 0}.
    static DomainSpec quartic(Polynomial2 phi, double delta);
    /// Grid-aligned rectangle; the solver pins the boundary and uses no penalty.
    static DomainSpec rectangle(const Bounds& box, Polynomial2 phi);
    static DomainSpec custom(Polynomial2 w, Polynomial2 phi, const Bounds& box, Vec2 seed, double delta);
};

/// Grid covering the spec's box with n1 x n2 nodes.
Grid2D domain_grid(const DomainSpec& spec, std::size_t n1, std::size_t n2);

/// min over nodes of min(w11, w22). Throws DomainError when not positive.
double coordinate_convexity(const DomainSpec& spec, const Grid2D& grid);

/// Node membership of the component of {w < 0} containing the seed point,
/// by 4-connected flood fill. Throws DomainError when {w < 0} has no node,
/// when the seed node is outside it, or when other nodes of {w < 0} are
/// not reached.
std::vector<std::uint8_t> selected_component(const DomainSpec& spec, const Grid2D& grid);

/// rho = S(w / delta) clipped to [0, 1], with S(r) = 3 r^2 - 2 r^3.
double smoothstep_penalty(double w, double delta);

/// Penalty field rho on the grid after validating the spec on it.
ScalarField2D build_penalty(const DomainSpec& spec, const Grid2D& grid);

} // namespace hessprod
