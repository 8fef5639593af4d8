#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bcp/geometry.hpp"

namespace bcp::detail {

/// Exact signed distance: min slack inside, Euclidean projection distance
/// outside (enumerating active sets of at most `dim` constraints).
double polytope_signed_distance(const ConvexPolytope& p, int dim, std::span<const double> x);

/// Vertices (points where `dim` independent constraints are active).
std::vector<Point> polytope_vertices(const ConvexPolytope& p, int dim);

/// True if the recession cone {d : N d <= 0} is trivial.
bool polytope_bounded(const ConvexPolytope& p, int dim);

struct ChebyshevBall {
    Point center;
    double radius;
};

/// Largest inscribed ball; nullopt when the polytope is unbounded.
std::optional<ChebyshevBall> chebyshev_ball(const ConvexPolytope& p, int dim);

/// Per-facet grids in dimension 1..3.
void for_each_polytope_boundary_sample(const ConvexPolytope& p, int dim, double pitch,
                                       const std::function<void(std::span<const double>)>& fn);

void for_each_combination(int n, int k, const std::function<void(const std::vector<int>&)>& fn);

}  // namespace bcp::detail
