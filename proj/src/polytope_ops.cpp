#include "polytope_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "bcp/error.hpp"

namespace bcp::detail {

namespace {

constexpr double kFeasTol = 1e-9;

Eigen::VectorXd to_eigen(std::span<const double> x) {
    return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

Point to_point(const Eigen::VectorXd& v) { return Point(v.data(), v.data() + v.size()); }

double slack(const Halfspace& h, const Eigen::VectorXd& x) {
    return h.offset - to_eigen(h.normal).dot(x);
}

bool feasible(const ConvexPolytope& p, const Eigen::VectorXd& x) {
    return std::all_of(p.halfspaces.begin(), p.halfspaces.end(), [&](const Halfspace& h) {
        return slack(h, x) >= -kFeasTol * (1.0 + std::abs(h.offset));
    });
}

Eigen::MatrixXd rows(const ConvexPolytope& p, const std::vector<int>& idx, int dim) {
    Eigen::MatrixXd n(static_cast<Eigen::Index>(idx.size()), dim);
    for (std::size_t r = 0; r < idx.size(); ++r)
        n.row(static_cast<Eigen::Index>(r)) = to_eigen(p.halfspaces[idx[r]].normal).transpose();
    return n;
}

Eigen::VectorXd offsets(const ConvexPolytope& p, const std::vector<int>& idx) {
    Eigen::VectorXd o(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r)
        o[static_cast<Eigen::Index>(r)] = p.halfspaces[idx[r]].offset;
    return o;
}

/// Solve N y = o for a square system; nullopt if singular.
std::optional<Eigen::VectorXd> solve_square(const Eigen::MatrixXd& n, const Eigen::VectorXd& o) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(n);
    if (lu.rank() < n.rows()) return std::nullopt;
    return Eigen::VectorXd(lu.solve(o));
}

void push_unique(std::vector<Eigen::VectorXd>& pts, const Eigen::VectorXd& v) {
    for (const auto& q : pts)
        if ((q - v).norm() < 1e-10) return;
    pts.push_back(v);
}

/// Vertices lying on facet `facet`.
std::vector<Eigen::VectorXd> facet_vertices(const ConvexPolytope& p, int dim, int facet) {
    std::vector<Eigen::VectorXd> out;
    const int k = static_cast<int>(p.halfspaces.size());
    std::vector<int> others;
    for (int i = 0; i < k; ++i)
        if (i != facet) others.push_back(i);
    for_each_combination(static_cast<int>(others.size()), dim - 1, [&](const std::vector<int>& c) {
        std::vector<int> idx{facet};
        for (int j : c) idx.push_back(others[j]);
        if (auto v = solve_square(rows(p, idx, dim), offsets(p, idx)); v && feasible(p, *v))
            push_unique(out, *v);
    });
    return out;
}

}  // namespace

void for_each_combination(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
    if (k < 0 || k > n) return;
    std::vector<int> c(static_cast<std::size_t>(k));
    std::iota(c.begin(), c.end(), 0);
    for (;;) {
        fn(c);
        int i = k - 1;
        while (i >= 0 && c[i] == n - k + i) --i;
        if (i < 0) return;
        ++c[i];
        for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    }
}

double polytope_signed_distance(const ConvexPolytope& p, int dim, std::span<const double> xs) {
    const Eigen::VectorXd x = to_eigen(xs);
    double min_slack = std::numeric_limits<double>::infinity();
    for (const auto& h : p.halfspaces) min_slack = std::min(min_slack, slack(h, x));
    if (min_slack >= 0.0) return min_slack;

    // Outside: the nearest point sits in the relative interior of some face,
    // whose affine hull is cut out by at most `dim` independent constraints.
    const int k = static_cast<int>(p.halfspaces.size());
    double best = std::numeric_limits<double>::infinity();
    for (int size = 1; size <= std::min(dim, k); ++size) {
        for_each_combination(k, size, [&](const std::vector<int>& idx) {
            const Eigen::MatrixXd n = rows(p, idx, dim);
            const Eigen::MatrixXd gram = n * n.transpose();
            Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
            if (lu.rank() < gram.rows()) return;
            const Eigen::VectorXd lambda = lu.solve(n * x - offsets(p, idx));
            const Eigen::VectorXd y = x - n.transpose() * lambda;
            if (feasible(p, y)) best = std::min(best, (x - y).norm());
        });
    }
    // Infeasible polytope (empty set): no face exists.
    if (!std::isfinite(best)) return kEmptySignedDistance;
    return -best;
}

std::vector<Point> polytope_vertices(const ConvexPolytope& p, int dim) {
    std::vector<Eigen::VectorXd> pts;
    for_each_combination(static_cast<int>(p.halfspaces.size()), dim, [&](const std::vector<int>& idx) {
        if (auto v = solve_square(rows(p, idx, dim), offsets(p, idx)); v && feasible(p, *v))
            push_unique(pts, *v);
    });
    std::vector<Point> out;
    out.reserve(pts.size());
    for (const auto& v : pts) out.push_back(to_point(v));
    return out;
}

bool polytope_bounded(const ConvexPolytope& p, int dim) {
    const int k = static_cast<int>(p.halfspaces.size());
    std::vector<int> all(static_cast<std::size_t>(k));
    std::iota(all.begin(), all.end(), 0);
    const Eigen::MatrixXd n = rows(p, all, dim);
    if (k == 0) return false;
    if (Eigen::FullPivLU<Eigen::MatrixXd>(n).rank() < dim) return false;
    if (dim == 1) return n.maxCoeff() > 0.0 && n.minCoeff() < 0.0;

    // A pointed, nontrivial recession cone has an extreme ray on which dim-1
    // independent constraints are active.
    bool bounded = true;
    for_each_combination(k, dim - 1, [&](const std::vector<int>& idx) {
        if (!bounded) return;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(rows(p, idx, dim));
        if (lu.rank() < dim - 1) return;
        const Eigen::VectorXd d = lu.kernel().col(0).normalized();
        for (double sign : {1.0, -1.0}) {
            if (((n * (sign * d)).array() <= 1e-12).all()) bounded = false;
        }
    });
    return bounded;
}

std::optional<ChebyshevBall> chebyshev_ball(const ConvexPolytope& p, int dim) {
    if (!polytope_bounded(p, dim)) return std::nullopt;
    const int k = static_cast<int>(p.halfspaces.size());
    std::optional<ChebyshevBall> best;
    for_each_combination(k, dim + 1, [&](const std::vector<int>& idx) {
        Eigen::MatrixXd a(dim + 1, dim + 1);
        a.leftCols(dim) = rows(p, idx, dim);
        a.col(dim).setOnes();
        const auto sol = solve_square(a, offsets(p, idx));
        if (!sol) return;
        const Eigen::VectorXd x = sol->head(dim);
        const double s = (*sol)[dim];
        for (const auto& h : p.halfspaces)
            if (slack(h, x) < s - kFeasTol * (1.0 + std::abs(h.offset))) return;
        if (!best || s > best->radius) best = ChebyshevBall{to_point(x), s};
    });
    return best;
}

void for_each_polytope_boundary_sample(const ConvexPolytope& p, int dim, double pitch,
                                       const std::function<void(std::span<const double>)>& fn) {
    if (!polytope_bounded(p, dim))
        throw UnsupportedError("boundary sampling needs a bounded polytope");
    const int k = static_cast<int>(p.halfspaces.size());

    if (dim == 1) {
        for (const auto& v : polytope_vertices(p, 1)) fn(v);
        return;
    }
    if (dim == 2) {
        for (int f = 0; f < k; ++f) {
            auto verts = facet_vertices(p, 2, f);
            if (verts.size() < 2) continue;  // redundant constraint
            const Eigen::Vector2d tangent(-p.halfspaces[f].normal[1], p.halfspaces[f].normal[0]);
            auto [lo, hi] = std::minmax_element(verts.begin(), verts.end(), [&](const auto& a, const auto& b) {
                return tangent.dot(a) < tangent.dot(b);
            });
            const Eigen::VectorXd a = *lo;
            const Eigen::VectorXd b = *hi;
            const auto n = std::max<long>(1, static_cast<long>(std::ceil((b - a).norm() / pitch)));
            for (long i = 0; i <= n; ++i) {
                const Eigen::VectorXd q = a + (b - a) * (static_cast<double>(i) / static_cast<double>(n));
                fn(std::span<const double>(q.data(), 2));
            }
        }
        return;
    }
    if (dim == 3) {
        for (int f = 0; f < k; ++f) {
            auto verts = facet_vertices(p, 3, f);
            if (verts.size() < 3) continue;
            const Eigen::Vector3d nrm = to_eigen(p.halfspaces[f].normal);
            Eigen::Vector3d helper = std::abs(nrm.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
            const Eigen::Vector3d e1 = nrm.cross(helper).normalized();
            const Eigen::Vector3d e2 = nrm.cross(e1);
            Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
            for (const auto& v : verts) centroid += v;
            centroid /= static_cast<double>(verts.size());
            std::sort(verts.begin(), verts.end(), [&](const auto& a, const auto& b) {
                const Eigen::Vector3d da = a - centroid;
                const Eigen::Vector3d db = b - centroid;
                return std::atan2(da.dot(e2), da.dot(e1)) < std::atan2(db.dot(e2), db.dot(e1));
            });
            for (std::size_t t = 1; t + 1 < verts.size(); ++t) {
                const Eigen::Vector3d a = verts[0];
                const Eigen::Vector3d b = verts[t];
                const Eigen::Vector3d c = verts[t + 1];
                const double longest = std::max({(b - a).norm(), (c - a).norm(), (c - b).norm()});
                const auto n = std::max<long>(1, static_cast<long>(std::ceil(longest / pitch)));
                for (long i = 0; i <= n; ++i) {
                    for (long j = 0; i + j <= n; ++j) {
                        const Eigen::Vector3d q = a + (b - a) * (static_cast<double>(i) / n) +
                                                  (c - a) * (static_cast<double>(j) / n);
                        fn(std::span<const double>(q.data(), 3));
                    }
                }
            }
        }
        return;
    }
    throw UnsupportedError("polytope boundary sampling is implemented for dimensions 1 to 3");
}

}  // namespace bcp::detail
