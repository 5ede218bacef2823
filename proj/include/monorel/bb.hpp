#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "relation.hpp"
#include "subspace.hpp"
#include "tolerances.hpp"

namespace monorel {

/// Maximality certificates for the relation and for its adjoint, side by
/// side; records everything, asserts nothing.
struct BBReport {
    MaximalityReport relation;
    MaximalityReport adjoint_relation;
};

inline BBReport bb_report(const LinearRelation& A,
                          const Tolerances& tol = default_tol()) {
    return BBReport{maximality_report(A, tol),
                    maximality_report(adjoint(A, tol), tol)};
}

/**
 * Result of splitting p = graph_part + j_part with graph_part in gra A
 * and j_part = (z, -z) in gra(-Id).  j_part is on its graph exactly by
 * construction; residual is the distance of graph_part to gra A, the
 * honest measure of whether the decomposition exists.
 */
struct Decomposition {
    VectorXd graph_part;
    VectorXd j_part;
    double residual = 0.0;
    double min_value = 0.0;
};

/**
 * Minimizes 1/2 |y + y*|^2 over (y, y*) in p + gra A by a least-norm
 * pseudo-inverse solve (the Hessian is singular along y* = -y, so the
 * minimum-norm step is the canonical pick).  No preconditions: for
 * relations without the surjectivity property the minimum stays positive
 * and shows up in residual.
 */
inline Decomposition try_decompose(const LinearRelation& A, const VectorXd& p,
                                   const Tolerances& tol = default_tol()) {
    const int d = A.d();
    if (p.size() != 2 * d)
        raise(ErrorCode::DimensionMismatch, "try_decompose: point must be in R^(2d)");
    MatrixXd M(d, 2 * d);
    M << MatrixXd::Identity(d, d), MatrixXd::Identity(d, d);
    const MatrixXd& B = A.graph().basis();

    VectorXd c = -pseudo_inverse(M * B, tol) * (M * p);
    VectorXd y = p + B * c;
    VectorXd zbar = 0.5 * (y.head(d) - y.tail(d));

    Decomposition out;
    out.j_part = VectorXd(2 * d);
    out.j_part << zbar, -zbar;
    out.graph_part = p - out.j_part;
    out.residual =
        (out.graph_part - A.graph().project(out.graph_part)).norm();
    out.min_value = 0.5 * (y.head(d) + y.tail(d)).squaredNorm();
    return out;
}

/// The checked decomposition; exists for maximal monotone relations.
inline Decomposition decompose(const LinearRelation& A, const VectorXd& p,
                               const Tolerances& tol = default_tol()) {
    if (!maximal_by_dim(A))
        raise(ErrorCode::NotMaximal, "decompose: relation is not maximal");
    Decomposition out = try_decompose(A, p, tol);
    if (out.residual > tol.eq * (1.0 + p.norm()))
        raise(ErrorCode::NotMaximal,
              "decompose: no decomposition within tolerance");
    return out;
}

/**
 * A point monotonically related to gra A but not on it, i.e. a strictly
 * monotone extension point; exists exactly when a monotone A is not
 * maximal.  Searches a fixed sign grid first (d <= 3) and falls back to
 * the constructive witness (0, w) with w orthogonal to dom A and outside
 * the multivalued part, which always exists in the nonmaximal case.
 * Returns nullopt when A is maximal by dimension.
 */
inline std::optional<VectorXd> nonmaximal_witness(
    const LinearRelation& A, const Tolerances& tol = default_tol()) {
    const int d = A.d();
    if (maximal_by_dim(A)) return std::nullopt;

    if (d <= 3) {
        const int n = 2 * d;
        std::vector<int> digits(n, 0);
        const int total = static_cast<int>(std::pow(3.0, n));
        for (int it = 0; it < total; ++it) {
            VectorXd p(n);
            int v = it;
            for (int i = 0; i < n; ++i, v /= 3) p(i) = v % 3 - 1;
            if (p.norm() == 0.0) continue;
            if (A.graph().contains(p, tol)) continue;
            if (monotonically_related(A, p.head(d), p.tail(d), tol)) return p;
        }
    }

    Subspace w = intersect(complement(A.dom(tol), tol),
                           complement(A.multivalued_part(tol), tol), tol);
    if (w.dim() == 0) return std::nullopt;
    VectorXd p = VectorXd::Zero(2 * d);
    p.tail(d) = w.basis().col(0);
    return p;
}

}  // namespace monorel
