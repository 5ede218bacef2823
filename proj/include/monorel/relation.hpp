#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>

#include "errors.hpp"
#include "extquad.hpp"
#include "subspace.hpp"
#include "tolerances.hpp"

namespace monorel {

/**
 * A linear relation A: R^d => R^d stored as its graph, a subspace of
 * R^{2d} with coordinates stacked as (x, x*).  Single-valued operators,
 * purely multivalued relations and everything in between share this one
 * representation; all properties below are computed from the graph.
 */
class LinearRelation {
  public:
    LinearRelation(int d, Subspace graph) : d_(d), graph_(std::move(graph)) {
        if (d_ < 1)
            raise(ErrorCode::InvalidArgument, "LinearRelation: d must be >= 1");
        if (graph_.ambient_dim() != 2 * d_)
            raise(ErrorCode::DimensionMismatch,
                  "LinearRelation: graph must live in R^(2d)");
    }

    /// Graph {(x, Ax)} of a single-valued linear map.
    static LinearRelation from_matrix(const MatrixXd& A,
                                      const Tolerances& tol = default_tol()) {
        if (A.rows() != A.cols() || A.rows() < 1)
            raise(ErrorCode::DimensionMismatch, "from_matrix: A must be square");
        const int d = static_cast<int>(A.rows());
        MatrixXd stacked(2 * d, d);
        stacked << MatrixXd::Identity(d, d), A;
        return LinearRelation(d, orthonormalize(stacked, tol));
    }

    /// Relation with the given graph span; columns are (x, x*) stacked,
    /// an empty matrix gives the relation whose graph is {(0, 0)}.
    static LinearRelation from_graph_basis(const MatrixXd& B,
                                           const Tolerances& tol = default_tol()) {
        if (B.rows() % 2 != 0 || B.rows() == 0)
            raise(ErrorCode::DimensionMismatch,
                  "from_graph_basis: basis needs 2d rows");
        int d = static_cast<int>(B.rows()) / 2;
        return LinearRelation(d, orthonormalize(B, tol));
    }

    static LinearRelation identity(int d) {
        return from_matrix(MatrixXd::Identity(d, d));
    }

    static LinearRelation zero(int d) {
        return from_matrix(MatrixXd::Zero(d, d));
    }

    int d() const { return d_; }
    const Subspace& graph() const { return graph_; }

    /// Top (x) rows of the graph basis.
    MatrixXd graph_top() const { return graph_.basis().topRows(d_); }
    /// Bottom (x*) rows of the graph basis.
    MatrixXd graph_bottom() const { return graph_.basis().bottomRows(d_); }

    Subspace dom(const Tolerances& tol = default_tol()) const {
        return orthonormalize(graph_top(), tol);
    }

    Subspace ran(const Tolerances& tol = default_tol()) const {
        return orthonormalize(graph_bottom(), tol);
    }

    /// Multivalued part A0 = A(0); the graph is single-valued iff dim 0.
    Subspace multivalued_part(const Tolerances& tol = default_tol()) const {
        Subspace k = kernel_of(graph_top(), tol);
        return orthonormalize(graph_bottom() * k.basis(), tol);
    }

    /// The image Ax as an affine subspace of R^d, or nullopt if x is
    /// outside dom A.
    std::optional<AffineSubspace> image(const VectorXd& x,
                                        const Tolerances& tol = default_tol()) const {
        if (x.size() != d_)
            raise(ErrorCode::DimensionMismatch, "image: wrong point size");
        MatrixXd B1 = graph_top();
        VectorXd t0 = pseudo_inverse(B1, tol) * x;
        if ((B1 * t0 - x).norm() > tol.rank * (1.0 + x.norm()))
            return std::nullopt;
        return AffineSubspace(graph_bottom() * t0, multivalued_part(tol), tol);
    }

  private:
    int d_;
    Subspace graph_;
};

inline bool relation_equal(const LinearRelation& A, const LinearRelation& B,
                           const Tolerances& tol = default_tol()) {
    return A.d() == B.d() && subspace_equal(A.graph(), B.graph(), tol);
}

/// Graph of the inverse relation: (x, x*) -> (x*, x).
inline LinearRelation inverse(const LinearRelation& A) {
    const int d = A.d();
    MatrixXd swapped(2 * d, A.graph().dim());
    swapped << A.graph_bottom(), A.graph_top();
    return LinearRelation(d, Subspace(2 * d, swapped));
}

/**
 * Adjoint relation: gra A* = { (x, x*) : (x*, -x) in (gra A)^perp }.
 * The map (u, w) -> (-w, u) is orthogonal, so the complement basis turns
 * into an orthonormal graph basis directly.
 */
inline LinearRelation adjoint(const LinearRelation& A,
                              const Tolerances& tol = default_tol()) {
    const int d = A.d();
    Subspace perp = complement(A.graph(), tol);
    MatrixXd N1 = perp.basis().topRows(d);
    MatrixXd N2 = perp.basis().bottomRows(d);
    MatrixXd g(2 * d, perp.dim());
    g << -N2, N1;
    return LinearRelation(d, Subspace(2 * d, g, tol));
}

/// Coupling form on R^{2d}, normalized so that 1/2 z^T C z = <x, x*>.
inline MatrixXd coupling_matrix(int d) {
    MatrixXd C = MatrixXd::Zero(2 * d, 2 * d);
    C.block(0, d, d, d) = MatrixXd::Identity(d, d);
    C.block(d, 0, d, d) = MatrixXd::Identity(d, d);
    return C;
}

/// Monotone: <x, x*> >= 0 for every (x, x*) in the graph, certified by
/// the spectrum of the coupling form restricted to the graph.
inline bool is_monotone(const LinearRelation& A,
                        const Tolerances& tol = default_tol()) {
    const MatrixXd& B = A.graph().basis();
    MatrixXd H = B.transpose() * coupling_matrix(A.d()) * B;
    if (H.size() == 0) return true;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (H + H.transpose()));
    double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    return es.eigenvalues().minCoeff() >= -tol.psd * scale;
}

/// Symmetric: gra A contained in gra A*.
inline bool is_symmetric(const LinearRelation& A,
                         const Tolerances& tol = default_tol()) {
    return contains_subspace(adjoint(A, tol).graph(), A.graph(), tol);
}

/// Skew: gra A contained in gra(-A*), i.e. <x, x*> = 0 on the graph and
/// the coupling form vanishes identically there.
inline bool is_skew(const LinearRelation& A,
                    const Tolerances& tol = default_tol()) {
    const MatrixXd& B = A.graph().basis();
    MatrixXd H = B.transpose() * coupling_matrix(A.d()) * B;
    if (H.size() == 0) return true;
    return H.cwiseAbs().maxCoeff() <= tol.psd;
}

/**
 * Whether the point (x, x*) is monotonically related to gra A, i.e.
 * <x - a, x* - a*> >= 0 for every (a, a*) in the graph.  The infimum of
 * that quadratic over the graph is computed exactly; -inf counts as a
 * violation.
 */
inline bool monotonically_related(const LinearRelation& A, const VectorXd& x,
                                  const VectorXd& xstar,
                                  const Tolerances& tol = default_tol()) {
    if (x.size() != A.d() || xstar.size() != A.d())
        raise(ErrorCode::DimensionMismatch, "monotonically_related: wrong point size");
    VectorXd u(2 * A.d());
    u << x, xstar;
    MatrixXd C = 0.5 * coupling_matrix(A.d());
    const MatrixXd& B = A.graph().basis();

    // g(t) = (u - B t)^T C (u - B t)
    MatrixXd H = 2.0 * (B.transpose() * C * B);
    VectorXd lin = -2.0 * (B.transpose() * (C * u));
    double c0 = u.dot(C * u);
    SymmetricSplit s = symmetric_split(0.5 * (H + H.transpose()), tol);
    double scale = std::max(1.0, s.max_abs_eig);
    double inf;
    if (s.min_eig < -tol.psd * scale) {
        inf = -std::numeric_limits<double>::infinity();
    } else if (s.kernel.cols() > 0 &&
               (s.kernel.transpose() * lin).cwiseAbs().maxCoeff() >
                   tol.rank * (1.0 + lin.norm())) {
        inf = -std::numeric_limits<double>::infinity();
    } else {
        inf = c0 - 0.5 * lin.dot(s.pinv * lin);
    }
    return inf >= -tol.psd * (1.0 + u.squaredNorm());
}

/// dim gra A == d; for monotone relations this characterizes maximality.
inline bool maximal_by_dim(const LinearRelation& A) {
    return A.graph().dim() == A.d();
}

/// gra A + gra(-Id) = R^{2d}; surjectivity of the shifted relation.
inline bool sz_surjective(const LinearRelation& A,
                          const Tolerances& tol = default_tol()) {
    const int d = A.d();
    MatrixXd negJ(2 * d, d);
    negJ << MatrixXd::Identity(d, d), -MatrixXd::Identity(d, d);
    Subspace negJgraph = orthonormalize(negJ, tol);
    return sum(A.graph(), negJgraph, tol).dim() == 2 * d;
}

/**
 * The three maximality certificates next to plain monotonicity.  For a
 * monotone relation the last three are equivalent; the report leaves
 * checking that agreement to the caller.
 */
struct MaximalityReport {
    bool monotone = false;
    bool maximal_by_dim = false;
    bool adjoint_monotone = false;
    bool sz_surjective = false;

    bool all_agree() const {
        return maximal_by_dim == adjoint_monotone &&
               adjoint_monotone == sz_surjective;
    }
};

inline MaximalityReport maximality_report(const LinearRelation& A,
                                          const Tolerances& tol = default_tol()) {
    MaximalityReport r;
    r.monotone = is_monotone(A, tol);
    r.maximal_by_dim = maximal_by_dim(A);
    r.adjoint_monotone = is_monotone(adjoint(A, tol), tol);
    r.sz_surjective = sz_surjective(A, tol);
    return r;
}

}  // namespace monorel
