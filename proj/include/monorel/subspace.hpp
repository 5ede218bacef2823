#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "tolerances.hpp"

namespace monorel {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace detail {

/// Rank cutoff relative to max(scale, 1); the absolute floor keeps
/// round-off noise from acquiring rank when the true matrix is zero.
inline double rank_cutoff(double scale, const Tolerances& tol) {
    return tol.rank * (scale > 1.0 ? scale : 1.0);
}

inline void check_symmetric(const MatrixXd& M, const Tolerances& tol,
                            const char* where) {
    if (M.rows() != M.cols())
        raise(ErrorCode::DimensionMismatch, std::string(where) + ": matrix not square");
    double scale = M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
    double dev = M.size() == 0 ? 0.0 : (M - M.transpose()).cwiseAbs().maxCoeff();
    if (dev > tol.orth * (1.0 + scale) * 1e3)
        raise(ErrorCode::NonSymmetricMatrix, std::string(where) + ": matrix not symmetric");
}

}  // namespace detail

/**
 * A linear subspace of R^m held as an orthonormal basis, one column per
 * basis vector.  dim() == 0 is the trivial subspace {0} and is stored as
 * an m x 0 matrix.
 */
class Subspace {
  public:
    /// Wraps a basis that is already orthonormal (checked against tol.orth).
    Subspace(int ambient_dim, MatrixXd basis,
             const Tolerances& tol = default_tol())
        : ambient_(ambient_dim), basis_(std::move(basis)) {
        if (ambient_ < 0)
            raise(ErrorCode::InvalidArgument, "Subspace: negative ambient dimension");
        if (basis_.rows() != ambient_)
            raise(ErrorCode::DimensionMismatch, "Subspace: basis rows != ambient dim");
        if (basis_.cols() > ambient_)
            raise(ErrorCode::DimensionMismatch, "Subspace: more basis vectors than ambient dim");
        if (basis_.cols() > 0) {
            MatrixXd gram = basis_.transpose() * basis_;
            gram -= MatrixXd::Identity(basis_.cols(), basis_.cols());
            if (gram.cwiseAbs().maxCoeff() > tol.orth * 1e3)
                raise(ErrorCode::InvalidArgument, "Subspace: basis not orthonormal");
        }
    }

    static Subspace trivial(int ambient_dim) {
        return Subspace(ambient_dim, MatrixXd::Zero(ambient_dim, 0));
    }

    static Subspace full(int ambient_dim) {
        return Subspace(ambient_dim, MatrixXd::Identity(ambient_dim, ambient_dim));
    }

    int ambient_dim() const { return ambient_; }
    int dim() const { return static_cast<int>(basis_.cols()); }
    const MatrixXd& basis() const { return basis_; }

    /// Orthogonal projector B B^T onto the subspace.
    MatrixXd projector() const { return basis_ * basis_.transpose(); }

    /// Orthogonal projection of v onto the subspace.
    VectorXd project(const VectorXd& v) const {
        if (v.size() != ambient_)
            raise(ErrorCode::DimensionMismatch, "Subspace::project: wrong vector size");
        if (dim() == 0) return VectorXd::Zero(ambient_);
        return basis_ * (basis_.transpose() * v);
    }

    /// Membership up to distance tol.rank * (1 + |v|).
    bool contains(const VectorXd& v, const Tolerances& tol = default_tol()) const {
        return (v - project(v)).norm() <= tol.rank * (1.0 + v.norm());
    }

  private:
    int ambient_;
    MatrixXd basis_;
};

/**
 * Orthonormal basis of the column span of an arbitrary matrix, via SVD
 * with the relative rank cutoff.  An empty or all-zero input yields the
 * trivial subspace.
 */
inline Subspace orthonormalize(const MatrixXd& vectors,
                               const Tolerances& tol = default_tol()) {
    const int m = static_cast<int>(vectors.rows());
    if (vectors.cols() == 0) return Subspace::trivial(m);
    Eigen::JacobiSVD<MatrixXd> svd(vectors, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cut = detail::rank_cutoff(sv.size() > 0 ? sv(0) : 0.0, tol);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rank;
    return Subspace(m, svd.matrixU().leftCols(rank), tol);
}

/// Orthogonal complement within the ambient space.
inline Subspace complement(const Subspace& s,
                           const Tolerances& tol = default_tol()) {
    const int m = s.ambient_dim();
    const int k = s.dim();
    if (k == 0) return Subspace::full(m);
    if (k == m) return Subspace::trivial(m);
    Eigen::JacobiSVD<MatrixXd> svd(s.basis(), Eigen::ComputeFullU);
    return Subspace(m, svd.matrixU().rightCols(m - k), tol);
}

/// Sum of two subspaces of the same ambient space.
inline Subspace sum(const Subspace& a, const Subspace& b,
                    const Tolerances& tol = default_tol()) {
    if (a.ambient_dim() != b.ambient_dim())
        raise(ErrorCode::DimensionMismatch, "sum: ambient dims differ");
    MatrixXd cat(a.ambient_dim(), a.dim() + b.dim());
    cat << a.basis(), b.basis();
    return orthonormalize(cat, tol);
}

/// Intersection, computed as the complement of the sum of complements.
inline Subspace intersect(const Subspace& a, const Subspace& b,
                          const Tolerances& tol = default_tol()) {
    if (a.ambient_dim() != b.ambient_dim())
        raise(ErrorCode::DimensionMismatch, "intersect: ambient dims differ");
    return complement(sum(complement(a, tol), complement(b, tol), tol), tol);
}

inline bool contains_subspace(const Subspace& outer, const Subspace& inner,
                              const Tolerances& tol = default_tol()) {
    if (outer.ambient_dim() != inner.ambient_dim())
        raise(ErrorCode::DimensionMismatch, "contains_subspace: ambient dims differ");
    for (int j = 0; j < inner.dim(); ++j)
        if (!outer.contains(inner.basis().col(j), tol)) return false;
    return true;
}

inline bool subspace_equal(const Subspace& a, const Subspace& b,
                           const Tolerances& tol = default_tol()) {
    return a.dim() == b.dim() && contains_subspace(a, b, tol);
}

/// Moore-Penrose pseudo-inverse via SVD with the relative rank cutoff.
inline MatrixXd pseudo_inverse(const MatrixXd& A,
                               const Tolerances& tol = default_tol()) {
    if (A.rows() == 0 || A.cols() == 0)
        return MatrixXd::Zero(A.cols(), A.rows());
    Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = detail::rank_cutoff(sv.size() > 0 ? sv(0) : 0.0, tol);
    VectorXd inv = VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/**
 * Spectral decomposition of a symmetric matrix split at the rank cutoff.
 * range holds eigenvectors with |lambda| above the cutoff, kernel the
 * rest; pinv is the pseudo-inverse assembled from the range part.
 */
struct SymmetricSplit {
    MatrixXd range;       // k x r
    MatrixXd kernel;      // k x (k - r)
    VectorXd range_eigs;  // r
    MatrixXd pinv;        // k x k
    double min_eig = 0.0;
    double max_abs_eig = 0.0;
};

inline SymmetricSplit symmetric_split(const MatrixXd& H,
                                      const Tolerances& tol = default_tol()) {
    detail::check_symmetric(H, tol, "symmetric_split");
    const int k = static_cast<int>(H.rows());
    SymmetricSplit out;
    if (k == 0) {
        out.range = out.kernel = out.pinv = MatrixXd::Zero(0, 0);
        out.range_eigs = VectorXd::Zero(0);
        return out;
    }
    MatrixXd Hs = 0.5 * (H + H.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(Hs);
    const VectorXd& ev = es.eigenvalues();
    out.min_eig = ev.minCoeff();
    out.max_abs_eig = ev.cwiseAbs().maxCoeff();
    const double cut = detail::rank_cutoff(out.max_abs_eig, tol);
    std::vector<int> rng, ker;
    for (int i = 0; i < k; ++i)
        (std::abs(ev(i)) > cut ? rng : ker).push_back(i);
    out.range.resize(k, static_cast<int>(rng.size()));
    out.range_eigs.resize(static_cast<int>(rng.size()));
    for (size_t i = 0; i < rng.size(); ++i) {
        out.range.col(static_cast<int>(i)) = es.eigenvectors().col(rng[i]);
        out.range_eigs(static_cast<int>(i)) = ev(rng[i]);
    }
    out.kernel.resize(k, static_cast<int>(ker.size()));
    for (size_t i = 0; i < ker.size(); ++i)
        out.kernel.col(static_cast<int>(i)) = es.eigenvectors().col(ker[i]);
    out.pinv = out.range * out.range_eigs.cwiseInverse().asDiagonal() *
               out.range.transpose();
    return out;
}

/**
 * Least-squares solution of the symmetric system P x = b together with a
 * consistency flag: in_range is true when the residual of the returned
 * minimum-norm solution is below tol.rank * (1 + |b|).
 */
struct PseudoSolve {
    VectorXd x;
    bool in_range;
};

inline PseudoSolve pseudo_solve(const MatrixXd& P, const VectorXd& b,
                                const Tolerances& tol = default_tol()) {
    detail::check_symmetric(P, tol, "pseudo_solve");
    if (P.rows() != b.size())
        raise(ErrorCode::DimensionMismatch, "pseudo_solve: size mismatch");
    SymmetricSplit s = symmetric_split(P, tol);
    PseudoSolve out;
    out.x = s.pinv * b;
    out.in_range = (P * out.x - b).norm() <= tol.rank * (1.0 + b.norm());
    return out;
}

/// Kernel of an arbitrary matrix as a subspace of its column space R^n.
inline Subspace kernel_of(const MatrixXd& A,
                          const Tolerances& tol = default_tol()) {
    const int n = static_cast<int>(A.cols());
    if (A.rows() == 0 || n == 0) return Subspace::full(n);
    return complement(orthonormalize(A.transpose(), tol), tol);
}

}  // namespace monorel
