#pragma once

#include <Eigen/Dense>

#include "errors.hpp"
#include "extquad.hpp"
#include "fitzpatrick.hpp"
#include "relation.hpp"
#include "subspace.hpp"
#include "tolerances.hpp"

namespace monorel {

/// Order parameter for Fitzpatrick functions: a finite n >= 2 or the
/// exact limit object.  The limit is a distinct value, not a big integer.
class Order {
  public:
    static Order finite(int n) {
        if (n < 2)
            raise(ErrorCode::InvalidArgument, "Order: finite order must be >= 2");
        return Order(n);
    }
    static Order infinite() { return Order(-1); }

    bool is_infinite() const { return n_ < 0; }
    int n() const {
        if (is_infinite())
            raise(ErrorCode::InvalidArgument, "Order::n on the infinite order");
        return n_;
    }

  private:
    explicit Order(int n) : n_(n) {}
    int n_;
};

/**
 * Operator sum: gra(A+B) = { (x, a* + b*) : (x, a*) in gra A,
 * (x, b*) in gra B }, computed by intersecting the lifted graphs over a
 * shared x block in R^{3d} and projecting to (x, a* + b*).  Disjoint
 * domains collapse to dom {0} naturally.
 */
inline LinearRelation op_sum(const LinearRelation& A, const LinearRelation& B,
                             const Tolerances& tol = default_tol()) {
    if (A.d() != B.d())
        raise(ErrorCode::DimensionMismatch, "op_sum: dimensions differ");
    const int d = A.d();

    MatrixXd LA = MatrixXd::Zero(2 * d, 3 * d);
    LA.block(0, 0, d, d) = MatrixXd::Identity(d, d);
    LA.block(d, d, d, d) = MatrixXd::Identity(d, d);
    MatrixXd LB = MatrixXd::Zero(2 * d, 3 * d);
    LB.block(0, 0, d, d) = MatrixXd::Identity(d, d);
    LB.block(d, 2 * d, d, d) = MatrixXd::Identity(d, d);

    // lifted = { z : L_A z in gra A, L_B z in gra B }
    MatrixXd PiA = A.graph().projector();
    MatrixXd PiB = B.graph().projector();
    MatrixXd M(4 * d, 3 * d);
    M << LA - PiA * LA,
         LB - PiB * LB;
    Subspace lifted = kernel_of(M, tol);

    MatrixXd T = MatrixXd::Zero(2 * d, 3 * d);
    T.block(0, 0, d, d) = MatrixXd::Identity(d, d);
    T.block(d, d, d, d) = MatrixXd::Identity(d, d);
    T.block(d, 2 * d, d, d) = MatrixXd::Identity(d, d);
    return LinearRelation(d, orthonormalize(T * lifted.basis(), tol));
}

/**
 * The sum rule for Fitzpatrick functions of symmetric maximal monotone
 * relations: F of the operator sum at any order equals the partial
 * inf-convolution (in the second slot) of the summands' functions at
 * that order.  Exact comparison of canonical forms; the recursion side
 * and the inf-convolution side are computed by independent pipelines.
 */
inline bool check_fs6(const LinearRelation& A, const LinearRelation& B,
                      const Order& order,
                      const Tolerances& tol = default_tol()) {
    for (const LinearRelation* R : {&A, &B}) {
        if (!is_monotone(*R, tol))
            raise(ErrorCode::NotMonotone, "check_fs6: operand not monotone");
        if (!is_symmetric(*R, tol))
            raise(ErrorCode::NotSymmetric, "check_fs6: operand not symmetric");
        if (!maximal_by_dim(*R))
            raise(ErrorCode::NotMaximal, "check_fs6: operand not maximal");
    }
    LinearRelation S = op_sum(A, B, tol);
    ExtQuad lhs = order.is_infinite() ? fitz_inf(S, tol) : fitz_n(S, order.n(), tol);
    ExtQuad fa = order.is_infinite() ? fitz_inf(A, tol) : fitz_n(A, order.n(), tol);
    ExtQuad fb = order.is_infinite() ? fitz_inf(B, tol) : fitz_n(B, order.n(), tol);
    ExtQuad rhs = partial_inf_conv2(fa, fb, tol);
    return equal_canonical(lhs, rhs, tol);
}

}  // namespace monorel
