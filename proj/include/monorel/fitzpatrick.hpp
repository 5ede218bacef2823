#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "errors.hpp"
#include "extquad.hpp"
#include "relation.hpp"
#include "subspace.hpp"
#include "tolerances.hpp"

namespace monorel {

/**
 * Quadratic form of a monotone relation: q_A(x) = 1/2 <x, Ax> on dom A,
 * +inf elsewhere.  Well defined because dom A is orthogonal to the
 * multivalued part A0 for monotone A, so the selection does not matter;
 * monotonicity makes it convex on the domain.  On this exact class the
 * function is already lower semicontinuous, so it coincides with its
 * closed hull.
 */
inline ExtQuad qform(const LinearRelation& A,
                     const Tolerances& tol = default_tol()) {
    if (!is_monotone(A, tol))
        raise(ErrorCode::NotMonotone, "qform: relation is not monotone");
    const int d = A.d();
    MatrixXd S = A.graph_bottom() * pseudo_inverse(A.graph_top(), tol);
    return make_extquad(0.5 * (S + S.transpose()), VectorXd::Zero(d), 0.0,
                        AffineSubspace::linear(A.dom(tol)), tol);
}

/**
 * Fitzpatrick function of a monotone relation:
 *
 *   F_A(x, x*) = sup { <x, a*> + <a, x*> - <a, a*> : (a, a*) in gra A },
 *
 * exact as an ExtQuad on R^{2d}.  The inner objective is concave on the
 * graph precisely because A is monotone.
 */
inline ExtQuad fitz(const LinearRelation& A,
                    const Tolerances& tol = default_tol()) {
    if (!is_monotone(A, tol))
        raise(ErrorCode::NotMonotone, "fitz: relation is not monotone");
    const int d = A.d();
    JointQuadratic obj;
    obj.P_pp = MatrixXd::Zero(2 * d, 2 * d);
    obj.P_pc = coupling_matrix(d);
    obj.P_cc = -coupling_matrix(d);
    obj.q_p = VectorXd::Zero(2 * d);
    obj.q_c = VectorXd::Zero(2 * d);
    obj.r = 0.0;
    return partial_maximize(obj, A.graph(), tol);
}

namespace detail {

/**
 * One step of the Fitzpatrick recursion
 *
 *   F_{n+1}(x, x*) = sup { F_n(a, x*) + <x - a, a*> : (a, a*) in gra A }
 *
 * with absorbing +inf: a single infinite summand pushes the sup to +inf.
 * The sup is finite only for x* such that (a, x*) lies in dom F_n for
 * every a in dom A; on those x* all summands are finite and the
 * quadratic formula of F_n is exact, so the step is a partial
 * maximization followed by a domain restriction.  If no x* qualifies the
 * recursion has left the proper class and EmptyDomain is raised.
 */
inline ExtQuad fitz_step(const LinearRelation& A, const ExtQuad& Fn,
                         const Tolerances& tol) {
    const int d = A.d();
    const AffineSubspace& V = Fn.domain();

    // dom A x {0} must sit inside dir(dom F_n), else every x* fails
    Subspace domA = A.dom(tol);
    MatrixXd lifted = MatrixXd::Zero(2 * d, domA.dim());
    lifted.topRows(d) = domA.basis();
    if (!contains_subspace(V.dir(), Subspace(2 * d, lifted, tol), tol))
        raise(ErrorCode::EmptyDomain,
              "fitz_step: recursion is identically +inf at the next order");

    // G = { x* : (0, x*) in dom F_n }, never empty since (0,0) is there
    MatrixXd slice = MatrixXd::Zero(2 * d, d);
    slice.bottomRows(d) = MatrixXd::Identity(d, d);
    auto cut = affine_intersect(V, AffineSubspace::linear(Subspace(2 * d, slice)), tol);
    if (!cut)
        raise(ErrorCode::EmptyDomain,
              "fitz_step: no x* keeps every summand finite");
    Subspace Gdir = orthonormalize(cut->dir().basis().bottomRows(d), tol);
    VectorXd Goff = cut->offset().tail(d);

    // joint objective in p = (x, x*) and c = (a, a*) via w = (a, x*)
    MatrixXd Ap = MatrixXd::Zero(2 * d, 2 * d);
    Ap.block(d, d, d, d) = MatrixXd::Identity(d, d);
    MatrixXd Ac = MatrixXd::Zero(2 * d, 2 * d);
    Ac.block(0, 0, d, d) = MatrixXd::Identity(d, d);
    MatrixXd E = MatrixXd::Zero(2 * d, 2 * d);
    E.block(0, d, d, d) = MatrixXd::Identity(d, d);  // <x, a*>

    JointQuadratic obj;
    obj.P_pp = Ap.transpose() * Fn.P() * Ap;
    obj.P_pc = Ap.transpose() * Fn.P() * Ac + E;
    obj.P_cc = Ac.transpose() * Fn.P() * Ac - coupling_matrix(d);
    obj.q_p = Ap.transpose() * Fn.q();
    obj.q_c = Ac.transpose() * Fn.q();
    obj.r = Fn.r();
    // Positive curvature of the inner quadratic along a graph direction
    // pushes the supremum to +inf at every parameter point; like the
    // domain condition above, that ends the recursion rather than being
    // a malformed objective.
    ExtQuad sup = [&] {
        try {
            return partial_maximize(obj, A.graph(), tol);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::InnerNotConcave)
                raise(ErrorCode::EmptyDomain,
                      "fitz_step: recursion is identically +inf at the next order");
            throw;
        }
    }();

    // restrict to R^d x G
    MatrixXd gdir = MatrixXd::Zero(2 * d, d + Gdir.dim());
    gdir.block(0, 0, d, d) = MatrixXd::Identity(d, d);
    gdir.block(d, d, d, Gdir.dim()) = Gdir.basis();
    VectorXd goff = VectorXd::Zero(2 * d);
    goff.tail(d) = Goff;
    AffineSubspace window(goff, Subspace(2 * d, gdir, tol), tol);
    auto dom = affine_intersect(sup.domain(), window, tol);
    if (!dom)
        raise(ErrorCode::EmptyDomain,
              "fitz_step: finite-sup window misses the parameter domain");
    return make_extquad(sup.P(), sup.q(), sup.r(), *dom, tol);
}

}  // namespace detail

/**
 * Fitzpatrick function of order n >= 2, built by exact recursion from
 * F_{A,2} = fitz(A).  For relations whose higher orders degenerate to
 * +inf everywhere (rotations do, from order 3 on) this raises
 * EmptyDomain rather than faking a function.
 */
inline ExtQuad fitz_n(const LinearRelation& A, int n,
                      const Tolerances& tol = default_tol()) {
    if (n < 2)
        raise(ErrorCode::InvalidArgument, "fitz_n: order must be >= 2");
    ExtQuad F = fitz(A, tol);
    for (int k = 2; k < n; ++k) F = detail::fitz_step(A, F, tol);
    return F;
}

/**
 * Closed form of F_{A,n} for symmetric relations:
 *
 *   (n-1)/n (q_A(x) + q_A*(x*)) + 1/n <x, x*>   on dom q_A x dom q_A*.
 *
 * Assembled without checking symmetry or maximality, which makes it
 * usable as the "expected" side of identity checks that are supposed to
 * fail for unsuitable relations.
 */
inline ExtQuad fitz_n_formula_symmetric(const LinearRelation& A, int n,
                                        const Tolerances& tol = default_tol()) {
    if (n < 2)
        raise(ErrorCode::InvalidArgument, "fitz_n_formula_symmetric: order must be >= 2");
    const int d = A.d();
    const double w = static_cast<double>(n - 1) / static_cast<double>(n);
    ExtQuad q = qform(A, tol);
    ExtQuad qs = conjugate(q, tol);

    MatrixXd Lx(d, 2 * d), Ls(d, 2 * d);
    Lx << MatrixXd::Identity(d, d), MatrixXd::Zero(d, d);
    Ls << MatrixXd::Zero(d, d), MatrixXd::Identity(d, d);
    ExtQuad part = add_extquad(
        precompose_affine(scale_extquad(q, w, tol), Lx, VectorXd::Zero(d), tol),
        precompose_affine(scale_extquad(qs, w, tol), Ls, VectorXd::Zero(d), tol),
        tol);
    return add_raw_quadratic(part, coupling_matrix(d) / static_cast<double>(n),
                             VectorXd::Zero(2 * d), 0.0, tol);
}

/// The closed form with its preconditions enforced: symmetric and
/// maximal monotone.
inline ExtQuad fitz_n_closed_symmetric(const LinearRelation& A, int n,
                                       const Tolerances& tol = default_tol()) {
    if (!is_monotone(A, tol))
        raise(ErrorCode::NotMonotone, "fitz_n_closed_symmetric: not monotone");
    if (!is_symmetric(A, tol))
        raise(ErrorCode::NotSymmetric, "fitz_n_closed_symmetric: not symmetric");
    if (!maximal_by_dim(A))
        raise(ErrorCode::NotMaximal, "fitz_n_closed_symmetric: not maximal");
    return fitz_n_formula_symmetric(A, n, tol);
}

/**
 * Limit order F_inf = q_A (+) q_A* on dom q_A x dom q_A*, defined for
 * symmetric maximal monotone relations.  Cross-checked on the spot
 * against 2 F_{A,2} - <.,.>, which must agree exactly on this class.
 */
inline ExtQuad fitz_inf(const LinearRelation& A,
                        const Tolerances& tol = default_tol()) {
    if (!is_monotone(A, tol))
        raise(ErrorCode::NotMonotone, "fitz_inf: not monotone");
    if (!is_symmetric(A, tol))
        raise(ErrorCode::NotSymmetric, "fitz_inf: not symmetric");
    if (!maximal_by_dim(A))
        raise(ErrorCode::NotMaximal, "fitz_inf: not maximal");
    const int d = A.d();
    ExtQuad q = qform(A, tol);
    ExtQuad qs = conjugate(q, tol);
    MatrixXd Lx(d, 2 * d), Ls(d, 2 * d);
    Lx << MatrixXd::Identity(d, d), MatrixXd::Zero(d, d);
    Ls << MatrixXd::Zero(d, d), MatrixXd::Identity(d, d);
    ExtQuad out = add_extquad(
        precompose_affine(q, Lx, VectorXd::Zero(d), tol),
        precompose_affine(qs, Ls, VectorXd::Zero(d), tol), tol);

    ExtQuad check = add_raw_quadratic(scale_extquad(fitz(A, tol), 2.0, tol),
                                      -coupling_matrix(d),
                                      VectorXd::Zero(2 * d), 0.0, tol);
    if (!equal_canonical(out, check, tol))
        raise(ErrorCode::NotSymmetric,
              "fitz_inf: closed form disagrees with 2 F_A - coupling");
    return out;
}

/// F^{*T}: conjugate of F with swapped arguments, the upper envelope of
/// the Fitzpatrick bracket.
inline ExtQuad conjugate_transpose(const ExtQuad& F,
                                   const Tolerances& tol = default_tol()) {
    if (F.ambient_dim() % 2 != 0)
        raise(ErrorCode::InvalidArgument, "conjugate_transpose: odd ambient dim");
    const int d = F.ambient_dim() / 2;
    return precompose_affine(conjugate(F, tol), coupling_matrix(d),
                             VectorXd::Zero(2 * d), tol);
}

/**
 * The Fitzpatrick bracket for a representative function F of A: the
 * coupling stays below F at the probes, with equality on the graph, and
 * F stays below F^{*T}.  Witnesses collect the violating points.
 */
struct BracketReport {
    bool lower_ok = true;
    bool graph_equality_ok = true;
    bool upper_ok = true;
    double max_lower_violation = 0.0;
    double max_graph_violation = 0.0;
    double max_upper_violation = 0.0;
    std::vector<VectorXd> witnesses;

    bool ok() const { return lower_ok && graph_equality_ok && upper_ok; }
};

inline BracketReport bracket_check(const LinearRelation& A, const ExtQuad& F,
                                   const std::vector<VectorXd>& probes,
                                   const Tolerances& tol = default_tol()) {
    const int d = A.d();
    if (F.ambient_dim() != 2 * d)
        raise(ErrorCode::DimensionMismatch, "bracket_check: F must live on R^(2d)");
    BracketReport rep;
    ExtQuad upper = conjugate_transpose(F, tol);

    auto coupling_of = [&](const VectorXd& z) {
        return z.head(d).dot(z.tail(d));
    };

    for (const VectorXd& z : probes) {
        ExtReal fv = eval_extquad(F, z, tol);
        double c = coupling_of(z);
        if (fv.is_finite() && fv.value() < c - tol.eq * (1.0 + std::abs(c))) {
            rep.lower_ok = false;
            rep.max_lower_violation =
                std::max(rep.max_lower_violation, c - fv.value());
            rep.witnesses.push_back(z);
        }
        ExtReal uv = eval_extquad(upper, z, tol);
        if (!ext_le(fv, uv, tol.eq)) {
            rep.upper_ok = false;
            if (fv.is_finite() && uv.is_finite())
                rep.max_upper_violation =
                    std::max(rep.max_upper_violation, fv.value() - uv.value());
            rep.witnesses.push_back(z);
        }
    }

    const MatrixXd& B = A.graph().basis();
    for (int j = 0; j < A.graph().dim(); ++j) {
        VectorXd z = B.col(j);
        ExtReal fv = eval_extquad(F, z, tol);
        double c = coupling_of(z);
        if (!fv.is_finite() || !close(fv.raw(), c, tol.eq)) {
            rep.graph_equality_ok = false;
            if (fv.is_finite())
                rep.max_graph_violation =
                    std::max(rep.max_graph_violation, std::abs(fv.value() - c));
            rep.witnesses.push_back(z);
        }
    }
    return rep;
}

}  // namespace monorel
