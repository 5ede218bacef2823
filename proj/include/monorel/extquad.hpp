#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <utility>

#include "errors.hpp"
#include "extreal.hpp"
#include "subspace.hpp"
#include "tolerances.hpp"

namespace monorel {

/**
 * Affine subspace offset + dir of R^m.  The stored offset is canonical:
 * it is the point of the set closest to the origin, i.e. orthogonal to
 * dir.  Two affine subspaces are equal iff dims, offsets and directions
 * all match, which makes equality a data comparison.
 */
class AffineSubspace {
  public:
    AffineSubspace(const VectorXd& point, Subspace dir,
                   const Tolerances& tol = default_tol())
        : dir_(std::move(dir)) {
        if (point.size() != dir_.ambient_dim())
            raise(ErrorCode::DimensionMismatch,
                  "AffineSubspace: point size != ambient dim");
        (void)tol;
        offset_ = point - dir_.project(point);
    }

    static AffineSubspace linear(Subspace dir) {
        VectorXd zero = VectorXd::Zero(dir.ambient_dim());
        return AffineSubspace(zero, std::move(dir));
    }

    static AffineSubspace full(int ambient_dim) {
        return linear(Subspace::full(ambient_dim));
    }

    static AffineSubspace point(const VectorXd& p) {
        return AffineSubspace(p, Subspace::trivial(static_cast<int>(p.size())));
    }

    int ambient_dim() const { return dir_.ambient_dim(); }
    int dim() const { return dir_.dim(); }
    const VectorXd& offset() const { return offset_; }
    const Subspace& dir() const { return dir_; }

    /// Closest point of the set to z.
    VectorXd project_point(const VectorXd& z) const {
        return offset_ + dir_.project(z - offset_);
    }

    bool contains_point(const VectorXd& z,
                        const Tolerances& tol = default_tol()) const {
        if (z.size() != ambient_dim())
            raise(ErrorCode::DimensionMismatch,
                  "AffineSubspace::contains_point: wrong vector size");
        return (z - project_point(z)).norm() <= tol.rank * (1.0 + z.norm());
    }

  private:
    VectorXd offset_;
    Subspace dir_;
};

/// Intersection of affine subspaces; empty intersection yields nullopt.
inline std::optional<AffineSubspace> affine_intersect(
    const AffineSubspace& a, const AffineSubspace& b,
    const Tolerances& tol = default_tol()) {
    if (a.ambient_dim() != b.ambient_dim())
        raise(ErrorCode::DimensionMismatch, "affine_intersect: ambient dims differ");
    Subspace dir = intersect(a.dir(), b.dir(), tol);
    // a common point solves B_a s - B_b t = offset_b - offset_a
    MatrixXd M(a.ambient_dim(), a.dim() + b.dim());
    M << a.dir().basis(), -b.dir().basis();
    VectorXd rhs = b.offset() - a.offset();
    VectorXd st = pseudo_inverse(M, tol) * rhs;
    if ((M * st - rhs).norm() > tol.rank * (1.0 + rhs.norm()))
        return std::nullopt;
    VectorXd z = a.offset() + a.dir().basis() * st.head(a.dim());
    return AffineSubspace(z, dir, tol);
}

inline bool affine_equal(const AffineSubspace& a, const AffineSubspace& b,
                         const Tolerances& tol = default_tol()) {
    if (a.ambient_dim() != b.ambient_dim())
        raise(ErrorCode::DimensionMismatch, "affine_equal: ambient dims differ");
    return a.dim() == b.dim() && subspace_equal(a.dir(), b.dir(), tol) &&
           (a.offset() - b.offset()).norm() <=
               tol.rank * (1.0 + a.offset().norm());
}

/**
 * An extended-real-valued convex function on R^m of the exact class
 *
 *     f(z) = 1/2 z^T P z + q^T z + r   on an affine subspace V,
 *     f(z) = +inf                      off V,
 *
 * stored in canonical form so that equal functions have equal data:
 * P is symmetric with row and column space inside dir(V), q lies in
 * dir(V), and r = f(offset(V)).  Convexity of the quadratic part on
 * dir(V) is certified at construction; the class is closed under every
 * operation below, and none of them can produce -inf without raising.
 */
class ExtQuad {
  public:
    int ambient_dim() const { return domain_.ambient_dim(); }
    const MatrixXd& P() const { return P_; }
    const VectorXd& q() const { return q_; }
    double r() const { return r_; }
    const AffineSubspace& domain() const { return domain_; }

    friend ExtQuad make_extquad(const MatrixXd&, const VectorXd&, double,
                                const AffineSubspace&, const Tolerances&);
    friend ExtQuad scale_extquad(const ExtQuad&, double, const Tolerances&);

  private:
    ExtQuad(MatrixXd P, VectorXd q, double r, AffineSubspace domain)
        : P_(std::move(P)), q_(std::move(q)), r_(r), domain_(std::move(domain)) {}

    MatrixXd P_;
    VectorXd q_;
    double r_;
    AffineSubspace domain_;
};

/**
 * Builds the canonical representative of z -> 1/2 z^T P z + q^T z + r on
 * V.  P may be any symmetric matrix; only its restriction to dir(V)
 * matters and it must be PSD there up to tol.psd, otherwise
 * NotConvexOnDomain is raised.
 */
inline ExtQuad make_extquad(const MatrixXd& P, const VectorXd& q, double r,
                            const AffineSubspace& V,
                            const Tolerances& tol = default_tol()) {
    const int m = V.ambient_dim();
    if (P.rows() != m || P.cols() != m || q.size() != m)
        raise(ErrorCode::DimensionMismatch, "make_extquad: data/domain size mismatch");
    detail::check_symmetric(P, tol, "make_extquad");
    if (!std::isfinite(r))
        raise(ErrorCode::InvalidArgument, "make_extquad: r not finite");

    MatrixXd Ps = 0.5 * (P + P.transpose());
    const MatrixXd& B = V.dir().basis();
    const VectorXd& v0 = V.offset();

    MatrixXd H = B.transpose() * Ps * B;
    H = 0.5 * (H + H.transpose());
    if (H.size() > 0) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
        double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
        if (es.eigenvalues().minCoeff() < -tol.psd * scale)
            raise(ErrorCode::NotConvexOnDomain,
                  "make_extquad: quadratic part not convex on the domain");
    }

    MatrixXd Pc = B * H * B.transpose();
    Pc = 0.5 * (Pc + Pc.transpose());
    VectorXd qc = B * (B.transpose() * (Ps * v0 + q));
    double rc = 0.5 * v0.dot(Ps * v0) + q.dot(v0) + r;
    return ExtQuad(std::move(Pc), std::move(qc), rc, V);
}

/// Indicator of the affine subspace V (zero on V, +inf elsewhere).
inline ExtQuad indicator(const AffineSubspace& V,
                         const Tolerances& tol = default_tol()) {
    const int m = V.ambient_dim();
    return make_extquad(MatrixXd::Zero(m, m), VectorXd::Zero(m), 0.0, V, tol);
}

inline ExtReal eval_extquad(const ExtQuad& f, const VectorXd& z,
                            const Tolerances& tol = default_tol()) {
    if (z.size() != f.ambient_dim())
        raise(ErrorCode::DimensionMismatch, "eval_extquad: wrong point size");
    if (!f.domain().contains_point(z, tol)) return ExtReal::infinity();
    return ExtReal(0.5 * z.dot(f.P() * z) + f.q().dot(z) + f.r());
}

/// Pointwise sum; raises EmptyDomain when the domains do not meet.
inline ExtQuad add_extquad(const ExtQuad& f, const ExtQuad& g,
                           const Tolerances& tol = default_tol()) {
    if (f.ambient_dim() != g.ambient_dim())
        raise(ErrorCode::DimensionMismatch, "add_extquad: ambient dims differ");
    std::optional<AffineSubspace> V = affine_intersect(f.domain(), g.domain(), tol);
    if (!V)
        raise(ErrorCode::EmptyDomain, "add_extquad: domains do not intersect");
    return make_extquad(f.P() + g.P(), f.q() + g.q(), f.r() + g.r(), *V, tol);
}

/// f + (1/2 z^T P z + q^T z + r) on the unchanged domain of f.
/// Convexity of the sum on the domain is re-certified, so the added
/// quadratic may be concave as long as f absorbs it.
inline ExtQuad add_raw_quadratic(const ExtQuad& f, const MatrixXd& P,
                                 const VectorXd& q, double r,
                                 const Tolerances& tol = default_tol()) {
    if (P.rows() != f.ambient_dim() || P.cols() != f.ambient_dim() ||
        q.size() != f.ambient_dim())
        raise(ErrorCode::DimensionMismatch, "add_raw_quadratic: size mismatch");
    return make_extquad(f.P() + 0.5 * (P + P.transpose()), f.q() + q,
                        f.r() + r, f.domain(), tol);
}

/// alpha * f for alpha > 0 (keeps the domain, scales the values).
inline ExtQuad scale_extquad(const ExtQuad& f, double alpha,
                             const Tolerances& tol = default_tol()) {
    (void)tol;
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        raise(ErrorCode::InvalidArgument, "scale_extquad: alpha must be positive");
    return ExtQuad(alpha * f.P(), alpha * f.q(), alpha * f.r(), f.domain());
}

/**
 * Fenchel conjugate f*(s) = sup_z { <s, z> - f(z) }, exact.  With
 * H = B^T P B and g = B^T q on the domain offset v0, the supremum is
 * finite exactly when the component of s - q along ker(H) inside dir(V)
 * matches, which pins f* to an affine subspace; on it
 *
 *   f*(s) = 1/2 s^T B H^+ B^T s + (v0 - B H^+ g)^T s + (1/2 g^T H^+ g - r).
 *
 * Always proper (f is proper), never -inf.
 */
inline ExtQuad conjugate(const ExtQuad& f, const Tolerances& tol = default_tol()) {
    const int m = f.ambient_dim();
    const MatrixXd& B = f.domain().dir().basis();
    const VectorXd& v0 = f.domain().offset();

    MatrixXd H = B.transpose() * f.P() * B;
    VectorXd g = B.transpose() * f.q();
    SymmetricSplit s = symmetric_split(H, tol);

    // dom f* = { s : (B K)^T s = K^T g }, K = kernel basis of H
    MatrixXd C = B * s.kernel;  // m x (dim ker), orthonormal columns
    Subspace cspan(m, C, tol);
    Subspace dir = complement(cspan, tol);
    VectorXd offset = C * (s.kernel.transpose() * g);

    MatrixXd Pstar = B * s.pinv * B.transpose();
    VectorXd qstar = v0 - B * (s.pinv * g);
    double rstar = 0.5 * g.dot(s.pinv * g) - f.r();
    return make_extquad(Pstar, qstar, rstar, AffineSubspace(offset, dir, tol), tol);
}

/**
 * Joint quadratic in a parameter block p and an inner block c:
 *
 *   Q(p, c) = 1/2 p^T P_pp p + p^T P_pc c + 1/2 c^T P_cc c
 *             + q_p^T p + q_c^T c + r.
 */
struct JointQuadratic {
    MatrixXd P_pp, P_pc, P_cc;
    VectorXd q_p, q_c;
    double r = 0.0;
};

/**
 * g(p) = sup { Q(p, c) : c in C } as an ExtQuad in p.  Requires the
 * inner Hessian restricted to C to be negative semidefinite up to
 * tol.psd (InnerNotConcave otherwise).  Directions of C on which the
 * Hessian vanishes but the inner linear term does not force g to +inf
 * outside an affine set of p, which becomes the domain; if that set is
 * empty the supremum is +inf everywhere and EmptyDomain is raised.
 */
inline ExtQuad partial_maximize(const JointQuadratic& obj, const Subspace& C,
                                const Tolerances& tol = default_tol()) {
    const int mp = static_cast<int>(obj.P_pp.rows());
    const int mc = static_cast<int>(obj.P_cc.rows());
    if (obj.P_pp.cols() != mp || obj.P_cc.cols() != mc ||
        obj.P_pc.rows() != mp || obj.P_pc.cols() != mc ||
        obj.q_p.size() != mp || obj.q_c.size() != mc ||
        C.ambient_dim() != mc)
        raise(ErrorCode::DimensionMismatch, "partial_maximize: block size mismatch");
    detail::check_symmetric(obj.P_pp, tol, "partial_maximize(P_pp)");
    detail::check_symmetric(obj.P_cc, tol, "partial_maximize(P_cc)");

    const MatrixXd& B = C.basis();
    MatrixXd H = -(B.transpose() * obj.P_cc * B);  // concavity: H PSD
    SymmetricSplit s = symmetric_split(H, tol);
    {
        double scale = std::max(1.0, s.max_abs_eig);
        if (s.min_eig < -tol.psd * scale)
            raise(ErrorCode::InnerNotConcave,
                  "partial_maximize: objective not concave in the inner block");
    }

    // Along ker(H) the objective is linear in c; the sup is finite only
    // where that linear coefficient vanishes:  (P_pc B K)^T p = -K^T B^T q_c.
    MatrixXd M = obj.P_pc * (B * s.kernel);  // mp x (dim ker)
    VectorXd e = -(s.kernel.transpose() * (B.transpose() * obj.q_c));
    Subspace dir = complement(orthonormalize(M, tol), tol);
    VectorXd p0 = pseudo_inverse(M.transpose(), tol) * e;
    if ((M.transpose() * p0 - e).norm() > tol.rank * (1.0 + e.norm()))
        raise(ErrorCode::EmptyDomain,
              "partial_maximize: supremum is +inf for every parameter");

    MatrixXd G = B * s.pinv * B.transpose();  // maximizer kernel, c* = G (...)
    MatrixXd Pg = obj.P_pp + obj.P_pc * G * obj.P_pc.transpose();
    VectorXd qg = obj.q_p + obj.P_pc * (G * obj.q_c);
    double rg = obj.r + 0.5 * obj.q_c.dot(G * obj.q_c);
    return make_extquad(0.5 * (Pg + Pg.transpose()), qg, rg,
                        AffineSubspace(p0, dir, tol), tol);
}

/**
 * g(z) = f(L z + b), the exact pullback along an affine map.  The domain
 * is the preimage of dom f; if it is empty, EmptyDomain is raised
 * (g would be identically +inf).
 */
inline ExtQuad precompose_affine(const ExtQuad& f, const MatrixXd& L,
                                 const VectorXd& b,
                                 const Tolerances& tol = default_tol()) {
    const int mf = f.ambient_dim();
    const int mz = static_cast<int>(L.cols());
    if (L.rows() != mf || b.size() != mf)
        raise(ErrorCode::DimensionMismatch, "precompose_affine: map size mismatch");

    // preimage of dom f: (I - Pi) (L z + b - v0) = 0
    MatrixXd Pi = f.domain().dir().projector();
    MatrixXd M = L - Pi * L;
    VectorXd e = (f.domain().offset() - b) - Pi * (f.domain().offset() - b);
    Subspace dir = kernel_of(M, tol);
    VectorXd z0 = pseudo_inverse(M, tol) * e;
    if ((M * z0 - e).norm() > tol.rank * (1.0 + e.norm()))
        raise(ErrorCode::EmptyDomain, "precompose_affine: preimage of the domain is empty");

    MatrixXd Pg = L.transpose() * f.P() * L;
    VectorXd qg = L.transpose() * (f.P() * b + f.q());
    double rg = 0.5 * b.dot(f.P() * b) + f.q().dot(b) + f.r();
    return make_extquad(0.5 * (Pg + Pg.transpose()), qg, rg,
                        AffineSubspace(z0, dir, tol), tol);
}

/**
 * g(p) = inf { f(p, w) : w in R^t } over the trailing t coordinates.
 * The infimum of a convex quadratic along the fibers is either attained
 * (the generic case, and then g is again in the class) or -inf on the
 * whole candidate domain, which raises MinusInfinity.  Fibers over p
 * outside the projected domain are empty, so g(p) = +inf there.
 */
inline ExtQuad partial_minimize_last(const ExtQuad& f, int t,
                                     const Tolerances& tol = default_tol()) {
    const int m = f.ambient_dim();
    if (t < 0 || t > m)
        raise(ErrorCode::InvalidArgument, "partial_minimize_last: bad tail size");
    const int mp = m - t;

    const MatrixXd& D = f.domain().dir().basis();  // m x k
    const VectorXd& v0 = f.domain().offset();
    const int k = static_cast<int>(D.cols());

    // objective along the domain parametrization z = v0 + D s
    MatrixXd Hs = D.transpose() * f.P() * D;
    Hs = 0.5 * (Hs + Hs.transpose());
    VectorXd gs = D.transpose() * (f.P() * v0 + f.q());

    // p(z) = top block; fibers over p are s-solutions of E s = p - v0_p
    MatrixXd E = D.topRows(mp);
    VectorXd v0p = v0.head(mp);
    Subspace pdir = orthonormalize(E, tol);
    AffineSubspace pdom(v0p, pdir, tol);

    MatrixXd Epinv = pseudo_inverse(E, tol);   // k x mp
    Subspace fib = kernel_of(E, tol);          // fiber directions in s
    const MatrixXd& N = fib.basis();           // k x nk

    MatrixXd Hin = N.transpose() * Hs * N;
    SymmetricSplit s = symmetric_split(Hin, tol);

    // l(p) = N^T (Hs sbar(p) + gs) with sbar(p) = Epinv (p - v0p)
    MatrixXd Lmat = N.transpose() * Hs * Epinv;          // nk x mp
    VectorXd l0 = N.transpose() * (gs - Hs * (Epinv * v0p));

    // -inf exactly when l(p) has a component along ker(Hin); that
    // component is affine in p, so check it on the candidate domain.
    if (s.kernel.cols() > 0) {
        MatrixXd W = s.kernel.transpose() * Lmat;
        VectorXd w0 = s.kernel.transpose() * l0;
        VectorXd at_offset = W * pdom.offset() + w0;
        double dev = at_offset.cwiseAbs().maxCoeff();
        MatrixXd on_dir = W * pdom.dir().basis();
        if (on_dir.size() > 0)
            dev = std::max(dev, on_dir.cwiseAbs().maxCoeff());
        if (dev > tol.rank * (1.0 + l0.norm() + Lmat.norm()))
            raise(ErrorCode::MinusInfinity,
                  "partial_minimize_last: infimum is -inf on the domain");
    }

    // g(p) = h(sbar(p)) - 1/2 l(p)^T Hin^+ l(p), h the restricted objective
    MatrixXd T = Epinv;
    VectorXd u0 = -(Epinv * v0p);
    MatrixXd Pg = T.transpose() * Hs * T - Lmat.transpose() * s.pinv * Lmat;
    VectorXd qg = T.transpose() * (Hs * u0 + gs) - Lmat.transpose() * (s.pinv * l0);
    double rg = 0.5 * u0.dot(Hs * u0) + gs.dot(u0) + f.r() -
                0.5 * l0.dot(s.pinv * l0);
    (void)k;
    return make_extquad(0.5 * (Pg + Pg.transpose()), qg, rg, pdom, tol);
}

/**
 * Partial inf-convolution of two functions on R^{2d} in the second slot:
 *
 *   (f [] g)(x, v) = inf_{w} { f(x, v - w) + g(x, w) }.
 *
 * Built exactly: pull both functions back to the joint space (x, v, w),
 * add, and minimize over the trailing block.  The infimum is attained
 * wherever the result is finite; a -inf fiber raises MinusInfinity and
 * disjoint effective domains raise EmptyDomain.
 */
inline ExtQuad partial_inf_conv2(const ExtQuad& f, const ExtQuad& g,
                                 const Tolerances& tol = default_tol()) {
    if (f.ambient_dim() != g.ambient_dim())
        raise(ErrorCode::DimensionMismatch, "partial_inf_conv2: ambient dims differ");
    const int m = f.ambient_dim();
    if (m % 2 != 0)
        raise(ErrorCode::InvalidArgument, "partial_inf_conv2: ambient dim must be even");
    const int d = m / 2;

    MatrixXd L1 = MatrixXd::Zero(m, m + d);
    L1.block(0, 0, d, d) = MatrixXd::Identity(d, d);
    L1.block(d, d, d, d) = MatrixXd::Identity(d, d);
    L1.block(d, 2 * d, d, d) = -MatrixXd::Identity(d, d);

    MatrixXd L2 = MatrixXd::Zero(m, m + d);
    L2.block(0, 0, d, d) = MatrixXd::Identity(d, d);
    L2.block(d, 2 * d, d, d) = MatrixXd::Identity(d, d);

    VectorXd zero = VectorXd::Zero(m);
    ExtQuad joint = add_extquad(precompose_affine(f, L1, zero, tol),
                                precompose_affine(g, L2, zero, tol), tol);
    return partial_minimize_last(joint, d, tol);
}

/**
 * Exact equality test: same domain and, on it, identical canonical data
 * up to the scaled tolerance tol.eq.
 */
inline bool equal_canonical(const ExtQuad& f, const ExtQuad& g,
                            const Tolerances& tol = default_tol()) {
    if (f.ambient_dim() != g.ambient_dim())
        raise(ErrorCode::DimensionMismatch, "equal_canonical: ambient dims differ");
    if (!affine_equal(f.domain(), g.domain(), tol)) return false;
    double sp = std::max({1.0, f.P().size() ? f.P().cwiseAbs().maxCoeff() : 0.0,
                          g.P().size() ? g.P().cwiseAbs().maxCoeff() : 0.0});
    double sq = std::max({1.0, f.q().size() ? f.q().cwiseAbs().maxCoeff() : 0.0,
                          g.q().size() ? g.q().cwiseAbs().maxCoeff() : 0.0});
    double dP = f.P().size() ? (f.P() - g.P()).cwiseAbs().maxCoeff() : 0.0;
    double dq = f.q().size() ? (f.q() - g.q()).cwiseAbs().maxCoeff() : 0.0;
    return dP <= tol.eq * sp && dq <= tol.eq * sq && close(f.r(), g.r(), tol.eq);
}

/// Largest canonical-data deviation between f and g (their domains must
/// already agree); used by verification reports as a residual.
inline double canonical_residual(const ExtQuad& f, const ExtQuad& g) {
    double dP = f.P().size() ? (f.P() - g.P()).cwiseAbs().maxCoeff() : 0.0;
    double dq = f.q().size() ? (f.q() - g.q()).cwiseAbs().maxCoeff() : 0.0;
    double dr = std::abs(f.r() - g.r());
    return std::max({dP, dq, dr});
}

}  // namespace monorel
