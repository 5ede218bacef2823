#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "extquad.hpp"
#include "fitzpatrick.hpp"
#include "relation.hpp"
#include "subspace.hpp"
#include "tolerances.hpp"

namespace monorel {

/**
 * Deterministic random source.  mt19937_64 drives a hand-rolled
 * Box-Muller transform so that the stream of variates depends only on
 * the seed, not on the standard library's distribution internals.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in {lo, ..., hi}.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
    }

    /// Standard normal via Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0)
            u1 = uniform();
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    MatrixXd gaussian_matrix(int rows, int cols) {
        MatrixXd G(rows, cols);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i)
                G(i, j) = gaussian();
        return G;
    }

    VectorXd gaussian_vector(int n) {
        VectorXd v(n);
        for (int i = 0; i < n; ++i)
            v(i) = gaussian();
        return v;
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

enum class RelationKind {
    symmetric_maximal,
    skew,
    general_monotone,
    nonmaximal_monotone,
};

inline const char* relation_kind_name(RelationKind kind) {
    switch (kind) {
        case RelationKind::symmetric_maximal: return "symmetric_maximal";
        case RelationKind::skew: return "skew";
        case RelationKind::general_monotone: return "general_monotone";
        case RelationKind::nonmaximal_monotone: return "nonmaximal_monotone";
    }
    return "unknown";
}

namespace detail {

inline LinearRelation random_symmetric_maximal(Rng& rng, int d,
                                               const Tolerances& tol) {
    int k = rng.uniform_int(0, d);
    Subspace D = (k == 0) ? Subspace::trivial(d)
                          : orthonormalize(rng.gaussian_matrix(d, k), tol);
    k = D.dim();
    MatrixXd Q = MatrixXd::Zero(d, d);
    if (k > 0) {
        Eigen::HouseholderQR<MatrixXd> qr(rng.gaussian_matrix(k, k));
        MatrixXd W = qr.householderQ();
        VectorXd lam(k);
        for (int i = 0; i < k; ++i)
            lam(i) = (rng.uniform() < 0.25) ? 0.0 : 0.3 + 2.2 * rng.uniform();
        MatrixXd H = W * lam.asDiagonal() * W.transpose();
        H = 0.5 * (H + H.transpose());
        Q = D.basis() * H * D.basis().transpose();
    }
    // Graph = { (x, Qx + w) : x in D, w in D-perp }; the multivalued
    // part is exactly the orthogonal complement of the domain, which is
    // what maximality plus symmetry forces.
    Subspace Dp = complement(D, tol);
    MatrixXd cols(2 * d, d);
    int c = 0;
    for (int j = 0; j < D.dim(); ++j) {
        cols.col(c).head(d) = D.basis().col(j);
        cols.col(c).tail(d) = Q * D.basis().col(j);
        ++c;
    }
    for (int j = 0; j < Dp.dim(); ++j) {
        cols.col(c).head(d).setZero();
        cols.col(c).tail(d) = Dp.basis().col(j);
        ++c;
    }
    return LinearRelation(d, orthonormalize(cols.leftCols(c), tol));
}

}  // namespace detail

/**
 * Seeded relation generator.  The result is a deterministic function of
 * (seed, d, kind): the same triple always produces bit-identical graph
 * bases within one build of the library.
 */
inline LinearRelation random_relation(std::uint64_t seed, int d, RelationKind kind,
                                      const Tolerances& tol = default_tol()) {
    if (d < 1)
        raise(ErrorCode::InvalidArgument, "random_relation: d must be >= 1");
    Rng rng(seed * 0x9E3779B97F4A7C15ull + 0x100000001b3ull * (static_cast<std::uint64_t>(kind) + 1) + static_cast<std::uint64_t>(d));
    switch (kind) {
        case RelationKind::symmetric_maximal:
            return detail::random_symmetric_maximal(rng, d, tol);
        case RelationKind::skew: {
            MatrixXd G = rng.gaussian_matrix(d, d);
            return LinearRelation::from_matrix(0.5 * (G - G.transpose()), tol);
        }
        case RelationKind::general_monotone: {
            MatrixXd R = rng.gaussian_matrix(d, d);
            MatrixXd G = rng.gaussian_matrix(d, d);
            MatrixXd M = 0.5 * R.transpose() * R + 0.5 * (G - G.transpose());
            return LinearRelation::from_matrix(M, tol);
        }
        case RelationKind::nonmaximal_monotone: {
            LinearRelation big = detail::random_symmetric_maximal(rng, d, tol);
            int k = (d == 1) ? 0 : rng.uniform_int(1, d - 1);
            Subspace sub = (k == 0)
                               ? Subspace::trivial(2 * d)
                               : orthonormalize(big.graph().basis() * rng.gaussian_matrix(d, k), tol);
            LinearRelation A(d, sub);
            if (!is_monotone(A, tol))
                raise(ErrorCode::NotMonotone,
                      "random_relation: subgraph lost monotonicity");
            return A;
        }
    }
    raise(ErrorCode::InvalidArgument, "random_relation: unknown kind");
}

namespace detail {

/// Value of the order-n chain expression at chain points a_1..a_{n-1}
/// (columns of "chain", each in R^{2d} on the graph).
inline double chain_value(const VectorXd& x, const VectorXd& xs,
                          const MatrixXd& chain, int n) {
    const int d = x.size();
    double v = x.dot(xs);
    for (int i = 1; i <= n - 2; ++i) {
        VectorXd ai = chain.col(i - 1).head(d);
        VectorXd ais = chain.col(i - 1).tail(d);
        VectorXd anext = chain.col(i).head(d);
        v += (anext - ai).dot(ais);
    }
    VectorXd last = chain.col(n - 2).head(d);
    VectorXd lasts = chain.col(n - 2).tail(d);
    v += (x - last).dot(lasts);
    VectorXd first = chain.col(0).head(d);
    v += (first - x).dot(xs);
    return v;
}

}  // namespace detail

/**
 * Brute-force lower bound for the order-n Fitzpatrick value at p: the
 * supremum defining it is sampled over `budget` seeded Gaussian chains
 * of graph points at scale 1 + |p|, always including the chain
 * collapsed at the graph projection of p.  For graphs of dimension at
 * most 2 and n <= 3 a deterministic refined grid over the chain
 * coordinates is added so the bound is tight.  The result never
 * exceeds the true value.
 */
inline double brute_fitz_n(const LinearRelation& A, int n, const VectorXd& p,
                           int budget, std::uint64_t seed,
                           const Tolerances& tol = default_tol()) {
    if (n < 2)
        raise(ErrorCode::InvalidArgument, "brute_fitz_n: order must be >= 2");
    if (p.size() != 2 * A.d())
        raise(ErrorCode::DimensionMismatch, "brute_fitz_n: bad point size");
    const int d = A.d();
    const MatrixXd& B = A.graph().basis();
    const int g = A.graph().dim();
    const int links = n - 1;
    VectorXd x = p.head(d);
    VectorXd xs = p.tail(d);
    double scale = 1.0 + p.norm();

    MatrixXd chain(2 * d, links);
    VectorXd proj = A.graph().project(p);
    for (int i = 0; i < links; ++i)
        chain.col(i) = proj;
    double best = detail::chain_value(x, xs, chain, n);

    if (g == 0)
        return best;

    Rng rng(seed ^ 0xB5297A4D3F84D5B9ull);
    for (int trial = 0; trial < budget; ++trial) {
        for (int i = 0; i < links; ++i)
            chain.col(i) = B * (scale * rng.gaussian_vector(g));
        best = std::max(best, detail::chain_value(x, xs, chain, n));
    }

    if (g <= 2 && n <= 3) {
        const int dims = g * links;
        auto eval_t = [&](const VectorXd& t) {
            MatrixXd c(2 * d, links);
            for (int i = 0; i < links; ++i)
                c.col(i) = B * t.segment(i * g, g);
            return detail::chain_value(x, xs, c, n);
        };

        // Deterministic coarse grid over the chain coordinates.
        const int side = 9;
        const double radius = 2.0 * scale;
        VectorXd best_t = VectorXd::Zero(dims);
        std::vector<int> idx(dims, 0);
        bool done = false;
        while (!done) {
            VectorXd t(dims);
            for (int k = 0; k < dims; ++k)
                t(k) = radius * (2.0 * idx[k] / (side - 1) - 1.0);
            double v = eval_t(t);
            if (v > best) {
                best = v;
                best_t = t;
            }
            int k = 0;
            while (k < dims && ++idx[k] == side) {
                idx[k] = 0;
                ++k;
            }
            done = (k == dims);
        }

        // Polish: the chain objective is a quadratic in t, so central
        // differences recover its gradient and Hessian exactly and one
        // Newton step lands on the stationary point.  All candidates
        // are fed back through eval_t, so the result stays a genuine
        // sampled lower bound.
        double f0 = eval_t(best_t);
        VectorXd grad(dims);
        MatrixXd H(dims, dims);
        for (int i = 0; i < dims; ++i) {
            VectorXd e = VectorXd::Unit(dims, i);
            double fp = eval_t(best_t + e);
            double fm = eval_t(best_t - e);
            grad(i) = 0.5 * (fp - fm);
            H(i, i) = fp + fm - 2.0 * f0;
        }
        for (int i = 0; i < dims; ++i) {
            for (int j = i + 1; j < dims; ++j) {
                VectorXd ei = VectorXd::Unit(dims, i);
                VectorXd ej = VectorXd::Unit(dims, j);
                double v = 0.25 * (eval_t(best_t + ei + ej) - eval_t(best_t + ei - ej) -
                                   eval_t(best_t - ei + ej) + eval_t(best_t - ei - ej));
                H(i, j) = v;
                H(j, i) = v;
            }
        }
        SymmetricSplit s = symmetric_split(H, tol);
        best = std::max(best, eval_t(best_t - s.pinv * grad));
        // Along flat Hessian directions a nonzero gradient component
        // means the supremum recedes to infinity; push once so the
        // bound reflects the growth.
        if (s.kernel.cols() > 0) {
            VectorXd kg = s.kernel * (s.kernel.transpose() * grad);
            if (kg.norm() > 1e-9 * (1.0 + grad.norm()))
                best = std::max(best, eval_t(best_t + (4.0 * scale / kg.norm()) * kg));
        }
    }
    return best;
}

/**
 * Central-difference gradient of f at x along an orthonormal basis of
 * the direction space of dom f, assembled back into ambient
 * coordinates.  x must lie in dom f.
 */
inline VectorXd finite_diff_grad(const ExtQuad& f, const VectorXd& x,
                                 double h = 1e-6,
                                 const Tolerances& tol = default_tol()) {
    if (x.size() != f.ambient_dim())
        raise(ErrorCode::DimensionMismatch, "finite_diff_grad: bad point size");
    if (!f.domain().contains_point(x, tol))
        raise(ErrorCode::PointOutsideDomain, "finite_diff_grad: x not in dom f");
    const MatrixXd& D = f.domain().dir().basis();
    VectorXd grad = VectorXd::Zero(x.size());
    for (int j = 0; j < D.cols(); ++j) {
        double fp = eval_extquad(f, x + h * D.col(j), tol).value();
        double fm = eval_extquad(f, x - h * D.col(j), tol).value();
        grad += ((fp - fm) / (2.0 * h)) * D.col(j);
    }
    return grad;
}

}  // namespace monorel
