#include <catch2/catch_amalgamated.hpp>
#include <monorel/subspace.hpp>

#include <random>

using namespace monorel;

namespace {

Eigen::MatrixXd gaussian(std::mt19937_64& rng, int r, int c) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd M(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) M(i, j) = n(rng);
    return M;
}

Subspace random_subspace(std::mt19937_64& rng, int m, int k) {
    Subspace s = orthonormalize(gaussian(rng, m, k));
    REQUIRE(s.dim() == k);
    return s;
}

}  // namespace

TEST_CASE("orthonormalize collapses dependent columns") {
    Eigen::MatrixXd M(2, 2);
    M << 1.0, 2.0,
         0.0, 0.0;
    Subspace s = orthonormalize(M);
    REQUIRE(s.dim() == 1);
    REQUIRE(std::abs(s.basis()(0, 0)) == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(std::abs(s.basis()(1, 0)) < 1e-14);
}

TEST_CASE("orthonormalize of zero or empty input is trivial") {
    REQUIRE(orthonormalize(Eigen::MatrixXd::Zero(3, 2)).dim() == 0);
    REQUIRE(orthonormalize(Eigen::MatrixXd::Zero(3, 0)).dim() == 0);
    // round-off noise must not acquire rank
    REQUIRE(orthonormalize(Eigen::MatrixXd::Constant(3, 3, 1e-15)).dim() == 0);
}

TEST_CASE("complement in R^3") {
    Eigen::MatrixXd M(3, 1);
    M << 1.0, 0.0, 0.0;
    Subspace s = orthonormalize(M);
    Subspace c = complement(s);
    REQUIRE(c.dim() == 2);
    REQUIRE(c.contains(Eigen::Vector3d(0.0, 1.0, 0.0)));
    REQUIRE(c.contains(Eigen::Vector3d(0.0, 0.0, 1.0)));
    REQUIRE(!c.contains(Eigen::Vector3d(1.0, 0.0, 0.0)));
}

TEST_CASE("intersect picks the shared line") {
    Eigen::MatrixXd diag(2, 1);
    diag << 1.0, 1.0;
    Subspace d = orthonormalize(diag);
    Subspace inter = intersect(Subspace::full(2), d);
    REQUIRE(inter.dim() == 1);
    REQUIRE(inter.contains(Eigen::Vector2d(1.0, 1.0)));
}

TEST_CASE("pseudo_solve reports range membership") {
    Eigen::MatrixXd P(2, 2);
    P << 1.0, 0.0,
         0.0, 0.0;

    PseudoSolve ok = pseudo_solve(P, Eigen::Vector2d(2.0, 0.0));
    REQUIRE(ok.in_range);
    REQUIRE(ok.x(0) == Catch::Approx(2.0));
    REQUIRE(ok.x(1) == Catch::Approx(0.0).margin(1e-14));

    PseudoSolve bad = pseudo_solve(P, Eigen::Vector2d(2.0, 3.0));
    REQUIRE(!bad.in_range);
    REQUIRE(bad.x(0) == Catch::Approx(2.0));
}

TEST_CASE("kernel_of a row vector") {
    Eigen::MatrixXd A(1, 2);
    A << 1.0, 1.0;
    Subspace k = kernel_of(A);
    REQUIRE(k.dim() == 1);
    REQUIRE(k.contains(Eigen::Vector2d(1.0, -1.0)));
}

TEST_CASE("subspace constructor rejects bad bases") {
    Eigen::MatrixXd notOrtho(2, 2);
    notOrtho << 1.0, 1.0,
                0.0, 1.0;
    REQUIRE_THROWS_AS(Subspace(2, notOrtho), Error);
    REQUIRE_THROWS_AS(Subspace(2, Eigen::MatrixXd::Identity(3, 1)), Error);
}

TEST_CASE("complement is an involution and dims add up") {
    std::mt19937_64 rng(7);
    for (int m : {1, 2, 3, 5, 8}) {
        for (int k = 0; k <= m; ++k) {
            Subspace s = random_subspace(rng, m, k);
            Subspace c = complement(s);
            REQUIRE(c.dim() == m - k);
            REQUIRE(subspace_equal(complement(c), s));
            REQUIRE(sum(s, c).dim() == m);
            REQUIRE(intersect(s, c).dim() == 0);
        }
    }
}

TEST_CASE("dim(sum) + dim(intersect) == dim(a) + dim(b)") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        int m = 2 + static_cast<int>(rng() % 6);
        int ka = static_cast<int>(rng() % (m + 1));
        int kb = static_cast<int>(rng() % (m + 1));
        Subspace a = random_subspace(rng, m, ka);
        Subspace b = random_subspace(rng, m, kb);
        Subspace s = sum(a, b);
        Subspace i = intersect(a, b);
        REQUIRE(s.dim() + i.dim() == ka + kb);
        REQUIRE(contains_subspace(s, a));
        REQUIRE(contains_subspace(s, b));
        REQUIRE(contains_subspace(a, i));
        REQUIRE(contains_subspace(b, i));
    }
}

TEST_CASE("intersection of a subspace with an embedded copy of itself") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        int m = 2 + static_cast<int>(rng() % 5);
        int k = 1 + static_cast<int>(rng() % m);
        Subspace s = random_subspace(rng, m, k);
        REQUIRE(subspace_equal(intersect(s, s), s));
        REQUIRE(subspace_equal(sum(s, s), s));
        REQUIRE(contains_subspace(Subspace::full(m), s));
        REQUIRE(contains_subspace(s, Subspace::trivial(m)));
    }
}

TEST_CASE("projection is idempotent and orthogonal") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        int m = 2 + static_cast<int>(rng() % 5);
        int k = static_cast<int>(rng() % (m + 1));
        Subspace s = random_subspace(rng, m, k);
        Eigen::VectorXd v(m);
        for (int i = 0; i < m; ++i) v(i) = n(rng);
        Eigen::VectorXd p = s.project(v);
        REQUIRE((s.project(p) - p).norm() < 1e-12);
        REQUIRE(std::abs((v - p).dot(p)) < 1e-10);
        REQUIRE(s.contains(p));
    }
}

TEST_CASE("pseudo_solve returns the minimum-norm solution") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        int m = 2 + static_cast<int>(rng() % 4);
        Eigen::MatrixXd G = gaussian(rng, m, m - 1);
        Eigen::MatrixXd P = G * G.transpose();  // symmetric PSD, rank m-1
        Eigen::VectorXd y = gaussian(rng, m, 1);
        Eigen::VectorXd b = P * y;  // guaranteed in range
        PseudoSolve sol = pseudo_solve(P, b);
        REQUIRE(sol.in_range);
        REQUIRE((P * sol.x - b).norm() < 1e-8 * (1.0 + b.norm()));
        // any other solution differs by a kernel vector and is no shorter
        Subspace ker = kernel_of(P);
        REQUIRE(ker.dim() >= 1);
        Eigen::VectorXd alt = sol.x + ker.basis().col(0);
        REQUIRE(alt.norm() >= sol.x.norm() - 1e-12);
        REQUIRE(std::abs(ker.basis().col(0).dot(sol.x)) < 1e-8);
    }
}

TEST_CASE("symmetric_split partitions the spectrum") {
    Eigen::MatrixXd H(3, 3);
    H << 2.0, 0.0, 0.0,
         0.0, 0.0, 0.0,
         0.0, 0.0, -1.0;
    SymmetricSplit s = symmetric_split(H);
    REQUIRE(s.range.cols() == 2);
    REQUIRE(s.kernel.cols() == 1);
    REQUIRE(s.min_eig == Catch::Approx(-1.0));
    REQUIRE(s.max_abs_eig == Catch::Approx(2.0));
    REQUIRE((s.pinv * H * s.pinv - s.pinv).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE((H * s.kernel).cwiseAbs().maxCoeff() < 1e-12);
}
