#include <catch2/catch_amalgamated.hpp>
#include <monorel/fitzpatrick.hpp>

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

Eigen::Matrix2d rotation90() {
    Eigen::Matrix2d R;
    R << 0.0, -1.0,
         1.0, 0.0;
    return R;
}

LinearRelation rank_one() {
    Eigen::MatrixXd g(4, 1);
    g << 1.0, 0.0, 1.0, 0.0;
    return LinearRelation(2, orthonormalize(g));
}

LinearRelation normal_cone_at_origin(int d) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * d, d);
    g.bottomRows(d) = Eigen::MatrixXd::Identity(d, d);
    return LinearRelation(d, Subspace(2 * d, g));
}

/// F_{Id,n} in closed form: (n-1)/(2n) (|x|^2 + |x*|^2) + 1/n <x, x*>.
ExtQuad hilbert_identity_form(int d, int n) {
    double a = static_cast<double>(n - 1) / n;
    double b = 1.0 / n;
    Eigen::MatrixXd P = a * Eigen::MatrixXd::Identity(2 * d, 2 * d) +
                        b * coupling_matrix(d);
    return make_extquad(P, Eigen::VectorXd::Zero(2 * d), 0.0,
                        AffineSubspace::full(2 * d));
}

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST_CASE("qform restricts the selection to the domain") {
    ExtQuad q = qform(LinearRelation::identity(2));
    REQUIRE(q.domain().dim() == 2);
    REQUIRE((q.P() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-12);

    ExtQuad qr = qform(rank_one());
    REQUIRE(qr.domain().dim() == 1);
    REQUIRE(eval_extquad(qr, Eigen::Vector2d(2.0, 0.0)).value() == Catch::Approx(2.0));
    REQUIRE(eval_extquad(qr, Eigen::Vector2d(0.0, 1.0)).is_infinite());

    Eigen::Matrix2d shear;
    shear << 1.0, -2.0,
             0.0, 1.0;
    ExtQuad qs = qform(LinearRelation::from_matrix(shear));
    Eigen::Matrix2d symPart;
    symPart << 1.0, -1.0,
               -1.0, 1.0;
    REQUIRE((qs.P() - symPart).cwiseAbs().maxCoeff() < 1e-12);

    // skew relations have identically zero quadratic form
    ExtQuad qrot = qform(LinearRelation::from_matrix(rotation90()));
    REQUIRE(qrot.P().cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(qrot.domain().dim() == 2);

    REQUIRE_THROWS_AS(qform(LinearRelation::from_matrix(-Eigen::Matrix2d::Identity())),
                      Error);
}

TEST_CASE("Fitzpatrick function of the identity") {
    ExtQuad F = fitz(LinearRelation::identity(1));
    REQUIRE(F.domain().dim() == 2);
    Eigen::Matrix2d expect;
    expect << 0.5, 0.5,
              0.5, 0.5;
    REQUIRE((F.P() - expect).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(F.q().norm() < 1e-13);
    REQUIRE(std::abs(F.r()) < 1e-13);
    REQUIRE(eval_extquad(F, vec2(1.0, 0.0)).value() == Catch::Approx(0.25));
}

TEST_CASE("Fitzpatrick function of the zero map is an indicator") {
    ExtQuad F = fitz(LinearRelation::zero(1));
    REQUIRE(F.domain().dim() == 1);
    REQUIRE(eval_extquad(F, vec2(5.0, 0.0)).value() == Catch::Approx(0.0).margin(1e-13));
    REQUIRE(eval_extquad(F, vec2(5.0, 0.1)).is_infinite());
}

TEST_CASE("Fitzpatrick function of a skew rotation is the graph indicator") {
    LinearRelation rot = LinearRelation::from_matrix(rotation90());
    ExtQuad F = fitz(rot);
    ExtQuad expect = indicator(AffineSubspace::linear(rot.graph()));
    REQUIRE(equal_canonical(F, expect));
}

TEST_CASE("fitz refuses non-monotone relations") {
    try {
        fitz(LinearRelation::from_matrix(-Eigen::Matrix2d::Identity()));
        FAIL("expected NotMonotone");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::NotMonotone);
    }
}

TEST_CASE("recursion values for the identity match the closed form") {
    LinearRelation id = LinearRelation::identity(1);
    ExtQuad F3 = fitz_n(id, 3);
    REQUIRE(eval_extquad(F3, vec2(1.0, 1.0)).value() == Catch::Approx(1.0));
    ExtQuad F4 = fitz_n(id, 4);
    REQUIRE(eval_extquad(F4, vec2(1.0, 0.0)).value() == Catch::Approx(0.375));

    for (int d : {1, 2, 3}) {
        LinearRelation idd = LinearRelation::identity(d);
        for (int n = 2; n <= 6; ++n)
            REQUIRE(equal_canonical(fitz_n(idd, n), hilbert_identity_form(d, n)));
    }
}

TEST_CASE("higher orders of the zero map stay the same indicator") {
    LinearRelation z = LinearRelation::zero(2);
    ExtQuad F2 = fitz(z);
    for (int n : {3, 4, 5}) {
        ExtQuad Fn = fitz_n(z, n);
        REQUIRE(equal_canonical(Fn, F2));
        REQUIRE(eval_extquad(Fn, Eigen::Vector4d(5.0, -2.0, 0.0, 0.0)).value() ==
                Catch::Approx(0.0).margin(1e-12));
        REQUIRE(eval_extquad(Fn, Eigen::Vector4d(5.0, -2.0, 0.0, 1.0)).is_infinite());
    }
}

TEST_CASE("purely multivalued relations mirror the zero map") {
    LinearRelation N = normal_cone_at_origin(1);
    for (int n : {2, 3, 4}) {
        ExtQuad Fn = fitz_n(N, n);
        REQUIRE(eval_extquad(Fn, vec2(0.0, 9.0)).value() ==
                Catch::Approx(0.0).margin(1e-12));
        REQUIRE(eval_extquad(Fn, vec2(0.5, 9.0)).is_infinite());
    }
}

TEST_CASE("rotation orders beyond two degenerate to +inf") {
    LinearRelation rot = LinearRelation::from_matrix(rotation90());
    REQUIRE_NOTHROW(fitz_n(rot, 2));
    for (int n : {3, 4}) {
        try {
            fitz_n(rot, n);
            FAIL("expected EmptyDomain");
        } catch (const Error& e) {
            REQUIRE(e.code() == ErrorCode::EmptyDomain);
        }
    }
}

TEST_CASE("closed symmetric form equals the recursion") {
    std::mt19937_64 rng(67);
    std::vector<Eigen::MatrixXd> mats;
    Eigen::Matrix2d Q;
    Q << 2.0, 1.0,
         1.0, 3.0;
    mats.push_back(Q);
    Eigen::Matrix2d R1;
    R1 << 1.0, 1.0,
          1.0, 1.0;  // PSD with a kernel
    mats.push_back(R1);
    for (int t = 0; t < 3; ++t) {
        int d = 1 + static_cast<int>(rng() % 3);
        Eigen::MatrixXd G = gaussian(rng, d, d);
        mats.push_back(G * G.transpose());
    }
    for (const auto& M : mats) {
        LinearRelation A = LinearRelation::from_matrix(M);
        for (int n = 2; n <= 5; ++n) {
            ExtQuad rec = fitz_n(A, n);
            ExtQuad closed = fitz_n_closed_symmetric(A, n);
            REQUIRE(equal_canonical(rec, closed));
        }
    }
}

TEST_CASE("closed symmetric form enforces its preconditions") {
    try {
        fitz_n_closed_symmetric(LinearRelation::from_matrix(rotation90()), 3);
        FAIL("expected NotSymmetric");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::NotSymmetric);
    }
    try {
        fitz_n_closed_symmetric(rank_one(), 3);
        FAIL("expected NotMaximal");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::NotMaximal);
    }
    try {
        fitz_n_closed_symmetric(
            LinearRelation::from_matrix(-Eigen::Matrix2d::Identity()), 3);
        FAIL("expected NotMonotone");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::NotMonotone);
    }
}

TEST_CASE("the unchecked formula exposes the rotation counterexample") {
    LinearRelation rot = LinearRelation::from_matrix(rotation90());
    ExtQuad formula = fitz_n_formula_symmetric(rot, 3);
    ExtQuad actual = fitz_n(rot, 2);  // the last order that exists

    // witness ((1,0),(0,1)): on the graph, so F is finite there, while
    // the symmetric formula demands x* = 0
    Eigen::VectorXd w(4);
    w << 1.0, 0.0, 0.0, 1.0;
    REQUIRE(eval_extquad(actual, w).is_finite());
    REQUIRE(eval_extquad(formula, w).is_infinite());
}

TEST_CASE("orders are pointwise nondecreasing up to the limit") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 8; ++trial) {
        int d = 1 + static_cast<int>(rng() % 3);
        Eigen::MatrixXd G = gaussian(rng, d, d);
        LinearRelation A = LinearRelation::from_matrix(G * G.transpose());
        std::vector<ExtQuad> Fs;
        for (int n = 2; n <= 6; ++n) Fs.push_back(fitz_n(A, n));
        Fs.push_back(fitz_inf(A));
        for (int i = 0; i < 30; ++i) {
            Eigen::VectorXd z = gaussian(rng, 2 * d, 1);
            for (size_t k = 0; k + 1 < Fs.size(); ++k)
                REQUIRE(ext_le(eval_extquad(Fs[k], z), eval_extquad(Fs[k + 1], z),
                               1e-9));
        }
    }
}

TEST_CASE("consequence of the closed form: F_n from F_2 and the coupling") {
    Eigen::Matrix2d Q;
    Q << 2.0, 1.0,
         1.0, 3.0;
    LinearRelation A = LinearRelation::from_matrix(Q);
    ExtQuad F2 = fitz(A);
    for (int n = 2; n <= 6; ++n) {
        double a = 2.0 * (n - 1) / n;
        double b = (2.0 - n) / n;
        ExtQuad assembled = add_raw_quadratic(
            scale_extquad(F2, a), b * coupling_matrix(2),
            Eigen::VectorXd::Zero(4), 0.0);
        REQUIRE(equal_canonical(assembled, fitz_n(A, n)));
    }
}

TEST_CASE("limit order for the identity and the zero map") {
    ExtQuad Finf = fitz_inf(LinearRelation::identity(1));
    REQUIRE(eval_extquad(Finf, vec2(1.0, 0.0)).value() == Catch::Approx(0.5));
    REQUIRE(eval_extquad(Finf, vec2(1.0, 1.0)).value() == Catch::Approx(1.0));

    ExtQuad Fz = fitz_inf(LinearRelation::zero(2));
    REQUIRE(eval_extquad(Fz, Eigen::Vector4d(7.0, 1.0, 0.0, 0.0)).value() ==
            Catch::Approx(0.0).margin(1e-12));
    REQUIRE(eval_extquad(Fz, Eigen::Vector4d(7.0, 1.0, 1.0, 0.0)).is_infinite());

    try {
        fitz_inf(LinearRelation::from_matrix(rotation90()));
        FAIL("expected NotSymmetric");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::NotSymmetric);
    }
    try {
        fitz_inf(rank_one());
        FAIL("expected NotMaximal");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::NotMaximal);
    }
}

TEST_CASE("gap to the limit order scales like 1/n") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 5; ++trial) {
        int d = 1 + static_cast<int>(rng() % 3);
        Eigen::MatrixXd G = gaussian(rng, d, d);
        LinearRelation A = LinearRelation::from_matrix(G * G.transpose());
        ExtQuad Finf = fitz_inf(A);
        for (int n = 2; n <= 5; ++n) {
            ExtQuad Fn = fitz_n(A, n);
            REQUIRE(affine_equal(Finf.domain(), Fn.domain()));
            ExtQuad gap = make_extquad(Finf.P() - Fn.P(), Finf.q() - Fn.q(),
                                       Finf.r() - Fn.r(), Fn.domain());
            ExtQuad expect = add_raw_quadratic(
                scale_extquad(Finf, 1.0 / n), -coupling_matrix(d) / n,
                Eigen::VectorXd::Zero(2 * d), 0.0);
            REQUIRE(equal_canonical(gap, expect));
        }
    }
}

TEST_CASE("conjugate_transpose is the bracket's upper envelope") {
    LinearRelation id = LinearRelation::identity(1);
    ExtQuad upper = conjugate_transpose(fitz(id));
    // for maximal monotone: F^{*T} = coupling + graph indicator
    ExtQuad expect = make_extquad(coupling_matrix(1), Eigen::VectorXd::Zero(2),
                                  0.0, AffineSubspace::linear(id.graph()));
    REQUIRE(equal_canonical(upper, expect));
}

TEST_CASE("bracket_check accepts representatives and flags impostors") {
    std::mt19937_64 rng(79);
    LinearRelation id = LinearRelation::identity(2);
    ExtQuad F = fitz(id);
    std::vector<Eigen::VectorXd> probes;
    for (int i = 0; i < 60; ++i) probes.push_back(gaussian(rng, 4, 1));
    for (int j = 0; j < id.graph().dim(); ++j)
        probes.push_back(id.graph().basis().col(j));

    BracketReport good = bracket_check(id, F, probes);
    REQUIRE(good.ok());

    ExtQuad shifted = add_raw_quadratic(F, Eigen::MatrixXd::Zero(4, 4),
                                        Eigen::VectorXd::Zero(4), -1.0);
    BracketReport bad = bracket_check(id, shifted, probes);
    REQUIRE(!bad.ok());
    REQUIRE(!bad.graph_equality_ok);
    REQUIRE(!bad.lower_ok);
    REQUIRE(!bad.witnesses.empty());
}

TEST_CASE("higher orders also satisfy the bracket") {
    std::mt19937_64 rng(83);
    Eigen::Matrix2d Q;
    Q << 2.0, 1.0,
         1.0, 3.0;
    LinearRelation A = LinearRelation::from_matrix(Q);
    std::vector<Eigen::VectorXd> probes;
    for (int i = 0; i < 40; ++i) probes.push_back(gaussian(rng, 4, 1));
    for (int n = 2; n <= 5; ++n)
        REQUIRE(bracket_check(A, fitz_n(A, n), probes).ok());
    REQUIRE(bracket_check(A, fitz_inf(A), probes).ok());
}
