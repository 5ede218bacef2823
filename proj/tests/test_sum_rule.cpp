#include <catch2/catch_amalgamated.hpp>

#include <monorel/oracle.hpp>
#include <monorel/sum_rule.hpp>

#include <Eigen/Dense>

using namespace monorel;

namespace {

LinearRelation sym_instance(std::uint64_t seed, int d) {
    return random_relation(seed, d, RelationKind::symmetric_maximal);
}

}  // namespace

TEST_CASE("op_sum of identity with itself doubles the slope") {
    LinearRelation id = LinearRelation::identity(1);
    LinearRelation S = op_sum(id, id);
    MatrixXd two(1, 1);
    two << 2.0;
    CHECK(relation_equal(S, LinearRelation::from_matrix(two)));
}

TEST_CASE("op_sum with the zero map is the identity of the calculus") {
    MatrixXd M(2, 2);
    M << 1.0, -2.0,
         2.0, 0.5;
    LinearRelation A = LinearRelation::from_matrix(M);
    LinearRelation S = op_sum(A, LinearRelation::zero(2));
    CHECK(relation_equal(S, A));
    CHECK(relation_equal(op_sum(LinearRelation::zero(2), A), A));
}

TEST_CASE("op_sum with disjoint domains collapses to the origin") {
    // dom A = span{e1} with A0 = span{e2}, dom B = span{e2} with
    // B0 = span{e1}.  The only shared domain point is 0, where both
    // relations emit a full R^2 of values.
    MatrixXd BA(4, 2);
    BA << 1.0 / std::sqrt(2.0), 0.0,
          0.0, 0.0,
          1.0 / std::sqrt(2.0), 0.0,
          0.0, 1.0;
    MatrixXd BB(4, 2);
    BB << 0.0, 0.0,
          1.0 / std::sqrt(2.0), 0.0,
          0.0, 1.0,
          1.0 / std::sqrt(2.0), 0.0;
    LinearRelation A(2, Subspace(4, BA));
    LinearRelation B(2, Subspace(4, BB));
    REQUIRE(is_monotone(A));
    REQUIRE(is_monotone(B));

    LinearRelation S = op_sum(A, B);
    CHECK(S.dom().dim() == 0);
    CHECK(S.multivalued_part().dim() == 2);
    CHECK(maximal_by_dim(S));
}

TEST_CASE("op_sum is commutative and preserves symmetric maximality") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        int d = 1 + static_cast<int>(seed % 4);
        LinearRelation A = sym_instance(seed, d);
        LinearRelation B = sym_instance(seed + 100, d);
        LinearRelation S = op_sum(A, B);
        CHECK(relation_equal(S, op_sum(B, A)));
        CHECK(is_monotone(S));
        CHECK(is_symmetric(S));
        CHECK(maximal_by_dim(S));
        CHECK(subspace_equal(S.dom(), intersect(A.dom(), B.dom())));
    }
}

TEST_CASE("sum rule holds for the identity added to itself at order two") {
    LinearRelation id = LinearRelation::identity(1);
    CHECK(check_fs6(id, id, Order::finite(2)));

    // Both sides equal x^2/2 + (x*)^2/8 + x x*/2 on all of R^2.
    LinearRelation S = op_sum(id, id);
    ExtQuad lhs = fitz_n(S, 2);
    ExtQuad rhs = partial_inf_conv2(fitz_n(id, 2), fitz_n(id, 2));
    MatrixXd P(2, 2);
    P << 1.0, 0.5,
         0.5, 0.25;
    ExtQuad expect = make_extquad(P, VectorXd::Zero(2), 0.0,
                                  AffineSubspace::linear(Subspace::full(2)));
    CHECK(equal_canonical(lhs, expect));
    CHECK(equal_canonical(rhs, expect));

    VectorXd z(2);
    z << 1.0, 2.0;
    CHECK(eval_extquad(lhs, z).value() == Catch::Approx(2.0).margin(1e-12));
    CHECK(eval_extquad(rhs, z).value() == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("sum rule holds for identity plus zero map at order three") {
    LinearRelation id = LinearRelation::identity(1);
    LinearRelation zero = LinearRelation::zero(1);
    CHECK(check_fs6(id, zero, Order::finite(3)));

    ExtQuad lhs = fitz_n(op_sum(id, zero), 3);
    ExtQuad rhs = partial_inf_conv2(fitz_n(id, 3), fitz_n(zero, 3));
    VectorXd z(2);
    z << 1.0, 1.0;
    CHECK(eval_extquad(lhs, z).value() == Catch::Approx(1.0).margin(1e-12));
    CHECK(eval_extquad(rhs, z).value() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("sum rule holds at the limit order") {
    LinearRelation id = LinearRelation::identity(1);
    CHECK(check_fs6(id, id, Order::infinite()));
}

TEST_CASE("check_fs6 rejects unfit operands") {
    LinearRelation id2 = LinearRelation::identity(2);
    MatrixXd rot(2, 2);
    rot << 0.0, -1.0,
           1.0, 0.0;
    LinearRelation R = LinearRelation::from_matrix(rot);
    CHECK_THROWS_AS(check_fs6(id2, R, Order::finite(2)), Error);

    MatrixXd short_col(4, 1);
    short_col << 1.0, 0.0, 1.0, 0.0;
    LinearRelation shorty(2, Subspace(4, short_col / std::sqrt(2.0)));
    CHECK_THROWS_AS(check_fs6(shorty, id2, Order::finite(2)), Error);
}

TEST_CASE("inf-convolution with the zero map's function is the identity") {
    for (std::uint64_t seed = 3; seed <= 8; ++seed) {
        int d = 1 + static_cast<int>(seed % 3);
        LinearRelation A = sym_instance(seed, d);
        LinearRelation zero = LinearRelation::zero(d);
        for (int n : {2, 3, 4}) {
            ExtQuad fa = fitz_n(A, n);
            ExtQuad conv = partial_inf_conv2(fa, fitz_n(zero, n));
            CHECK(equal_canonical(conv, fa));
        }
    }
}

TEST_CASE("sum rule holds across random symmetric maximal pairs") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        int d = 1 + static_cast<int>(seed % 3);
        LinearRelation A = sym_instance(seed * 7 + 1, d);
        LinearRelation B = sym_instance(seed * 7 + 4, d);
        for (int n : {2, 3, 4, 5})
            CHECK(check_fs6(A, B, Order::finite(n)));
        CHECK(check_fs6(A, B, Order::infinite()));
    }
}

TEST_CASE("order type guards its accessors") {
    CHECK_THROWS_AS(Order::finite(1), Error);
    CHECK_THROWS_AS(Order::infinite().n(), Error);
    CHECK(Order::finite(4).n() == 4);
    CHECK(!Order::finite(4).is_infinite());
    CHECK(Order::infinite().is_infinite());
}
