#pragma once

#include <json.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bb.hpp"
#include "errors.hpp"
#include "extquad.hpp"
#include "fitzpatrick.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "relation.hpp"
#include "sum_rule.hpp"
#include "tolerances.hpp"

namespace monorel {

struct SuiteReport {
    std::string suite;
    int instances = 0;
    std::vector<json> failures;
    double max_residual = 0.0;

    void note_residual(double r) { max_residual = std::max(max_residual, r); }
    void merge(const SuiteReport& other) {
        instances += other.instances;
        failures.insert(failures.end(), other.failures.begin(), other.failures.end());
        note_residual(other.max_residual);
    }
    int exit_code() const { return failures.empty() ? 0 : 1; }

    json to_json() const {
        return json{{"suite", suite},
                    {"instances", instances},
                    {"failures", failures},
                    {"max_residual", number_to_json(max_residual)}};
    }
};

namespace detail {

inline json point_to_json(const VectorXd& z) {
    json a = json::array();
    for (int i = 0; i < z.size(); ++i) a.push_back(number_to_json(z(i)));
    return a;
}

inline std::vector<VectorXd> bracket_probes(const LinearRelation& A,
                                            std::uint64_t seed) {
    const int d = A.d();
    std::vector<VectorXd> probes;
    if (d <= 3) {
        int total = 1;
        for (int i = 0; i < 2 * d; ++i) total *= 3;
        for (int code = 0; code < total; ++code) {
            VectorXd z(2 * d);
            int c = code;
            for (int i = 0; i < 2 * d; ++i) {
                z(i) = static_cast<double>(c % 3 - 1);
                c /= 3;
            }
            probes.push_back(z);
        }
    }
    Rng rng(seed ^ 0xD1B54A32D192ED03ull);
    for (int k = 0; k < 64; ++k)
        probes.push_back(2.0 * rng.gaussian_vector(2 * d));
    const MatrixXd& B = A.graph().basis();
    for (int j = 0; j < B.cols(); ++j) probes.push_back(B.col(j));
    return probes;
}

}  // namespace detail

/**
 * Recursion-versus-closed-form identity for one relation.  The closed
 * form is assembled unchecked, so unsuitable relations (skew ones, for
 * instance) produce an honest mismatch witness instead of an error.
 */
inline void verify_new1_instance(const LinearRelation& A, const std::string& label,
                                 SuiteReport& rep,
                                 const Tolerances& tol = default_tol()) {
    ++rep.instances;
    for (int n : {2, 3, 4}) {
        json fail{{"label", label}, {"order", n}};
        try {
            ExtQuad formula = fitz_n_formula_symmetric(A, n, tol);
            std::optional<ExtQuad> recursion;
            try {
                recursion.emplace(fitz_n(A, n, tol));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::EmptyDomain) throw;
            }
            if (!recursion) {
                fail["reason"] = "recursion is identically +inf but the closed form is proper";
                rep.failures.push_back(fail);
                continue;
            }
            if (!equal_canonical(*recursion, formula, tol)) {
                fail["reason"] = "closed form disagrees with the recursion";
                if (affine_equal(recursion->domain(), formula.domain(), tol))
                    fail["residual"] = number_to_json(canonical_residual(*recursion, formula));
                else
                    fail["reason"] = "closed form and recursion have different domains";
                rep.failures.push_back(fail);
                continue;
            }
            rep.note_residual(canonical_residual(*recursion, formula));
        } catch (const Error& e) {
            fail["reason"] = std::string("error: ") + e.what();
            rep.failures.push_back(fail);
        }
    }
}

/// Sum rule for one pair of relations at orders 2, 3, and the limit.
inline void verify_fs6_instance(const LinearRelation& A, const LinearRelation& B,
                                const std::string& label, SuiteReport& rep,
                                const Tolerances& tol = default_tol()) {
    ++rep.instances;
    for (int k : {2, 3, -1}) {
        Order order = (k < 0) ? Order::infinite() : Order::finite(k);
        json fail{{"label", label}, {"order", k < 0 ? json("inf") : json(k)}};
        try {
            if (!check_fs6(A, B, order, tol)) {
                fail["reason"] = "sum rule identity fails";
                rep.failures.push_back(fail);
            }
        } catch (const Error& e) {
            fail["reason"] = std::string("error: ") + e.what();
            rep.failures.push_back(fail);
        }
    }
}

/// Tri-equivalence of the maximality certificates for one relation.
inline void verify_bb_instance(const LinearRelation& A, const std::string& label,
                               SuiteReport& rep,
                               const Tolerances& tol = default_tol()) {
    ++rep.instances;
    MaximalityReport r = maximality_report(A, tol);
    if (!r.monotone) {
        rep.failures.push_back(json{{"label", label},
                                    {"reason", "relation is not monotone; equivalence not applicable"}});
        return;
    }
    if (!r.all_agree()) {
        rep.failures.push_back(json{{"label", label},
                                    {"reason", "maximality certificates disagree"},
                                    {"adjoint_monotone", r.adjoint_monotone},
                                    {"maximal_by_dim", r.maximal_by_dim},
                                    {"sz_surjective", r.sz_surjective}});
    }
}

/**
 * Shift decomposition for one relation: every point splits across the
 * graph and the antidiagonal when the relation is maximal, and a
 * monotonically related point outside the graph exists when it is not.
 */
inline void verify_sz_instance(const LinearRelation& A, const std::string& label,
                               std::uint64_t seed, SuiteReport& rep,
                               const Tolerances& tol = default_tol()) {
    ++rep.instances;
    const int d = A.d();
    if (!is_monotone(A, tol)) {
        rep.failures.push_back(json{{"label", label}, {"reason", "relation is not monotone"}});
        return;
    }
    if (!maximal_by_dim(A)) {
        auto w = nonmaximal_witness(A, tol);
        if (!w || !monotonically_related(A, w->head(d), w->tail(d), tol) ||
            A.graph().contains(*w, tol)) {
            rep.failures.push_back(json{{"label", label},
                                        {"reason", "no valid witness for nonmaximality"}});
        }
        return;
    }
    Rng rng(seed ^ 0xA0761D6478BD642Full);
    MatrixXd negJ(2 * d, d);
    negJ.topRows(d) = MatrixXd::Identity(d, d);
    negJ.bottomRows(d) = -MatrixXd::Identity(d, d);
    Subspace graJ(2 * d, negJ / std::sqrt(2.0));
    for (int k = 0; k < 5; ++k) {
        VectorXd p = 2.0 * rng.gaussian_vector(2 * d);
        Decomposition dec = decompose(A, p, tol);
        double rel = dec.residual / (1.0 + p.norm());
        rep.note_residual(rel);
        bool parts_ok = A.graph().contains(dec.graph_part, tol) &&
                        graJ.contains(dec.j_part, tol) &&
                        (p - dec.graph_part - dec.j_part).norm() <= tol.eq * (1.0 + p.norm());
        if (rel > 1e-9 || !parts_ok) {
            rep.failures.push_back(json{{"label", label},
                                        {"reason", "decomposition failed"},
                                        {"point", detail::point_to_json(p)},
                                        {"residual", number_to_json(dec.residual)}});
        }
    }
}

/// Coupling bracket for one maximal relation's order-two function.
inline void verify_bracket_instance(const LinearRelation& A, const std::string& label,
                                    std::uint64_t seed, SuiteReport& rep,
                                    const Tolerances& tol = default_tol()) {
    ++rep.instances;
    if (!is_monotone(A, tol)) {
        rep.failures.push_back(json{{"label", label}, {"reason", "relation is not monotone"}});
        return;
    }
    if (!maximal_by_dim(A)) return;  // bracket properties are claimed for maximal relations
    BracketReport br = bracket_check(A, fitz(A, tol), detail::bracket_probes(A, seed), tol);
    rep.note_residual(std::max({br.max_lower_violation, br.max_graph_violation,
                                br.max_upper_violation}));
    if (!br.ok()) {
        json fail{{"label", label}, {"reason", "coupling bracket violated"}};
        if (!br.witnesses.empty())
            fail["point"] = detail::point_to_json(br.witnesses.front());
        rep.failures.push_back(fail);
    }
}

inline const std::vector<RelationKind>& all_kinds() {
    static const std::vector<RelationKind> kinds = {
        RelationKind::symmetric_maximal, RelationKind::skew,
        RelationKind::general_monotone, RelationKind::nonmaximal_monotone};
    return kinds;
}

/**
 * Run one named suite over seeded instances, or over a single injected
 * relation when `injected` is set.  Suites: new1 (recursion vs closed
 * form), fs6 (sum rule), bb (maximality tri-equivalence), sz (shift
 * decomposition), bracket (coupling bracket), all.
 */
inline SuiteReport run_suite(const std::string& suite, int seeds, int dim_max,
                             const std::optional<LinearRelation>& injected = std::nullopt,
                             const Tolerances& tol = default_tol()) {
    if (suite == "all") {
        SuiteReport rep;
        rep.suite = "all";
        for (const char* s : {"new1", "fs6", "bb", "sz", "bracket"})
            rep.merge(run_suite(s, seeds, dim_max, injected, tol));
        return rep;
    }
    SuiteReport rep;
    rep.suite = suite;
    if (suite == "new1") {
        if (injected) {
            verify_new1_instance(*injected, "file", rep, tol);
            return rep;
        }
        for (int s = 1; s <= seeds; ++s)
            for (int d = 1; d <= dim_max; ++d)
                verify_new1_instance(
                    random_relation(s, d, RelationKind::symmetric_maximal, tol),
                    "seed=" + std::to_string(s) + " d=" + std::to_string(d), rep, tol);
    } else if (suite == "fs6") {
        if (injected) {
            verify_fs6_instance(*injected, *injected, "file", rep, tol);
            return rep;
        }
        for (int s = 1; s <= seeds; ++s) {
            int d = 1 + (s - 1) % dim_max;
            verify_fs6_instance(
                random_relation(s, d, RelationKind::symmetric_maximal, tol),
                random_relation(s + 7777, d, RelationKind::symmetric_maximal, tol),
                "seed=" + std::to_string(s) + " d=" + std::to_string(d), rep, tol);
        }
    } else if (suite == "bb") {
        if (injected) {
            verify_bb_instance(*injected, "file", rep, tol);
            return rep;
        }
        for (int s = 1; s <= seeds; ++s)
            for (RelationKind kind : all_kinds()) {
                int d = 1 + (s - 1) % dim_max;
                verify_bb_instance(
                    random_relation(s, d, kind, tol),
                    "seed=" + std::to_string(s) + " d=" + std::to_string(d) +
                        " kind=" + relation_kind_name(kind),
                    rep, tol);
            }
    } else if (suite == "sz") {
        if (injected) {
            verify_sz_instance(*injected, "file", 1, rep, tol);
            return rep;
        }
        for (int s = 1; s <= seeds; ++s)
            for (RelationKind kind : all_kinds()) {
                int d = 1 + (s - 1) % dim_max;
                verify_sz_instance(
                    random_relation(s, d, kind, tol),
                    "seed=" + std::to_string(s) + " d=" + std::to_string(d) +
                        " kind=" + relation_kind_name(kind),
                    static_cast<std::uint64_t>(s), rep, tol);
            }
    } else if (suite == "bracket") {
        if (injected) {
            verify_bracket_instance(*injected, "file", 1, rep, tol);
            return rep;
        }
        for (int s = 1; s <= seeds; ++s)
            for (RelationKind kind :
                 {RelationKind::symmetric_maximal, RelationKind::skew,
                  RelationKind::general_monotone}) {
                int d = 1 + (s - 1) % dim_max;
                verify_bracket_instance(
                    random_relation(s, d, kind, tol),
                    "seed=" + std::to_string(s) + " d=" + std::to_string(d) +
                        " kind=" + relation_kind_name(kind),
                    static_cast<std::uint64_t>(s), rep, tol);
            }
    } else {
        raise(ErrorCode::InvalidArgument, "unknown suite: " + suite);
    }
    return rep;
}

}  // namespace monorel
