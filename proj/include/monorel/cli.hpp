#pragma once

#include <json.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bb.hpp"
#include "errors.hpp"
#include "fitzpatrick.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "relation.hpp"
#include "sum_rule.hpp"
#include "tolerances.hpp"
#include "verify.hpp"

namespace monorel::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    exit_ok = 0,
    exit_verification_failure = 1,
    exit_parse_error = 2,
    exit_io_error = 3,
    exit_precondition = 4,
};

/// Default tolerances, with the equality tolerance overridable through
/// the MONOREL_TOLERANCE_EQ environment variable.  An unparseable or
/// nonpositive value is reported on the diagnostic stream and ignored.
inline Tolerances env_tolerances(std::ostream& err) {
    Tolerances tol;
    const char* raw = std::getenv("MONOREL_TOLERANCE_EQ");
    if (raw == nullptr) return tol;
    char* end = nullptr;
    double v = std::strtod(raw, &end);
    if (end == raw || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
        err << "warning: ignoring invalid MONOREL_TOLERANCE_EQ value \"" << raw
            << "\", using default " << tol.eq << "\n";
        return tol;
    }
    tol.eq = v;
    return tol;
}

namespace detail {

/// Load a relation file, mapping parse problems to exit 2 and shape or
/// access problems to exit 3.  Diagnostics go to `err`.
inline std::optional<LinearRelation> load_or_diagnose(const std::string& path,
                                                      std::ostream& err, int& code,
                                                      const Tolerances& tol) {
    try {
        return load_relation(path, tol);
    } catch (const json::exception& e) {
        err << path << ": " << e.what() << "\n";
        code = exit_parse_error;
        return std::nullopt;
    } catch (const Error& e) {
        err << path << ": " << e.what() << "\n";
        code = exit_io_error;
        return std::nullopt;
    }
}

inline int precondition_refused(const Error& e, std::ostream& out) {
    out << json{{"error", error_code_name(e.code())}, {"message", e.what()}}.dump(2)
        << "\n";
    return exit_precondition;
}

inline std::optional<VectorXd> parse_point(const std::string& text, int d) {
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            std::size_t pos = s.find(sep, start);
            parts.push_back(s.substr(start, pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        return parts;
    };
    std::vector<std::string> halves = split(text, ';');
    if (halves.size() != 2) return std::nullopt;
    VectorXd z(2 * d);
    int at = 0;
    for (const std::string& half : halves) {
        std::vector<std::string> entries = split(half, ',');
        if (static_cast<int>(entries.size()) != d) return std::nullopt;
        for (const std::string& entry : entries) {
            char* end = nullptr;
            double v = std::strtod(entry.c_str(), &end);
            if (end == entry.c_str() || !std::isfinite(v)) return std::nullopt;
            while (*end == ' ') ++end;
            if (*end != '\0') return std::nullopt;
            z(at++) = v;
        }
    }
    return z;
}

}  // namespace detail

/// Structural report for a relation file.
inline int cmd_analyze(const std::string& file, std::ostream& out, std::ostream& err,
                       const Tolerances& tol = default_tol()) {
    int code = exit_ok;
    auto A = detail::load_or_diagnose(file, err, code, tol);
    if (!A) return code;
    MaximalityReport r = maximality_report(*A, tol);
    json doc{{"d", A->d()},
             {"graph_dim", A->graph().dim()},
             {"dom_dim", A->dom(tol).dim()},
             {"a0_dim", A->multivalued_part(tol).dim()},
             {"monotone", r.monotone},
             {"symmetric", is_symmetric(*A, tol)},
             {"adjoint_monotone", r.adjoint_monotone},
             {"maximal_by_dim", r.maximal_by_dim},
             {"sz_surjective", r.sz_surjective}};
    out << doc.dump(2) << "\n";
    return exit_ok;
}

/**
 * Fitzpatrick value of a relation at one point.  `order` is a decimal
 * integer >= 2 or "inf"; `point` is "x;x*" with comma-separated
 * coordinates.  --closed-form insists on the symmetric closed form and
 * is refused (exit 4, machine-readable reason) when the relation is not
 * symmetric maximal monotone.
 */
inline int cmd_fitz(const std::string& file, const std::string& order,
                    const std::string& point, bool closed_form,
                    std::optional<int> oracle_budget, std::ostream& out,
                    std::ostream& err, const Tolerances& tol = default_tol()) {
    int code = exit_ok;
    auto A = detail::load_or_diagnose(file, err, code, tol);
    if (!A) return code;

    bool infinite_order = (order == "inf");
    int n = 0;
    if (!infinite_order) {
        char* end = nullptr;
        long parsed = std::strtol(order.c_str(), &end, 10);
        if (end == order.c_str() || *end != '\0' || parsed < 2) {
            return detail::precondition_refused(
                Error(ErrorCode::InvalidArgument,
                      "order must be an integer >= 2 or \"inf\""),
                out);
        }
        n = static_cast<int>(parsed);
    }
    auto z = detail::parse_point(point, A->d());
    if (!z) {
        return detail::precondition_refused(
            Error(ErrorCode::InvalidArgument,
                  "point must be \"x;x*\" with " + std::to_string(A->d()) +
                      " coordinates per half"),
            out);
    }

    json doc;
    try {
        if (infinite_order) {
            doc["value"] = value_to_json(eval_extquad(fitz_inf(*A, tol), *z, tol));
            doc["method"] = "limit";
        } else if (closed_form) {
            doc["value"] =
                value_to_json(eval_extquad(fitz_n_closed_symmetric(*A, n, tol), *z, tol));
            doc["method"] = "closed-form";
        } else {
            ExtReal v = ExtReal::infinity();
            try {
                v = eval_extquad(fitz_n(*A, n, tol), *z, tol);
            } catch (const Error& e) {
                // An order at which the relation stops being cyclically
                // monotone makes the function +inf everywhere.
                if (e.code() != ErrorCode::EmptyDomain) throw;
            }
            doc["value"] = value_to_json(v);
            doc["method"] = "recursion";
        }
    } catch (const Error& e) {
        return detail::precondition_refused(e, out);
    }

    if (oracle_budget) {
        if (infinite_order) {
            err << "warning: --oracle has no chain expression at order inf; skipped\n";
        } else {
            doc["oracle_lower_bound"] = number_to_json(
                brute_fitz_n(*A, n, *z, *oracle_budget, 12345, tol));
        }
    }
    out << doc.dump(2) << "\n";
    return exit_ok;
}

/// Seeded verification suites; exit 0 iff no failures.
inline int cmd_verify(const std::string& suite, int seeds, int dim_max,
                      const std::optional<std::string>& file, std::ostream& out,
                      std::ostream& err, const Tolerances& tol = default_tol()) {
    if (seeds < 1 || dim_max < 1) {
        return detail::precondition_refused(
            Error(ErrorCode::InvalidArgument, "--seeds and --dim-max must be >= 1"), out);
    }
    std::optional<LinearRelation> injected;
    if (file) {
        int code = exit_ok;
        injected = detail::load_or_diagnose(*file, err, code, tol);
        if (!injected) return code;
    }
    SuiteReport rep;
    try {
        rep = run_suite(suite, seeds, dim_max, injected, tol);
    } catch (const Error& e) {
        return detail::precondition_refused(e, out);
    }
    out << rep.to_json().dump(2) << "\n";
    return rep.exit_code();
}

/// Seeded relation generator; writes the graph-basis JSON form.
inline int cmd_random(const std::string& kind, int d, std::uint64_t seed,
                      const std::string& out_path, std::ostream& out,
                      std::ostream& err, const Tolerances& tol = default_tol()) {
    RelationKind k;
    if (kind == "symmetric_maximal") k = RelationKind::symmetric_maximal;
    else if (kind == "skew") k = RelationKind::skew;
    else if (kind == "general_monotone") k = RelationKind::general_monotone;
    else if (kind == "nonmaximal_monotone") k = RelationKind::nonmaximal_monotone;
    else {
        return detail::precondition_refused(
            Error(ErrorCode::InvalidArgument, "unknown kind: " + kind), out);
    }
    if (d < 1) {
        return detail::precondition_refused(
            Error(ErrorCode::InvalidArgument, "--dim must be >= 1"), out);
    }
    LinearRelation A = random_relation(seed, d, k, tol);
    try {
        save_relation(out_path, A);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_io_error;
    }
    out << relation_to_json(A).dump(2) << "\n";
    return exit_ok;
}

}  // namespace monorel::cli
