#pragma once

#include <json.hpp>

#include <Eigen/Dense>

#include <fstream>
#include <string>

#include "errors.hpp"
#include "extreal.hpp"
#include "relation.hpp"
#include "tolerances.hpp"

namespace monorel {

using nlohmann::json;

/// Doubles are emitted as shortest exact-round-trip decimals, so files
/// are lossless and byte-stable across runs.
inline json number_to_json(double v) { return json(v); }

/// A finite value as a number, +inf as the string sentinel "inf".
inline json value_to_json(const ExtReal& v) {
    if (v.is_infinite()) return json("inf");
    return number_to_json(v.value());
}

inline json relation_to_json(const LinearRelation& A) {
    json basis = json::array();
    const MatrixXd& B = A.graph().basis();
    for (int j = 0; j < B.cols(); ++j) {
        json col = json::array();
        for (int i = 0; i < B.rows(); ++i) col.push_back(number_to_json(B(i, j)));
        basis.push_back(col);
    }
    return json{{"d", A.d()}, {"graph_basis", basis}};
}

/**
 * Relation from its JSON document: either {"d", "matrix"} with a
 * row-major d x d matrix, or {"d", "graph_basis"} with a list of
 * 2d-vectors, x-coordinates first.  Shape problems raise
 * InvalidArgument or DimensionMismatch; the caller maps those to its
 * I/O error convention.
 */
inline LinearRelation relation_from_json(const json& j,
                                         const Tolerances& tol = default_tol()) {
    if (!j.is_object() || !j.contains("d") || !j["d"].is_number_integer())
        raise(ErrorCode::InvalidArgument, "relation JSON needs an integer field d");
    int d = j["d"].get<int>();
    if (d < 1)
        raise(ErrorCode::InvalidArgument, "relation JSON: d must be >= 1");

    auto read_vector = [](const json& row, int len, VectorXd& out) {
        if (!row.is_array() || static_cast<int>(row.size()) != len)
            raise(ErrorCode::DimensionMismatch, "relation JSON: bad vector length");
        out.resize(len);
        for (int i = 0; i < len; ++i) {
            if (!row[i].is_number())
                raise(ErrorCode::InvalidArgument, "relation JSON: entries must be numbers");
            out(i) = row[i].get<double>();
        }
    };

    if (j.contains("matrix")) {
        const json& m = j["matrix"];
        if (!m.is_array() || static_cast<int>(m.size()) != d)
            raise(ErrorCode::DimensionMismatch, "relation JSON: matrix must have d rows");
        MatrixXd M(d, d);
        for (int i = 0; i < d; ++i) {
            VectorXd row;
            read_vector(m[i], d, row);
            M.row(i) = row.transpose();
        }
        return LinearRelation::from_matrix(M, tol);
    }
    if (j.contains("graph_basis")) {
        const json& b = j["graph_basis"];
        if (!b.is_array())
            raise(ErrorCode::InvalidArgument, "relation JSON: graph_basis must be a list");
        MatrixXd B(2 * d, static_cast<int>(b.size()));
        for (int k = 0; k < static_cast<int>(b.size()); ++k) {
            VectorXd col;
            read_vector(b[k], 2 * d, col);
            B.col(k) = col;
        }
        return LinearRelation::from_graph_basis(B, tol);
    }
    raise(ErrorCode::InvalidArgument, "relation JSON needs matrix or graph_basis");
}

inline LinearRelation load_relation(const std::string& path,
                                    const Tolerances& tol = default_tol()) {
    std::ifstream in(path);
    if (!in)
        raise(ErrorCode::InvalidArgument, "cannot read " + path);
    json j = json::parse(in);  // throws json::parse_error on bad input
    return relation_from_json(j, tol);
}

inline void save_relation(const std::string& path, const LinearRelation& A) {
    std::ofstream out(path);
    if (!out)
        raise(ErrorCode::InvalidArgument, "cannot write " + path);
    out << relation_to_json(A).dump(2) << "\n";
    if (!out)
        raise(ErrorCode::InvalidArgument, "write failed for " + path);
}

}  // namespace monorel
