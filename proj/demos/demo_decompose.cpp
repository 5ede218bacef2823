// Splits points across a maximal graph and the antidiagonal, and finds
// an extension witness for a relation that is not maximal.

#include <monorel/bb.hpp>
#include <monorel/relation.hpp>

#include <Eigen/Dense>

#include <iostream>

using namespace monorel;

int main() {
    LinearRelation id = LinearRelation::identity(1);
    std::cout << "identity on R: every (x, x*) = graph part + antidiagonal part\n";
    for (double a : {2.0, -1.0, 0.5}) {
        VectorXd p(2);
        p << a, 0.0;
        Decomposition dec = decompose(id, p);
        std::cout << "  (" << a << ", 0) = (" << dec.graph_part(0) << ", "
                  << dec.graph_part(1) << ") + (" << dec.j_part(0) << ", "
                  << dec.j_part(1) << "), residual " << dec.residual << "\n";
    }

    MatrixXd col(4, 1);
    col << 1.0, 0.0, 1.0, 0.0;
    LinearRelation shorty = LinearRelation::from_graph_basis(col);
    std::cout << "\ngraph span{(1,0,1,0)} in R^2 x R^2: monotone "
              << (is_monotone(shorty) ? "yes" : "no") << ", maximal "
              << (maximal_by_dim(shorty) ? "yes" : "no") << "\n";
    MaximalityReport r = maximality_report(shorty);
    std::cout << "certificates: adjoint_monotone " << r.adjoint_monotone
              << ", maximal_by_dim " << r.maximal_by_dim << ", sz_surjective "
              << r.sz_surjective << "\n";
    if (auto w = nonmaximal_witness(shorty)) {
        std::cout << "extension witness (x, x*) = (" << w->head(2).transpose()
                  << "; " << w->tail(2).transpose()
                  << ") is monotonically related but off the graph\n";
    }
    return 0;
}
