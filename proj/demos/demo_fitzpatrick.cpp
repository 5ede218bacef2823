// Walks the Fitzpatrick family of one symmetric relation up through the
// orders to the limit, then shows a skew relation collapsing.

#include <monorel/fitzpatrick.hpp>
#include <monorel/relation.hpp>

#include <Eigen/Dense>

#include <iostream>

using namespace monorel;

int main() {
    MatrixXd Q(2, 2);
    Q << 2.0, 1.0,
         1.0, 3.0;
    LinearRelation A = LinearRelation::from_matrix(Q);

    VectorXd z(4);
    z << 1.0, 0.0, 0.0, 1.0;
    std::cout << "A = [[2,1],[1,3]], evaluation point x=(1,0), x*=(0,1)\n\n";

    for (int n = 2; n <= 6; ++n) {
        ExtQuad F = fitz_n(A, n);
        ExtQuad closed = fitz_n_closed_symmetric(A, n);
        std::cout << "order " << n << ": F = " << eval_extquad(F, z)
                  << ", closed form agrees: "
                  << (equal_canonical(F, closed) ? "yes" : "no") << "\n";
    }
    ExtQuad Finf = fitz_inf(A);
    std::cout << "limit:   F = " << eval_extquad(Finf, z) << "\n\n";

    std::cout << "coupling <x,x*> at the point: " << z.head(2).dot(z.tail(2)) << "\n";
    std::cout << "upper envelope F^{*T} there:  "
              << eval_extquad(conjugate_transpose(fitz(A)), z) << "\n\n";

    MatrixXd rot(2, 2);
    rot << 0.0, -1.0,
           1.0, 0.0;
    LinearRelation R = LinearRelation::from_matrix(rot);
    std::cout << "rotation by 90 degrees: order 2 value at a graph point (1,0;0,1): "
              << eval_extquad(fitz(R), z) << "\n";
    try {
        fitz_n(R, 3);
        std::cout << "order 3: exists\n";
    } catch (const Error& e) {
        std::cout << "order 3: " << e.what() << "\n";
    }
    return 0;
}
