#include "resbench/error.hpp"
#include "resbench/numerics.hpp"

#include <string>

namespace resbench {

Matrix solve_least_squares(const Matrix& X, const Matrix& Y)
{
    if (X.rows() == 0 || X.cols() == 0 || Y.cols() == 0) {
        throw ContractError("solve_least_squares: empty design or target");
    }
    if (X.rows() != Y.rows()) {
        throw ContractError("solve_least_squares: design has " + std::to_string(X.rows())
                            + " rows, target has " + std::to_string(Y.rows()));
    }
    if (!X.allFinite()) {
        throw NumericalError("solve_least_squares: design matrix has non-finite entries");
    }
    if (!Y.allFinite()) {
        throw NumericalError("solve_least_squares: target has non-finite entries");
    }
    // Column-pivoted QR followed by an orthogonal reduction of the trailing
    // rank-deficient block; solve() returns the minimum-norm minimizer.
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(X);
    return cod.solve(Y);
}

} // namespace resbench
