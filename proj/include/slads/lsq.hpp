#pragma once

#include <vector>

namespace slads {

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// `eigenvalues[k]` pairs with the k-th column of `eigenvectors` (row-major,
// n x n).  Results are sorted by descending eigenvalue.
struct SymmetricEigen {
    std::vector<double> eigenvalues;
    std::vector<double> eigenvectors;
};

SymmetricEigen jacobi_eigen_symmetric(std::vector<double> matrix, int n);

struct LsqResult {
    std::vector<double> coeffs;
    double residual_rms = 0.0;
    int rank = 0;
};

// Minimum-norm solution of min ||A x - b||^2 via the normal equations with
// pseudo-inverse semantics: eigenvalues of A^T A below a relative cutoff are
// treated as zero, so rank-deficient systems get the shortest minimizer.
// `a` is row-major with rows x cols elements.  Summation order is fixed, so
// results are reproducible across runs.
LsqResult solve_least_squares(const std::vector<double>& a, int rows, int cols,
                              const std::vector<double>& b);

} // namespace slads
