#include "slads/lsq.hpp"

#include "slads/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace slads {

namespace {

// eigenvalues below this fraction of the largest are treated as zero
constexpr double kEigCutoff = 1e-10;

} // namespace

SymmetricEigen jacobi_eigen_symmetric(std::vector<double> m, int n) {
    if (n <= 0 || m.size() != static_cast<size_t>(n) * n)
        throw ContractError("jacobi_eigen_symmetric: bad matrix size");
    auto at = [&](std::vector<double>& v, int r, int c) -> double& {
        return v[static_cast<size_t>(r) * n + c];
    };

    std::vector<double> q(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) at(q, i, i) = 1.0;

    double frob = 0.0;
    for (double v : m) frob += v * v;
    const double tol = 1e-30 + 1e-28 * frob;

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int r = 0; r < n; ++r)
            for (int c = r + 1; c < n; ++c)
                off += at(m, r, c) * at(m, r, c);
        if (off <= tol) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int r = p + 1; r < n; ++r) {
                const double apr = at(m, p, r);
                if (apr == 0.0) continue;
                const double theta = (at(m, r, r) - at(m, p, p)) / (2.0 * apr);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (int k = 0; k < n; ++k) {
                    const double mkp = at(m, k, p), mkr = at(m, k, r);
                    at(m, k, p) = c * mkp - s * mkr;
                    at(m, k, r) = s * mkp + c * mkr;
                }
                for (int k = 0; k < n; ++k) {
                    const double mpk = at(m, p, k), mrk = at(m, r, k);
                    at(m, p, k) = c * mpk - s * mrk;
                    at(m, r, k) = s * mpk + c * mrk;
                }
                for (int k = 0; k < n; ++k) {
                    const double qkp = at(q, k, p), qkr = at(q, k, r);
                    at(q, k, p) = c * qkp - s * qkr;
                    at(q, k, r) = s * qkp + c * qkr;
                }
            }
        }
    }

    SymmetricEigen out;
    out.eigenvalues.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out.eigenvalues[static_cast<size_t>(i)] = at(m, i, i);

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return out.eigenvalues[static_cast<size_t>(a)] > out.eigenvalues[static_cast<size_t>(b)];
    });

    SymmetricEigen sorted;
    sorted.eigenvalues.resize(static_cast<size_t>(n));
    sorted.eigenvectors.assign(static_cast<size_t>(n) * n, 0.0);
    for (int k = 0; k < n; ++k) {
        sorted.eigenvalues[static_cast<size_t>(k)] = out.eigenvalues[static_cast<size_t>(order[static_cast<size_t>(k)])];
        for (int r = 0; r < n; ++r)
            sorted.eigenvectors[static_cast<size_t>(r) * n + k] =
                at(q, r, order[static_cast<size_t>(k)]);
    }
    return sorted;
}

LsqResult solve_least_squares(const std::vector<double>& a, int rows, int cols,
                              const std::vector<double>& b) {
    if (rows <= 0 || cols <= 0)
        throw ContractError("solve_least_squares: empty system");
    if (a.size() != static_cast<size_t>(rows) * cols || b.size() != static_cast<size_t>(rows))
        throw ContractError("solve_least_squares: shape mismatch");

    // normal equations, accumulated in row order
    std::vector<double> g(static_cast<size_t>(cols) * cols, 0.0);
    std::vector<double> h(static_cast<size_t>(cols), 0.0);
    for (int r = 0; r < rows; ++r) {
        const double* row = &a[static_cast<size_t>(r) * cols];
        for (int i = 0; i < cols; ++i) {
            h[static_cast<size_t>(i)] += row[i] * b[static_cast<size_t>(r)];
            for (int j = i; j < cols; ++j)
                g[static_cast<size_t>(i) * cols + j] += row[i] * row[j];
        }
    }
    for (int i = 0; i < cols; ++i)
        for (int j = 0; j < i; ++j)
            g[static_cast<size_t>(i) * cols + j] = g[static_cast<size_t>(j) * cols + i];

    const SymmetricEigen eig = jacobi_eigen_symmetric(g, cols);
    const double lead = std::max(eig.eigenvalues.front(), 0.0);
    const double cutoff = lead * kEigCutoff;

    // x = Q diag(1/lambda) Q^T h over the retained spectrum
    LsqResult out;
    out.coeffs.assign(static_cast<size_t>(cols), 0.0);
    for (int k = 0; k < cols; ++k) {
        const double lambda = eig.eigenvalues[static_cast<size_t>(k)];
        if (lambda <= cutoff) continue;
        ++out.rank;
        double proj = 0.0;
        for (int i = 0; i < cols; ++i)
            proj += eig.eigenvectors[static_cast<size_t>(i) * cols + k] * h[static_cast<size_t>(i)];
        proj /= lambda;
        for (int i = 0; i < cols; ++i)
            out.coeffs[static_cast<size_t>(i)] +=
                eig.eigenvectors[static_cast<size_t>(i) * cols + k] * proj;
    }

    double sq = 0.0;
    for (int r = 0; r < rows; ++r) {
        double pred = 0.0;
        const double* row = &a[static_cast<size_t>(r) * cols];
        for (int i = 0; i < cols; ++i) pred += row[i] * out.coeffs[static_cast<size_t>(i)];
        const double diff = pred - b[static_cast<size_t>(r)];
        sq += diff * diff;
    }
    out.residual_rms = std::sqrt(sq / rows);
    return out;
}

} // namespace slads
