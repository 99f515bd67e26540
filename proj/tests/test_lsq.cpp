#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "slads/lsq.hpp"

using namespace slads;

namespace {

// Independent minimum-norm solution through Eigen's complete orthogonal
// decomposition; the implementation under test never touches Eigen.
std::vector<double> eigen_min_norm(const std::vector<double>& a, int rows, int cols,
                                   const std::vector<double>& b) {
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = a[static_cast<size_t>(r) * cols + c];
    Eigen::VectorXd rhs(rows);
    for (int r = 0; r < rows; ++r) rhs(r) = b[static_cast<size_t>(r)];
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);
    cod.setThreshold(1e-10);
    const Eigen::VectorXd x = cod.solve(rhs);
    return {x.data(), x.data() + x.size()};
}

double rel_err(const std::vector<double>& got, const std::vector<double>& want) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < got.size(); ++i) {
        num += (got[i] - want[i]) * (got[i] - want[i]);
        den += want[i] * want[i];
    }
    return std::sqrt(num) / std::max(1e-30, std::sqrt(den));
}

} // namespace

TEST_CASE("jacobi recovers a known diagonalization") {
    // [[2,1],[1,2]] has eigenvalues 3 and 1 with (1,1)/(1,-1) directions.
    const SymmetricEigen e = jacobi_eigen_symmetric({2.0, 1.0, 1.0, 2.0}, 2);
    REQUIRE(e.eigenvalues.size() == 2);
    CHECK(e.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(e.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(e.eigenvectors[0]) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
    CHECK(std::abs(e.eigenvectors[2]) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
}

TEST_CASE("jacobi reproduces A v = lambda v on random symmetric matrices") {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int n : {1, 2, 5, 12, 28}) {
        std::vector<double> m(static_cast<size_t>(n) * n);
        for (int r = 0; r < n; ++r)
            for (int c = r; c < n; ++c) {
                const double v = g(rng);
                m[static_cast<size_t>(r) * n + c] = v;
                m[static_cast<size_t>(c) * n + r] = v;
            }
        const SymmetricEigen e = jacobi_eigen_symmetric(m, n);
        for (int k = 0; k < n; ++k) {
            if (k > 0) CHECK(e.eigenvalues[static_cast<size_t>(k - 1)]
                             >= e.eigenvalues[static_cast<size_t>(k)]);
            for (int r = 0; r < n; ++r) {
                double av = 0.0;
                for (int c = 0; c < n; ++c)
                    av += m[static_cast<size_t>(r) * n + c]
                          * e.eigenvectors[static_cast<size_t>(c) * n + k];
                const double lv = e.eigenvalues[static_cast<size_t>(k)]
                                  * e.eigenvectors[static_cast<size_t>(r) * n + k];
                CHECK(av == doctest::Approx(lv).epsilon(1e-9).scale(1.0));
            }
        }
    }
}

TEST_CASE("a square invertible system is solved exactly") {
    // x + y = 3, x - y = 1 -> (2, 1).
    const LsqResult r = solve_least_squares({1.0, 1.0, 1.0, -1.0}, 2, 2, {3.0, 1.0});
    REQUIRE(r.coeffs.size() == 2);
    CHECK(r.coeffs[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.coeffs[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.rank == 2);
    CHECK(r.residual_rms < 1e-12);
}

TEST_CASE("overdetermined solutions match the oracle on well-conditioned systems") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int rows = 30 + static_cast<int>(rng() % 200);
        const int cols = 2 + static_cast<int>(rng() % 27);
        std::vector<double> a(static_cast<size_t>(rows) * cols);
        std::vector<double> b(static_cast<size_t>(rows));
        for (double& v : a) v = g(rng);
        for (double& v : b) v = g(rng);

        const LsqResult got = solve_least_squares(a, rows, cols, b);
        const std::vector<double> want = eigen_min_norm(a, rows, cols, b);
        CAPTURE(rows);
        CAPTURE(cols);
        REQUIRE(got.coeffs.size() == want.size());
        CHECK(rel_err(got.coeffs, want) < 1e-9);
        CHECK(got.rank == cols);
    }
}

TEST_CASE("rank-deficient systems get the minimum-norm solution") {
    std::mt19937_64 rng(43);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int rows = 60;
        const int cols = 10;
        const int true_rank = 3 + static_cast<int>(rng() % 4);
        // Build A = U V^T with inner dimension true_rank.
        std::vector<double> u(static_cast<size_t>(rows) * true_rank);
        std::vector<double> v(static_cast<size_t>(cols) * true_rank);
        for (double& x : u) x = g(rng);
        for (double& x : v) x = g(rng);
        std::vector<double> a(static_cast<size_t>(rows) * cols, 0.0);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                for (int k = 0; k < true_rank; ++k)
                    a[static_cast<size_t>(r) * cols + c]
                        += u[static_cast<size_t>(r) * true_rank + k]
                           * v[static_cast<size_t>(c) * true_rank + k];
        std::vector<double> b(static_cast<size_t>(rows));
        for (double& x : b) x = g(rng);

        const LsqResult got = solve_least_squares(a, rows, cols, b);
        const std::vector<double> want = eigen_min_norm(a, rows, cols, b);
        CAPTURE(trial);
        CAPTURE(true_rank);
        CHECK(got.rank == true_rank);
        CHECK(rel_err(got.coeffs, want) < 1e-8);

        // Any perturbation along the null space must not shrink the norm.
        double norm_got = 0.0, norm_want = 0.0;
        for (double x : got.coeffs) norm_got += x * x;
        for (double x : want) norm_want += x * x;
        CHECK(std::sqrt(norm_got) == doctest::Approx(std::sqrt(norm_want)).epsilon(1e-8));
    }
}

TEST_CASE("residuals match the oracle") {
    std::mt19937_64 rng(44);
    std::normal_distribution<double> g(0.0, 1.0);
    const int rows = 100, cols = 7;
    std::vector<double> a(static_cast<size_t>(rows) * cols);
    std::vector<double> b(static_cast<size_t>(rows));
    for (double& v : a) v = g(rng);
    for (double& v : b) v = g(rng);
    const LsqResult got = solve_least_squares(a, rows, cols, b);
    const std::vector<double> x = eigen_min_norm(a, rows, cols, b);
    double sq = 0.0;
    for (int r = 0; r < rows; ++r) {
        double pred = 0.0;
        for (int c = 0; c < cols; ++c) pred += a[static_cast<size_t>(r) * cols + c]
                                               * x[static_cast<size_t>(c)];
        sq += (pred - b[static_cast<size_t>(r)]) * (pred - b[static_cast<size_t>(r)]);
    }
    CHECK(got.residual_rms == doctest::Approx(std::sqrt(sq / rows)).epsilon(1e-9));
}

TEST_CASE("solving twice gives bitwise identical coefficients") {
    std::mt19937_64 rng(45);
    std::normal_distribution<double> g(0.0, 1.0);
    const int rows = 80, cols = 28;
    std::vector<double> a(static_cast<size_t>(rows) * cols);
    std::vector<double> b(static_cast<size_t>(rows));
    for (double& v : a) v = g(rng);
    for (double& v : b) v = g(rng);
    const LsqResult r1 = solve_least_squares(a, rows, cols, b);
    const LsqResult r2 = solve_least_squares(a, rows, cols, b);
    CHECK(r1.coeffs == r2.coeffs);
    CHECK(r1.residual_rms == r2.residual_rms);
}
