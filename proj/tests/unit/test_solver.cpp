#include "assembly.hpp"
#include "scenario.hpp"
#include "sparse.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ifrac;

namespace {

SparseMatrix dense_to_sparse(const std::vector<std::vector<double>>& a)
{
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if (a[i][j] != 0.0) t.push_back({i, j, a[i][j]});
    return SparseMatrix::from_triplets(a.size(), t);
}

// Symmetric, strictly diagonally dominant with positive diagonal, hence SPD.
SparseMatrix random_spd(std::size_t n, std::mt19937& rng)
{
    std::uniform_real_distribution<double> off(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k < 4 * n; ++k) {
        const std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        const double v = off(rng);
        a[i][j] += v;
        a[j][i] += v;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += std::abs(a[i][j]);
        a[i][i] = s + 0.1 + std::abs(off(rng));
    }
    return dense_to_sparse(a);
}

LinearSystem assemble_scenario(const Scenario& sc)
{
    const SplitMesh s = split_mesh(build_scenario_mesh(sc), sc.network());
    std::vector<CoefficientProvider> providers;
    for (const auto& f : sc.fractures) providers.push_back(thin_inclusion(f.spec));
    const std::vector<double> k(s.n_subdomains, 1.0);
    return assemble(s, k, providers, sc.boundary_conditions());
}

double a_norm_error(const SparseMatrix& a, const std::vector<double>& x, const std::vector<double>& ref)
{
    std::vector<double> e(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) e[i] = x[i] - ref[i];
    const auto ae = a.multiply(e);
    long double s = 0.0L;
    for (std::size_t i = 0; i < e.size(); ++i) s += static_cast<long double>(e[i]) * ae[i];
    return static_cast<double>(std::sqrt(std::max(s, 0.0L)));
}

} // namespace

TEST(SparseMatrix, TripletsAreSummedAndSorted)
{
    const std::vector<Triplet> t{{0, 1, 2.0}, {0, 0, 1.0}, {0, 1, 3.0}, {1, 0, 5.0}, {1, 1, 4.0}};
    const SparseMatrix m = SparseMatrix::from_triplets(2, t);
    EXPECT_EQ(m.nonzeros(), 4u);
    EXPECT_EQ(m.at(0, 1), 5.0);
    EXPECT_EQ(m.at(0, 0), 1.0);
    const auto cols = m.column_indices();
    EXPECT_EQ(cols[0], 0u);
    EXPECT_EQ(cols[1], 1u);
    EXPECT_THROW((void)SparseMatrix::from_triplets(1, t), ArgumentError);
}

TEST(SparseMatrix, RemaindersKeepExtendedSums)
{
    const std::vector<Triplet> t{{0, 0, 1e8}, {0, 0, 1e-9}, {0, 0, -1e8}};
    const SparseMatrix m = SparseMatrix::from_triplets(1, t);
    // Resolution is that of a long double sum at 1e8, about 1e-11.
    const std::vector<double> one{1.0};
    EXPECT_NEAR(static_cast<double>(m.row_product(0, std::span<const double>(one))), 1e-9, 2e-11);
}

TEST(Cg, Identity)
{
    const SparseMatrix id = dense_to_sparse({{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}});
    const std::vector<double> b{1.0, -2.0, 3.5, 0.25, 7.0};
    const Solution s = cg_solve(id, b, 1e-12, 0);
    EXPECT_LE(s.report.iterations, 1u);
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_DOUBLE_EQ(s.x[i], b[i]);
    EXPECT_TRUE(s.report.converged);
}

TEST(Cg, TwoByTwo)
{
    const SparseMatrix a = dense_to_sparse({{4, 1}, {1, 3}});
    const std::vector<double> b{1.0, 2.0};
    const Solution s = cg_solve(a, b, 1e-12, 0);
    EXPECT_NEAR(s.x[0], 1.0 / 11.0, 1e-14);
    EXPECT_NEAR(s.x[1], 7.0 / 11.0, 1e-14);
    const auto d = dense_cholesky_solve(a, b);
    EXPECT_NEAR(d[0], 1.0 / 11.0, 1e-15);
    EXPECT_NEAR(d[1], 7.0 / 11.0, 1e-15);
}

TEST(Cg, ZeroRightHandSide)
{
    const SparseMatrix a = dense_to_sparse({{4, 1}, {1, 3}});
    const std::vector<double> b{0.0, 0.0};
    const Solution s = cg_solve(a, b, 1e-10, 0);
    EXPECT_EQ(s.x[0], 0.0);
    EXPECT_TRUE(s.report.converged);
}

TEST(Cg, AgreesWithCholeskyOnRandomSpd)
{
    std::mt19937 rng(20240611);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 10 + static_cast<std::size_t>(trial) * 7;
        const SparseMatrix a = random_spd(n, rng);
        std::normal_distribution<double> g;
        std::vector<double> b(n);
        for (double& v : b) v = g(rng);
        const Solution cg = cg_solve(a, b, 1e-12, 0);
        const auto ref = dense_cholesky_solve(a, b);
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            diff = std::max(diff, std::abs(cg.x[i] - ref[i]));
            scale = std::max(scale, std::abs(ref[i]));
        }
        EXPECT_LE(diff, 1e-8 * scale) << "n=" << n;
    }
}

TEST(Cg, ConductiveNetworkConverges)
{
    const LinearSystem sys = assemble_scenario(builtin_scenario("regular2d", "conductive"));
    const Solution s = cg_solve(sys.matrix, sys.rhs, 1e-10, 0);
    EXPECT_TRUE(s.report.converged);
    EXPECT_LE(s.report.relative_residual, 1e-10);
    EXPECT_LE(relative_residual(sys.matrix, s.x, sys.rhs), 1e-10);
    EXPECT_GT(s.report.iterations, 0u);
    EXPECT_EQ(s.report.preconditioned_residuals.size(), s.report.iterations);
}

TEST(Cg, ErrorEnergyNormIsMonotone)
{
    // CG minimises the A-norm of the error over growing Krylov spaces; the
    // preconditioned residual itself may oscillate.
    const LinearSystem sys = assemble_scenario(builtin_scenario("regular2d", "blocking"));
    const auto ref = dense_cholesky_solve(sys.matrix, sys.rhs);
    double previous = a_norm_error(sys.matrix, std::vector<double>(ref.size(), 0.0), ref);
    for (std::size_t k = 1; k <= 60; ++k) {
        std::vector<double> x;
        try {
            x = cg_solve(sys.matrix, sys.rhs, 1e-10, k).x;
        } catch (const SolverError& e) {
            x = e.iterate();
        }
        ASSERT_EQ(x.size(), ref.size());
        const double err = a_norm_error(sys.matrix, x, ref);
        EXPECT_LE(err, previous * (1.0 + 1e-12)) << "iteration " << k;
        previous = err;
    }
}

TEST(Cg, NonConvergenceCarriesReport)
{
    const LinearSystem sys = assemble_scenario(builtin_scenario("single_vertical"));
    try {
        (void)cg_solve(sys.matrix, sys.rhs, 1e-10, 3);
        FAIL() << "expected a solver error";
    } catch (const SolverError& e) {
        EXPECT_EQ(e.report().iterations, 3u);
        EXPECT_FALSE(e.report().converged);
        EXPECT_GT(e.report().relative_residual, 1e-10);
    }
}

TEST(Cg, NonFiniteInput)
{
    const SparseMatrix a = dense_to_sparse({{4, 1}, {1, 3}});
    const std::vector<double> b{NAN, 1.0};
    EXPECT_THROW((void)cg_solve(a, b, 1e-10, 0), NumericalError);
    EXPECT_THROW((void)cg_solve(a, std::vector<double>{1.0, 1.0}, 2.0, 0), ArgumentError);
}

TEST(Cg, IndefiniteMatrixBreaksDown)
{
    const SparseMatrix a = dense_to_sparse({{1, 3}, {3, 1}});
    const std::vector<double> b{1.0, -1.0};
    EXPECT_THROW((void)cg_solve(a, b, 1e-10, 0), NumericalError);
    EXPECT_THROW((void)dense_cholesky_solve(a, b), NumericalError);
}

TEST(SolveSpd, DenseBelowThreshold)
{
    const SparseMatrix a = dense_to_sparse({{4, 1}, {1, 3}});
    const Solution s = solve_spd(a, std::vector<double>{1.0, 2.0});
    EXPECT_EQ(s.report.method, "dense-cholesky");
    EXPECT_LE(s.report.relative_residual, 1e-15);
    SolverOptions cg;
    cg.method = SolverMethod::cg;
    EXPECT_EQ(solve_spd(a, std::vector<double>{1.0, 2.0}, cg).report.method, "cg");
}
