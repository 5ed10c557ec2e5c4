#include "errors.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ifrac;

namespace {

Inclusion1D params(double eps, double kf, double h)
{
    Inclusion1D p;
    p.length = 1.0;
    p.center = 0.5;
    p.eps = eps;
    p.k1 = 1.0;
    p.k2 = 1.0;
    p.kf = kf;
    p.h = h;
    p.p_right = 0.0;
    return p;
}

BoundaryConditionSet one_dimensional_bcs()
{
    BoundaryConditionSet bcs;
    bcs.neumann["left"] = constant_value(1.0);
    bcs.dirichlet["right"] = constant_value(0.0);
    bcs.neumann["top"] = constant_value(0.0);
    bcs.neumann["bottom"] = constant_value(0.0);
    return bcs;
}

} // namespace

TEST(PiecewiseLinear, SidesAndJump)
{
    const PiecewiseLinear1D f({0.0, 0.5, 0.5, 1.0}, {2.0, 1.5, 0.5, 0.0});
    EXPECT_DOUBLE_EQ(f(0.25), 1.75);
    EXPECT_DOUBLE_EQ(f(0.5, PiecewiseLinear1D::Side::left), 1.5);
    EXPECT_DOUBLE_EQ(f(0.5, PiecewiseLinear1D::Side::right), 0.5);
    EXPECT_DOUBLE_EQ(f(0.5), 1.0);
    EXPECT_DOUBLE_EQ(f.jump_at(0.5), -1.0);
    EXPECT_EQ(f.jump_at(0.25), 0.0);
    EXPECT_THROW((void)f(1.5), ArgumentError);
    EXPECT_THROW(PiecewiseLinear1D({0.0, 1.0, 0.5}, {0.0, 0.0, 0.0}), ArgumentError);
}

TEST(Heterogeneous1D, ThinBlockingInclusion)
{
    const auto p = solve_1d_heterogeneous_analytic(params(1e-4, 1e-4, 1.0));
    // Slopes -1, -1e4, -1 over widths 0.49995, 1e-4, 0.49995.
    EXPECT_NEAR(p(0.0), 1.9999, 1e-12);
    EXPECT_NEAR(p(1.0), 0.0, 0.0);
}

TEST(Heterogeneous1D, UniformMedium)
{
    const auto p = solve_1d_heterogeneous_analytic(params(0.2, 1.0, 1.0));
    for (double x : {0.0, 0.1, 0.45, 0.5, 0.7, 1.0}) EXPECT_NEAR(p(x), 1.0 - x, 1e-15);
}

TEST(Heterogeneous1D, ZeroFlux)
{
    const auto p = solve_1d_heterogeneous_analytic(params(1e-4, 1e-4, 0.0));
    for (double v : p.values()) EXPECT_EQ(v, 0.0);
}

TEST(Heterogeneous1D, InclusionOutsideDomain)
{
    auto q = params(1.2, 1.0, 1.0);
    EXPECT_THROW((void)solve_1d_heterogeneous_analytic(q), ArgumentError);
}

TEST(Interface1D, UnitDataThinBarrier)
{
    const auto p = solve_1d_interface_analytic(params(1e-4, 1e-4, 1.0));
    EXPECT_NEAR(p.jump_at(0.5), -1.0, 1e-15);
    EXPECT_NEAR(p(0.0), 2.0, 1e-15);
    EXPECT_NEAR(p(0.5, PiecewiseLinear1D::Side::left), 1.5, 1e-15);
    EXPECT_NEAR(p(0.5, PiecewiseLinear1D::Side::right), 0.5, 1e-15);
}

TEST(Interface1D, ZeroFlux)
{
    const auto p = solve_1d_interface_analytic(params(1e-4, 1e-4, 0.0));
    for (double v : p.values()) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(p.jump_at(0.5), 0.0);
}

TEST(Interface1D, JumpIndependentOfEpsWhenRatioFixed)
{
    for (double eps : {1e-1, 1e-3, 1e-6}) {
        const auto p = solve_1d_interface_analytic(params(eps, eps, 1.0));
        EXPECT_NEAR(p.jump_at(0.5), -1.0, 1e-14);
    }
}

TEST(Interface1D, CloseToHeterogeneousOutsideInclusion)
{
    const double eps = 1e-2;
    const auto het = solve_1d_heterogeneous_analytic(params(eps, 1e-2, 1.0));
    const auto inter = solve_1d_interface_analytic(params(eps, 1e-2, 1.0));
    const double bound = 1.0 * eps * (1.0 / 1.0 + 1.0 / 1.0);
    for (int i = 0; i <= 100; ++i) {
        const double x = i / 100.0;
        if (std::abs(x - 0.5) <= eps / 2) continue;
        EXPECT_LE(std::abs(het(x) - inter(x)), bound) << x;
    }
}

TEST(Equidim, UniformMobilityMatchesHomogeneous)
{
    EquidimProblem pr;
    pr.nx_outside = 16;
    pr.ny = 4;
    pr.aperture = ConstantAperture{0.5};
    pr.k_background = 1.0;
    pr.kf = 1.0;
    pr.bcs = one_dimensional_bcs();
    const auto sol = solve_equidim_2d(pr);
    const Mesh& m = sol.mesh.base;
    for (Index v = 0; v < m.vertices.size(); ++v) EXPECT_NEAR(sol.pressure[v], 1.0 - m.vertices[v].x, 1e-10);
}

TEST(Equidim, BlockingBandMatchesHeterogeneous1D)
{
    EquidimProblem pr;
    pr.nx_outside = 20;
    pr.ny = 6;
    pr.aperture = ConstantAperture{1e-2};
    pr.kf = 1e-2;
    pr.bcs = one_dimensional_bcs();
    const auto sol = solve_equidim_2d(pr);
    const auto exact = solve_1d_heterogeneous_analytic(params(1e-2, 1e-2, 1.0));
    const Mesh& m = sol.mesh.base;
    for (Index v = 0; v < m.vertices.size(); ++v) EXPECT_NEAR(sol.pressure[v], exact(m.vertices[v].x), 1e-8);
}

TEST(Equidim, ConductiveBandMatchesHeterogeneous1D)
{
    EquidimProblem pr;
    pr.nx_outside = 20;
    pr.ny = 6;
    pr.aperture = ConstantAperture{1e-2};
    pr.kf = 1e2;
    pr.bcs = one_dimensional_bcs();
    const auto sol = solve_equidim_2d(pr);
    const auto exact = solve_1d_heterogeneous_analytic(params(1e-2, 1e2, 1.0));
    const Mesh& m = sol.mesh.base;
    for (Index v = 0; v < m.vertices.size(); ++v) EXPECT_NEAR(sol.pressure[v], exact(m.vertices[v].x), 1e-8);
}

TEST(Equidim, YInvariantColumns)
{
    EquidimProblem pr;
    pr.nx_outside = 12;
    pr.ny = 5;
    pr.aperture = ConstantAperture{1e-2};
    pr.kf = 1e-2;
    pr.bcs = one_dimensional_bcs();
    const auto sol = solve_equidim_2d(pr);
    const Mesh& m = sol.mesh.base;
    for (Index v = 0; v < m.vertices.size(); ++v) {
        for (Index w = 0; w < m.vertices.size(); ++w) {
            if (m.vertices[v].x == m.vertices[w].x) EXPECT_NEAR(sol.pressure[v], sol.pressure[w], 1e-12);
        }
    }
}

TEST(Equidim, BandTooWide)
{
    EquidimProblem pr;
    pr.aperture = ConstantAperture{1.5};
    pr.bcs = one_dimensional_bcs();
    EXPECT_THROW((void)solve_equidim_2d(pr), ArgumentError);
}

TEST(Equidim, BandCellsAcross)
{
    EquidimProblem pr;
    pr.nx_outside = 10;
    pr.ny = 2;
    pr.band_cells_across = 4;
    pr.aperture = ConstantAperture{1e-2};
    pr.kf = 1e-2;
    pr.bcs = one_dimensional_bcs();
    const auto sol = solve_equidim_2d(pr);
    std::size_t band_cells = 0;
    for (double k : sol.k_per_cell) band_cells += k == 1e-2 ? 1 : 0;
    EXPECT_EQ(band_cells, 4u * 2u);
}
