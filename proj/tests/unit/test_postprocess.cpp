#include "errors.hpp"
#include "oracle.hpp"
#include "postprocess.hpp"
#include "scenario.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace ifrac;

namespace {

Profile line_profile(std::size_t n, double (*f)(double))
{
    Profile p;
    p.start = {0, 0};
    p.end = {1, 0};
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n - 1);
        p.samples.push_back({s, {s, 0}, f(s)});
    }
    return p;
}

Scenario reduction_scenario(double kf)
{
    Scenario s = builtin_scenario("single_vertical");
    s.nx = s.ny = 32;
    s.fractures[0].spec.aperture = ConstantAperture{1e-4};
    s.fractures[0].spec.mobility_kf = kf;
    s.solver.tol = 1e-8;
    return s;
}

PiecewiseLinear1D reduction_exact(double kf)
{
    Inclusion1D p;
    p.eps = 1e-4;
    p.kf = kf;
    return solve_1d_interface_analytic(p);
}

} // namespace

TEST(SampleProfile, ConstantSolution)
{
    const SplitMesh s = split_mesh(build_structured_quad(4, 4, {0, 0}, {1, 1}), FractureNetwork{});
    const std::vector<double> p(s.num_dofs(), 3.25);
    const Profile prof = sample_profile(s, p, {0, 0.3}, {1, 0.9}, 17);
    ASSERT_EQ(prof.size(), 17u);
    for (const auto& x : prof.samples) EXPECT_DOUBLE_EQ(x.p, 3.25);
}

TEST(SampleProfile, ArcLengths)
{
    const SplitMesh s = split_mesh(build_structured_quad(4, 4, {0, 0}, {1, 1}), FractureNetwork{});
    const std::vector<double> p(s.num_dofs(), 0.0);
    const Profile prof = sample_profile(s, p, {0, 0.7}, {1, 0.7}, 101);
    for (std::size_t i = 0; i < 101; ++i) EXPECT_NEAR(prof.samples[i].s, 0.01 * static_cast<double>(i), 1e-15);
    EXPECT_EQ(prof.samples.back().s, 1.0);
}

TEST(SampleProfile, Errors)
{
    const SplitMesh s = split_mesh(build_structured_quad(2, 2, {0, 0}, {1, 1}), FractureNetwork{});
    const std::vector<double> p(s.num_dofs(), 0.0);
    EXPECT_THROW((void)sample_profile(s, p, {0, 0.5}, {2, 0.5}, 5), GeometryError);
    EXPECT_THROW((void)sample_profile(s, p, {0, 0.5}, {1, 0.5}, 1), ArgumentError);
}

TEST(SampleProfile, BilinearInterpolation)
{
    const SplitMesh s = split_mesh(build_structured_quad(3, 3, {0, 0}, {1, 1}), FractureNetwork{});
    std::vector<double> p(s.num_dofs());
    for (Index v = 0; v < p.size(); ++v) p[v] = 2.0 * s.base.vertices[v].x - s.base.vertices[v].y + 0.5;
    const Profile prof = sample_profile(s, p, {0.1, 0.05}, {0.95, 0.8}, 23);
    for (const auto& x : prof.samples) EXPECT_NEAR(x.p, 2.0 * x.point.x - x.point.y + 0.5, 1e-13);
}

TEST(SampleProfile, LinearInSolution)
{
    const RunResult r = run_scenario(builtin_scenario("single_vertical"));
    std::vector<double> twice(r.pressure);
    for (double& v : twice) v = 2.0 * v + 1.0;
    const Profile a = sample_profile(r.split, r.pressure, {0, 0.7}, {1, 0.7}, 41);
    const Profile b = sample_profile(r.split, twice, {0, 0.7}, {1, 0.7}, 41);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b.samples[i].p, 2.0 * a.samples[i].p + 1.0, 1e-12);
}

TEST(SampleProfile, ReducedInterfaceSolution)
{
    for (double kf : {1e-4, 1e4}) {
        const RunResult r = run_scenario(reduction_scenario(kf));
        const auto exact = reduction_exact(kf);
        const Profile prof = sample_profile(r.split, r.pressure, {0, 0.7}, {1, 0.7}, 101);
        for (const auto& x : prof.samples) EXPECT_NEAR(x.p, exact(x.point.x), 1e-8) << "kf=" << kf << " x=" << x.point.x;
        // The sample at x = 0.5 averages both sides.
        EXPECT_NEAR(prof.samples[50].p, 0.5 * (exact(0.5, PiecewiseLinear1D::Side::left) +
                                               exact(0.5, PiecewiseLinear1D::Side::right)),
                    1e-8);
    }
}

TEST(FracturePressure, ReducedSolutionIsConstantMean)
{
    const RunResult r = run_scenario(reduction_scenario(1e-4));
    const auto exact = reduction_exact(1e-4);
    const Profile pf = fracture_pressure(r.split, r.pressure, 0);
    ASSERT_EQ(pf.size(), 33u);
    for (const auto& x : pf.samples) EXPECT_NEAR(x.p, exact(0.5), 1e-8);
    const Profile jump = fracture_jump(r.split, r.pressure, 0);
    for (const auto& x : jump.samples) EXPECT_NEAR(x.p, -1.0, 1e-8);
}

TEST(FracturePressure, ConductiveNetworkSamples)
{
    const RunResult r = run_scenario(builtin_scenario("regular2d", "conductive"));
    const Profile pf = fracture_pressure(r.split, r.pressure, 0);
    ASSERT_EQ(pf.size(), 33u);
    EXPECT_EQ(pf.samples.front().s, 0.0);
    EXPECT_NEAR(pf.samples.back().s, 1.0, 1e-15);
    for (std::size_t i = 1; i < pf.size(); ++i) EXPECT_GT(pf.samples[i].s, pf.samples[i - 1].s);
    EXPECT_THROW((void)fracture_pressure(r.split, r.pressure, 6), ArgumentError);
}

TEST(FracturePressure, ContinuousSolutionEqualsTrace)
{
    const SplitMesh s = split_mesh(build_structured_quad(8, 8, {0, 0}, {1, 1}), builtin_scenario("single_vertical").network());
    std::vector<double> p(s.num_dofs());
    for (Index v = 0; v < p.size(); ++v) p[v] = std::sin(3.0 * s.base.vertices[v].y) + s.base.vertices[v].x;
    const Profile pf = fracture_pressure(s, p, 0);
    for (const auto& x : pf.samples) EXPECT_EQ(x.p, std::sin(3.0 * x.point.y) + 0.5);
}

TEST(BoundaryFlux, NetworkOutflowMatchesInflow)
{
    for (const char* variant : {"conductive", "blocking"}) {
        const RunResult r = run_scenario(builtin_scenario("regular2d", variant));
        EXPECT_NEAR(boundary_flux(r.split, r.system, r.pressure, "right"), -1.0, 1e-8) << variant;
        EXPECT_NEAR(boundary_flux(r.split, r.system, r.pressure, "left"), 1.0, 1e-15) << variant;
        double total = 0.0;
        for (const auto& [tag, f] : r.boundary_fluxes) total += f;
        EXPECT_LE(std::abs(total), 1e-8 * r.inflow) << variant;
        EXPECT_THROW((void)boundary_flux(r.split, r.system, r.pressure, "north"), ArgumentError);
    }
}

TEST(BoundaryFlux, ConstantSolutionHasNoFlux)
{
    Scenario s = builtin_scenario("single_vertical");
    s.nx = s.ny = 8;
    for (auto& [tag, b] : s.boundary) b = {BoundarySpec::Kind::neumann, {0.0, 0.0, 0.0}};
    s.boundary["right"] = {BoundarySpec::Kind::dirichlet, {2.5, 0.0, 0.0}};
    const RunResult r = run_scenario(s);
    for (double v : r.pressure) EXPECT_NEAR(v, 2.5, 1e-12);
    for (const auto& [tag, f] : r.boundary_fluxes) EXPECT_NEAR(f, 0.0, 1e-12) << tag;
}

TEST(BoundaryFlux, OneDimensionalRightEnd)
{
    // Inflow is counted positive, so the outflow through the Dirichlet end is -h.
    const RunResult r = run_scenario(builtin_scenario("onedim"));
    EXPECT_NEAR(boundary_flux(r.split, r.system, r.pressure, "right"), -1.0, 1e-12);
    EXPECT_NEAR(boundary_flux(r.split, r.system, r.pressure, "left"), 1.0, 1e-15);
}

TEST(ProfileError, Examples)
{
    const Profile a = line_profile(11, [](double s) { return s * s; });
    const ProfileError same = profile_error(a, a);
    EXPECT_EQ(same.l2, 0.0);
    EXPECT_EQ(same.max, 0.0);

    const Profile b = line_profile(11, [](double s) { return s * s + 0.25; });
    const ProfileError off = profile_error(a, b);
    EXPECT_NEAR(off.l2, 0.25, 1e-15);
    EXPECT_NEAR(off.max, 0.25, 1e-15);

    const Profile lin = line_profile(4001, [](double s) { return s; });
    const Profile zero = line_profile(4001, [](double) { return 0.0; });
    EXPECT_NEAR(profile_error(lin, zero).l2, 1.0 / std::sqrt(3.0), 1e-6);
}

TEST(ProfileError, MismatchedSampling)
{
    const Profile a = line_profile(11, [](double s) { return s; });
    const Profile b = line_profile(12, [](double s) { return s; });
    EXPECT_THROW((void)profile_error(a, b), ArgumentError);
    Profile c = a;
    c.samples[3].s += 1e-3;
    EXPECT_THROW((void)profile_error(a, c), ArgumentError);
}

TEST(ProfileCsv, FullPrecision)
{
    Profile p;
    p.samples.push_back({0.0, {0.0, 0.7}, 1.0 / 3.0});
    p.samples.push_back({1.0, {1.0, 0.7}, 0.1});
    std::ostringstream out;
    write_profile_csv(out, p);
    EXPECT_EQ(out.str(), "s,x,y,p\n0,0,0.69999999999999996,0.33333333333333331\n1,1,0.69999999999999996,0.10000000000000001\n");
}
