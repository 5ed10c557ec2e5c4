#include "oracle.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>

namespace ifrac {

PiecewiseLinear1D::PiecewiseLinear1D(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values))
{
    if (breakpoints_.size() != values_.size() || breakpoints_.size() < 2)
        throw ArgumentError("piecewise-linear function needs matching breakpoints and values");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
        if (breakpoints_[i] < breakpoints_[i - 1]) throw ArgumentError("breakpoints must be ordered");
        if (breakpoints_[i] == breakpoints_[i - 1] && i >= 2 && breakpoints_[i - 2] == breakpoints_[i])
            throw ArgumentError("a breakpoint may repeat at most once");
    }
}

double PiecewiseLinear1D::operator()(double x, Side side) const
{
    if (x < breakpoints_.front() || x > breakpoints_.back())
        throw ArgumentError("evaluation point outside the interval");
    const auto lo = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const auto hi = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    if (hi - lo >= 2) {
        const auto i = static_cast<std::size_t>(lo - breakpoints_.begin());
        const double left = values_[i];
        const double right = values_[i + 1];
        switch (side) {
        case Side::left: return left;
        case Side::right: return right;
        case Side::average: return 0.5 * (left + right);
        }
    }
    if (hi - lo == 1) return values_[static_cast<std::size_t>(lo - breakpoints_.begin())];
    const auto i = static_cast<std::size_t>(lo - breakpoints_.begin());
    const double x0 = breakpoints_[i - 1];
    const double x1 = breakpoints_[i];
    const double t = (x - x0) / (x1 - x0);
    return (1.0 - t) * values_[i - 1] + t * values_[i];
}

double PiecewiseLinear1D::jump_at(double x) const
{
    const auto lo = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const auto hi = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    if (hi - lo < 2) return 0.0;
    const auto i = static_cast<std::size_t>(lo - breakpoints_.begin());
    return values_[i + 1] - values_[i];
}

namespace {

void check_mobilities(const Inclusion1D& p)
{
    if (!(p.k1 > 0.0) || !(p.k2 > 0.0) || !(p.kf > 0.0)) throw ArgumentError("mobilities must be positive");
    if (!(p.eps > 0.0)) throw ArgumentError("aperture must be positive");
    if (!(p.length > 0.0)) throw ArgumentError("interval length must be positive");
}

} // namespace

PiecewiseLinear1D solve_1d_heterogeneous_analytic(const Inclusion1D& p)
{
    check_mobilities(p);
    const double s1 = p.center - 0.5 * p.eps;
    const double s2 = p.center + 0.5 * p.eps;
    if (!(s1 > 0.0) || !(s2 < p.length)) throw ArgumentError("inclusion does not fit inside the interval");
    // Flux is h everywhere; integrate Darcy's law backwards from p(L).
    const double p_s2 = p.p_right + p.h * (p.length - s2) / p.k2;
    const double p_s1 = p_s2 + p.h * p.eps / p.kf;
    const double p_0 = p_s1 + p.h * s1 / p.k1;
    return PiecewiseLinear1D({0.0, s1, s2, p.length}, {p_0, p_s1, p_s2, p.p_right});
}

PiecewiseLinear1D solve_1d_interface_analytic(const Inclusion1D& p)
{
    check_mobilities(p);
    if (!(p.center > 0.0) || !(p.center < p.length)) throw ArgumentError("interface point outside the interval");
    const double p2 = p.p_right + p.h * (p.length - p.center) / p.k2;
    const double p1 = p2 + p.eps / p.kf * p.h;
    const double p_0 = p1 + p.h * p.center / p.k1;
    return PiecewiseLinear1D({0.0, p.center, p.center, p.length}, {p_0, p1, p2, p.p_right});
}

EquidimSolution solve_equidim_2d(const EquidimProblem& problem)
{
    const double width = max_aperture(problem.aperture);
    if (!(width > 0.0)) throw ArgumentError("band aperture must be positive");
    if (problem.band_cells_across == 0 || problem.ny == 0 || problem.nx_outside < 2)
        throw ArgumentError("equi-dimensional grid needs at least two outer columns, one row and one band column");
    const double band_lo = problem.fracture_x - 0.5 * width;
    const double band_hi = problem.fracture_x + 0.5 * width;
    if (!(band_lo > problem.lower.x) || !(band_hi < problem.upper.x))
        throw ArgumentError("band is wider than the domain");

    const double wl = band_lo - problem.lower.x;
    const double wr = problem.upper.x - band_hi;
    const auto nl = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(static_cast<double>(problem.nx_outside) * wl / (wl + wr))), 1,
        problem.nx_outside - 1);
    const std::size_t nr = problem.nx_outside - nl;

    std::vector<double> xs;
    const auto append_uniform = [&](double a, double b, std::size_t cells, bool skip_first) {
        for (std::size_t i = skip_first ? 1 : 0; i <= cells; ++i)
            xs.push_back(i == cells ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(cells));
    };
    append_uniform(problem.lower.x, band_lo, nl, false);
    append_uniform(band_lo, band_hi, problem.band_cells_across, true);
    append_uniform(band_hi, problem.upper.x, nr, true);
    std::vector<double> ys(problem.ny + 1);
    for (std::size_t j = 0; j <= problem.ny; ++j) {
        ys[j] = j == problem.ny ? problem.upper.y
                                : problem.lower.y + (problem.upper.y - problem.lower.y) * static_cast<double>(j) /
                                                        static_cast<double>(problem.ny);
    }

    EquidimSolution out;
    out.mesh = split_mesh(build_tensor_quad(xs, ys), FractureNetwork{});
    const Mesh& mesh = out.mesh.base;
    out.k_per_cell.resize(mesh.num_cells());
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const Point centre = mesh.cell_centroid(c);
        const double eps = evaluate_aperture(problem.aperture, {problem.fracture_x, centre.y});
        out.k_per_cell[c] =
            std::abs(centre.x - problem.fracture_x) < 0.5 * eps ? problem.kf : problem.k_background;
    }
    const LinearSystem sys = assemble_cellwise(out.mesh, out.k_per_cell, {}, problem.bcs);
    Solution sol = solve_spd(sys.matrix, sys.rhs, problem.solver);
    out.pressure = std::move(sol.x);
    out.report = std::move(sol.report);
    return out;
}

} // namespace ifrac
