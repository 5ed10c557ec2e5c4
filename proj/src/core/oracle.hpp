#pragma once

#include "assembly.hpp"
#include "geometry.hpp"
#include "sparse.hpp"

#include <vector>

namespace ifrac {

/// Piecewise-linear function on an interval. A breakpoint may repeat once to
/// carry a jump; evaluation there uses the requested one-sided limit.
class PiecewiseLinear1D {
public:
    enum class Side { left, right, average };

    PiecewiseLinear1D(std::vector<double> breakpoints, std::vector<double> values);

    [[nodiscard]] double operator()(double x, Side side = Side::average) const;
    [[nodiscard]] const std::vector<double>& breakpoints() const { return breakpoints_; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    /// Right limit minus left limit at x (zero away from a jump).
    [[nodiscard]] double jump_at(double x) const;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

/// Parameters of the 1D inclusion problem: u(0) = h (inflow), p(L) = p_right,
/// inclusion of width eps centred at S.
struct Inclusion1D {
    double length = 1.0;
    double center = 0.5;
    double eps = 1e-4;
    double k1 = 1.0;
    double k2 = 1.0;
    double kf = 1e-4;
    double h = 1.0;
    double p_right = 0.0;
};

/// Exact solution with the inclusion resolved as a third material.
PiecewiseLinear1D solve_1d_heterogeneous_analytic(const Inclusion1D& params);

/// Exact solution of the interface model: continuous flux, jump
/// [p] = -(eps / kf) h at the interface point.
PiecewiseLinear1D solve_1d_interface_analytic(const Inclusion1D& params);

/// Resolved band around a vertical line: the inclusion is meshed with its own
/// mobility on a graded tensor-product grid.
struct EquidimProblem {
    std::size_t nx_outside = 64;   // columns outside the band, split left/right by width
    std::size_t ny = 64;
    std::size_t band_cells_across = 2;
    Point lower{0.0, 0.0};
    Point upper{1.0, 1.0};
    double fracture_x = 0.5;
    Aperture aperture = ConstantAperture{1e-2};
    double k_background = 1.0;
    double kf = 1.0;
    BoundaryConditionSet bcs;
    SolverOptions solver;
};

struct EquidimSolution {
    SplitMesh mesh; // unsplit: one subdomain, no interfaces
    std::vector<double> pressure;
    std::vector<double> k_per_cell;
    SolveReport report;
};

/// Cells whose centre lies within eps(y_centre)/2 of the line get kf. For a
/// varying aperture the band is therefore resolved to the nearest column edge.
EquidimSolution solve_equidim_2d(const EquidimProblem& problem);

} // namespace ifrac
