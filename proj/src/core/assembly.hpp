#pragma once

#include "geometry.hpp"
#include "sparse.hpp"

#include <array>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ifrac {

/// Values of a coefficient at the two endpoints of an interface edge.
using NodalValues = std::array<double, 2>;

constexpr NodalValues uniform(double v) { return {v, v}; }

/// Coefficients of the two interface conditions
///   -[[u]] = -div_G(kappa_j grad {p}) + r_j {p} - h_j
///   -{{u}} = -div_G(kappa_a grad [p]) + r_a [p] + h_a
/// sampled at the endpoints of one interface edge.
struct InterfaceCoefficients {
    NodalValues kappa_j{};
    NodalValues r_j{};
    NodalValues h_j{};
    NodalValues kappa_a{};
    NodalValues r_a{};
    NodalValues h_a{};
};

/// Throws ArgumentError when kappa_* or r_* is negative or any value is not finite.
void validate(const InterfaceCoefficients& c);

/// Thin inclusion of mobility k_f and nodal aperture eps: Wentzell diffusion
/// eps*k_f on the average and Robin penalty k_f/eps on the jump, with eps
/// clamped from below by eps_floor.
InterfaceCoefficients fracture_to_coeffs(double k_f, NodalValues eps_at_nodes, double eps_floor);

/// Evaluates the interface coefficients for one edge of a given fracture.
using CoefficientProvider = std::function<InterfaceCoefficients(const InterfaceEdge&)>;

CoefficientProvider constant_coefficients(const InterfaceCoefficients& c);

/// Provider built from fracture_to_coeffs. A non-positive eps_floor selects
/// 1e-12 times the largest aperture of the fracture (or 1e-12 if that is zero).
CoefficientProvider thin_inclusion(const FractureSpec& fracture, double eps_floor = 0.0);

double default_eps_floor(const FractureSpec& fracture);

/// Boundary data as a function of position; evaluated at facet vertices.
using BoundaryFunction = std::function<double(const Point&)>;

BoundaryFunction constant_value(double v);

struct BoundaryConditionSet {
    std::map<std::string, BoundaryFunction> dirichlet;
    std::map<std::string, BoundaryFunction> neumann; // h = -u.n, positive for inflow
};

/// Assembled system of the interface weak form. `matrix`/`rhs` carry the
/// symmetric Dirichlet elimination; the raw parts are kept for flux recovery.
struct LinearSystem {
    SparseMatrix matrix;
    std::vector<double> rhs;
    std::size_t n_dofs = 0;
    std::vector<Index> dirichlet_dofs;
    std::vector<double> dirichlet_values;

    SparseMatrix raw_matrix;
    std::vector<double> interface_load; // h_j / h_a contributions
    std::vector<double> neumann_load;
    /// Dirichlet tag owning each constrained dof (first tag in name order).
    std::map<std::string, std::vector<Index>> dirichlet_dofs_by_tag;
    /// Integral of h over each Neumann tag.
    std::map<std::string, double> neumann_totals;
};

/// Assembles domain stiffness with one mobility per subdomain, the six
/// coefficient interface terms for every interface edge, Neumann loads and
/// the Dirichlet elimination.
LinearSystem assemble(const SplitMesh& split, std::span<const double> k_per_subdomain,
                      std::span<const CoefficientProvider> coeffs_per_fracture, const BoundaryConditionSet& bcs);

/// Same as assemble() but with one mobility per cell.
LinearSystem assemble_cellwise(const SplitMesh& split, std::span<const double> k_per_cell,
                               std::span<const CoefficientProvider> coeffs_per_fracture,
                               const BoundaryConditionSet& bcs);

} // namespace ifrac
