#pragma once

#include "geometry.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace ifrac {

/// Dense local matrix of size 2 or 4.
struct ElementMatrix {
    std::size_t n = 0;
    std::array<double, 16> entries{};

    double& operator()(std::size_t i, std::size_t j) { return entries[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
};

struct QuadratureRule {
    std::vector<std::array<double, 2>> points; // reference coordinates
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1]; supports 1 to 3 points.
QuadratureRule gauss_segment(std::size_t n_points);
/// Tensor Gauss rule on [-1, 1]^2.
QuadratureRule gauss_quad(std::size_t n_points_per_axis);

/// Bilinear Q1 stiffness k * grad(phi_a) . grad(phi_b), 2x2 Gauss.
ElementMatrix q1_stiffness(std::span<const Point, 4> cell, double k);

/// Linear segment stiffness (c / L) [[1,-1],[-1,1]].
ElementMatrix p1_segment_stiffness(double length, double coeff);
/// Nodal coefficients are collapsed to their midpoint value.
ElementMatrix p1_segment_stiffness(double length, std::array<double, 2> coeff_at_nodes);

/// Integral of c(s) phi_a phi_b with c linear along the segment.
ElementMatrix p1_segment_mass(double length, std::array<double, 2> coeff_at_nodes);

/// Load of a constant flux h on a linear facet: h L / 2 per node.
std::array<double, 2> facet_load(const Point& a, const Point& b, double h);

} // namespace ifrac
