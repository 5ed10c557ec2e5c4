#include "fem.hpp"

#include "errors.hpp"

#include <cmath>

namespace ifrac {

QuadratureRule gauss_segment(std::size_t n_points)
{
    QuadratureRule rule;
    switch (n_points) {
    case 1:
        rule.points = {{0.0, 0.0}};
        rule.weights = {2.0};
        break;
    case 2: {
        const double g = 1.0 / std::sqrt(3.0);
        rule.points = {{-g, 0.0}, {g, 0.0}};
        rule.weights = {1.0, 1.0};
        break;
    }
    case 3: {
        const double g = std::sqrt(0.6);
        rule.points = {{-g, 0.0}, {0.0, 0.0}, {g, 0.0}};
        rule.weights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
        break;
    }
    default:
        throw ArgumentError("Gauss rules are available for 1 to 3 points");
    }
    return rule;
}

QuadratureRule gauss_quad(std::size_t n_points_per_axis)
{
    const QuadratureRule line = gauss_segment(n_points_per_axis);
    QuadratureRule rule;
    for (std::size_t j = 0; j < line.points.size(); ++j) {
        for (std::size_t i = 0; i < line.points.size(); ++i) {
            rule.points.push_back({line.points[i][0], line.points[j][0]});
            rule.weights.push_back(line.weights[i] * line.weights[j]);
        }
    }
    return rule;
}

ElementMatrix q1_stiffness(std::span<const Point, 4> cell, double k)
{
    static constexpr std::array<double, 4> xi_node{-1.0, 1.0, 1.0, -1.0};
    static constexpr std::array<double, 4> eta_node{-1.0, -1.0, 1.0, 1.0};
    static const QuadratureRule rule = gauss_quad(2);

    ElementMatrix m;
    m.n = 4;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double xi = rule.points[q][0];
        const double eta = rule.points[q][1];
        std::array<double, 4> dxi{}, deta{};
        for (std::size_t a = 0; a < 4; ++a) {
            dxi[a] = 0.25 * xi_node[a] * (1.0 + eta * eta_node[a]);
            deta[a] = 0.25 * eta_node[a] * (1.0 + xi * xi_node[a]);
        }
        double j11 = 0.0, j12 = 0.0, j21 = 0.0, j22 = 0.0;
        for (std::size_t a = 0; a < 4; ++a) {
            j11 += dxi[a] * cell[a].x;
            j12 += dxi[a] * cell[a].y;
            j21 += deta[a] * cell[a].x;
            j22 += deta[a] * cell[a].y;
        }
        const double det = j11 * j22 - j12 * j21;
        if (!(det > 0.0)) throw GeometryError("degenerate quadrilateral in stiffness evaluation");
        std::array<double, 4> gx{}, gy{};
        for (std::size_t a = 0; a < 4; ++a) {
            gx[a] = (j22 * dxi[a] - j12 * deta[a]) / det;
            gy[a] = (-j21 * dxi[a] + j11 * deta[a]) / det;
        }
        const double w = rule.weights[q] * det * k;
        for (std::size_t a = 0; a < 4; ++a) {
            for (std::size_t b = 0; b < 4; ++b) m(a, b) += w * (gx[a] * gx[b] + gy[a] * gy[b]);
        }
    }
    // Symmetrize exactly; the quadrature sum is symmetric up to rounding only.
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = a + 1; b < 4; ++b) m(b, a) = m(a, b);
    }
    return m;
}

ElementMatrix p1_segment_stiffness(double length, double coeff)
{
    if (!(length > 0.0)) throw GeometryError("segment length must be positive");
    ElementMatrix m;
    m.n = 2;
    const double s = coeff / length;
    m(0, 0) = s;
    m(1, 1) = s;
    m(0, 1) = -s;
    m(1, 0) = -s;
    return m;
}

ElementMatrix p1_segment_stiffness(double length, std::array<double, 2> coeff_at_nodes)
{
    return p1_segment_stiffness(length, 0.5 * (coeff_at_nodes[0] + coeff_at_nodes[1]));
}

ElementMatrix p1_segment_mass(double length, std::array<double, 2> coeff_at_nodes)
{
    if (!(length > 0.0)) throw GeometryError("segment length must be positive");
    if (coeff_at_nodes[0] < 0.0 || coeff_at_nodes[1] < 0.0)
        throw ArgumentError("mass coefficient must be non-negative");
    static const QuadratureRule rule = gauss_segment(2);
    ElementMatrix m;
    m.n = 2;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double t = 0.5 * (1.0 + rule.points[q][0]);
        const std::array<double, 2> phi{1.0 - t, t};
        const double c = phi[0] * coeff_at_nodes[0] + phi[1] * coeff_at_nodes[1];
        const double w = 0.5 * rule.weights[q] * length * c;
        for (std::size_t a = 0; a < 2; ++a) {
            for (std::size_t b = 0; b < 2; ++b) m(a, b) += w * phi[a] * phi[b];
        }
    }
    m(1, 0) = m(0, 1);
    return m;
}

std::array<double, 2> facet_load(const Point& a, const Point& b, double h)
{
    const double length = distance(a, b);
    if (!(length > 0.0)) throw GeometryError("facet length must be positive");
    const double half = 0.5 * h * length;
    return {half, half};
}

} // namespace ifrac
