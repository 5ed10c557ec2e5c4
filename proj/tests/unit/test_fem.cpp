#include "errors.hpp"
#include "fem.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>

using namespace ifrac;

namespace {

std::array<Point, 4> square(double s = 1.0, Point o = {0, 0})
{
    return {Point{o.x, o.y}, Point{o.x + s, o.y}, Point{o.x + s, o.y + s}, Point{o.x, o.y + s}};
}

} // namespace

TEST(Q1Stiffness, UnitSquare)
{
    const auto sq = square();
    const ElementMatrix k = q1_stiffness(sq, 1.0);
    ASSERT_EQ(k.n, 4u);
    for (std::size_t a = 0; a < 4; ++a) {
        EXPECT_NEAR(k(a, a), 2.0 / 3.0, 1e-15);
        EXPECT_NEAR(k(a, (a + 2) % 4), -1.0 / 3.0, 1e-15);
        EXPECT_NEAR(k(a, (a + 1) % 4), -1.0 / 6.0, 1e-15);
        EXPECT_NEAR(k(a, (a + 3) % 4), -1.0 / 6.0, 1e-15);
    }
}

TEST(Q1Stiffness, ZeroAndLinearInK)
{
    const std::array<Point, 4> cell{Point{0, 0}, Point{2, 0.1}, Point{2.2, 1.5}, Point{-0.1, 1.0}};
    const ElementMatrix zero = q1_stiffness(cell, 0.0);
    const ElementMatrix one = q1_stiffness(cell, 1.0);
    const ElementMatrix two = q1_stiffness(cell, 2.0);
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) {
            EXPECT_EQ(zero(a, b), 0.0);
            EXPECT_NEAR(two(a, b), 2.0 * one(a, b), 1e-14);
        }
    }
}

TEST(Q1Stiffness, SymmetricWithConstantKernel)
{
    const std::array<Point, 4> cell{Point{0, 0}, Point{2, 0.1}, Point{2.2, 1.5}, Point{-0.1, 1.0}};
    const ElementMatrix k = q1_stiffness(cell, 3.7);
    for (std::size_t a = 0; a < 4; ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < 4; ++b) {
            EXPECT_NEAR(k(a, b), k(b, a), 1e-14 * std::abs(k(a, a)));
            row += k(a, b);
        }
        EXPECT_NEAR(row, 0.0, 1e-13);
        EXPECT_GT(k(a, a), 0.0);
    }
}

TEST(Q1Stiffness, ScaleInvariantIn2D)
{
    const ElementMatrix a = q1_stiffness(square(1.0), 1.0);
    const ElementMatrix b = q1_stiffness(square(1.0 / 32.0, {0.25, 0.5}), 1.0);
    const ElementMatrix c = q1_stiffness(square(17.0, {-3, 4}), 1.0);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            EXPECT_NEAR(a(i, j), b(i, j), 1e-13);
            EXPECT_NEAR(a(i, j), c(i, j), 1e-13);
        }
    }
}

TEST(Q1Stiffness, DegenerateCell)
{
    const std::array<Point, 4> flat{Point{0, 0}, Point{1, 0}, Point{2, 0}, Point{3, 0}};
    EXPECT_THROW((void)q1_stiffness(flat, 1.0), GeometryError);
    // Clockwise ordering is rejected as well.
    const std::array<Point, 4> cw{Point{0, 0}, Point{0, 1}, Point{1, 1}, Point{1, 0}};
    EXPECT_THROW((void)q1_stiffness(cw, 1.0), GeometryError);
}

TEST(SegmentStiffness, Examples)
{
    const ElementMatrix a = p1_segment_stiffness(1.0, 1.0);
    EXPECT_EQ(a(0, 0), 1.0);
    EXPECT_EQ(a(0, 1), -1.0);
    EXPECT_EQ(a(1, 0), -1.0);
    EXPECT_EQ(a(1, 1), 1.0);

    const ElementMatrix b = p1_segment_stiffness(0.5, 2.0);
    EXPECT_DOUBLE_EQ(b(0, 0), 4.0);
    EXPECT_DOUBLE_EQ(b(0, 1), -4.0);

    const ElementMatrix c = p1_segment_stiffness(1.0, std::array<double, 2>{0.0, 2.0});
    EXPECT_DOUBLE_EQ(c(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(c(1, 0), -1.0);

    EXPECT_THROW((void)p1_segment_stiffness(0.0, 1.0), GeometryError);
}

TEST(SegmentMass, Examples)
{
    const ElementMatrix a = p1_segment_mass(1.0, {6.0, 6.0});
    EXPECT_NEAR(a(0, 0), 2.0, 1e-14);
    EXPECT_NEAR(a(0, 1), 1.0, 1e-14);
    EXPECT_NEAR(a(1, 1), 2.0, 1e-14);

    const ElementMatrix z = p1_segment_mass(1.0, {0.0, 0.0});
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(z(i, j), 0.0);

    const ElementMatrix b = p1_segment_mass(2.0, {3.0, 3.0});
    EXPECT_NEAR(b(0, 0), 2.0, 1e-14);
    EXPECT_NEAR(b(1, 0), 1.0, 1e-14);

    EXPECT_THROW((void)p1_segment_mass(1.0, {-1.0, 1.0}), ArgumentError);
    EXPECT_THROW((void)p1_segment_mass(-1.0, {1.0, 1.0}), GeometryError);
}

TEST(SegmentMass, LinearCoefficientIsExact)
{
    // c(s) = 1 + s on [0, 1]: entries are integrals of c φa φb.
    const ElementMatrix m = p1_segment_mass(1.0, {1.0, 2.0});
    EXPECT_NEAR(m(0, 0), 1.0 / 3.0 + 1.0 / 12.0, 1e-14);
    EXPECT_NEAR(m(0, 1), 1.0 / 6.0 + 1.0 / 12.0, 1e-14);
    EXPECT_NEAR(m(1, 1), 1.0 / 3.0 + 1.0 / 4.0, 1e-14);
    // Positive definite for positive coefficients.
    EXPECT_GT(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0), 0.0);
}

TEST(FacetLoad, Examples)
{
    const auto a = facet_load({0, 0}, {1, 0}, 1.0);
    EXPECT_DOUBLE_EQ(a[0], 0.5);
    EXPECT_DOUBLE_EQ(a[1], 0.5);
    const auto b = facet_load({0, 0}, {0, 1.0 / 32.0}, 1.0);
    EXPECT_DOUBLE_EQ(b[0], 1.0 / 64.0);
    EXPECT_DOUBLE_EQ(b[1], 1.0 / 64.0);
    const auto c = facet_load({0, 0}, {1, 0}, 0.0);
    EXPECT_EQ(c[0], 0.0);
    EXPECT_EQ(c[1], 0.0);
}

TEST(Quadrature, WeightsSumToMeasure)
{
    for (std::size_t n = 1; n <= 3; ++n) {
        const auto seg = gauss_segment(n);
        double w = 0.0;
        for (double x : seg.weights) w += x;
        EXPECT_NEAR(w, 2.0, 1e-15);
        const auto quad = gauss_quad(n);
        w = 0.0;
        for (double x : quad.weights) w += x;
        EXPECT_NEAR(w, 4.0, 1e-15);
    }
    EXPECT_THROW((void)gauss_segment(0), ArgumentError);
}
