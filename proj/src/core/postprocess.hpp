#pragma once

#include "assembly.hpp"
#include "geometry.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ifrac {

struct ProfileSample {
    double s = 0.0; // arc length from the profile start
    Point point;
    double p = 0.0;
};

struct Profile {
    std::vector<ProfileSample> samples;
    Point start;
    Point end;

    [[nodiscard]] std::size_t size() const { return samples.size(); }
};

/// Value of the nodal solution at a point: bilinear (or linear) interpolation
/// in every containing cell, averaged per subdomain and then across
/// subdomains, so points on an interface get the mean of the side limits.
/// Throws GeometryError when no cell contains the point.
double evaluate_at(const SplitMesh& split, std::span<const double> solution, const Point& at);

/// n equispaced samples from `from` to `to` (inclusive).
Profile sample_profile(const SplitMesh& split, std::span<const double> solution, const Point& from, const Point& to,
                       std::size_t n);

/// Fracture pressure {p} at every vertex of fracture j, ordered along its path.
Profile fracture_pressure(const SplitMesh& split, std::span<const double> solution, std::size_t fracture_id);

/// Jump [p] = side 2 - side 1 at every vertex of fracture j, ordered along its path.
Profile fracture_jump(const SplitMesh& split, std::span<const double> solution, std::size_t fracture_id);

/// Net inflow through a boundary tag recovered from the residual of the
/// un-eliminated system. Dirichlet tags return sum over their dofs of
/// (A_raw p - f_interface - f_neumann); Neumann tags return the integral of h.
/// Inflow is positive, so the values of all tags sum to zero for a converged
/// solution without interface sources.
double boundary_flux(const SplitMesh& split, const LinearSystem& system, std::span<const double> solution,
                     const std::string& tag);

struct ProfileError {
    double l2 = 0.0;
    double max = 0.0;
};

/// Trapezoid-weighted L2 norm (normalized by the profile length) and max norm
/// of a - b. Both profiles must share their abscissae.
ProfileError profile_error(const Profile& a, const Profile& b);

/// CSV with header `s,x,y,p`, one row per sample, 17 significant digits.
void write_profile_csv(std::ostream& out, const Profile& profile);

} // namespace ifrac
