#include "postprocess.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace ifrac {

namespace {

// Reference coordinates of `at` in quad c, or false when outside.
bool locate_in_quad(const Mesh& mesh, Index c, const Point& at, double tol, double& xi, double& eta)
{
    const auto nodes = mesh.cell(c);
    std::array<Point, 4> p{};
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (std::size_t a = 0; a < 4; ++a) {
        p[a] = mesh.vertices[nodes[a]];
        xmin = std::min(xmin, p[a].x);
        xmax = std::max(xmax, p[a].x);
        ymin = std::min(ymin, p[a].y);
        ymax = std::max(ymax, p[a].y);
    }
    if (at.x < xmin - tol || at.x > xmax + tol || at.y < ymin - tol || at.y > ymax + tol) return false;

    static constexpr std::array<double, 4> xn{-1.0, 1.0, 1.0, -1.0};
    static constexpr std::array<double, 4> yn{-1.0, -1.0, 1.0, 1.0};
    xi = 0.0;
    eta = 0.0;
    for (int it = 0; it < 30; ++it) {
        double fx = -at.x, fy = -at.y, j11 = 0.0, j12 = 0.0, j21 = 0.0, j22 = 0.0;
        for (std::size_t a = 0; a < 4; ++a) {
            const double n = 0.25 * (1.0 + xi * xn[a]) * (1.0 + eta * yn[a]);
            const double dxi = 0.25 * xn[a] * (1.0 + eta * yn[a]);
            const double deta = 0.25 * yn[a] * (1.0 + xi * xn[a]);
            fx += n * p[a].x;
            fy += n * p[a].y;
            j11 += dxi * p[a].x;
            j12 += deta * p[a].x;
            j21 += dxi * p[a].y;
            j22 += deta * p[a].y;
        }
        const double det = j11 * j22 - j12 * j21;
        const double dx = (j22 * fx - j12 * fy) / det;
        const double dy = (-j21 * fx + j11 * fy) / det;
        xi -= dx;
        eta -= dy;
        if (std::abs(dx) + std::abs(dy) < 1e-15) break;
    }
    const double slack = 1e-9;
    return std::abs(xi) <= 1.0 + slack && std::abs(eta) <= 1.0 + slack;
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

double evaluate_at(const SplitMesh& split, std::span<const double> solution, const Point& at)
{
    const Mesh& mesh = split.base;
    if (solution.size() != mesh.vertices.size()) throw ArgumentError("solution size does not match the mesh");
    const double diam = mesh.diameter();
    const double tol = 1e-12 * (diam > 0.0 ? diam : 1.0);

    std::map<Index, std::pair<double, int>> per_subdomain;
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const auto nodes = mesh.cell(c);
        double value = 0.0;
        if (mesh.dimension == 1) {
            const double x0 = mesh.vertices[nodes[0]].x;
            const double x1 = mesh.vertices[nodes[1]].x;
            if (at.x < x0 - tol || at.x > x1 + tol) continue;
            const double t = std::clamp((at.x - x0) / (x1 - x0), 0.0, 1.0);
            value = (1.0 - t) * solution[nodes[0]] + t * solution[nodes[1]];
        } else {
            double xi = 0.0, eta = 0.0;
            if (!locate_in_quad(mesh, c, at, tol, xi, eta)) continue;
            xi = std::clamp(xi, -1.0, 1.0);
            eta = std::clamp(eta, -1.0, 1.0);
            static constexpr std::array<double, 4> xn{-1.0, 1.0, 1.0, -1.0};
            static constexpr std::array<double, 4> yn{-1.0, -1.0, 1.0, 1.0};
            for (std::size_t a = 0; a < 4; ++a)
                value += 0.25 * (1.0 + xi * xn[a]) * (1.0 + eta * yn[a]) * solution[nodes[a]];
        }
        auto& slot = per_subdomain[split.subdomain_of_cell[c]];
        slot.first += value;
        slot.second += 1;
    }
    if (per_subdomain.empty())
        throw GeometryError("point (" + format_double(at.x) + ", " + format_double(at.y) + ") lies outside the mesh");
    double sum = 0.0;
    for (const auto& [sd, acc] : per_subdomain) sum += acc.first / acc.second;
    return sum / static_cast<double>(per_subdomain.size());
}

Profile sample_profile(const SplitMesh& split, std::span<const double> solution, const Point& from, const Point& to,
                       std::size_t n)
{
    if (n < 2) throw ArgumentError("a profile needs at least two samples");
    const double length = distance(from, to);
    if (!(length > 0.0)) throw ArgumentError("profile segment has zero length");
    Profile prof;
    prof.start = from;
    prof.end = to;
    prof.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        const Point at = i + 1 == n ? to : Point{from.x + t * (to.x - from.x), from.y + t * (to.y - from.y)};
        prof.samples.push_back({i + 1 == n ? length : t * length, at, evaluate_at(split, solution, at)});
    }
    return prof;
}

namespace {

Profile collect_fracture(const SplitMesh& split, std::span<const double> solution, std::size_t fracture_id,
                         bool jump)
{
    if (fracture_id >= split.network.fractures.size())
        throw ArgumentError("unknown fracture id " + std::to_string(fracture_id));
    if (solution.size() != split.num_dofs()) throw ArgumentError("solution size does not match the mesh");
    struct Acc {
        double s = 0.0;
        Point point;
        double sum = 0.0;
        int count = 0;
    };
    std::map<Index, Acc> by_vertex;
    for (const auto& e : split.interface_edges) {
        if (e.fracture_id != fracture_id) continue;
        const std::size_t nodes = e.is_point ? 1 : 2;
        for (std::size_t k = 0; k < nodes; ++k) {
            const auto [s1, s2] = e.node_pairs[k];
            const double v = jump ? solution[s2] - solution[s1] : 0.5 * (solution[s1] + solution[s2]);
            auto& acc = by_vertex[split.origin_of_vertex[s1]];
            acc.s = e.arc_length[k];
            acc.point = e.endpoints[k];
            acc.sum += v;
            acc.count += 1;
        }
    }
    Profile prof;
    const auto& path = split.network.fractures[fracture_id].path;
    prof.start = path.front();
    prof.end = path.back();
    for (const auto& [v, acc] : by_vertex) prof.samples.push_back({acc.s, acc.point, acc.sum / acc.count});
    std::sort(prof.samples.begin(), prof.samples.end(), [](const auto& a, const auto& b) { return a.s < b.s; });
    return prof;
}

} // namespace

Profile fracture_pressure(const SplitMesh& split, std::span<const double> solution, std::size_t fracture_id)
{
    return collect_fracture(split, solution, fracture_id, false);
}

Profile fracture_jump(const SplitMesh& split, std::span<const double> solution, std::size_t fracture_id)
{
    return collect_fracture(split, solution, fracture_id, true);
}

double boundary_flux(const SplitMesh& split, const LinearSystem& system, std::span<const double> solution,
                     const std::string& tag)
{
    const bool known = std::any_of(split.base.boundary_facets.begin(), split.base.boundary_facets.end(),
                                   [&](const BoundaryFacet& f) { return f.tag == tag; });
    if (!known) throw ArgumentError("unknown boundary tag '" + tag + "'");
    if (solution.size() != system.n_dofs) throw ArgumentError("solution size does not match the system");

    if (const auto it = system.dirichlet_dofs_by_tag.find(tag); it != system.dirichlet_dofs_by_tag.end()) {
        long double total = 0.0L;
        for (Index d : it->second) {
            total += system.raw_matrix.row_product(d, solution) - static_cast<long double>(system.interface_load[d]) -
                     system.neumann_load[d];
        }
        return static_cast<double>(total);
    }
    if (const auto it = system.neumann_totals.find(tag); it != system.neumann_totals.end()) return it->second;
    return 0.0;
}

ProfileError profile_error(const Profile& a, const Profile& b)
{
    if (a.size() != b.size() || a.size() < 2) throw ArgumentError("profiles have different sample counts");
    const double length = a.samples.back().s - a.samples.front().s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a.samples[i].s - b.samples[i].s) > 1e-12 * std::max(1.0, std::abs(length)))
            throw ArgumentError("profiles are sampled at different abscissae");
    }
    ProfileError err;
    double integral = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.samples[i].p - b.samples[i].p;
        err.max = std::max(err.max, std::abs(d));
        if (i > 0) {
            const double dp = a.samples[i - 1].p - b.samples[i - 1].p;
            integral += 0.5 * (a.samples[i].s - a.samples[i - 1].s) * (d * d + dp * dp);
        }
    }
    err.l2 = length > 0.0 ? std::sqrt(integral / length) : 0.0;
    return err;
}

void write_profile_csv(std::ostream& out, const Profile& profile)
{
    out << "s,x,y,p\n";
    for (const auto& s : profile.samples) {
        out << format_double(s.s) << ',' << format_double(s.point.x) << ',' << format_double(s.point.y) << ','
            << format_double(s.p) << '\n';
    }
}

} // namespace ifrac
