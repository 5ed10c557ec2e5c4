#include "geometry.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace ifrac {

namespace {

std::string describe(const Point& p)
{
    std::ostringstream os;
    os << '(' << p.x << ", " << p.y << ')';
    return os.str();
}

double cross(const Point& o, const Point& a, const Point& b)
{
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::uint64_t edge_key(Index a, Index b)
{
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32U) | static_cast<std::uint64_t>(b);
}

} // namespace

double distance(const Point& a, const Point& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

double evaluate_aperture(const Aperture& aperture, const Point& at)
{
    return std::visit(
        [&](const auto& a) -> double {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, ConstantAperture>) {
                return a.epsilon;
            } else {
                const double semi_major = 0.5 * a.major;
                const double r = distance(at, a.center) / semi_major;
                if (r >= 1.0) return 0.0;
                return a.minor * std::sqrt(1.0 - r * r);
            }
        },
        aperture);
}

double max_aperture(const Aperture& aperture)
{
    if (const auto* c = std::get_if<ConstantAperture>(&aperture)) return c->epsilon;
    return std::get<EllipticalAperture>(aperture).minor;
}

void validate_fracture(const FractureSpec& fracture, int dimension)
{
    if (!(fracture.mobility_kf > 0.0) || !std::isfinite(fracture.mobility_kf))
        throw ArgumentError("fracture mobility must be positive and finite");
    if (const auto* c = std::get_if<ConstantAperture>(&fracture.aperture)) {
        if (!(c->epsilon > 0.0) || !std::isfinite(c->epsilon))
            throw ArgumentError("constant aperture must be positive and finite");
    } else {
        const auto& e = std::get<EllipticalAperture>(fracture.aperture);
        if (!(e.major > 0.0) || !(e.minor > 0.0))
            throw ArgumentError("elliptical aperture axes must be positive");
    }
    for (const auto& p : fracture.path) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw ArgumentError("fracture path has a non-finite coordinate");
    }
    if (dimension == 1) {
        if (fracture.path.size() != 1)
            throw ArgumentError("a fracture on an interval mesh is a single point");
        return;
    }
    if (fracture.path.size() < 2) throw ArgumentError("fracture path needs at least two points");
    for (std::size_t k = 1; k < fracture.path.size(); ++k) {
        if (fracture.path[k] == fracture.path[k - 1])
            throw ArgumentError("fracture path has repeated consecutive points");
    }
}

// ---------------------------------------------------------------------------

Point Mesh::cell_centroid(Index c) const
{
    Point sum;
    const auto nodes = cell(c);
    for (Index v : nodes) {
        sum.x += vertices[v].x;
        sum.y += vertices[v].y;
    }
    const double n = static_cast<double>(nodes.size());
    return {sum.x / n, sum.y / n};
}

double Mesh::diameter() const
{
    if (vertices.empty()) return 0.0;
    double xmin = vertices.front().x, xmax = xmin, ymin = vertices.front().y, ymax = ymin;
    for (const auto& p : vertices) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    return std::hypot(xmax - xmin, ymax - ymin);
}

void validate_mesh(const Mesh& mesh)
{
    if (mesh.dimension != 1 && mesh.dimension != 2)
        throw GeometryError("mesh dimension must be 1 or 2");
    if (mesh.cell_vertices.size() % mesh.nodes_per_cell() != 0)
        throw GeometryError("cell connectivity size is not a multiple of the cell size");
    for (Index v : mesh.cell_vertices) {
        if (v >= mesh.vertices.size()) throw GeometryError("cell references a missing vertex");
    }
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const auto nodes = mesh.cell(c);
        if (mesh.dimension == 1) {
            if (!(mesh.vertices[nodes[1]].x > mesh.vertices[nodes[0]].x))
                throw GeometryError("segment cell " + std::to_string(c) + " has non-positive length");
        } else {
            const auto& p = mesh.vertices;
            const double area2 = cross(p[nodes[0]], p[nodes[1]], p[nodes[2]]) +
                                 cross(p[nodes[0]], p[nodes[2]], p[nodes[3]]);
            if (!(area2 > 0.0))
                throw GeometryError("quad cell " + std::to_string(c) + " is degenerate or clockwise");
        }
    }
    const MeshFacets facets = build_facets(mesh);
    std::unordered_map<std::uint64_t, Index> lookup;
    for (Index f = 0; f < facets.vertices.size(); ++f)
        lookup.emplace(edge_key(facets.vertices[f][0], facets.vertices[f][1]), f);
    for (const auto& bf : mesh.boundary_facets) {
        if (bf.vertices.size() != static_cast<std::size_t>(mesh.dimension))
            throw GeometryError("boundary facet has the wrong number of vertices");
        for (Index v : bf.vertices) {
            if (v >= mesh.vertices.size())
                throw GeometryError("boundary facet references a missing vertex");
        }
        const Index a = bf.vertices.front();
        const Index b = bf.vertices.back();
        const auto it = lookup.find(edge_key(a, b));
        if (it == lookup.end() || facets.cells[it->second][1] != -1)
            throw GeometryError("boundary facet tagged '" + bf.tag + "' is not owned by exactly one cell");
    }
}

Mesh build_interval(std::size_t n, double length)
{
    if (n == 0) throw ArgumentError("interval mesh needs at least one cell");
    if (!(length > 0.0) || !std::isfinite(length)) throw ArgumentError("interval length must be positive");
    Mesh mesh;
    mesh.dimension = 1;
    mesh.vertices.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        mesh.vertices[i] = {i == n ? length : length * static_cast<double>(i) / static_cast<double>(n), 0.0};
    mesh.cell_vertices.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        mesh.cell_vertices.push_back(i);
        mesh.cell_vertices.push_back(i + 1);
    }
    mesh.boundary_facets.push_back({{0}, "left"});
    mesh.boundary_facets.push_back({{n}, "right"});
    return mesh;
}

Mesh build_tensor_quad(std::span<const double> xs, std::span<const double> ys)
{
    if (xs.size() < 2 || ys.size() < 2) throw ArgumentError("tensor mesh needs at least two grid lines per axis");
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) throw ArgumentError("x grid lines must be strictly increasing");
    }
    for (std::size_t j = 1; j < ys.size(); ++j) {
        if (!(ys[j] > ys[j - 1])) throw ArgumentError("y grid lines must be strictly increasing");
    }
    const std::size_t nx = xs.size() - 1;
    const std::size_t ny = ys.size() - 1;
    const auto vid = [&](std::size_t i, std::size_t j) { return j * (nx + 1) + i; };

    Mesh mesh;
    mesh.dimension = 2;
    mesh.vertices.reserve((nx + 1) * (ny + 1));
    for (std::size_t j = 0; j <= ny; ++j) {
        for (std::size_t i = 0; i <= nx; ++i) mesh.vertices.push_back({xs[i], ys[j]});
    }
    mesh.cell_vertices.reserve(4 * nx * ny);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            mesh.cell_vertices.insert(mesh.cell_vertices.end(),
                                      {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    }
    for (std::size_t i = 0; i < nx; ++i) mesh.boundary_facets.push_back({{vid(i, 0), vid(i + 1, 0)}, "bottom"});
    for (std::size_t j = 0; j < ny; ++j) mesh.boundary_facets.push_back({{vid(nx, j), vid(nx, j + 1)}, "right"});
    for (std::size_t i = nx; i > 0; --i) mesh.boundary_facets.push_back({{vid(i, ny), vid(i - 1, ny)}, "top"});
    for (std::size_t j = ny; j > 0; --j) mesh.boundary_facets.push_back({{vid(0, j), vid(0, j - 1)}, "left"});
    return mesh;
}

Mesh build_structured_quad(std::size_t nx, std::size_t ny, Point lower, Point upper)
{
    if (nx == 0 || ny == 0) throw ArgumentError("structured mesh needs at least one cell per direction");
    if (!(upper.x > lower.x) || !(upper.y > lower.y))
        throw ArgumentError("upper corner must exceed lower corner componentwise");
    const auto lines = [](std::size_t n, double lo, double hi) {
        std::vector<double> v(n + 1);
        for (std::size_t i = 0; i <= n; ++i)
            v[i] = i == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
        return v;
    };
    const auto xs = lines(nx, lower.x, upper.x);
    const auto ys = lines(ny, lower.y, upper.y);
    return build_tensor_quad(xs, ys);
}

MeshFacets build_facets(const Mesh& mesh)
{
    MeshFacets out;
    out.facets_of_vertex.resize(mesh.vertices.size());
    if (mesh.dimension == 1) {
        out.vertices.resize(mesh.vertices.size());
        out.cells.assign(mesh.vertices.size(), {-1, -1});
        for (Index v = 0; v < mesh.vertices.size(); ++v) {
            out.vertices[v] = {v, v};
            out.facets_of_vertex[v].push_back(v);
        }
        for (Index c = 0; c < mesh.num_cells(); ++c) {
            for (Index v : mesh.cell(c)) {
                auto& slot = out.cells[v];
                (slot[0] < 0 ? slot[0] : slot[1]) = static_cast<long>(c);
            }
        }
        return out;
    }
    std::unordered_map<std::uint64_t, Index> lookup;
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const auto nodes = mesh.cell(c);
        for (std::size_t k = 0; k < 4; ++k) {
            const Index a = nodes[k];
            const Index b = nodes[(k + 1) % 4];
            const auto [it, inserted] = lookup.emplace(edge_key(a, b), out.vertices.size());
            if (inserted) {
                out.vertices.push_back({a, b});
                out.cells.push_back({static_cast<long>(c), -1});
                out.facets_of_vertex[a].push_back(it->second);
                out.facets_of_vertex[b].push_back(it->second);
            } else {
                auto& slot = out.cells[it->second];
                if (slot[1] >= 0) throw GeometryError("edge shared by more than two cells");
                slot[1] = static_cast<long>(c);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Conformity
// ---------------------------------------------------------------------------

namespace {

struct FractureTrace {
    std::vector<Index> facets;
    std::vector<Index> vertices; // walk order; facets[k] joins vertices[k] and vertices[k+1]
};

Index find_vertex(const Mesh& mesh, const Point& p, double tol)
{
    Index best = mesh.vertices.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (Index v = 0; v < mesh.vertices.size(); ++v) {
        const double d = distance(mesh.vertices[v], p);
        if (d < best_d) {
            best_d = d;
            best = v;
        }
    }
    return best_d <= tol ? best : mesh.vertices.size();
}

std::vector<FractureTrace> trace_network(const Mesh& mesh, const MeshFacets& facets,
                                         const FractureNetwork& network, double tol)
{
    std::vector<FractureTrace> traces;
    traces.reserve(network.fractures.size());
    for (std::size_t j = 0; j < network.fractures.size(); ++j) {
        const auto& fracture = network.fractures[j];
        validate_fracture(fracture, mesh.dimension);
        const std::string who = "fracture " + std::to_string(j);
        FractureTrace trace;

        if (mesh.dimension == 1) {
            const Index v = find_vertex(mesh, fracture.path.front(), tol);
            if (v == mesh.vertices.size())
                throw ConformityError(who + ": point " + describe(fracture.path.front()) + " is not a mesh vertex");
            if (facets.cells[v][1] < 0)
                throw ConformityError(who + ": point " + describe(fracture.path.front()) + " lies on the boundary");
            trace.facets.push_back(v);
            trace.vertices.push_back(v);
            traces.push_back(std::move(trace));
            continue;
        }

        for (std::size_t k = 0; k + 1 < fracture.path.size(); ++k) {
            const Point& from = fracture.path[k];
            const Point& to = fracture.path[k + 1];
            const std::string where = who + " segment " + std::to_string(k);
            const double len = distance(from, to);
            const Point dir{(to.x - from.x) / len, (to.y - from.y) / len};

            Index current = find_vertex(mesh, from, tol);
            if (current == mesh.vertices.size())
                throw ConformityError(where + ": start " + describe(from) + " is not a mesh vertex");
            if (trace.vertices.empty()) trace.vertices.push_back(current);
            double pos = 0.0;
            while (distance(mesh.vertices[current], to) > tol) {
                Index next_facet = facets.vertices.size();
                Index next_vertex = 0;
                double next_pos = std::numeric_limits<double>::infinity();
                for (Index f : facets.facets_of_vertex[current]) {
                    const auto& fv = facets.vertices[f];
                    const Index w = fv[0] == current ? fv[1] : fv[0];
                    const Point& q = mesh.vertices[w];
                    const double t = (q.x - from.x) * dir.x + (q.y - from.y) * dir.y;
                    const double off = std::abs((q.x - from.x) * dir.y - (q.y - from.y) * dir.x);
                    if (off <= tol && t > pos + tol && t <= len + tol && t < next_pos) {
                        next_pos = t;
                        next_facet = f;
                        next_vertex = w;
                    }
                }
                if (next_facet == facets.vertices.size())
                    throw ConformityError(where + " crosses a cell interior after " +
                                          describe(mesh.vertices[current]));
                trace.facets.push_back(next_facet);
                trace.vertices.push_back(next_vertex);
                current = next_vertex;
                pos = next_pos;
            }
        }
        traces.push_back(std::move(trace));
    }
    return traces;
}

double default_tolerance(const Mesh& mesh)
{
    const double d = mesh.diameter();
    return 1e-12 * (d > 0.0 ? d : 1.0);
}

} // namespace

std::vector<std::vector<Index>> check_conformity(const Mesh& mesh, const FractureNetwork& network, double tol)
{
    const MeshFacets facets = build_facets(mesh);
    auto traces = trace_network(mesh, facets, network, tol);
    std::vector<std::vector<Index>> out;
    out.reserve(traces.size());
    for (auto& t : traces) out.push_back(std::move(t.facets));
    return out;
}

std::vector<std::vector<Index>> check_conformity(const Mesh& mesh, const FractureNetwork& network)
{
    return check_conformity(mesh, network, default_tolerance(mesh));
}

// ---------------------------------------------------------------------------
// Splitting
// ---------------------------------------------------------------------------

SplitMesh split_mesh(const Mesh& mesh, const FractureNetwork& network)
{
    return split_mesh(mesh, network, default_tolerance(mesh));
}

SplitMesh split_mesh(const Mesh& mesh, const FractureNetwork& network, double tol)
{
    validate_mesh(mesh);
    const MeshFacets facets = build_facets(mesh);
    const auto traces = trace_network(mesh, facets, network, tol);
    const std::size_t n_cells = mesh.num_cells();
    const std::size_t npc = mesh.nodes_per_cell();

    std::vector<long> fracture_of_facet(facets.vertices.size(), -1);
    for (std::size_t j = 0; j < traces.size(); ++j) {
        for (Index f : traces[j].facets) {
            if (fracture_of_facet[f] >= 0)
                throw ConformityError("fractures " + std::to_string(fracture_of_facet[f]) + " and " +
                                      std::to_string(j) + " overlap along a mesh facet");
            if (facets.cells[f][1] < 0)
                throw TopologyError("fracture " + std::to_string(j) + " runs along the domain boundary");
            fracture_of_facet[f] = static_cast<long>(j);
        }
    }

    // Every fracture tip must rest on the outer boundary or on another fracture.
    if (mesh.dimension == 2) {
        for (Index v = 0; v < mesh.vertices.size(); ++v) {
            std::size_t marked = 0;
            bool on_boundary = false;
            for (Index f : facets.facets_of_vertex[v]) {
                if (fracture_of_facet[f] >= 0) ++marked;
                if (facets.cells[f][1] < 0) on_boundary = true;
            }
            if (marked == 1 && !on_boundary)
                throw TopologyError("a fracture terminates at " + describe(mesh.vertices[v]) +
                                    " inside a subdomain; fully embedded tips are not supported");
        }
    }

    SplitMesh out;
    out.network = network;

    // Flood fill over cell adjacency with fracture facets removed.
    std::vector<std::vector<Index>> neighbours(n_cells);
    for (Index f = 0; f < facets.vertices.size(); ++f) {
        const auto [c0, c1] = facets.cells[f];
        if (c1 < 0 || fracture_of_facet[f] >= 0) continue;
        neighbours[static_cast<Index>(c0)].push_back(static_cast<Index>(c1));
        neighbours[static_cast<Index>(c1)].push_back(static_cast<Index>(c0));
    }
    constexpr Index unlabeled = std::numeric_limits<Index>::max();
    out.subdomain_of_cell.assign(n_cells, unlabeled);
    for (Index seed = 0; seed < n_cells; ++seed) {
        if (out.subdomain_of_cell[seed] != unlabeled) continue;
        const Index label = out.n_subdomains++;
        std::queue<Index> frontier;
        frontier.push(seed);
        out.subdomain_of_cell[seed] = label;
        while (!frontier.empty()) {
            const Index c = frontier.front();
            frontier.pop();
            for (Index nb : neighbours[c]) {
                if (out.subdomain_of_cell[nb] == unlabeled) {
                    out.subdomain_of_cell[nb] = label;
                    frontier.push(nb);
                }
            }
        }
    }

    // Duplicate fracture vertices: one copy per group of incident cells that
    // stay connected around the vertex once fracture facets are cut.
    std::vector<std::vector<Index>> cells_of_vertex(mesh.vertices.size());
    for (Index c = 0; c < n_cells; ++c) {
        for (Index v : mesh.cell(c)) cells_of_vertex[v].push_back(c);
    }
    out.base.dimension = mesh.dimension;
    out.base.vertices = mesh.vertices;
    out.base.cell_vertices = mesh.cell_vertices;
    out.origin_of_vertex.resize(mesh.vertices.size());
    std::iota(out.origin_of_vertex.begin(), out.origin_of_vertex.end(), Index{0});

    for (Index v = 0; v < mesh.vertices.size(); ++v) {
        const bool touches_fracture = std::any_of(facets.facets_of_vertex[v].begin(), facets.facets_of_vertex[v].end(),
                                                  [&](Index f) { return fracture_of_facet[f] >= 0; });
        if (!touches_fracture) continue;
        const auto& incident = cells_of_vertex[v];
        std::vector<std::size_t> parent(incident.size());
        std::iota(parent.begin(), parent.end(), std::size_t{0});
        const auto find = [&](std::size_t i) {
            while (parent[i] != i) i = parent[i] = parent[parent[i]];
            return i;
        };
        const auto local = [&](long c) {
            return static_cast<std::size_t>(
                std::find(incident.begin(), incident.end(), static_cast<Index>(c)) - incident.begin());
        };
        for (Index f : facets.facets_of_vertex[v]) {
            const auto [c0, c1] = facets.cells[f];
            if (c1 < 0 || fracture_of_facet[f] >= 0) continue;
            const std::size_t a = find(local(c0));
            const std::size_t b = find(local(c1));
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
        // incident is sorted by cell id, so roots appear in order of their smallest cell.
        std::vector<std::size_t> roots;
        for (std::size_t i = 0; i < incident.size(); ++i) {
            const std::size_t r = find(i);
            if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
        }
        for (std::size_t g = 1; g < roots.size(); ++g) {
            const Index copy = out.base.vertices.size();
            out.base.vertices.push_back(mesh.vertices[v]);
            out.origin_of_vertex.push_back(v);
            for (std::size_t i = 0; i < incident.size(); ++i) {
                if (find(i) != roots[g]) continue;
                const Index c = incident[i];
                for (std::size_t k = 0; k < npc; ++k) {
                    if (mesh.cell_vertices[c * npc + k] == v) out.base.cell_vertices[c * npc + k] = copy;
                }
            }
        }
    }

    const auto copy_in_cell = [&](Index cell, Index original) {
        for (std::size_t k = 0; k < npc; ++k) {
            if (mesh.cell_vertices[cell * npc + k] == original) return out.base.cell_vertices[cell * npc + k];
        }
        throw GeometryError("vertex is not part of the requested cell");
    };

    std::unordered_map<std::uint64_t, Index> facet_lookup;
    for (Index f = 0; f < facets.vertices.size(); ++f)
        facet_lookup.emplace(edge_key(facets.vertices[f][0], facets.vertices[f][1]), f);
    out.base.boundary_facets.reserve(mesh.boundary_facets.size());
    for (const auto& bf : mesh.boundary_facets) {
        const Index f = facet_lookup.at(edge_key(bf.vertices.front(), bf.vertices.back()));
        const auto owner = static_cast<Index>(facets.cells[f][0]);
        BoundaryFacet copy{{}, bf.tag};
        for (Index v : bf.vertices) copy.vertices.push_back(copy_in_cell(owner, v));
        out.base.boundary_facets.push_back(std::move(copy));
    }

    for (std::size_t j = 0; j < traces.size(); ++j) {
        const auto& trace = traces[j];
        const auto& fracture = network.fractures[j];
        double arc = 0.0;
        for (std::size_t k = 0; k < trace.facets.size(); ++k) {
            const Index f = trace.facets[k];
            auto c0 = static_cast<Index>(facets.cells[f][0]);
            auto c1 = static_cast<Index>(facets.cells[f][1]);
            const auto rank = [&](Index c) { return std::pair{out.subdomain_of_cell[c], c}; };
            if (rank(c1) < rank(c0)) std::swap(c0, c1);

            InterfaceEdge edge;
            edge.fracture_id = j;
            edge.cells = {c0, c1};
            const Point side = [&] {
                const Point p0 = mesh.cell_centroid(c0);
                const Point p1 = mesh.cell_centroid(c1);
                return Point{p1.x - p0.x, p1.y - p0.y};
            }();

            if (mesh.dimension == 1) {
                const Index v = trace.vertices[k];
                edge.is_point = true;
                edge.node_pairs[0] = {copy_in_cell(c0, v), copy_in_cell(c1, v)};
                edge.node_pairs[1] = edge.node_pairs[0];
                edge.endpoints = {mesh.vertices[v], mesh.vertices[v]};
                edge.eta = {side.x > 0.0 ? 1.0 : -1.0, 0.0};
                edge.length = 0.0;
                edge.arc_length = {0.0, 0.0};
            } else {
                const Index a = trace.vertices[k];
                const Index b = trace.vertices[k + 1];
                const Point& pa = mesh.vertices[a];
                const Point& pb = mesh.vertices[b];
                edge.length = distance(pa, pb);
                edge.node_pairs[0] = {copy_in_cell(c0, a), copy_in_cell(c1, a)};
                edge.node_pairs[1] = {copy_in_cell(c0, b), copy_in_cell(c1, b)};
                edge.endpoints = {pa, pb};
                Point normal{-(pb.y - pa.y) / edge.length, (pb.x - pa.x) / edge.length};
                if (normal.x * side.x + normal.y * side.y < 0.0) normal = {-normal.x, -normal.y};
                edge.eta = normal;
                edge.arc_length = {arc, arc + edge.length};
                arc += edge.length;
            }
            edge.aperture_at_nodes = {evaluate_aperture(fracture.aperture, edge.endpoints[0]),
                                      evaluate_aperture(fracture.aperture, edge.endpoints[1])};
            out.interface_edges.push_back(edge);
        }
    }
    return out;
}

} // namespace ifrac
