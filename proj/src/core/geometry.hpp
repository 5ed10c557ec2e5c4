#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ifrac {

using Index = std::size_t;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

// ---------------------------------------------------------------------------
// Apertures and fractures
// ---------------------------------------------------------------------------

struct ConstantAperture {
    double epsilon = 0.0;
};

/// Thickness profile of an elliptical inclusion whose major axis lies on the
/// fracture path: eps(S) = minor * sqrt(1 - (|S - center| / (major/2))^2),
/// clamped at zero beyond the ellipse.
struct EllipticalAperture {
    Point center;
    double major = 0.0;
    double minor = 0.0;
};

using Aperture = std::variant<ConstantAperture, EllipticalAperture>;

double evaluate_aperture(const Aperture& aperture, const Point& at);
double max_aperture(const Aperture& aperture);

struct FractureSpec {
    /// Polyline along mesh edges. On an interval mesh a fracture is a single
    /// point and the path holds exactly one entry.
    std::vector<Point> path;
    Aperture aperture = ConstantAperture{1.0};
    double mobility_kf = 1.0;
};

/// Throws ArgumentError when the fracture violates its invariants.
void validate_fracture(const FractureSpec& fracture, int dimension);

struct FractureNetwork {
    std::vector<FractureSpec> fractures;
};

// ---------------------------------------------------------------------------
// Meshes
// ---------------------------------------------------------------------------

struct BoundaryFacet {
    std::vector<Index> vertices; // 1 vertex in 1D, 2 in 2D
    std::string tag;
};

/// Conforming mesh of segments (dimension 1) or counterclockwise quads
/// (dimension 2). Cell connectivity is stored flat.
struct Mesh {
    int dimension = 2;
    std::vector<Point> vertices;
    std::vector<Index> cell_vertices;
    std::vector<BoundaryFacet> boundary_facets;

    [[nodiscard]] std::size_t nodes_per_cell() const { return dimension == 1 ? 2 : 4; }
    [[nodiscard]] std::size_t num_cells() const { return cell_vertices.size() / nodes_per_cell(); }
    [[nodiscard]] std::span<const Index> cell(Index c) const
    {
        return {cell_vertices.data() + c * nodes_per_cell(), nodes_per_cell()};
    }
    [[nodiscard]] Point cell_centroid(Index c) const;
    [[nodiscard]] double diameter() const;
};

/// Throws GeometryError on out-of-range indices, degenerate cells, or
/// boundary facets not owned by exactly one cell.
void validate_mesh(const Mesh& mesh);

Mesh build_interval(std::size_t n, double length);
Mesh build_structured_quad(std::size_t nx, std::size_t ny, Point lower, Point upper);

/// Tensor-product quad mesh over explicit, strictly increasing grid lines.
Mesh build_tensor_quad(std::span<const double> xs, std::span<const double> ys);

/// Codimension-one entities of a mesh: edges in 2D, vertices in 1D.
struct MeshFacets {
    std::vector<std::array<Index, 2>> vertices; // 1D facets repeat their vertex
    std::vector<std::array<long, 2>> cells;     // second entry -1 on the boundary
    std::vector<std::vector<Index>> facets_of_vertex;
};

MeshFacets build_facets(const Mesh& mesh);

/// For every fracture, the ordered chain of facet ids (into build_facets())
/// covering its path. Throws ConformityError naming the fracture and segment
/// when a path leaves the mesh skeleton.
std::vector<std::vector<Index>> check_conformity(const Mesh& mesh, const FractureNetwork& network,
                                                 double tol);
std::vector<std::vector<Index>> check_conformity(const Mesh& mesh, const FractureNetwork& network);

// ---------------------------------------------------------------------------
// Split meshes
// ---------------------------------------------------------------------------

using NodePair = std::array<Index, 2>; // {side-1 copy, side-2 copy}

/// One facet of a fracture seen from both sides. In 1D the facet is a point:
/// is_point is set, node_pairs[1] repeats node_pairs[0] and length is 0.
struct InterfaceEdge {
    Index fracture_id = 0;
    std::array<NodePair, 2> node_pairs{};
    Point eta;
    double length = 0.0;
    std::array<Point, 2> endpoints{};
    std::array<double, 2> aperture_at_nodes{};
    std::array<double, 2> arc_length{}; // position of each endpoint along the path
    std::array<Index, 2> cells{};       // side-1 cell, side-2 cell
    bool is_point = false;
};

struct SplitMesh {
    Mesh base;
    std::vector<Index> subdomain_of_cell;
    std::size_t n_subdomains = 0;
    std::vector<InterfaceEdge> interface_edges;
    std::vector<Index> origin_of_vertex; // vertex id in the unsplit mesh
    FractureNetwork network;

    [[nodiscard]] std::size_t num_dofs() const { return base.vertices.size(); }
};

SplitMesh split_mesh(const Mesh& mesh, const FractureNetwork& network);
SplitMesh split_mesh(const Mesh& mesh, const FractureNetwork& network, double tol);

} // namespace ifrac
