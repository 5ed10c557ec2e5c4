#include "assembly.hpp"

#include "errors.hpp"
#include "fem.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ifrac {

void validate(const InterfaceCoefficients& c)
{
    for (const auto* v : {&c.kappa_j, &c.r_j, &c.kappa_a, &c.r_a}) {
        for (double x : *v) {
            if (!(x >= 0.0) || !std::isfinite(x))
                throw ArgumentError("interface diffusion and reaction coefficients must be finite and non-negative");
        }
    }
    for (const auto* v : {&c.h_j, &c.h_a}) {
        for (double x : *v) {
            if (!std::isfinite(x)) throw ArgumentError("interface source terms must be finite");
        }
    }
}

InterfaceCoefficients fracture_to_coeffs(double k_f, NodalValues eps_at_nodes, double eps_floor)
{
    if (!(k_f > 0.0)) throw ArgumentError("fracture mobility must be positive");
    if (!(eps_floor > 0.0)) throw ArgumentError("aperture floor must be positive");
    InterfaceCoefficients c;
    for (std::size_t i = 0; i < 2; ++i) {
        if (eps_at_nodes[i] < 0.0) throw ArgumentError("aperture must be non-negative");
        const double eps = std::max(eps_at_nodes[i], eps_floor);
        c.kappa_j[i] = k_f * eps;
        c.r_a[i] = k_f / eps;
    }
    return c;
}

CoefficientProvider constant_coefficients(const InterfaceCoefficients& c)
{
    validate(c);
    return [c](const InterfaceEdge&) { return c; };
}

double default_eps_floor(const FractureSpec& fracture)
{
    const double m = max_aperture(fracture.aperture);
    return 1e-12 * (m > 0.0 ? m : 1.0);
}

CoefficientProvider thin_inclusion(const FractureSpec& fracture, double eps_floor)
{
    const double floor = eps_floor > 0.0 ? eps_floor : default_eps_floor(fracture);
    const double k_f = fracture.mobility_kf;
    return [k_f, floor](const InterfaceEdge& e) { return fracture_to_coeffs(k_f, e.aperture_at_nodes, floor); };
}

BoundaryFunction constant_value(double v)
{
    return [v](const Point&) { return v; };
}

namespace {

void scatter(std::vector<Triplet>& out, std::span<const Index> dofs, const ElementMatrix& m)
{
    for (std::size_t a = 0; a < m.n; ++a) {
        for (std::size_t b = 0; b < m.n; ++b) out.push_back({dofs[a], dofs[b], m(a, b)});
    }
}

// Local dof order (a1, a2, b1, b2): side-1/side-2 copies of both endpoints.
void add_interface_edge(std::vector<Triplet>& triplets, std::vector<double>& load, const InterfaceEdge& edge,
                        const InterfaceCoefficients& c)
{
    if (edge.is_point) {
        const std::array<Index, 2> dofs{edge.node_pairs[0][0], edge.node_pairs[0][1]};
        const std::array<double, 2> mean{0.5, 0.5};
        const std::array<double, 2> jump{-1.0, 1.0};
        ElementMatrix k;
        k.n = 2;
        for (std::size_t a = 0; a < 2; ++a) {
            for (std::size_t b = 0; b < 2; ++b)
                k(a, b) = c.r_j[0] * mean[a] * mean[b] + c.r_a[0] * jump[a] * jump[b];
        }
        scatter(triplets, dofs, k);
        for (std::size_t a = 0; a < 2; ++a) load[dofs[a]] += c.h_j[0] * mean[a] + c.h_a[0] * jump[a];
        return;
    }

    const std::array<Index, 4> dofs{edge.node_pairs[0][0], edge.node_pairs[0][1], edge.node_pairs[1][0],
                                    edge.node_pairs[1][1]};
    // mean_op[n] / jump_op[n]: weights of the 4 local dofs in {p} / [p] at endpoint n.
    static constexpr std::array<std::array<double, 4>, 2> mean_op{{{0.5, 0.5, 0.0, 0.0}, {0.0, 0.0, 0.5, 0.5}}};
    static constexpr std::array<std::array<double, 4>, 2> jump_op{{{-1.0, 1.0, 0.0, 0.0}, {0.0, 0.0, -1.0, 1.0}}};

    ElementMatrix mean_block = p1_segment_stiffness(edge.length, c.kappa_j);
    ElementMatrix jump_block = p1_segment_stiffness(edge.length, c.kappa_a);
    const ElementMatrix mean_mass = p1_segment_mass(edge.length, c.r_j);
    const ElementMatrix jump_mass = p1_segment_mass(edge.length, c.r_a);
    for (std::size_t i = 0; i < 4; ++i) {
        mean_block.entries[i] += mean_mass.entries[i];
        jump_block.entries[i] += jump_mass.entries[i];
    }

    ElementMatrix k;
    k.n = 4;
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) {
            double s = 0.0;
            for (std::size_t m = 0; m < 2; ++m) {
                for (std::size_t n = 0; n < 2; ++n)
                    s += mean_op[m][a] * mean_block(m, n) * mean_op[n][b] +
                         jump_op[m][a] * jump_block(m, n) * jump_op[n][b];
            }
            k(a, b) = s;
        }
    }
    scatter(triplets, dofs, k);

    // Edge load of a linearly varying density: L/6 (2 h_a + h_b, h_a + 2 h_b).
    const auto edge_load = [&](const NodalValues& h) {
        return std::array<double, 2>{edge.length / 6.0 * (2.0 * h[0] + h[1]), edge.length / 6.0 * (h[0] + 2.0 * h[1])};
    };
    const auto fj = edge_load(c.h_j);
    const auto fa = edge_load(c.h_a);
    for (std::size_t a = 0; a < 4; ++a) {
        double s = 0.0;
        for (std::size_t m = 0; m < 2; ++m) s += mean_op[m][a] * fj[m] + jump_op[m][a] * fa[m];
        load[dofs[a]] += s;
    }
}

} // namespace

LinearSystem assemble(const SplitMesh& split, std::span<const double> k_per_subdomain,
                      std::span<const CoefficientProvider> coeffs_per_fracture, const BoundaryConditionSet& bcs)
{
    if (k_per_subdomain.size() != split.n_subdomains)
        throw ConfigError("expected " + std::to_string(split.n_subdomains) + " subdomain mobilities, got " +
                          std::to_string(k_per_subdomain.size()));
    std::vector<double> k_cell(split.subdomain_of_cell.size());
    for (std::size_t c = 0; c < k_cell.size(); ++c) k_cell[c] = k_per_subdomain[split.subdomain_of_cell[c]];
    return assemble_cellwise(split, k_cell, coeffs_per_fracture, bcs);
}

LinearSystem assemble_cellwise(const SplitMesh& split, std::span<const double> k_per_cell,
                               std::span<const CoefficientProvider> coeffs_per_fracture,
                               const BoundaryConditionSet& bcs)
{
    const Mesh& mesh = split.base;
    const std::size_t n = mesh.vertices.size();
    if (k_per_cell.size() != mesh.num_cells()) throw ConfigError("one mobility per cell is required");
    for (double k : k_per_cell) {
        if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("subdomain mobilities must be positive and finite");
    }
    if (coeffs_per_fracture.size() != split.network.fractures.size())
        throw ConfigError("expected interface coefficients for " + std::to_string(split.network.fractures.size()) +
                          " fractures, got " + std::to_string(coeffs_per_fracture.size()));
    for (const auto& provider : coeffs_per_fracture) {
        if (!provider) throw ConfigError("missing interface coefficients for a fracture");
    }

    std::set<std::string> tags;
    for (const auto& bf : mesh.boundary_facets) tags.insert(bf.tag);
    if (bcs.dirichlet.empty()) throw ConfigError("at least one Dirichlet boundary tag is required");
    for (const auto& [tag, g] : bcs.dirichlet) {
        if (!tags.contains(tag)) throw ConfigError("unknown boundary tag '" + tag + "' in Dirichlet conditions");
        if (bcs.neumann.contains(tag)) throw ConfigError("boundary tag '" + tag + "' is both Dirichlet and Neumann");
        if (!g) throw ConfigError("missing Dirichlet data for tag '" + tag + "'");
    }
    for (const auto& [tag, h] : bcs.neumann) {
        if (!tags.contains(tag)) throw ConfigError("unknown boundary tag '" + tag + "' in Neumann conditions");
        if (!h) throw ConfigError("missing Neumann data for tag '" + tag + "'");
    }

    LinearSystem sys;
    sys.n_dofs = n;
    sys.interface_load.assign(n, 0.0);
    sys.neumann_load.assign(n, 0.0);

    std::vector<Triplet> triplets;
    triplets.reserve(mesh.num_cells() * mesh.nodes_per_cell() * mesh.nodes_per_cell() +
                     16 * split.interface_edges.size());
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const auto nodes = mesh.cell(c);
        if (mesh.dimension == 1) {
            const double len = mesh.vertices[nodes[1]].x - mesh.vertices[nodes[0]].x;
            scatter(triplets, nodes, p1_segment_stiffness(len, k_per_cell[c]));
        } else {
            const std::array<Point, 4> corners{mesh.vertices[nodes[0]], mesh.vertices[nodes[1]],
                                               mesh.vertices[nodes[2]], mesh.vertices[nodes[3]]};
            scatter(triplets, nodes, q1_stiffness(corners, k_per_cell[c]));
        }
    }

    for (const auto& edge : split.interface_edges) {
        const InterfaceCoefficients coeffs = coeffs_per_fracture[edge.fracture_id](edge);
        validate(coeffs);
        add_interface_edge(triplets, sys.interface_load, edge, coeffs);
    }

    for (const auto& bf : mesh.boundary_facets) {
        const auto it = bcs.neumann.find(bf.tag);
        if (it == bcs.neumann.end()) continue;
        double total = 0.0;
        if (mesh.dimension == 1) {
            const double h = it->second(mesh.vertices[bf.vertices[0]]);
            sys.neumann_load[bf.vertices[0]] += h;
            total = h;
        } else {
            const Point& a = mesh.vertices[bf.vertices[0]];
            const Point& b = mesh.vertices[bf.vertices[1]];
            const double ha = it->second(a);
            const double hb = it->second(b);
            const double len = distance(a, b);
            const double fa = len / 6.0 * (2.0 * ha + hb);
            const double fb = len / 6.0 * (ha + 2.0 * hb);
            sys.neumann_load[bf.vertices[0]] += fa;
            sys.neumann_load[bf.vertices[1]] += fb;
            total = fa + fb;
        }
        sys.neumann_totals[bf.tag] += total;
    }

    std::vector<char> constrained(n, 0);
    std::vector<double> g_value(n, 0.0);
    for (const auto& [tag, g] : bcs.dirichlet) {
        auto& owned = sys.dirichlet_dofs_by_tag[tag];
        for (const auto& bf : mesh.boundary_facets) {
            if (bf.tag != tag) continue;
            for (Index v : bf.vertices) {
                if (constrained[v]) continue;
                constrained[v] = 1;
                g_value[v] = g(mesh.vertices[v]);
                if (!std::isfinite(g_value[v])) throw ConfigError("non-finite Dirichlet value on tag '" + tag + "'");
                owned.push_back(v);
            }
        }
    }
    for (Index v = 0; v < n; ++v) {
        if (constrained[v]) {
            sys.dirichlet_dofs.push_back(v);
            sys.dirichlet_values.push_back(g_value[v]);
        }
    }

    sys.raw_matrix = SparseMatrix::from_triplets(n, triplets);
    sys.matrix = sys.raw_matrix;
    sys.rhs.resize(n);
    for (Index i = 0; i < n; ++i) sys.rhs[i] = sys.interface_load[i] + sys.neumann_load[i];

    const auto offsets = sys.matrix.row_offsets();
    const auto cols = sys.matrix.column_indices();
    auto vals = sys.matrix.values();
    auto low = sys.matrix.low_values();
    for (Index i = 0; i < n; ++i) {
        long double rhs = sys.rhs[i];
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
            const Index j = cols[k];
            if (constrained[i]) {
                vals[k] = (j == i) ? 1.0 : 0.0;
                low[k] = 0.0;
            } else if (constrained[j]) {
                rhs -= (static_cast<long double>(vals[k]) + low[k]) * g_value[j];
                vals[k] = 0.0;
                low[k] = 0.0;
            }
        }
        sys.rhs[i] = constrained[i] ? g_value[i] : static_cast<double>(rhs);
    }
    return sys;
}

} // namespace ifrac
