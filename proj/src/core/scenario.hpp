#pragma once

#include "assembly.hpp"
#include "geometry.hpp"
#include "postprocess.hpp"
#include "sparse.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ifrac {

/// Affine boundary datum c + cx x + cy y.
struct BoundaryValue {
    double c = 0.0;
    double cx = 0.0;
    double cy = 0.0;

    [[nodiscard]] double operator()(const Point& p) const { return c + cx * p.x + cy * p.y; }
};

struct BoundarySpec {
    enum class Kind { dirichlet, neumann };
    Kind kind = Kind::neumann;
    BoundaryValue value;
};

struct ProfileRequest {
    std::string name;
    Point from;
    Point to;
    std::size_t samples = 101;
};

struct FractureEntry {
    FractureSpec spec;
    /// When set, replaces the thin-inclusion coefficients derived from the
    /// aperture and mobility.
    std::optional<InterfaceCoefficients> coefficients;
    std::string source;
};

struct Scenario {
    std::string name;
    std::string description;
    int dimension = 2;
    Point lower{0.0, 0.0};
    Point upper{1.0, 1.0}; // 1D: upper.x is the interval length
    std::size_t nx = 32;
    std::size_t ny = 32;
    std::vector<double> mobilities{1.0}; // one value or one per subdomain
    std::vector<FractureEntry> fractures;
    std::map<std::string, BoundarySpec> boundary;
    std::vector<ProfileRequest> profiles;
    SolverOptions solver;
    double eps_floor = 0.0; // 0 selects the per-fracture default

    void set_resolution(std::size_t n);
    [[nodiscard]] FractureNetwork network() const;
    [[nodiscard]] BoundaryConditionSet boundary_conditions() const;
};

/// Throws ConfigError naming the offending field; unknown keys are rejected.
Scenario parse_scenario(const nlohmann::json& config);
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json to_json(const Scenario& scenario);

struct BuiltinInfo {
    std::string name;
    std::string description;
};

const std::vector<BuiltinInfo>& list_builtins();
bool is_builtin(const std::string& name);
/// Empty variant selects the default one. Throws ConfigError on unknown names.
Scenario builtin_scenario(const std::string& name, const std::string& variant = {});

/// The six fractures of the regular 2D benchmark network on the unit square.
std::vector<FractureSpec> regular_network(double aperture, double kf);

struct NamedProfile {
    std::string name;
    Profile profile;
};

struct RunResult {
    Scenario scenario;
    SplitMesh split;
    LinearSystem system;
    std::vector<double> pressure;
    SolveReport report;
    std::vector<NamedProfile> profiles;
    std::vector<Profile> fracture_pressures;
    std::vector<Profile> fracture_jumps;
    std::map<std::string, double> boundary_fluxes;
    double inflow = 0.0;
    double mass_balance_defect = 0.0;
};

Mesh build_scenario_mesh(const Scenario& scenario);

/// Builds, splits, assembles and solves. Throws ConfigError for invalid
/// scenarios and SolverError when the linear solve fails.
RunResult run_scenario(const Scenario& scenario);

nlohmann::json summary_json(const RunResult& result);

/// solution.csv, profile_<name>.csv, fracture_<j>.csv, fracture_<j>_jump.csv
/// and summary.json inside dir (created if needed).
void write_run_outputs(const RunResult& result, const std::filesystem::path& dir);

/// Reference selection for `compare`, parsed from "kind:key=value,...".
///   analytic1d  keys: max (absolute tolerance, default 1e-8)
///   equidim     keys: band (cells across, default 2), nx (outer columns,
///               default 2 nx), ny (default ny), l2_rel (default 0.02)
struct OracleSpec {
    enum class Kind { analytic1d, equidim };
    Kind kind = Kind::analytic1d;
    std::string text;
    double max_abs = 1e-8;
    double l2_rel = 0.02;
    std::size_t band = 2;
    std::size_t nx = 0;
    std::size_t ny = 0;
};

OracleSpec parse_oracle_spec(const std::string& text);

struct ComparisonEntry {
    std::string name;
    std::string metric; // "max" or "l2_rel"
    ProfileError error;
    double range = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct CompareReport {
    std::string oracle;
    std::vector<ComparisonEntry> entries;
    bool pass = false;
};

CompareReport compare_scenario(const Scenario& scenario, const OracleSpec& oracle);
nlohmann::json to_json(const CompareReport& report);

} // namespace ifrac
