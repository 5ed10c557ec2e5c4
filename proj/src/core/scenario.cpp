#include "scenario.hpp"

#include "errors.hpp"
#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace ifrac {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// JSON reading helpers; every failure names the field path.
// ---------------------------------------------------------------------------

void expect_object(const json& j, const std::string& path)
{
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed)
{
    expect_object(j, path);
    for (const auto& [key, value] : j.items()) {
        const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!ok) throw ConfigError(path + ": unknown key '" + key + "'");
    }
}

double read_number(const json& j, const std::string& path)
{
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path + ": expected a finite number");
    return v;
}

double read_positive(const json& j, const std::string& path)
{
    const double v = read_number(j, path);
    if (!(v > 0.0)) throw ConfigError(path + ": expected a positive number");
    return v;
}

std::size_t read_count(const json& j, const std::string& path)
{
    if (!j.is_number_integer() || j.get<long long>() < 1) throw ConfigError(path + ": expected a positive integer");
    return static_cast<std::size_t>(j.get<long long>());
}

std::string read_string(const json& j, const std::string& path)
{
    if (!j.is_string()) throw ConfigError(path + ": expected a string");
    return j.get<std::string>();
}

Point read_point(const json& j, const std::string& path)
{
    if (!j.is_array() || j.empty() || j.size() > 2) throw ConfigError(path + ": expected [x] or [x, y]");
    Point p{read_number(j[0], path + "[0]"), 0.0};
    if (j.size() == 2) p.y = read_number(j[1], path + "[1]");
    return p;
}

json point_json(const Point& p, int dimension)
{
    if (dimension == 1) return json::array({p.x});
    return json::array({p.x, p.y});
}

BoundaryValue read_boundary_value(const json& j, const std::string& path)
{
    if (j.is_number()) return {read_number(j, path), 0.0, 0.0};
    check_keys(j, path, {"c", "cx", "cy"});
    BoundaryValue v;
    if (j.contains("c")) v.c = read_number(j["c"], path + ".c");
    if (j.contains("cx")) v.cx = read_number(j["cx"], path + ".cx");
    if (j.contains("cy")) v.cy = read_number(j["cy"], path + ".cy");
    return v;
}

json boundary_value_json(const BoundaryValue& v)
{
    if (v.cx == 0.0 && v.cy == 0.0) return v.c;
    return json{{"c", v.c}, {"cx", v.cx}, {"cy", v.cy}};
}

NodalValues read_nodal(const json& j, const std::string& path)
{
    if (j.is_number()) return uniform(read_number(j, path));
    if (!j.is_array() || j.size() != 2) throw ConfigError(path + ": expected a number or a pair of nodal values");
    return {read_number(j[0], path + "[0]"), read_number(j[1], path + "[1]")};
}

json nodal_json(const NodalValues& v)
{
    if (v[0] == v[1]) return v[0];
    return json::array({v[0], v[1]});
}

InterfaceCoefficients read_coefficients(const json& j, const std::string& path)
{
    check_keys(j, path, {"kappa_j", "r_j", "h_j", "kappa_a", "r_a", "h_a"});
    InterfaceCoefficients c;
    const auto opt = [&](const char* key, NodalValues& out) {
        if (j.contains(key)) out = read_nodal(j[key], path + "." + key);
    };
    opt("kappa_j", c.kappa_j);
    opt("r_j", c.r_j);
    opt("h_j", c.h_j);
    opt("kappa_a", c.kappa_a);
    opt("r_a", c.r_a);
    opt("h_a", c.h_a);
    try {
        validate(c);
    } catch (const ArgumentError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return c;
}

Aperture read_aperture(const json& j, const std::string& path)
{
    check_keys(j, path, {"constant", "elliptical"});
    if (j.size() != 1) throw ConfigError(path + ": expected exactly one of 'constant' or 'elliptical'");
    if (j.contains("constant")) return ConstantAperture{read_positive(j["constant"], path + ".constant")};
    const json& e = j["elliptical"];
    const std::string ep = path + ".elliptical";
    check_keys(e, ep, {"center", "major", "minor"});
    for (const char* key : {"center", "major", "minor"}) {
        if (!e.contains(key)) throw ConfigError(ep + ": missing '" + key + "'");
    }
    return EllipticalAperture{read_point(e["center"], ep + ".center"), read_positive(e["major"], ep + ".major"),
                              read_positive(e["minor"], ep + ".minor")};
}

json aperture_json(const Aperture& a)
{
    if (const auto* c = std::get_if<ConstantAperture>(&a)) return json{{"constant", c->epsilon}};
    const auto& e = std::get<EllipticalAperture>(a);
    return json{{"elliptical", {{"center", json::array({e.center.x, e.center.y})}, {"major", e.major}, {"minor", e.minor}}}};
}

const char* method_name(SolverMethod m)
{
    switch (m) {
    case SolverMethod::automatic: return "auto";
    case SolverMethod::cg: return "cg";
    case SolverMethod::dense: return "dense";
    }
    return "auto";
}

} // namespace

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

void Scenario::set_resolution(std::size_t n)
{
    if (n == 0) throw ConfigError("mesh resolution must be positive");
    nx = n;
    ny = n;
}

FractureNetwork Scenario::network() const
{
    FractureNetwork net;
    for (const auto& f : fractures) net.fractures.push_back(f.spec);
    return net;
}

BoundaryConditionSet Scenario::boundary_conditions() const
{
    BoundaryConditionSet bcs;
    for (const auto& [tag, spec] : boundary) {
        BoundaryFunction fn = spec.value;
        if (spec.kind == BoundarySpec::Kind::dirichlet)
            bcs.dirichlet[tag] = std::move(fn);
        else
            bcs.neumann[tag] = std::move(fn);
    }
    return bcs;
}

Scenario parse_scenario(const json& config)
{
    check_keys(config, "config",
               {"name", "description", "dimension", "domain", "mesh", "mobility", "fractures", "boundary", "profiles",
                "solver", "eps_floor"});
    Scenario s;
    s.mobilities.clear();
    if (config.contains("name")) s.name = read_string(config["name"], "name");
    if (config.contains("description")) s.description = read_string(config["description"], "description");
    if (config.contains("dimension")) {
        const auto& d = config["dimension"];
        if (!d.is_number_integer() || (d.get<int>() != 1 && d.get<int>() != 2))
            throw ConfigError("dimension: expected 1 or 2");
        s.dimension = d.get<int>();
    }

    if (!config.contains("domain")) throw ConfigError("domain: missing");
    const json& dom = config["domain"];
    if (s.dimension == 1) {
        check_keys(dom, "domain", {"length"});
        if (!dom.contains("length")) throw ConfigError("domain.length: missing");
        s.lower = {0.0, 0.0};
        s.upper = {read_positive(dom["length"], "domain.length"), 0.0};
    } else {
        check_keys(dom, "domain", {"lower", "upper"});
        if (!dom.contains("lower") || !dom.contains("upper")) throw ConfigError("domain: needs 'lower' and 'upper'");
        s.lower = read_point(dom["lower"], "domain.lower");
        s.upper = read_point(dom["upper"], "domain.upper");
        if (!(s.upper.x > s.lower.x) || !(s.upper.y > s.lower.y))
            throw ConfigError("domain: upper must exceed lower componentwise");
    }

    if (config.contains("mesh")) {
        const json& m = config["mesh"];
        check_keys(m, "mesh", {"n", "nx", "ny"});
        if (m.contains("n")) s.set_resolution(read_count(m["n"], "mesh.n"));
        if (m.contains("nx")) s.nx = read_count(m["nx"], "mesh.nx");
        if (m.contains("ny")) s.ny = read_count(m["ny"], "mesh.ny");
    }

    if (config.contains("mobility")) {
        const json& k = config["mobility"];
        if (k.is_array()) {
            if (k.empty()) throw ConfigError("mobility: expected at least one value");
            for (std::size_t i = 0; i < k.size(); ++i)
                s.mobilities.push_back(read_positive(k[i], "mobility[" + std::to_string(i) + "]"));
        } else {
            s.mobilities.push_back(read_positive(k, "mobility"));
        }
    } else {
        s.mobilities.push_back(1.0);
    }

    if (config.contains("fractures")) {
        const json& fr = config["fractures"];
        if (!fr.is_array()) throw ConfigError("fractures: expected an array");
        for (std::size_t i = 0; i < fr.size(); ++i) {
            const std::string fp = "fractures[" + std::to_string(i) + "]";
            const json& f = fr[i];
            check_keys(f, fp, {"path", "aperture", "mobility", "source", "coefficients"});
            FractureEntry entry;
            if (!f.contains("path") || !f["path"].is_array()) throw ConfigError(fp + ".path: expected an array of points");
            for (std::size_t k = 0; k < f["path"].size(); ++k)
                entry.spec.path.push_back(read_point(f["path"][k], fp + ".path[" + std::to_string(k) + "]"));
            if (f.contains("coefficients")) entry.coefficients = read_coefficients(f["coefficients"], fp + ".coefficients");
            if (f.contains("aperture")) {
                entry.spec.aperture = read_aperture(f["aperture"], fp + ".aperture");
            } else if (!entry.coefficients) {
                throw ConfigError(fp + ".aperture: missing");
            }
            if (f.contains("mobility")) {
                entry.spec.mobility_kf = read_positive(f["mobility"], fp + ".mobility");
            } else if (!entry.coefficients) {
                throw ConfigError(fp + ".mobility: missing");
            }
            if (f.contains("source")) entry.source = read_string(f["source"], fp + ".source");
            try {
                validate_fracture(entry.spec, s.dimension);
            } catch (const ArgumentError& e) {
                throw ConfigError(fp + ": " + e.what());
            }
            s.fractures.push_back(std::move(entry));
        }
    }

    if (!config.contains("boundary")) throw ConfigError("boundary: missing");
    const json& bnd = config["boundary"];
    expect_object(bnd, "boundary");
    const std::set<std::string> known_tags =
        s.dimension == 1 ? std::set<std::string>{"left", "right"}
                         : std::set<std::string>{"left", "right", "bottom", "top"};
    for (const auto& [tag, spec] : bnd.items()) {
        const std::string bp = "boundary." + tag;
        if (!known_tags.contains(tag)) throw ConfigError(bp + ": unknown boundary tag");
        check_keys(spec, bp, {"type", "value"});
        if (!spec.contains("type")) throw ConfigError(bp + ".type: missing");
        const std::string type = read_string(spec["type"], bp + ".type");
        BoundarySpec b;
        if (type == "dirichlet")
            b.kind = BoundarySpec::Kind::dirichlet;
        else if (type == "neumann")
            b.kind = BoundarySpec::Kind::neumann;
        else
            throw ConfigError(bp + ".type: expected 'dirichlet' or 'neumann'");
        if (!spec.contains("value")) throw ConfigError(bp + ".value: missing");
        b.value = read_boundary_value(spec["value"], bp + ".value");
        s.boundary[tag] = b;
    }
    const bool has_dirichlet = std::any_of(s.boundary.begin(), s.boundary.end(), [](const auto& kv) {
        return kv.second.kind == BoundarySpec::Kind::dirichlet;
    });
    if (!has_dirichlet) throw ConfigError("boundary: at least one tag must be of type 'dirichlet'");

    if (config.contains("profiles")) {
        const json& pr = config["profiles"];
        if (!pr.is_array()) throw ConfigError("profiles: expected an array");
        std::set<std::string> names;
        for (std::size_t i = 0; i < pr.size(); ++i) {
            const std::string pp = "profiles[" + std::to_string(i) + "]";
            check_keys(pr[i], pp, {"name", "from", "to", "samples"});
            ProfileRequest req;
            if (!pr[i].contains("name") || !pr[i].contains("from") || !pr[i].contains("to"))
                throw ConfigError(pp + ": needs 'name', 'from' and 'to'");
            req.name = read_string(pr[i]["name"], pp + ".name");
            if (req.name.empty() || req.name.find_first_of("/\\ ") != std::string::npos)
                throw ConfigError(pp + ".name: must be a non-empty file-name-safe token");
            if (!names.insert(req.name).second) throw ConfigError(pp + ".name: duplicate profile name");
            req.from = read_point(pr[i]["from"], pp + ".from");
            req.to = read_point(pr[i]["to"], pp + ".to");
            if (pr[i].contains("samples")) {
                req.samples = read_count(pr[i]["samples"], pp + ".samples");
                if (req.samples < 2) throw ConfigError(pp + ".samples: at least two samples are required");
            }
            s.profiles.push_back(std::move(req));
        }
    }

    if (config.contains("solver")) {
        const json& sv = config["solver"];
        check_keys(sv, "solver", {"tol", "max_iter", "method"});
        if (sv.contains("tol")) {
            s.solver.tol = read_positive(sv["tol"], "solver.tol");
            if (!(s.solver.tol < 1.0)) throw ConfigError("solver.tol: must lie in (0, 1)");
        }
        if (sv.contains("max_iter")) s.solver.max_iter = read_count(sv["max_iter"], "solver.max_iter");
        if (sv.contains("method")) {
            const std::string m = read_string(sv["method"], "solver.method");
            if (m == "auto")
                s.solver.method = SolverMethod::automatic;
            else if (m == "cg")
                s.solver.method = SolverMethod::cg;
            else if (m == "dense")
                s.solver.method = SolverMethod::dense;
            else
                throw ConfigError("solver.method: expected 'auto', 'cg' or 'dense'");
        }
    }
    if (config.contains("eps_floor")) s.eps_floor = read_positive(config["eps_floor"], "eps_floor");
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    json config;
    try {
        in >> config;
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_scenario(config);
}

json to_json(const Scenario& s)
{
    json out;
    out["name"] = s.name;
    out["description"] = s.description;
    out["dimension"] = s.dimension;
    if (s.dimension == 1) {
        out["domain"] = {{"length", s.upper.x}};
        out["mesh"] = {{"n", s.nx}};
    } else {
        out["domain"] = {{"lower", point_json(s.lower, 2)}, {"upper", point_json(s.upper, 2)}};
        out["mesh"] = {{"nx", s.nx}, {"ny", s.ny}};
    }
    out["mobility"] = s.mobilities.size() == 1 ? json(s.mobilities.front()) : json(s.mobilities);
    out["fractures"] = json::array();
    for (const auto& f : s.fractures) {
        json fj;
        fj["path"] = json::array();
        for (const auto& p : f.spec.path) fj["path"].push_back(point_json(p, s.dimension));
        fj["aperture"] = aperture_json(f.spec.aperture);
        fj["mobility"] = f.spec.mobility_kf;
        if (!f.source.empty()) fj["source"] = f.source;
        if (f.coefficients) {
            const auto& c = *f.coefficients;
            fj["coefficients"] = {{"kappa_j", nodal_json(c.kappa_j)}, {"r_j", nodal_json(c.r_j)},
                                  {"h_j", nodal_json(c.h_j)},         {"kappa_a", nodal_json(c.kappa_a)},
                                  {"r_a", nodal_json(c.r_a)},         {"h_a", nodal_json(c.h_a)}};
        }
        out["fractures"].push_back(std::move(fj));
    }
    out["boundary"] = json::object();
    for (const auto& [tag, b] : s.boundary) {
        out["boundary"][tag] = {{"type", b.kind == BoundarySpec::Kind::dirichlet ? "dirichlet" : "neumann"},
                                {"value", boundary_value_json(b.value)}};
    }
    out["profiles"] = json::array();
    for (const auto& p : s.profiles) {
        out["profiles"].push_back({{"name", p.name},
                                   {"from", point_json(p.from, s.dimension)},
                                   {"to", point_json(p.to, s.dimension)},
                                   {"samples", p.samples}});
    }
    out["solver"] = {{"tol", s.solver.tol}, {"method", method_name(s.solver.method)}};
    if (s.solver.max_iter > 0) out["solver"]["max_iter"] = s.solver.max_iter;
    if (s.eps_floor > 0.0) out["eps_floor"] = s.eps_floor;
    return out;
}

// ---------------------------------------------------------------------------
// Built-in scenarios
// ---------------------------------------------------------------------------

const std::vector<BuiltinInfo>& list_builtins()
{
    static const std::vector<BuiltinInfo> builtins{
        {"onedim", "1D interval with one thin blocking inclusion at S=0.5 (L=k1=k2=h=1, eps=kf=1e-4)"},
        {"regular2d", "regular 2D network of six fractures, ten subdomains; variants conductive|blocking"},
        {"single_vertical", "one vertical fracture at x=0.5, eps=1e-2, left inflow h=1; variants blocking|conductive"},
        {"patch_eps_sweep", "k=kf=1 vertical fracture, exact background 1-x; variant is the aperture (default 1e-2)"},
        {"wentzell_tangential", "conductive vertical fracture (eps=1e-2, kf=1e2) with flow along it, p=1 bottom, 0 top"},
        {"ellipse2d", "vertical elliptical fracture, aperture varies along x=0.5; variants full|reduced"},
    };
    return builtins;
}

bool is_builtin(const std::string& name)
{
    const auto& b = list_builtins();
    return std::any_of(b.begin(), b.end(), [&](const BuiltinInfo& i) { return i.name == name; });
}

std::vector<FractureSpec> regular_network(double aperture, double kf)
{
    const auto line = [&](Point a, Point b) { return FractureSpec{{a, b}, ConstantAperture{aperture}, kf}; };
    return {
        line({0.5, 0.0}, {0.5, 1.0}),     line({0.0, 0.5}, {1.0, 0.5}),
        line({0.5, 0.75}, {1.0, 0.75}),   line({0.75, 0.5}, {0.75, 1.0}),
        line({0.5, 0.625}, {0.75, 0.625}), line({0.625, 0.5}, {0.625, 0.75}),
    };
}

namespace {

BoundarySpec dirichlet(double v) { return {BoundarySpec::Kind::dirichlet, {v, 0.0, 0.0}}; }
BoundarySpec neumann(double v) { return {BoundarySpec::Kind::neumann, {v, 0.0, 0.0}}; }

FractureEntry vertical_fracture(double x, Aperture aperture, double kf)
{
    return {FractureSpec{{{x, 0.0}, {x, 1.0}}, aperture, kf}, std::nullopt, {}};
}

void require_variant(const std::string& name, const std::string& variant, std::initializer_list<const char*> allowed)
{
    if (variant.empty()) return;
    for (const char* a : allowed) {
        if (variant == a) return;
    }
    std::string list;
    for (const char* a : allowed) list += (list.empty() ? "" : "|") + std::string(a);
    throw ConfigError("unknown variant '" + variant + "' for built-in '" + name + "' (expected " + list + ")");
}

} // namespace

Scenario builtin_scenario(const std::string& name, const std::string& variant)
{
    Scenario s;
    s.name = name;
    if (name == "onedim") {
        require_variant(name, variant, {});
        s.description = list_builtins()[0].description;
        s.dimension = 1;
        s.lower = {0.0, 0.0};
        s.upper = {1.0, 0.0};
        s.nx = 64;
        s.ny = 1;
        s.fractures.push_back({FractureSpec{{{0.5, 0.0}}, ConstantAperture{1e-4}, 1e-4}, std::nullopt, {}});
        s.boundary["left"] = neumann(1.0);
        s.boundary["right"] = dirichlet(0.0);
        s.profiles.push_back({"line", {0.0, 0.0}, {1.0, 0.0}, 101});
    } else if (name == "regular2d") {
        require_variant(name, variant, {"conductive", "blocking"});
        const bool blocking = variant == "blocking";
        s.name = blocking ? "regular2d-blocking" : "regular2d-conductive";
        s.description = std::string("regular 2D fracture network, ") + (blocking ? "blocking" : "conductive") +
                        " fractures (kf=" + (blocking ? "1e-4" : "1e4") +
                        ", eps=1e-4); inflow h=1 at x=0, p=1 at x=1, no-flow top/bottom";
        s.nx = s.ny = 32;
        for (auto& f : regular_network(1e-4, blocking ? 1e-4 : 1e4))
            s.fractures.push_back({std::move(f), std::nullopt, "external-benchmark"});
        s.boundary["left"] = neumann(1.0);
        s.boundary["right"] = dirichlet(1.0);
        s.boundary["top"] = neumann(0.0);
        s.boundary["bottom"] = neumann(0.0);
        s.profiles.push_back({"AA", {0.0, 0.7}, {1.0, 0.7}, 101});
    } else if (name == "single_vertical") {
        require_variant(name, variant, {"blocking", "conductive"});
        const bool conductive = variant == "conductive";
        s.description = std::string("single vertical fracture at x=0.5, eps=1e-2, kf=") +
                        (conductive ? "1e2" : "1e-2") + "; inflow h=1 at x=0, p=0 at x=1, no-flow top/bottom";
        s.nx = s.ny = 64;
        s.fractures.push_back(vertical_fracture(0.5, ConstantAperture{1e-2}, conductive ? 1e2 : 1e-2));
        s.boundary["left"] = neumann(1.0);
        s.boundary["right"] = dirichlet(0.0);
        s.boundary["top"] = neumann(0.0);
        s.boundary["bottom"] = neumann(0.0);
        s.profiles.push_back({"y07", {0.0, 0.7}, {1.0, 0.7}, 101});
    } else if (name == "patch_eps_sweep") {
        double eps = 1e-2;
        if (!variant.empty()) {
            std::size_t used = 0;
            try {
                eps = std::stod(variant, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != variant.size() || !(eps > 0.0) || !(eps < 0.5))
                throw ConfigError("patch_eps_sweep variant must be an aperture in (0, 0.5), got '" + variant + "'");
        }
        std::ostringstream os;
        os << "vertical fracture with k=kf=1 and eps=" << eps << "; p=1 at x=0, p=0 at x=1";
        s.description = os.str();
        s.nx = s.ny = 32;
        s.fractures.push_back(vertical_fracture(0.5, ConstantAperture{eps}, 1.0));
        s.boundary["left"] = dirichlet(1.0);
        s.boundary["right"] = dirichlet(0.0);
        s.boundary["top"] = neumann(0.0);
        s.boundary["bottom"] = neumann(0.0);
        s.profiles.push_back({"y07", {0.0, 0.7}, {1.0, 0.7}, 101});
    } else if (name == "wentzell_tangential") {
        require_variant(name, variant, {});
        s.description = list_builtins()[4].description;
        s.nx = s.ny = 64;
        s.fractures.push_back(vertical_fracture(0.5, ConstantAperture{1e-2}, 1e2));
        s.boundary["bottom"] = dirichlet(1.0);
        s.boundary["top"] = dirichlet(0.0);
        s.boundary["left"] = neumann(0.0);
        s.boundary["right"] = neumann(0.0);
        s.profiles.push_back({"x025", {0.25, 0.0}, {0.25, 1.0}, 101});
    } else if (name == "ellipse2d") {
        require_variant(name, variant, {"full", "reduced"});
        const bool reduced = variant == "reduced";
        const double minor = reduced ? 1e-2 : 1e-4;
        const double kf = reduced ? 1e-2 : 1e-4;
        std::ostringstream os;
        os << "vertical elliptical fracture centred at (0.5,0.5), minor axis " << minor << ", major axis 1+" << minor
           << ", kf=" << kf
           << "; boundary conditions reuse the regular2d set (inflow h=1 at x=0, p=1 at x=1), "
              "a choice of this tool";
        s.description = os.str();
        s.nx = s.ny = 64;
        s.fractures.push_back(
            vertical_fracture(0.5, EllipticalAperture{{0.5, 0.5}, 1.0 + minor, minor}, kf));
        s.boundary["left"] = neumann(1.0);
        s.boundary["right"] = dirichlet(1.0);
        s.boundary["top"] = neumann(0.0);
        s.boundary["bottom"] = neumann(0.0);
        s.profiles.push_back({"y05", {0.0, 0.5}, {1.0, 0.5}, 101});
        s.profiles.push_back({"y09", {0.0, 0.9}, {1.0, 0.9}, 101});
    } else {
        throw ConfigError("unknown built-in scenario '" + name + "'");
    }
    return s;
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

Mesh build_scenario_mesh(const Scenario& s)
{
    try {
        if (s.dimension == 1) return build_interval(s.nx, s.upper.x - s.lower.x);
        return build_structured_quad(s.nx, s.ny, s.lower, s.upper);
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("mesh: ") + e.what());
    }
}

RunResult run_scenario(const Scenario& scenario)
{
    RunResult r;
    r.scenario = scenario;
    const Mesh mesh = build_scenario_mesh(scenario);
    try {
        r.split = split_mesh(mesh, scenario.network());
    } catch (const GeometryError& e) {
        throw ConfigError(std::string("fractures: ") + e.what());
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("fractures: ") + e.what());
    }

    std::vector<double> k = scenario.mobilities;
    if (k.size() == 1) k.assign(r.split.n_subdomains, k.front());
    if (k.size() != r.split.n_subdomains)
        throw ConfigError("mobility: expected 1 or " + std::to_string(r.split.n_subdomains) + " values, got " +
                          std::to_string(scenario.mobilities.size()));

    std::vector<CoefficientProvider> providers;
    for (const auto& f : scenario.fractures) {
        providers.push_back(f.coefficients ? constant_coefficients(*f.coefficients)
                                           : thin_inclusion(f.spec, scenario.eps_floor));
    }
    r.system = assemble(r.split, k, providers, scenario.boundary_conditions());
    Solution sol = solve_spd(r.system.matrix, r.system.rhs, scenario.solver);
    r.pressure = std::move(sol.x);
    r.report = std::move(sol.report);

    for (const auto& req : scenario.profiles) {
        try {
            r.profiles.push_back({req.name, sample_profile(r.split, r.pressure, req.from, req.to, req.samples)});
        } catch (const Error& e) {
            throw ConfigError("profile '" + req.name + "': " + e.what());
        }
    }
    for (std::size_t j = 0; j < scenario.fractures.size(); ++j) {
        r.fracture_pressures.push_back(fracture_pressure(r.split, r.pressure, j));
        r.fracture_jumps.push_back(fracture_jump(r.split, r.pressure, j));
    }

    std::set<std::string> tags;
    for (const auto& bf : r.split.base.boundary_facets) tags.insert(bf.tag);
    double net = 0.0;
    for (const auto& tag : tags) {
        const double flux = boundary_flux(r.split, r.system, r.pressure, tag);
        r.boundary_fluxes[tag] = flux;
        net += flux;
        r.inflow += std::max(flux, 0.0);
    }
    r.mass_balance_defect = std::abs(net);
    return r;
}

json summary_json(const RunResult& r)
{
    json s;
    s["scenario"] = r.scenario.name;
    s["dofs"] = r.split.num_dofs();
    s["subdomains"] = r.split.n_subdomains;
    s["interface_edges"] = r.split.interface_edges.size();
    s["solver"] = r.report.method;
    s["cg_iterations"] = r.report.iterations;
    s["relative_residual"] = r.report.relative_residual;
    s["converged"] = r.report.converged;
    s["boundary_fluxes"] = r.boundary_fluxes;
    s["inflow"] = r.inflow;
    s["mass_balance_defect"] = r.mass_balance_defect;
    s["profiles"] = json::array();
    for (const auto& p : r.profiles) s["profiles"].push_back({{"name", p.name}, {"samples", p.profile.size()}});
    s["fractures"] = json::array();
    for (std::size_t j = 0; j < r.fracture_jumps.size(); ++j) {
        const auto& samples = r.fracture_jumps[j].samples;
        json f{{"id", j}, {"vertices", samples.size()}};
        if (!samples.empty()) {
            const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                                      [](const auto& a, const auto& b) { return a.p < b.p; });
            const auto peak = std::max_element(samples.begin(), samples.end(), [](const auto& a, const auto& b) {
                return std::abs(a.p) < std::abs(b.p);
            });
            f["jump_min"] = lo->p;
            f["jump_max"] = hi->p;
            f["max_abs_jump"] = std::abs(peak->p);
            f["max_abs_jump_at"] = json::array({peak->point.x, peak->point.y});
        }
        s["fractures"].push_back(std::move(f));
    }
    return s;
}

namespace {

std::ofstream open_output(const std::filesystem::path& file)
{
    std::ofstream out(file);
    if (!out) throw Error("cannot write '" + file.string() + "'");
    return out;
}

std::string csv_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_run_outputs(const RunResult& r, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());

    {
        std::vector<Index> subdomain_of_vertex(r.split.num_dofs(), 0);
        const Mesh& m = r.split.base;
        for (Index c = 0; c < m.num_cells(); ++c) {
            for (Index v : m.cell(c)) subdomain_of_vertex[v] = r.split.subdomain_of_cell[c];
        }
        auto out = open_output(dir / "solution.csv");
        out << "vertex,x,y,subdomain,p\n";
        for (Index v = 0; v < r.split.num_dofs(); ++v) {
            out << v << ',' << csv_double(m.vertices[v].x) << ',' << csv_double(m.vertices[v].y) << ','
                << subdomain_of_vertex[v] << ',' << csv_double(r.pressure[v]) << '\n';
        }
    }
    for (const auto& p : r.profiles) {
        auto out = open_output(dir / ("profile_" + p.name + ".csv"));
        write_profile_csv(out, p.profile);
    }
    for (std::size_t j = 0; j < r.fracture_pressures.size(); ++j) {
        auto out = open_output(dir / ("fracture_" + std::to_string(j) + ".csv"));
        write_profile_csv(out, r.fracture_pressures[j]);
        auto jumps = open_output(dir / ("fracture_" + std::to_string(j) + "_jump.csv"));
        jumps << "s,x,y,jump\n";
        for (const auto& s : r.fracture_jumps[j].samples) {
            jumps << csv_double(s.s) << ',' << csv_double(s.point.x) << ',' << csv_double(s.point.y) << ','
                  << csv_double(s.p) << '\n';
        }
    }
    auto out = open_output(dir / "summary.json");
    out << summary_json(r).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Comparison against reference solutions
// ---------------------------------------------------------------------------

OracleSpec parse_oracle_spec(const std::string& text)
{
    OracleSpec spec;
    spec.text = text;
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    if (kind == "analytic1d")
        spec.kind = OracleSpec::Kind::analytic1d;
    else if (kind == "equidim")
        spec.kind = OracleSpec::Kind::equidim;
    else
        throw ConfigError("oracle: unknown kind '" + kind + "' (expected analytic1d or equidim)");
    if (colon == std::string::npos) return spec;

    std::istringstream params(text.substr(colon + 1));
    std::string item;
    while (std::getline(params, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("oracle: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        double v = 0.0;
        std::size_t used = 0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != value.size() || !(v > 0.0)) throw ConfigError("oracle: '" + key + "' needs a positive number");
        const auto as_count = [&] {
            if (v != std::floor(v)) throw ConfigError("oracle: '" + key + "' must be an integer");
            return static_cast<std::size_t>(v);
        };
        if (spec.kind == OracleSpec::Kind::analytic1d && key == "max") {
            spec.max_abs = v;
        } else if (spec.kind == OracleSpec::Kind::equidim && key == "l2_rel") {
            spec.l2_rel = v;
        } else if (spec.kind == OracleSpec::Kind::equidim && key == "band") {
            spec.band = as_count();
        } else if (spec.kind == OracleSpec::Kind::equidim && key == "nx") {
            spec.nx = as_count();
        } else if (spec.kind == OracleSpec::Kind::equidim && key == "ny") {
            spec.ny = as_count();
        } else {
            throw ConfigError("oracle: unknown parameter '" + key + "' for " + kind);
        }
    }
    return spec;
}

namespace {

const FractureEntry& single_vertical_fracture(const Scenario& s)
{
    if (s.fractures.size() != 1) throw ConfigError("oracle: the scenario must contain exactly one fracture");
    const FractureEntry& f = s.fractures.front();
    if (f.coefficients) throw ConfigError("oracle: explicit interface coefficients are not supported");
    if (s.dimension == 2) {
        const auto& path = f.spec.path;
        const bool vertical = std::all_of(path.begin(), path.end(), [&](const Point& p) { return p.x == path[0].x; });
        if (!vertical) throw ConfigError("oracle: the fracture must be a vertical line");
    }
    return f;
}

double uniform_mobility(const Scenario& s)
{
    const double k = s.mobilities.front();
    if (!std::all_of(s.mobilities.begin(), s.mobilities.end(), [&](double v) { return v == k; }))
        throw ConfigError("oracle: the background mobility must be uniform");
    return k;
}

double constant_boundary(const Scenario& s, const std::string& tag, BoundarySpec::Kind kind)
{
    const auto it = s.boundary.find(tag);
    if (it == s.boundary.end() || it->second.kind != kind || it->second.value.cx != 0.0 || it->second.value.cy != 0.0)
        throw ConfigError(std::string("oracle: analytic1d needs a constant ") +
                          (kind == BoundarySpec::Kind::dirichlet ? "Dirichlet" : "Neumann") + " value on '" + tag +
                          "'");
    return it->second.value.c;
}

ComparisonEntry make_entry(std::string name, std::string metric, ProfileError error, double range, double tolerance)
{
    ComparisonEntry e{std::move(name), std::move(metric), error, range, tolerance, false};
    e.pass = e.metric == "max" ? error.max <= tolerance : error.l2 <= tolerance;
    return e;
}

CompareReport compare_analytic(const Scenario& s, const OracleSpec& oracle)
{
    const FractureEntry& f = single_vertical_fracture(s);
    const auto* aperture = std::get_if<ConstantAperture>(&f.spec.aperture);
    if (aperture == nullptr) throw ConfigError("oracle: analytic1d needs a constant aperture");
    if (s.dimension == 2) {
        for (const char* tag : {"top", "bottom"}) {
            const auto it = s.boundary.find(tag);
            if (it != s.boundary.end() && !(it->second.kind == BoundarySpec::Kind::neumann &&
                                            it->second.value.c == 0.0 && it->second.value.cx == 0.0 &&
                                            it->second.value.cy == 0.0))
                throw ConfigError(std::string("oracle: analytic1d needs no-flow conditions on '") + tag + "'");
        }
    }
    Inclusion1D params;
    params.length = s.upper.x - s.lower.x;
    params.center = f.spec.path.front().x - s.lower.x;
    params.eps = aperture->epsilon;
    params.kf = f.spec.mobility_kf;
    params.h = constant_boundary(s, "left", BoundarySpec::Kind::neumann);
    params.p_right = constant_boundary(s, "right", BoundarySpec::Kind::dirichlet);
    if (s.mobilities.size() == 2) {
        params.k1 = s.mobilities[0];
        params.k2 = s.mobilities[1];
    } else {
        params.k1 = params.k2 = uniform_mobility(s);
    }
    const PiecewiseLinear1D exact = solve_1d_interface_analytic(params);

    const RunResult run = run_scenario(s);
    const Mesh& mesh = run.split.base;
    const double x_s = f.spec.path.front().x;
    const double tol = 1e-12 * std::max(1.0, params.length);

    // Which side of the interface each vertex copy belongs to.
    std::vector<double> cell_x(mesh.vertices.size(), 0.0);
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        for (Index v : mesh.cell(c)) cell_x[v] = mesh.cell_centroid(c).x;
    }
    ProfileError nodes;
    double sq = 0.0;
    for (Index v = 0; v < mesh.vertices.size(); ++v) {
        const double x = mesh.vertices[v].x - s.lower.x;
        PiecewiseLinear1D::Side side = PiecewiseLinear1D::Side::average;
        if (std::abs(mesh.vertices[v].x - x_s) <= tol)
            side = cell_x[v] < x_s ? PiecewiseLinear1D::Side::left : PiecewiseLinear1D::Side::right;
        const double d = run.pressure[v] - exact(std::clamp(x, 0.0, params.length), side);
        nodes.max = std::max(nodes.max, std::abs(d));
        sq += d * d;
    }
    nodes.l2 = std::sqrt(sq / static_cast<double>(mesh.vertices.size()));

    const auto range_of = [&] {
        const auto& v = exact.values();
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *hi - *lo;
    };
    const double range = range_of();

    CompareReport report;
    report.oracle = oracle.text;
    report.entries.push_back(make_entry("nodes", "max", nodes, range, oracle.max_abs));

    ProfileError jump;
    const double exact_jump = exact.jump_at(params.center);
    for (const auto& sample : run.fracture_jumps.front().samples) {
        jump.max = std::max(jump.max, std::abs(sample.p - exact_jump));
    }
    jump.l2 = jump.max;
    report.entries.push_back(make_entry("jump", "max", jump, range, oracle.max_abs));

    for (const auto& p : run.profiles) {
        Profile ref = p.profile;
        for (auto& sample : ref.samples) {
            const double x = std::clamp(sample.point.x - s.lower.x, 0.0, params.length);
            sample.p = exact(x, PiecewiseLinear1D::Side::average);
        }
        report.entries.push_back(make_entry(p.name, "max", profile_error(p.profile, ref), range, oracle.max_abs));
    }
    report.pass = std::all_of(report.entries.begin(), report.entries.end(), [](const auto& e) { return e.pass; });
    return report;
}

CompareReport compare_equidim(const Scenario& s, const OracleSpec& oracle)
{
    if (s.dimension != 2) throw ConfigError("oracle: equidim needs a 2D scenario");
    const FractureEntry& f = single_vertical_fracture(s);
    EquidimProblem problem;
    problem.nx_outside = oracle.nx > 0 ? oracle.nx : 2 * s.nx;
    problem.ny = oracle.ny > 0 ? oracle.ny : s.ny;
    problem.band_cells_across = oracle.band;
    problem.lower = s.lower;
    problem.upper = s.upper;
    problem.fracture_x = f.spec.path.front().x;
    problem.aperture = f.spec.aperture;
    problem.k_background = uniform_mobility(s);
    problem.kf = f.spec.mobility_kf;
    problem.bcs = s.boundary_conditions();
    problem.solver = s.solver;
    EquidimSolution ref;
    try {
        ref = solve_equidim_2d(problem);
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("oracle: ") + e.what());
    }
    const RunResult run = run_scenario(s);

    const auto [lo, hi] = std::minmax_element(ref.pressure.begin(), ref.pressure.end());
    const double range = *hi - *lo;
    const double tolerance = oracle.l2_rel * range;

    CompareReport report;
    report.oracle = oracle.text;
    const auto compare = [&](const std::string& name, const Profile& model) {
        Profile reference = model;
        for (auto& sample : reference.samples) sample.p = evaluate_at(ref.mesh, ref.pressure, sample.point);
        report.entries.push_back(make_entry(name, "l2_rel", profile_error(model, reference), range, tolerance));
    };
    for (const auto& p : run.profiles) compare(p.name, p.profile);
    for (std::size_t j = 0; j < run.fracture_pressures.size(); ++j)
        compare("fracture_" + std::to_string(j), run.fracture_pressures[j]);
    report.pass = std::all_of(report.entries.begin(), report.entries.end(), [](const auto& e) { return e.pass; });
    return report;
}

} // namespace

CompareReport compare_scenario(const Scenario& scenario, const OracleSpec& oracle)
{
    if (oracle.kind == OracleSpec::Kind::analytic1d) return compare_analytic(scenario, oracle);
    return compare_equidim(scenario, oracle);
}

json to_json(const CompareReport& report)
{
    json out;
    out["oracle"] = report.oracle;
    out["pass"] = report.pass;
    out["profiles"] = json::object();
    for (const auto& e : report.entries) {
        out["profiles"][e.name] = {{"l2", e.error.l2},        {"max", e.error.max}, {"range", e.range},
                                   {"metric", e.metric},       {"tolerance", e.tolerance},
                                   {"pass", e.pass}};
    }
    return out;
}

} // namespace ifrac
