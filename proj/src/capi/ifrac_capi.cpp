#include <ifrac/ifrac.h>

#include "errors.hpp"
#include "scenario.hpp"
#include "sparse.hpp"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

struct ifrac_scenario {
    ifrac::Scenario value;
};

struct ifrac_result {
    ifrac::RunResult value;
};

namespace {

thread_local std::string last_error;

ifrac_status fail(ifrac_status status, const std::string& message)
{
    last_error = message;
    return status;
}

// Maps the core exception hierarchy onto status codes.
template <class F>
ifrac_status try_(F&& f)
{
    try {
        last_error.clear();
        return f();
    } catch (const ifrac::ConfigError& e) {
        return fail(IFRAC_ERR_CONFIG, e.what());
    } catch (const ifrac::SolverError& e) {
        return fail(IFRAC_ERR_SOLVER, e.what());
    } catch (const ifrac::NumericalError& e) {
        return fail(IFRAC_ERR_SOLVER, e.what());
    } catch (const ifrac::GeometryError& e) {
        return fail(IFRAC_ERR_GEOMETRY, e.what());
    } catch (const ifrac::ArgumentError& e) {
        return fail(IFRAC_ERR_ARGUMENT, e.what());
    } catch (const ifrac::Error& e) {
        return fail(IFRAC_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(IFRAC_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(IFRAC_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(IFRAC_ERR_INTERNAL, "unknown error");
    }
}

char* copy_string(const std::string& s)
{
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* ifrac_status_string(ifrac_status status)
{
    switch (status) {
    case IFRAC_OK: return "ok";
    case IFRAC_ERR_ARGUMENT: return "invalid argument";
    case IFRAC_ERR_CONFIG: return "invalid configuration";
    case IFRAC_ERR_SOLVER: return "solver failure";
    case IFRAC_ERR_COMPARE: return "comparison failed";
    case IFRAC_ERR_GEOMETRY: return "invalid geometry";
    case IFRAC_ERR_IO: return "i/o error";
    case IFRAC_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* ifrac_last_error(void) { return last_error.c_str(); }

void ifrac_string_free(char* str) { delete[] str; }

size_t ifrac_builtin_count(void) { return ifrac::list_builtins().size(); }

const char* ifrac_builtin_name(size_t index)
{
    const auto& b = ifrac::list_builtins();
    return index < b.size() ? b[index].name.c_str() : nullptr;
}

const char* ifrac_builtin_description(size_t index)
{
    const auto& b = ifrac::list_builtins();
    return index < b.size() ? b[index].description.c_str() : nullptr;
}

ifrac_status ifrac_scenario_from_file(const char* path, ifrac_scenario** out)
{
    return try_([&] {
        if (path == nullptr || out == nullptr) return fail(IFRAC_ERR_ARGUMENT, "null argument");
        *out = nullptr;
        if (!std::ifstream(path)) return fail(IFRAC_ERR_IO, std::string("cannot open config file '") + path + "'");
        *out = new ifrac_scenario{ifrac::load_scenario(path)};
        return IFRAC_OK;
    });
}

ifrac_status ifrac_scenario_from_json(const char* json, ifrac_scenario** out)
{
    return try_([&] {
        if (json == nullptr || out == nullptr) return fail(IFRAC_ERR_ARGUMENT, "null argument");
        *out = nullptr;
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(json);
        } catch (const nlohmann::json::parse_error& e) {
            return fail(IFRAC_ERR_CONFIG, std::string("config is not valid JSON: ") + e.what());
        }
        *out = new ifrac_scenario{ifrac::parse_scenario(parsed)};
        return IFRAC_OK;
    });
}

ifrac_status ifrac_scenario_builtin(const char* name, const char* variant, ifrac_scenario** out)
{
    return try_([&] {
        if (name == nullptr || out == nullptr) return fail(IFRAC_ERR_ARGUMENT, "null argument");
        *out = nullptr;
        *out = new ifrac_scenario{ifrac::builtin_scenario(name, variant != nullptr ? variant : "")};
        return IFRAC_OK;
    });
}

ifrac_status ifrac_scenario_set_resolution(ifrac_scenario* scenario, size_t n)
{
    return try_([&] {
        if (scenario == nullptr) return fail(IFRAC_ERR_ARGUMENT, "null scenario");
        scenario->value.set_resolution(n);
        return IFRAC_OK;
    });
}

ifrac_status ifrac_scenario_to_json(const ifrac_scenario* scenario, char** out)
{
    return try_([&] {
        if (scenario == nullptr || out == nullptr) return fail(IFRAC_ERR_ARGUMENT, "null argument");
        *out = copy_string(ifrac::to_json(scenario->value).dump(2));
        return IFRAC_OK;
    });
}

void ifrac_scenario_free(ifrac_scenario* scenario) { delete scenario; }

ifrac_status ifrac_run(const ifrac_scenario* scenario, ifrac_result** out)
{
    return try_([&] {
        if (scenario == nullptr || out == nullptr) return fail(IFRAC_ERR_ARGUMENT, "null argument");
        *out = nullptr;
        *out = new ifrac_result{ifrac::run_scenario(scenario->value)};
        return IFRAC_OK;
    });
}

ifrac_status ifrac_result_write(const ifrac_result* result, const char* dir)
{
    return try_([&] {
        if (result == nullptr || dir == nullptr) return fail(IFRAC_ERR_ARGUMENT, "null argument");
        ifrac::write_run_outputs(result->value, dir);
        return IFRAC_OK;
    });
}

size_t ifrac_result_dofs(const ifrac_result* result) { return result ? result->value.pressure.size() : 0; }

size_t ifrac_result_subdomains(const ifrac_result* result) { return result ? result->value.split.n_subdomains : 0; }

size_t ifrac_result_iterations(const ifrac_result* result) { return result ? result->value.report.iterations : 0; }

double ifrac_result_relative_residual(const ifrac_result* result)
{
    return result ? result->value.report.relative_residual : 0.0;
}

double ifrac_result_mass_balance_defect(const ifrac_result* result)
{
    return result ? result->value.mass_balance_defect : 0.0;
}

double ifrac_result_inflow(const ifrac_result* result) { return result ? result->value.inflow : 0.0; }

const double* ifrac_result_pressure(const ifrac_result* result)
{
    return result ? result->value.pressure.data() : nullptr;
}

ifrac_status ifrac_result_vertex(const ifrac_result* result, size_t i, double* x, double* y)
{
    return try_([&] {
        if (result == nullptr || x == nullptr || y == nullptr) return fail(IFRAC_ERR_ARGUMENT, "null argument");
        const auto& vertices = result->value.split.base.vertices;
        if (i >= vertices.size()) return fail(IFRAC_ERR_ARGUMENT, "vertex index out of range");
        *x = vertices[i].x;
        *y = vertices[i].y;
        return IFRAC_OK;
    });
}

ifrac_status ifrac_result_boundary_flux(const ifrac_result* result, const char* tag, double* flux)
{
    return try_([&] {
        if (result == nullptr || tag == nullptr || flux == nullptr) return fail(IFRAC_ERR_ARGUMENT, "null argument");
        const auto it = result->value.boundary_fluxes.find(tag);
        if (it == result->value.boundary_fluxes.end())
            return fail(IFRAC_ERR_ARGUMENT, std::string("unknown boundary tag '") + tag + "'");
        *flux = it->second;
        return IFRAC_OK;
    });
}

ifrac_status ifrac_result_summary_json(const ifrac_result* result, char** out)
{
    return try_([&] {
        if (result == nullptr || out == nullptr) return fail(IFRAC_ERR_ARGUMENT, "null argument");
        *out = copy_string(ifrac::summary_json(result->value).dump(2));
        return IFRAC_OK;
    });
}

void ifrac_result_free(ifrac_result* result) { delete result; }

ifrac_status ifrac_compare(const ifrac_scenario* scenario, const char* oracle_spec, const char* out_dir, int* passed,
                           char** report_json)
{
    return try_([&] {
        if (scenario == nullptr || oracle_spec == nullptr || passed == nullptr)
            return fail(IFRAC_ERR_ARGUMENT, "null argument");
        const auto spec = ifrac::parse_oracle_spec(oracle_spec);
        const auto report = ifrac::compare_scenario(scenario->value, spec);
        const std::string text = ifrac::to_json(report).dump(2);
        if (out_dir != nullptr) {
            std::error_code ec;
            std::filesystem::create_directories(out_dir, ec);
            std::ofstream out(std::filesystem::path(out_dir) / "compare.json");
            if (ec || !out) return fail(IFRAC_ERR_IO, std::string("cannot write compare.json in '") + out_dir + "'");
            out << text << '\n';
        }
        *passed = report.pass ? 1 : 0;
        if (report_json != nullptr) *report_json = copy_string(text);
        return IFRAC_OK;
    });
}

} // extern "C"
