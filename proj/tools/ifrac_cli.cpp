// Command-line front end. Talks to the solver only through the C API.
#include <ifrac/ifrac.h>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

namespace {

enum Exit { ok = 0, other = 1, config = 2, solver = 3, compare_failed = 4 };

int exit_code(ifrac_status s)
{
    switch (s) {
    case IFRAC_OK: return ok;
    case IFRAC_ERR_ARGUMENT:
    case IFRAC_ERR_CONFIG:
    case IFRAC_ERR_GEOMETRY: return config;
    case IFRAC_ERR_SOLVER: return solver;
    case IFRAC_ERR_COMPARE: return compare_failed;
    default: return other;
    }
}

int report(ifrac_status s)
{
    std::fprintf(stderr, "error: %s: %s\n", ifrac_status_string(s), ifrac_last_error());
    return exit_code(s);
}

struct Scenario {
    ifrac_scenario* handle = nullptr;
    ~Scenario() { ifrac_scenario_free(handle); }
};

struct Result {
    ifrac_result* handle = nullptr;
    ~Result() { ifrac_result_free(handle); }
};

struct Target {
    std::string name;
    std::string variant;
    std::size_t n = 0;
};

// A path to an existing file is read as a JSON config; anything else must
// name a built-in.
ifrac_status load(const Target& t, Scenario& s)
{
    ifrac_status st = IFRAC_OK;
    if (std::filesystem::is_regular_file(t.name)) {
        if (!t.variant.empty()) {
            std::fprintf(stderr, "error: --variant only applies to built-in scenarios\n");
            return IFRAC_ERR_CONFIG;
        }
        st = ifrac_scenario_from_file(t.name.c_str(), &s.handle);
    } else {
        st = ifrac_scenario_builtin(t.name.c_str(), t.variant.c_str(), &s.handle);
    }
    if (st == IFRAC_OK && t.n > 0) st = ifrac_scenario_set_resolution(s.handle, t.n);
    return st;
}

void add_target(CLI::App* cmd, Target& t)
{
    cmd->add_option("scenario", t.name, "JSON config file or built-in name")->required();
    cmd->add_option("--variant", t.variant, "variant of a built-in scenario");
    cmd->add_option("--n", t.n, "mesh cells per direction (overrides the scenario)")->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Darcy flow with thin inclusions modelled as interfaces"};
    app.require_subcommand(1);

    Target run_target;
    std::string run_out;
    auto* run = app.add_subcommand("run", "solve a scenario and write its outputs");
    add_target(run, run_target);
    run->add_option("--out", run_out, "output directory")->required();

    Target cmp_target;
    std::string cmp_out;
    std::string oracle;
    auto* cmp = app.add_subcommand("compare", "solve a scenario and compare against a reference solution");
    add_target(cmp, cmp_target);
    cmp->add_option("--oracle", oracle, "analytic1d[:max=..] or equidim[:band=..,nx=..,ny=..,l2_rel=..]")->required();
    cmp->add_option("--out", cmp_out, "output directory")->required();

    auto* list = app.add_subcommand("list", "list built-in scenarios");

    Target show_target;
    auto* show = app.add_subcommand("show", "print a scenario as JSON");
    add_target(show, show_target);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config;
    }

    if (list->parsed()) {
        for (std::size_t i = 0; i < ifrac_builtin_count(); ++i)
            std::printf("%-20s %s\n", ifrac_builtin_name(i), ifrac_builtin_description(i));
        return ok;
    }

    if (show->parsed()) {
        Scenario s;
        if (const auto st = load(show_target, s); st != IFRAC_OK) return report(st);
        char* text = nullptr;
        if (const auto st = ifrac_scenario_to_json(s.handle, &text); st != IFRAC_OK) return report(st);
        std::printf("%s\n", text);
        ifrac_string_free(text);
        return ok;
    }

    if (run->parsed()) {
        Scenario s;
        if (const auto st = load(run_target, s); st != IFRAC_OK) return report(st);
        Result r;
        if (const auto st = ifrac_run(s.handle, &r.handle); st != IFRAC_OK) return report(st);
        if (const auto st = ifrac_result_write(r.handle, run_out.c_str()); st != IFRAC_OK) return report(st);
        std::printf("dofs %zu  subdomains %zu  iterations %zu  relative residual %.3e  mass balance defect %.3e\n",
                    ifrac_result_dofs(r.handle), ifrac_result_subdomains(r.handle), ifrac_result_iterations(r.handle),
                    ifrac_result_relative_residual(r.handle), ifrac_result_mass_balance_defect(r.handle));
        return ok;
    }

    Scenario s;
    if (const auto st = load(cmp_target, s); st != IFRAC_OK) return report(st);
    int passed = 0;
    char* text = nullptr;
    if (const auto st = ifrac_compare(s.handle, oracle.c_str(), cmp_out.c_str(), &passed, &text); st != IFRAC_OK)
        return report(st);
    std::printf("%s\n", text);
    ifrac_string_free(text);
    return passed ? ok : compare_failed;
}
