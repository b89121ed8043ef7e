// Command-line front end: solve extinction vectors, classify families,
// run simulations, and sweep level values across the descent parameter.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gwext/examples.hpp"
#include "gwext/family_graph.hpp"
#include "gwext/io.hpp"
#include "gwext/monte_carlo.hpp"
#include "gwext/relations.hpp"
#include "gwext/solver.hpp"

using namespace gwext;
namespace ex = gwext::examples;

namespace {

struct ProcessArgs {
    std::string spec_path;
    std::string example;
    double p = 0.1, q = 0.5, r = 1.0;
};

struct BuiltProcess {
    ProcessSpec spec;
    std::optional<LoadedProcess> loaded;  // set for JSON specs
    bool grid = false;                    // grid-indexed typeset
};

void add_process_options(CLI::App* cmd, ProcessArgs& args) {
    auto* spec = cmd->add_option("--spec", args.spec_path,
                                 "JSON process file (finite typeset)");
    auto* example =
        cmd->add_option("--example", args.example,
                        "built-in process: level-phase or quadrant");
    spec->excludes(example);
    cmd->add_option("--p", args.p, "level-phase parameter p")->check(
        CLI::Range(0.0, 1.0));
    cmd->add_option("--q", args.q, "level-phase parameter q")->check(
        CLI::Range(0.0, 1.0));
    cmd->add_option("--r", args.r, "level-phase parameter r")
        ->check(CLI::PositiveNumber);
}

BuiltProcess build_process(const ProcessArgs& args) {
    if (!args.spec_path.empty()) {
        LoadedProcess loaded = load_process_json(args.spec_path);
        ProcessSpec spec = loaded.spec;
        return BuiltProcess{std::move(spec), std::move(loaded), false};
    }
    if (args.example == "level-phase") {
        ex::LevelPhaseParams params{args.p, args.q, args.r};
        return BuiltProcess{ex::level_phase_process(params), std::nullopt, true};
    }
    if (args.example == "quadrant") {
        return BuiltProcess{ex::quadrant_process(), std::nullopt, true};
    }
    throw CLI::ValidationError(
        "--spec or --example (level-phase|quadrant) is required");
}

SubsetSpec parse_subset(const BuiltProcess& proc, const std::string& text) {
    if (text == "all") return full_subset();
    if (text.empty() || text == "none") return empty_subset();
    if (proc.loaded) return proc.loaded->subset_from_list(text);
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        std::string kind = text.substr(0, colon);
        std::uint64_t index = std::stoull(text.substr(colon + 1));
        if (kind == "level") return ex::level_subset(index);
        if (kind == "phase") return ex::phase_subset(index);
        if (kind == "stripe") return ex::stripe_subset(index);
        throw std::invalid_argument("unknown subset kind: " + kind);
    }
    throw std::invalid_argument(
        "subset must be level:<i>, phase:<j>, stripe:<i>, all or none");
}

TypeId parse_type(const BuiltProcess& proc, const std::string& text) {
    if (proc.loaded) return proc.loaded->type_by_name(text);
    auto comma = text.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("grid types are written i,j");
    std::uint64_t level = std::stoull(text.substr(0, comma));
    std::uint64_t phase = std::stoull(text.substr(comma + 1));
    return ex::grid_type(level, phase);
}

std::vector<TypeId> parse_types(const BuiltProcess& proc,
                                const std::string& text) {
    std::vector<TypeId> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ';'))
        if (!tok.empty()) out.push_back(parse_type(proc, tok));
    return out;
}

void add_solver_options(CLI::App* cmd, SolveConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "key=value solver config file");
    cmd->add_option("--inner-tol", cfg.inner_tol, "fixed point residual");
    cmd->add_option("--trunc-tol", cfg.trunc_tol,
                    "stabilization across truncation windows");
    cmd->add_option("--windows", cfg.window_schedule,
                    "window schedule (increasing sizes)");
    cmd->add_option("--reporting", cfg.reporting_window,
                    "reporting window size");
    cmd->add_flag_callback("--nested",
                           [&cfg]() { cfg.joint_schedule = false; },
                           "grow the cutoffs in nested order");
}

SolveConfig finalize_config(SolveConfig cfg, const std::string& config_path) {
    if (!config_path.empty()) {
        SolveConfig from_file = load_solve_config(config_path);
        // File provides the base; explicit flags already wrote into cfg, so
        // keep cfg when it deviates from the default.
        SolveConfig defaults;
        if (cfg.inner_tol != defaults.inner_tol)
            from_file.inner_tol = cfg.inner_tol;
        if (cfg.trunc_tol != defaults.trunc_tol)
            from_file.trunc_tol = cfg.trunc_tol;
        if (cfg.window_schedule != defaults.window_schedule)
            from_file.window_schedule = cfg.window_schedule;
        if (cfg.reporting_window != defaults.reporting_window)
            from_file.reporting_window = cfg.reporting_window;
        if (cfg.joint_schedule != defaults.joint_schedule)
            from_file.joint_schedule = cfg.joint_schedule;
        cfg = from_file;
    }
    cfg.validate();
    return cfg;
}

int run_solve(const ProcessArgs& pargs, const std::string& subset_text,
              const std::string& types_text, const SolveConfig& cfg,
              const std::string& out_path) {
    BuiltProcess proc = build_process(pargs);
    SubsetSpec A = parse_subset(proc, subset_text);
    ExtinctionResult result = solve_q(proc.spec, A, cfg);
    nlohmann::json j = nlohmann::json::parse(result.to_json(&proc.spec));
    if (!types_text.empty()) {
        nlohmann::json picked = nlohmann::json::object();
        for (TypeId t : parse_types(proc, types_text)) {
            if (!result.vector.window().contains(t))
                throw std::invalid_argument("type " + proc.spec.label(t) +
                                            " is outside the solved window");
            picked[proc.spec.label(t)] = result.vector[t];
        }
        j["requested"] = picked;
    }
    j["subset"] = A.name;
    std::string text = j.dump(2);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << text << '\n';
    } else {
        std::cout << text << '\n';
    }
    return result.converged ? 0 : 1;
}

void print_family_table(const FamilyGraph& g) {
    auto prim = primitive_subsets(g);
    auto classes = enumerate_classes_bruteforce(g);
    auto name_of = [&](VertexSet s) {
        if (s == 0) return std::string("{}");
        std::string out = "{";
        bool first = true;
        for (auto v : set_members(s)) {
            if (!first) out += ",";
            out += g.label(v);
            first = false;
        }
        return out + "}";
    };
    std::printf("vertices: %u, primitive subsets: %zu, classes: %zu\n",
                g.size(), prim.antichains.size(), classes.size());
    std::printf("\nrelation matrix (row => column):\n    ");
    for (std::uint32_t j = 0; j < g.size(); ++j)
        std::printf("%4s", g.label(j).c_str());
    std::printf("\n");
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        std::printf("%4s", g.label(i).c_str());
        for (std::uint32_t j = 0; j < g.size(); ++j) {
            const char* cell = i == j          ? "<=>"
                               : g.edge(i, j)  ? "=>"
                               : g.edge(j, i)  ? "<="
                                               : "<!>";
            std::printf("%4s", cell);
        }
        std::printf("\n");
    }
    std::printf("\nclass table (primitive representative: members):\n");
    for (const auto& cls : classes) {
        Decomposition d = decompose(g, cls.front());
        VertexSet rep = d.maximal;
        std::string members;
        for (std::size_t i = 0; i < cls.size(); ++i) {
            if (i) members += " = ";
            members += name_of(cls[i]);
        }
        std::printf("  %-12s %s\n", name_of(rep).c_str(), members.c_str());
    }
    auto pairs = enumerate_IA_finite(g);
    std::printf("\nextended index pairs: %zu (chain part always empty on a "
                "finite graph)\n",
                pairs.size());
    std::printf("distinct extinction vectors: %zu\n", classes.size());
}

int run_classify_graph(const std::string& family_path) {
    FamilyGraph g = load_family_graph_json(family_path);
    print_family_table(g);
    return 0;
}

int run_classify_process(const ProcessArgs& pargs, std::uint64_t levels,
                         const std::string& family_kind, const SolveConfig& cfg,
                         double tol) {
    BuiltProcess proc = build_process(pargs);
    if (!proc.grid || pargs.example != "level-phase")
        throw CLI::ValidationError(
            "process classification needs --example level-phase");
    std::vector<SubsetSpec> family;
    FamilyCheckOptions opts;
    opts.tol = tol;
    if (family_kind == "levels") {
        family = ex::level_family(1, levels);
    } else if (family_kind == "stripes") {
        family = ex::stripe_family(levels);
        opts.union_excluding = [](std::size_t i) {
            return ex::stripe_complement(i);
        };
        opts.max_union_bits = 0;
    } else {
        throw CLI::ValidationError("--family-kind must be levels or stripes");
    }
    std::vector<ExtinctionResult> solved;
    std::vector<std::string> names;
    for (const auto& A : family) {
        solved.push_back(solve_q(proc.spec, A, cfg));
        names.push_back(A.name);
    }
    auto report = check_family_conditions(proc.spec, family, solved,
                                          Window{cfg.reporting_window}, cfg,
                                          opts);
    std::cout << report.to_json(names) << '\n';
    return 0;
}

int run_simulate(const ProcessArgs& pargs, const std::string& type_text,
                 const std::string& subset_text, const std::string& b_text,
                 const std::string& event_text, const MCConfig& mc,
                 const std::string& out_path) {
    BuiltProcess proc = build_process(pargs);
    TypeId x = parse_type(proc, type_text);
    SubsetSpec A = parse_subset(proc, subset_text);
    MCEstimate est;
    if (event_text.empty()) {
        est = estimate_extinction(proc.spec, x, A, mc);
    } else {
        SubsetSpec B = parse_subset(proc, b_text);
        McEvent event;
        if (event_text == "never-visit")
            event = McEvent::never_visit_B;
        else if (event_text == "survive-avoid")
            event = McEvent::survive_A_never_visit_B;
        else if (event_text == "survive-extinct")
            event = McEvent::survive_A_extinct_B;
        else
            throw CLI::ValidationError(
                "--event must be never-visit, survive-avoid or survive-extinct");
        est = estimate_event(proc.spec, x, event, A, B, mc);
    }
    std::cout << est.to_json() << '\n';
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << MCEstimate::csv_header() << '\n' << est.to_csv_row() << '\n';
    }
    return 0;
}

int run_figure3(double p, double q, const std::vector<double>& r_list,
                std::uint64_t levels, const std::string& out_path,
                double threshold, unsigned threads, const SolveConfig& cfg) {
    ex::SweepSpec sweep;
    sweep.r_values = r_list;
    sweep.levels = levels;
    sweep.output_path = out_path;
    sweep.distinct_threshold = threshold;
    auto rows = ex::run_level_sweep(p, q, sweep, cfg, threads);
    bool all_converged = true;
    for (const auto& row : rows) all_converged = all_converged && row.converged;
    std::fprintf(stderr, "wrote %zu rows to %s (%s)\n", rows.size(),
                 out_path.c_str(),
                 all_converged ? "all points converged"
                               : "some points did not converge");
    return all_converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"extinction probabilities of branching processes with "
                 "countably many types"};
    app.require_subcommand(1);

    // solve
    auto* solve_cmd =
        app.add_subcommand("solve", "compute an extinction probability vector");
    ProcessArgs solve_proc;
    std::string solve_subset = "all", solve_types, solve_out, solve_cfg_path;
    SolveConfig solve_cfg;
    add_process_options(solve_cmd, solve_proc);
    solve_cmd->add_option("--subset", solve_subset,
                          "target set: level:<i>, phase:<j>, stripe:<i>, a "
                          "type-name list, all or none");
    solve_cmd->add_option("--types", solve_types,
                          "report these types (semicolon-separated)");
    solve_cmd->add_option("--out", solve_out, "write the JSON result here");
    add_solver_options(solve_cmd, solve_cfg, solve_cfg_path);

    // classify
    auto* classify_cmd = app.add_subcommand(
        "classify", "relation matrix, regularity and class structure");
    ProcessArgs classify_proc;
    std::string classify_family, classify_cfg_path;
    std::string classify_kind = "levels";
    std::uint64_t classify_levels = 4;
    double classify_tol = 1e-4;
    SolveConfig classify_cfg;
    classify_cfg.trunc_tol = 1e-5;
    classify_cmd->add_option("--family", classify_family,
                             "JSON edge list of an implication graph");
    add_process_options(classify_cmd, classify_proc);
    classify_cmd->add_option("--levels", classify_levels,
                             "number of family members to solve");
    classify_cmd->add_option("--family-kind", classify_kind,
                             "levels or stripes");
    classify_cmd->add_option("--tol", classify_tol,
                             "relation verdict tolerance");
    add_solver_options(classify_cmd, classify_cfg, classify_cfg_path);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo estimates");
    ProcessArgs sim_proc;
    std::string sim_type = "0,0", sim_subset = "all", sim_b, sim_event, sim_out;
    MCConfig mc;
    add_process_options(sim_cmd, sim_proc);
    sim_cmd->add_option("--type", sim_type, "initial type");
    sim_cmd->add_option("--subset", sim_subset, "target set A");
    sim_cmd->add_option("--subset-b", sim_b, "secondary set B");
    sim_cmd->add_option("--event", sim_event,
                        "never-visit, survive-avoid or survive-extinct");
    sim_cmd->add_option("--trials", mc.trials, "number of runs");
    sim_cmd->add_option("--horizon", mc.horizon, "max generations per run");
    sim_cmd->add_option("--cap", mc.population_cap, "population cap");
    sim_cmd->add_option("--seed", mc.seed, "master seed");
    sim_cmd->add_option("--ci", mc.ci_level, "confidence level");
    sim_cmd->add_option("--out", sim_out, "write a CSV row here");

    // figure3
    auto* fig_cmd = app.add_subcommand(
        "figure3", "sweep level extinction values against r and count "
                   "distinct values");
    double fig_p = 0.1, fig_q = 0.5, fig_threshold = 1e-3;
    std::vector<double> fig_r = {0.05, 0.08, 0.1,  0.15, 0.2, 0.3,  0.32, 0.4,
                                 0.47, 0.5,  0.57, 0.6,  0.64, 0.8, 1.0};
    std::uint64_t fig_levels = 6;
    unsigned fig_threads = 0;
    std::string fig_out = "level_sweep.csv", fig_cfg_path;
    SolveConfig fig_cfg;
    fig_cfg.trunc_tol = 1e-5;  // the sweep classifies at 1e-3
    fig_cmd->add_option("--p", fig_p, "parameter p");
    fig_cmd->add_option("--q", fig_q, "parameter q");
    fig_cmd->add_option("--r-list", fig_r, "r values to sweep");
    fig_cmd->add_option("--levels", fig_levels, "levels to solve");
    fig_cmd->add_option("--out", fig_out, "CSV output path");
    fig_cmd->add_option("--distinct-threshold", fig_threshold,
                        "distinctness threshold");
    fig_cmd->add_option("--threads", fig_threads, "sweep threads (0 = auto)");
    add_solver_options(fig_cmd, fig_cfg, fig_cfg_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*solve_cmd)
            return run_solve(solve_proc, solve_subset, solve_types,
                             finalize_config(solve_cfg, solve_cfg_path),
                             solve_out);
        if (*classify_cmd) {
            if (!classify_family.empty())
                return run_classify_graph(classify_family);
            return run_classify_process(
                classify_proc, classify_levels, classify_kind,
                finalize_config(classify_cfg, classify_cfg_path), classify_tol);
        }
        if (*sim_cmd)
            return run_simulate(sim_proc, sim_type, sim_subset, sim_b,
                                sim_event, mc, sim_out);
        if (*fig_cmd)
            return run_figure3(fig_p, fig_q, fig_r, fig_levels, fig_out,
                               fig_threshold, fig_threads,
                               finalize_config(fig_cfg, fig_cfg_path));
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = e.what();
        std::cerr << err.dump() << '\n';
        return 1;
    }
    return 2;
}
