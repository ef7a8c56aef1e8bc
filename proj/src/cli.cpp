#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "swarmdef/harness.hpp"

namespace swarmdef {

namespace {

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << contents;
    if (!out) throw Error("write failed for '" + path + "'");
}

template <typename Fn>
std::string render(Fn&& fn) {
    std::ostringstream os;
    fn(os);
    return os.str();
}

// "1:12" -> 1..12, "3" -> {3}, "1,4,8" -> {1,4,8}
std::vector<std::size_t> parse_range(const std::string& spec) {
    std::vector<std::size_t> out;
    auto to_count = [&](const std::string& s) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != s.size() || s.empty() || v == 0)
            throw CLI::ValidationError("--defenders", "expected positive counts, got '" + spec + "'");
        return static_cast<std::size_t>(v);
    };
    if (auto colon = spec.find(':'); colon != std::string::npos) {
        const std::size_t lo = to_count(spec.substr(0, colon));
        const std::size_t hi = to_count(spec.substr(colon + 1));
        if (hi < lo) throw CLI::ValidationError("--defenders", "empty range '" + spec + "'");
        for (std::size_t m = lo; m <= hi; ++m) out.push_back(m);
        return out;
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_count(item));
    return out;
}

const std::vector<std::string> kModels{"p1", "p2", "p3", "P1", "P2", "P3"};
const std::vector<std::string> kInits{"hold", "radial-picket", "line-to-threat"};
const std::vector<std::string> kWeapons{"A", "B", "a", "b", "A-type", "B-type", "symmetric"};
const std::vector<std::string> kModes{"finite-difference", "fd", "simultaneous-perturbation", "spsa",
                                      "derivative-free-pattern", "pattern"};

struct OptimizerFlags {
    std::string mode = "finite-difference";
    int max_iterations = 100;
    std::uint64_t seed = 0;
    double fd_step = 1e-4;
    double initial_step = 0.05;
    double tol = 1e-6;

    void add_to(CLI::App* app) {
        app->add_option("--mode", mode, "finite-difference | simultaneous-perturbation | derivative-free-pattern")
            ->capture_default_str()
            ->check(CLI::IsMember(kModes));
        app->add_option("--max-iter", max_iterations, "iterations per penalty stage")->capture_default_str();
        app->add_option("--seed", seed, "optimizer step seed")->capture_default_str();
        app->add_option("--fd-step", fd_step)->capture_default_str();
        app->add_option("--initial-step", initial_step, "first step in scaled units")->capture_default_str();
        app->add_option("--tol", tol, "convergence tolerance")->capture_default_str();
    }

    OptimizerOptions options() const {
        OptimizerOptions o;
        o.gradient_mode = parse_gradient_mode(mode);
        o.max_iterations = max_iterations;
        o.step_seed = seed;
        o.fd_step = fd_step;
        o.initial_step = initial_step;
        o.convergence_tol = tol;
        return o;
    }
};

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Swarm-vs-swarm engagement simulator and defender trajectory optimizer"};
    app.require_subcommand(1);

    std::string model_name = "p1", scenario_path, cp_path, out_path, trace_path, summary_path;
    std::string init_name = "radial-picket", weapon_name = "symmetric", defenders_spec;
    bool positions = false, timing = false;
    std::size_t runs = 200;
    std::uint64_t mc_seed = 0;
    double spawn_radius = 1.0;
    OptimizerFlags opt_flags;

    auto* sim = app.add_subcommand("simulate", "propagate one engagement under P1/P2/P3");
    sim->add_option("--model", model_name, "p1 | p2 | p3")->required()->check(CLI::IsMember(kModels));
    sim->add_option("--scenario", scenario_path)->required()->check(CLI::ExistingFile);
    sim->add_option("--trajectories", cp_path, "control-point JSON")->required()->check(CLI::ExistingFile);
    sim->add_option("--out", out_path, "CSV output")->required();
    sim->add_flag("--positions", positions, "append per-agent positions");

    auto* opt = app.add_subcommand("optimize", "optimize defender control points");
    opt->add_option("--model", model_name, "p1 | p2 | p3")->required()->check(CLI::IsMember(kModels));
    opt->add_option("--scenario", scenario_path)->required()->check(CLI::ExistingFile);
    opt->add_option("--init", init_name, "hold | radial-picket | line-to-threat")
        ->capture_default_str()
        ->check(CLI::IsMember(kInits));
    opt->add_option("--out", out_path, "control-point JSON output")->required();
    opt->add_option("--trace", trace_path, "optimization trace JSON output");
    opt_flags.add_to(opt);

    auto* mc = app.add_subcommand("montecarlo", "Monte Carlo validation of fixed trajectories");
    mc->add_option("--scenario", scenario_path)->required()->check(CLI::ExistingFile);
    mc->add_option("--trajectories", cp_path)->required()->check(CLI::ExistingFile);
    mc->add_option("--runs", runs)->capture_default_str()->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
    mc->add_option("--seed", mc_seed, "base seed")->required();
    mc->add_option("--out", out_path, "per-step CSV output")->required();
    mc->add_option("--summary", summary_path, "JSON summary output");

    auto* cmp = app.add_subcommand("compare", "P1/P2/P3 against Monte Carlo for fixed trajectories");
    cmp->add_option("--scenario", scenario_path)->required()->check(CLI::ExistingFile);
    cmp->add_option("--trajectories", cp_path)->required()->check(CLI::ExistingFile);
    cmp->add_option("--runs", runs)->capture_default_str()->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
    cmp->add_option("--seed", mc_seed, "Monte Carlo base seed")->required();
    cmp->add_option("--out", out_path, "CSV output")->required();

    auto* tr = app.add_subcommand("tradeoff", "optimized cost versus number of defenders");
    tr->add_option("--model", model_name, "p1 | p2 | p3")->required()->check(CLI::IsMember(kModels));
    tr->add_option("--scenario", scenario_path, "base scenario")->required()->check(CLI::ExistingFile);
    tr->add_option("--defenders", defenders_spec, "e.g. 1:12 or 1,2,4")->required();
    tr->add_option("--weapon", weapon_name, "A | B | symmetric")
        ->capture_default_str()
        ->check(CLI::IsMember(kWeapons));
    tr->add_option("--spawn-radius", spawn_radius, "defender spawn ball around the HVU")->capture_default_str();
    tr->add_option("--init", init_name)->capture_default_str()->check(CLI::IsMember(kInits));
    tr->add_option("--out", out_path, "CSV output")->required();
    tr->add_flag("--timing", timing, "write wall-clock seconds (output no longer reproducible)");
    opt_flags.add_to(tr);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*sim) {
            const auto cfg = load_scenario_file(scenario_path);
            const auto cp = load_control_points_file(cp_path);
            const auto result = propagate(parse_model(model_name), cfg, cp);
            write_file(out_path, render([&](std::ostream& os) {
                           write_engagement_csv(os, result, cfg, positions);
                       }));
        } else if (*opt) {
            const auto cfg = load_scenario_file(scenario_path);
            const auto model = parse_model(model_name);
            const auto opts = opt_flags.options();
            const auto init = initialize_control_points(cfg, parse_init_strategy(init_name));
            const auto trace = optimize(model, cfg, init, opts);
            write_file(out_path, control_points_to_json(trace.best_cp));
            if (!trace_path.empty()) write_file(trace_path, trace_to_json(trace, model, opts));
            if (!trace.feasible)
                std::cerr << "warning: no iterate met the constraints; returned the least infeasible\n";
        } else if (*mc) {
            const auto cfg = load_scenario_file(scenario_path);
            const auto cp = load_control_points_file(cp_path);
            const auto stats = mc_ensemble(cfg, cp, runs, mc_seed);
            write_file(out_path, render([&](std::ostream& os) { write_mc_csv(os, stats, cfg); }));
            if (!summary_path.empty()) write_file(summary_path, mc_summary_json(stats));
        } else if (*cmp) {
            const auto cfg = load_scenario_file(scenario_path);
            const auto cp = load_control_points_file(cp_path);
            const auto report = run_comparison(cfg, cp, runs, mc_seed);
            write_file(out_path, render([&](std::ostream& os) { write_comparison_csv(os, report); }));
        } else if (*tr) {
            const auto base = load_scenario_file(scenario_path);
            std::vector<std::size_t> m_values;
            try {
                m_values = parse_range(defenders_spec);
            } catch (const CLI::ParseError& e) {
                std::cerr << e.what() << '\n' << tr->help();
                return 2;
            }
            TradeoffSettings settings;
            settings.spawn_radius = spawn_radius;
            settings.init = parse_init_strategy(init_name);
            const auto rows = tradeoff_sweep(base, parse_model(model_name), m_values,
                                             parse_weapon_config(weapon_name), opt_flags.options(),
                                             settings);
            write_file(out_path, render([&](std::ostream& os) { write_tradeoff_csv(os, rows, timing); }));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace swarmdef
