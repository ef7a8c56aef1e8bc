#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "swarmdef/harness.hpp"

namespace py = pybind11;
using namespace swarmdef;

namespace {

py::array_t<double> rows_of(const Vec3List& v) {
    py::array_t<double> out({static_cast<py::ssize_t>(v.size()), py::ssize_t{3}});
    auto a = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < v.size(); ++i)
        for (int d = 0; d < 3; ++d) a(i, d) = v[i][d];
    return out;
}

Vec3List list_of(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2 || arr.shape(1) != 3) throw py::value_error("expected an (n, 3) array");
    auto a = arr.unchecked<2>();
    Vec3List out;
    for (py::ssize_t i = 0; i < a.shape(0); ++i) out.emplace_back(a(i, 0), a(i, 1), a(i, 2));
    return out;
}

py::array_t<double> cp_array(const ControlPoints& cp) {
    const auto m = static_cast<py::ssize_t>(cp.points.size());
    const auto l = static_cast<py::ssize_t>(cp.order + 1);
    py::array_t<double> out({m, l, py::ssize_t{3}});
    auto a = out.mutable_unchecked<3>();
    for (py::ssize_t k = 0; k < m; ++k)
        for (py::ssize_t j = 0; j < l; ++j)
            for (int d = 0; d < 3; ++d) a(k, j, d) = cp.points[k][j][d];
    return out;
}

ControlPoints cp_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr,
                            double horizon) {
    if (arr.ndim() != 3 || arr.shape(2) != 3) throw py::value_error("expected an (M, L+1, 3) array");
    auto a = arr.unchecked<3>();
    ControlPoints cp{static_cast<int>(a.shape(1)) - 1, horizon, {}};
    for (py::ssize_t k = 0; k < a.shape(0); ++k) {
        Vec3List poly;
        for (py::ssize_t j = 0; j < a.shape(1); ++j) poly.emplace_back(a(k, j, 0), a(k, j, 1), a(k, j, 2));
        cp.points.push_back(std::move(poly));
    }
    return cp;
}

py::dict series_dict(const ModelSeries& s) {
    py::dict d;
    d["q0"] = py::array_t<double>(s.q0.size(), s.q0.data());
    d["mean_q_attackers"] = py::array_t<double>(s.mean_q_attackers.size(), s.mean_q_attackers.data());
    d["mean_q_defenders"] = py::array_t<double>(s.mean_q_defenders.size(), s.mean_q_defenders.data());
    return d;
}

py::dict stats_dict(const MCStats& s) {
    auto arr = [](const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); };
    py::dict d;
    d["n_runs"] = s.n_runs;
    d["base_seed"] = s.base_seed;
    d["hvu_survival"] = arr(s.hvu_survival);
    d["hvu_halfwidth"] = arr(s.hvu_halfwidth);
    d["attacker_alive_fraction"] = arr(s.attacker_alive_fraction);
    d["attacker_halfwidth"] = arr(s.attacker_halfwidth);
    d["defender_alive_fraction"] = arr(s.defender_alive_fraction);
    d["defender_halfwidth"] = arr(s.defender_halfwidth);
    return d;
}

OptimizerOptions make_options(int max_iterations, const std::string& mode, std::uint64_t seed,
                              double fd_step, double initial_step, double tol) {
    OptimizerOptions o;
    o.max_iterations = max_iterations;
    o.gradient_mode = parse_gradient_mode(mode);
    o.step_seed = seed;
    o.fd_step = fd_step;
    o.initial_step = initial_step;
    o.convergence_tol = tol;
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Swarm-vs-swarm engagement simulation and defender trajectory optimization";

    static py::exception<Error> error(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", error.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
    py::register_exception<DomainError>(m, "DomainError", error.ptr());
    py::register_exception<IntegrationError>(m, "IntegrationError", error.ptr());
    py::register_exception<ConsistencyError>(m, "ConsistencyError", error.ptr());

    py::class_<ScenarioConfig>(m, "Scenario")
        .def_static("from_json", [](const std::string& text) { return load_scenario(text); })
        .def_static("from_file", &load_scenario_file, py::arg("path"))
        .def("to_json", &save_scenario)
        .def("validate", &validate)
        .def_readonly("n_attackers", &ScenarioConfig::n_attackers)
        .def_readonly("n_defenders", &ScenarioConfig::n_defenders)
        .def_readwrite("hvu_position", &ScenarioConfig::hvu_position)
        .def_readwrite("d0", &ScenarioConfig::d0)
        .def_readwrite("d1", &ScenarioConfig::d1)
        .def_readwrite("k_rep", &ScenarioConfig::k_rep)
        .def_readwrite("k_att", &ScenarioConfig::k_att)
        .def_readwrite("s0", &ScenarioConfig::s0)
        .def_readwrite("k_dref", &ScenarioConfig::k_dref)
        .def_readwrite("leader_gain", &ScenarioConfig::leader_gain)
        .def_readwrite("damping", &ScenarioConfig::damping)
        .def_readwrite("lambda_a", &ScenarioConfig::lambda_a)
        .def_readwrite("lambda_d", &ScenarioConfig::lambda_d)
        .def_readwrite("sigma_a", &ScenarioConfig::sigma_a)
        .def_readwrite("sigma_d", &ScenarioConfig::sigma_d)
        .def_readwrite("dt", &ScenarioConfig::dt)
        .def_readwrite("n_steps", &ScenarioConfig::n_steps)
        .def_readwrite("u_max", &ScenarioConfig::u_max)
        .def_readwrite("d_min", &ScenarioConfig::d_min)
        .def_readwrite("survival_threshold", &ScenarioConfig::survival_threshold)
        .def_readwrite("bernstein_order", &ScenarioConfig::bernstein_order)
        .def_readwrite("rng_seed", &ScenarioConfig::rng_seed)
        .def_property_readonly("horizon", &ScenarioConfig::horizon)
        .def_property_readonly("attacker_positions", [](const ScenarioConfig& c) {
            Vec3List p;
            for (const auto& a : c.initial_attackers) p.push_back(a.position);
            return rows_of(p);
        })
        .def_property_readonly("defender_positions", [](const ScenarioConfig& c) {
            Vec3List p;
            for (const auto& a : c.initial_defenders) p.push_back(a.position);
            return rows_of(p);
        })
        .def("__repr__", [](const ScenarioConfig& c) {
            return "<Scenario N=" + std::to_string(c.n_attackers) + " M=" + std::to_string(c.n_defenders) +
                   " steps=" + std::to_string(c.n_steps) + ">";
        });

    py::class_<ControlPoints>(m, "ControlPoints")
        .def(py::init(&cp_from_array), py::arg("points"), py::arg("horizon"))
        .def_static("from_json", &control_points_from_json)
        .def_static("from_file", &load_control_points_file, py::arg("path"))
        .def("to_json", &control_points_to_json)
        .def_readonly("order", &ControlPoints::order)
        .def_readonly("horizon", &ControlPoints::horizon)
        .def_property_readonly("points", &cp_array)
        .def("sample", [](const ControlPoints& cp, double t) {
            const auto s = eval_state(cp, t);
            return py::make_tuple(rows_of(s.position), rows_of(s.velocity), rows_of(s.control));
        }, py::arg("t"), "positions, velocities and controls of every defender at time t")
        .def(py::self == py::self);

    m.def("phi", &phi, py::arg("x"));
    m.def("basis", &basis, py::arg("j"), py::arg("order"), py::arg("t"), py::arg("horizon"));
    m.def("default_initializer", [](std::size_t n, double radius, const Vec3& center, std::uint64_t seed,
                                    double d_min) {
        Vec3List p;
        for (const auto& a : default_initializer(n, radius, center, seed, d_min)) p.push_back(a.position);
        return rows_of(p);
    }, py::arg("n"), py::arg("radius"), py::arg("center"), py::arg("seed"), py::arg("d_min") = 0.0);

    m.def("initial_control_points", [](const ScenarioConfig& cfg, const std::string& strategy) {
        return initialize_control_points(cfg, parse_init_strategy(strategy));
    }, py::arg("scenario"), py::arg("strategy") = "radial-picket");

    m.def("propagate", [](const std::string& model, const ScenarioConfig& cfg, const ControlPoints& cp) {
        EngagementResult r;
        {
            py::gil_scoped_release release;
            r = propagate(parse_model(model), cfg, cp);
        }
        py::dict d = series_dict(series_of(r));
        d["cost"] = r.cost;
        std::vector<double> alive_a, alive_d;
        for (const auto& s : r.iset_series) {
            alive_a.push_back(static_cast<double>(s.attackers_alive()));
            alive_d.push_back(static_cast<double>(s.defenders_alive()));
        }
        d["attackers_alive"] = py::array_t<double>(alive_a.size(), alive_a.data());
        d["defenders_alive"] = py::array_t<double>(alive_d.size(), alive_d.data());
        d["control_violation"] = r.constraints.control_violation;
        d["separation_violation"] = r.constraints.separation_violation;
        return d;
    }, py::arg("model"), py::arg("scenario"), py::arg("control_points"));

    m.def("optimize", [](const std::string& model, const ScenarioConfig& cfg, const ControlPoints& init,
                         int max_iterations, const std::string& mode, std::uint64_t seed, double fd_step,
                         double initial_step, double tol) {
        const auto opts = make_options(max_iterations, mode, seed, fd_step, initial_step, tol);
        OptimizationTrace t;
        {
            py::gil_scoped_release release;
            t = optimize(parse_model(model), cfg, init, opts);
        }
        py::list iterates;
        for (const auto& e : t.iterates) {
            py::dict it;
            it["stage"] = e.stage;
            it["iteration"] = e.iteration;
            it["mu"] = e.mu;
            it["penalized"] = e.penalized;
            it["cost"] = e.cost;
            it["control_violation"] = e.control_violation;
            it["separation_violation"] = e.separation_violation;
            it["step_norm"] = e.step_norm;
            iterates.append(it);
        }
        py::dict d;
        d["control_points"] = t.best_cp;
        d["cost"] = t.best_cost;
        d["violation"] = t.best_violation;
        d["feasible"] = t.feasible;
        d["evaluations"] = t.evaluations;
        d["iterates"] = iterates;
        return d;
    }, py::arg("model"), py::arg("scenario"), py::arg("init"), py::arg("max_iterations") = 100,
       py::arg("mode") = "finite-difference", py::arg("seed") = 0, py::arg("fd_step") = 1e-4,
       py::arg("initial_step") = 0.05, py::arg("tol") = 1e-6);

    m.def("montecarlo", [](const ScenarioConfig& cfg, const ControlPoints& cp, std::size_t runs,
                           std::uint64_t seed) {
        MCStats s;
        {
            py::gil_scoped_release release;
            s = mc_ensemble(cfg, cp, runs, seed);
        }
        return stats_dict(s);
    }, py::arg("scenario"), py::arg("control_points"), py::arg("runs"), py::arg("seed"));

    m.def("compare", [](const ScenarioConfig& cfg, const ControlPoints& cp, std::size_t runs,
                        std::uint64_t seed) {
        ComparisonReport r;
        {
            py::gil_scoped_release release;
            r = run_comparison(cfg, cp, runs, seed);
        }
        py::dict d;
        d["t"] = py::array_t<double>(r.t.size(), r.t.data());
        d["p1"] = series_dict(r.p1);
        d["p2"] = series_dict(r.p2);
        d["p3"] = series_dict(r.p3);
        d["mc"] = stats_dict(r.mc);
        return d;
    }, py::arg("scenario"), py::arg("control_points"), py::arg("runs"), py::arg("seed"));

    m.def("tradeoff", [](const std::string& model, const ScenarioConfig& base, std::vector<std::size_t> defenders,
                         const std::string& weapon, double spawn_radius, int max_iterations,
                         const std::string& mode) {
        TradeoffSettings settings;
        settings.spawn_radius = spawn_radius;
        const auto opts = make_options(max_iterations, mode, 0, 1e-4, 0.05, 1e-6);
        std::vector<TradeoffRow> rows;
        {
            py::gil_scoped_release release;
            rows = tradeoff_sweep(base, parse_model(model), defenders, parse_weapon_config(weapon), opts, settings);
        }
        py::list out;
        for (const auto& r : rows) {
            py::dict d;
            d["model"] = to_string(r.model);
            d["M"] = r.n_defenders;
            d["weapon_config"] = to_string(r.weapon);
            d["J"] = r.cost;
            d["feasible"] = r.feasible;
            d["evaluations"] = r.evaluations;
            d["error"] = r.error;
            out.append(d);
        }
        return out;
    }, py::arg("model"), py::arg("scenario"), py::arg("defenders"), py::arg("weapon") = "symmetric",
       py::arg("spawn_radius") = 1.0, py::arg("max_iterations") = 100, py::arg("mode") = "finite-difference");
}
