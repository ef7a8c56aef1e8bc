#include "swarmdef/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Geometry>
#include <nlohmann/json.hpp>

#include "swarmdef/parallel.hpp"
#include "swarmdef/rng.hpp"

namespace swarmdef {

std::string to_string(GradientMode mode) {
    switch (mode) {
        case GradientMode::FiniteDifference: return "finite-difference";
        case GradientMode::SimultaneousPerturbation: return "simultaneous-perturbation";
        case GradientMode::PatternSearch: return "derivative-free-pattern";
    }
    return "?";
}

GradientMode parse_gradient_mode(const std::string& name) {
    if (name == "finite-difference" || name == "fd") return GradientMode::FiniteDifference;
    if (name == "simultaneous-perturbation" || name == "spsa")
        return GradientMode::SimultaneousPerturbation;
    if (name == "derivative-free-pattern" || name == "pattern") return GradientMode::PatternSearch;
    throw ConfigError("unknown gradient mode '" + name + "'");
}

void OptimizerOptions::validate() const {
    if (max_iterations < 0) throw ConfigError("max_iterations must be >= 0");
    if (!(fd_step > 0.0)) throw ConfigError("fd_step must be > 0");
    if (!(penalty_initial > 0.0)) throw ConfigError("penalty_initial must be > 0");
    if (!(penalty_growth > 1.0)) throw ConfigError("penalty_growth must be > 1");
    if (!(penalty_max >= penalty_initial)) throw ConfigError("penalty_max must be >= penalty_initial");
    if (!(convergence_tol > 0.0)) throw ConfigError("convergence_tol must be > 0");
    if (!(initial_step > 0.0)) throw ConfigError("initial_step must be > 0");
}

InitStrategy parse_init_strategy(const std::string& name) {
    if (name == "hold") return InitStrategy::Hold;
    if (name == "radial-picket") return InitStrategy::RadialPicket;
    if (name == "line-to-threat") return InitStrategy::LineToThreat;
    throw ConfigError("unknown initialization strategy '" + name + "'");
}

namespace {

Vec3 attacker_centroid(const ScenarioConfig& cfg) {
    Vec3 c = Vec3::Zero();
    for (const auto& a : cfg.initial_attackers) c += a.position;
    return c / static_cast<double>(cfg.initial_attackers.size());
}

// Unit vectors completing `u` to an orthonormal frame.
std::pair<Vec3, Vec3> orthonormal_pair(const Vec3& u) {
    Vec3 helper = std::abs(u.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    Vec3 e1 = u.cross(helper).normalized();
    Vec3 e2 = u.cross(e1);
    return {e1, e2};
}

Vec3List straight_polygon(const Vec3& from, const Vec3& to, int order) {
    Vec3List poly;
    for (int j = 0; j <= order; ++j)
        poly.push_back(from + (static_cast<double>(j) / order) * (to - from));
    return poly;
}

}  // namespace

ControlPoints initialize_control_points(const ScenarioConfig& cfg, InitStrategy strategy) {
    ControlPoints cp;
    cp.order = cfg.bernstein_order;
    cp.horizon = cfg.horizon();
    const std::size_t m = cfg.n_defenders;
    const Vec3 centroid = attacker_centroid(cfg);
    for (std::size_t k = 0; k < m; ++k) {
        const Vec3 p0 = cfg.initial_defenders[k].position;
        Vec3 target = p0;
        switch (strategy) {
            case InitStrategy::Hold: break;
            case InitStrategy::RadialPicket: {
                Vec3 axis = centroid - cfg.hvu_position;
                axis = axis.norm() > 0.0 ? axis.normalized() : Vec3::UnitX();
                if (m == 1) {
                    target = cfg.hvu_position + cfg.s0 * axis;
                } else {
                    const auto [e1, e2] = orthonormal_pair(axis);
                    const double cone = std::numbers::pi / 4.0;
                    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                                         static_cast<double>(m);
                    const Vec3 dir = std::cos(cone) * axis +
                                     std::sin(cone) * (std::cos(theta) * e1 + std::sin(theta) * e2);
                    target = cfg.hvu_position + cfg.s0 * dir;
                }
                break;
            }
            case InitStrategy::LineToThreat:
                // halfway along the segment to the attacker centroid
                target = p0 + 0.5 * (centroid - p0);
                break;
        }
        cp.points.push_back(straight_polygon(p0, target, cp.order));
    }
    return cp;
}

double penalized_objective(ModelKind model, const ScenarioConfig& cfg, const ControlPoints& cp,
                           double mu) {
    if (mu < 0.0) throw DomainError("penalty weight must be >= 0");
    const double cost = propagate_cost(model, cfg, cp);
    if (mu == 0.0) return cost;
    const ConstraintReport r = constraint_residuals(cfg, cp);
    return cost + mu * (r.control_violation * r.control_violation +
                        r.separation_violation * r.separation_violation);
}

namespace {

using Vector = std::vector<double>;

// Decision vector: every control point except the pinned first one, divided
// by the scenario's spatial extent.
class Problem {
public:
    Problem(ModelKind model, const ScenarioConfig& cfg, const ControlPoints& init)
        : model_(model), cfg_(cfg), base_(init) {
        const double extent = spatial_extent(cfg);
        scale_ = extent > 0.0 ? extent : 1.0;
    }

    std::size_t dim() const {
        return base_.n_defenders() * static_cast<std::size_t>(base_.order) * 3;
    }

    Vector encode(const ControlPoints& cp) const {
        Vector x;
        x.reserve(dim());
        for (const auto& poly : cp.points)
            for (std::size_t j = 1; j < poly.size(); ++j)
                for (int c = 0; c < 3; ++c) x.push_back(poly[j][c] / scale_);
        return x;
    }

    ControlPoints decode(const Vector& x) const {
        ControlPoints cp = base_;
        std::size_t idx = 0;
        for (auto& poly : cp.points)
            for (std::size_t j = 1; j < poly.size(); ++j)
                for (int c = 0; c < 3; ++c) poly[j][c] = x[idx++] * scale_;
        return cp;
    }

    struct Eval {
        double penalized = 0.0;
        double cost = 0.0;
        ConstraintReport constraints;
    };

    Eval evaluate(const Vector& x, double mu) const {
        const ControlPoints cp = decode(x);
        Eval e;
        e.cost = propagate_cost(model_, cfg_, cp);
        e.constraints = constraint_residuals(cfg_, cp);
        const double cv = e.constraints.control_violation;
        const double sv = e.constraints.separation_violation;
        e.penalized = e.cost + mu * (cv * cv + sv * sv);
        return e;
    }

private:
    ModelKind model_;
    const ScenarioConfig& cfg_;
    ControlPoints base_;
    double scale_ = 1.0;
};

double violation(const Problem::Eval& e) {
    return std::max(e.constraints.control_violation, e.constraints.separation_violation);
}

double inf_norm(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double diff_norm(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

// Owns the trace and the best-iterate bookkeeping across penalty stages.
class Driver {
public:
    Driver(const Problem& problem, const OptimizerOptions& opts, OptimizationTrace& trace)
        : problem_(problem), opts_(opts), trace_(trace) {}

    Problem::Eval eval(const Vector& x, double mu) {
        ++trace_.evaluations;
        return problem_.evaluate(x, mu);
    }

    std::vector<Problem::Eval> eval_batch(const std::vector<Vector>& xs, double mu) {
        std::vector<Problem::Eval> out(xs.size());
        parallel_for(xs.size(), [&](std::size_t i) { out[i] = problem_.evaluate(xs[i], mu); });
        trace_.evaluations += xs.size();
        return out;
    }

    void accept(const Vector& x, const Problem::Eval& e, int stage, int iteration, double mu,
                double step_norm) {
        trace_.iterates.push_back({stage, iteration, mu, e.penalized, e.cost,
                                   e.constraints.control_violation,
                                   e.constraints.separation_violation, step_norm});
        const double v = violation(e);
        const bool feasible = v <= kFeasibilityTol;
        // strict comparisons keep the earlier iterate on ties
        bool better = false;
        if (!have_best_) {
            better = true;
        } else if (feasible && !best_feasible_) {
            better = true;
        } else if (feasible && best_feasible_) {
            better = e.cost < best_cost_;
        } else if (!feasible && !best_feasible_) {
            better = v < best_violation_ || (v == best_violation_ && e.cost < best_cost_);
        }
        if (better) {
            have_best_ = true;
            best_feasible_ = feasible;
            best_cost_ = e.cost;
            best_violation_ = v;
            best_x_ = x;
        }
    }

    void finish() {
        trace_.best_cp = problem_.decode(best_x_);
        trace_.best_cost = best_cost_;
        trace_.best_violation = best_violation_;
        trace_.feasible = best_feasible_;
    }

    // Each stage minimizer updates x/e in place and reports accepted iterates.
    void gradient_descent(Vector& x, Problem::Eval& e, int stage, double mu);
    void spsa(Vector& x, Problem::Eval& e, int stage, double mu);
    void pattern(Vector& x, Problem::Eval& e, int stage, double mu);

private:
    bool converged(double before, double after) const {
        return before - after <= opts_.convergence_tol * std::max(1.0, std::abs(before));
    }

    const Problem& problem_;
    const OptimizerOptions& opts_;
    OptimizationTrace& trace_;
    bool have_best_ = false;
    bool best_feasible_ = false;
    double best_cost_ = 0.0;
    double best_violation_ = 0.0;
    Vector best_x_;
};

void Driver::gradient_descent(Vector& x, Problem::Eval& e, int stage, double mu) {
    const std::size_t n = x.size();
    Vector prev_x, prev_g;
    double alpha = 0.0;
    for (int it = 1; it <= opts_.max_iterations; ++it) {
        std::vector<Vector> probes(n, x);
        Vector h(n);
        for (std::size_t i = 0; i < n; ++i) {
            h[i] = opts_.fd_step * std::max(1.0, std::abs(x[i]));
            probes[i][i] += h[i];
        }
        const auto fx = eval_batch(probes, mu);
        Vector g(n);
        for (std::size_t i = 0; i < n; ++i) g[i] = (fx[i].penalized - e.penalized) / h[i];
        const double gmax = inf_norm(g);
        if (gmax == 0.0) return;

        // Barzilai-Borwein trial step after the first iteration
        double trial = opts_.initial_step / gmax;
        if (!prev_g.empty()) {
            double ss = 0.0, sy = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double s = x[i] - prev_x[i];
                const double y = g[i] - prev_g[i];
                ss += s * s;
                sy += s * y;
            }
            trial = sy > 0.0 ? ss / sy : 2.0 * alpha;
            trial = std::min(trial, 10.0 * opts_.initial_step / gmax);
        }
        double g2 = 0.0;
        for (double gi : g) g2 += gi * gi;

        bool accepted = false;
        alpha = trial;
        for (int bt = 0; bt < 40; ++bt, alpha *= 0.5) {
            Vector xn(n);
            for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] - alpha * g[i];
            const auto en = eval(xn, mu);
            if (en.penalized <= e.penalized - 1e-4 * alpha * g2 && en.penalized < e.penalized) {
                const double before = e.penalized;
                const double step = diff_norm(xn, x);
                prev_x = x;
                prev_g = g;
                x = std::move(xn);
                e = en;
                accept(x, e, stage, it, mu, step);
                accepted = true;
                if (converged(before, e.penalized)) return;
                break;
            }
        }
        if (!accepted) return;
    }
}

void Driver::spsa(Vector& x, Problem::Eval& e, int stage, double mu) {
    const std::size_t n = x.size();
    std::mt19937_64 gen(opts_.step_seed);
    int rejected_in_row = 0;
    for (int it = 1; it <= opts_.max_iterations; ++it) {
        const double ck = 1e-2 / std::pow(static_cast<double>(it), 0.101);
        const double ak = opts_.initial_step / std::pow(static_cast<double>(it) + 10.0, 0.602) *
                          std::pow(11.0, 0.602);
        Vector delta(n), xp(x), xm(x);
        for (std::size_t i = 0; i < n; ++i) {
            delta[i] = (gen() >> 63) ? 1.0 : -1.0;
            xp[i] += ck * delta[i];
            xm[i] -= ck * delta[i];
        }
        const auto pm = eval_batch({xp, xm}, mu);
        const double slope = (pm[0].penalized - pm[1].penalized) / (2.0 * ck);
        if (slope == 0.0) {
            if (++rejected_in_row >= 20) return;
            continue;
        }
        // gradient estimate is slope * delta; normalize to a max-norm step of ak
        Vector xn(x);
        const double sgn = slope > 0.0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < n; ++i) xn[i] -= ak * sgn * delta[i];
        const auto en = eval(xn, mu);
        if (en.penalized < e.penalized) {
            const double step = diff_norm(xn, x);
            x = std::move(xn);
            e = en;
            accept(x, e, stage, it, mu, step);
            rejected_in_row = 0;
        } else if (++rejected_in_row >= 20) {
            return;
        }
    }
}

void Driver::pattern(Vector& x, Problem::Eval& e, int stage, double mu) {
    const std::size_t n = x.size();
    double delta = opts_.initial_step;
    const double min_delta = opts_.initial_step * 1e-3;
    for (int it = 1; it <= opts_.max_iterations && delta >= min_delta; ++it) {
        const double before = e.penalized;
        bool improved = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (double sign : {1.0, -1.0}) {
                Vector xn(x);
                xn[i] += sign * delta;
                const auto en = eval(xn, mu);
                if (en.penalized < e.penalized) {
                    x = std::move(xn);
                    e = en;
                    improved = true;
                    break;
                }
            }
        }
        if (improved) {
            accept(x, e, stage, it, mu, delta);
            if (converged(before, e.penalized)) delta *= 0.5;
        } else {
            delta *= 0.5;
        }
    }
}

}  // namespace

OptimizationTrace optimize(ModelKind model, const ScenarioConfig& cfg, const ControlPoints& init,
                           const OptimizerOptions& opts) {
    opts.validate();
    check_compatible(cfg, init);
    for (std::size_t k = 0; k < cfg.n_defenders; ++k)
        if (init.points[k][0] != cfg.initial_defenders[k].position)
            throw ConfigError("first control point of defender " + std::to_string(k) +
                              " must equal its initial position");

    const Problem problem(model, cfg, init);
    OptimizationTrace trace;
    Driver driver(problem, opts, trace);

    Vector x = problem.encode(init);
    double mu = opts.penalty_initial;
    auto e = driver.eval(x, mu);
    driver.accept(x, e, 0, 0, mu, 0.0);

    for (int stage = 0;; ++stage) {
        if (stage > 0) {
            e = driver.eval(x, mu);
            driver.accept(x, e, stage, 0, mu, 0.0);
        }
        switch (opts.gradient_mode) {
            case GradientMode::FiniteDifference: driver.gradient_descent(x, e, stage, mu); break;
            case GradientMode::SimultaneousPerturbation: driver.spsa(x, e, stage, mu); break;
            case GradientMode::PatternSearch: driver.pattern(x, e, stage, mu); break;
        }
        if (violation(e) <= kFeasibilityTol) break;
        mu *= opts.penalty_growth;
        if (mu > opts.penalty_max) break;
    }
    driver.finish();
    return trace;
}

std::string trace_to_json(const OptimizationTrace& trace, ModelKind model,
                          const OptimizerOptions& opts) {
    nlohmann::json its = nlohmann::json::array();
    for (const auto& t : trace.iterates)
        its.push_back({{"stage", t.stage},
                       {"iteration", t.iteration},
                       {"mu", t.mu},
                       {"penalized", t.penalized},
                       {"cost", t.cost},
                       {"control_violation", t.control_violation},
                       {"separation_violation", t.separation_violation},
                       {"step_norm", t.step_norm}});
    nlohmann::json doc = {{"model", to_string(model)},
                          {"gradient_mode", to_string(opts.gradient_mode)},
                          {"step_seed", opts.step_seed},
                          {"evaluations", trace.evaluations},
                          {"best_cost", trace.best_cost},
                          {"best_violation", trace.best_violation},
                          {"feasible", trace.feasible},
                          {"iterates", its}};
    return doc.dump(2);
}

}  // namespace swarmdef
