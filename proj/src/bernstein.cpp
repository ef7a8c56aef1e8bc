#include "swarmdef/bernstein.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace swarmdef {

namespace {

void check_order(int order) {
    if (order < 0 || order > kMaxBernsteinOrder)
        throw DomainError("Bernstein order must be in [0, " + std::to_string(kMaxBernsteinOrder) +
                          "]");
}

void check_time(double t, double horizon) {
    if (!(horizon > 0.0)) throw DomainError("Bernstein horizon must be > 0");
    if (!(t >= 0.0 && t <= horizon)) throw DomainError("time outside [0, horizon]");
}

}  // namespace

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return c;
}

Eigen::VectorXd basis_all(int order, double t, double horizon) {
    check_order(order);
    check_time(t, horizon);
    const double u = t / horizon;
    const double w = 1.0 - u;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(order + 1);
    b(0) = 1.0;
    for (int deg = 1; deg <= order; ++deg) {
        for (int j = deg; j >= 1; --j) b(j) = w * b(j) + u * b(j - 1);
        b(0) = w * b(0);
    }
    return b;
}

double basis(int j, int order, double t, double horizon) {
    check_order(order);
    if (j < 0 || j > order) throw DomainError("basis index outside [0, L]");
    check_time(t, horizon);
    if (order > 15) return basis_all(order, t, horizon)(j);
    const double u = t / horizon;
    return static_cast<double>(binomial(order, j)) * std::pow(u, j) * std::pow(1.0 - u, order - j);
}

DiffMatrix diff_matrix(int order, double horizon) {
    if (order < 2 || order > kMaxBernsteinOrder)
        throw ConfigError("differentiation matrix needs Bernstein order in [2, " +
                          std::to_string(kMaxBernsteinOrder) + "]");
    if (!(horizon > 0.0)) throw DomainError("Bernstein horizon must be > 0");
    const int L = order;
    // Hodograph L/t_f (c_{i+1} - c_i) elevated back to degree L.
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(L + 1, L + 1);
    for (int j = 0; j <= L; ++j) {
        if (j > 0) d(j - 1, j) = -j / horizon;
        d(j, j) = (2.0 * j - L) / horizon;
        if (j < L) d(j + 1, j) = (L - j) / horizon;
    }
    return {d, d * d};
}

ControlPoints constant_control_points(const Vec3List& positions, int order, double horizon) {
    ControlPoints cp;
    cp.order = order;
    cp.horizon = horizon;
    for (const auto& p : positions) cp.points.emplace_back(static_cast<std::size_t>(order) + 1, p);
    return cp;
}

TrajectoryEvaluator::TrajectoryEvaluator(const ControlPoints& cp) : cp_(cp) {
    check_order(cp.order);
    const DiffMatrix dm = diff_matrix(cp.order, cp.horizon);
    const int n = cp.order + 1;
    for (const auto& poly : cp.points) {
        if (static_cast<int>(poly.size()) != n)
            throw DomainError("control polygon length does not match order + 1");
        Eigen::MatrixXd c(n, 3);
        for (int j = 0; j < n; ++j) c.row(j) = poly[static_cast<std::size_t>(j)].transpose();
        // c * D in the row-vector convention is D^T c with control points as rows.
        pos_.push_back(c);
        vel_.push_back(dm.d.transpose() * c);
        acc_.push_back(dm.d2.transpose() * c);
    }
}

DefenderSample TrajectoryEvaluator::combine(const Eigen::VectorXd& b) const {
    DefenderSample s;
    const std::size_t m = pos_.size();
    s.position.resize(m);
    s.velocity.resize(m);
    s.control.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        s.position[k] = pos_[k].transpose() * b;
        s.velocity[k] = vel_[k].transpose() * b;
        s.control[k] = acc_[k].transpose() * b;
    }
    return s;
}

DefenderSample TrajectoryEvaluator::at(double t) const {
    return combine(basis_all(cp_.order, t, cp_.horizon));
}

std::vector<DefenderSample> TrajectoryEvaluator::on_grid(std::size_t n_steps) const {
    std::vector<DefenderSample> out;
    out.reserve(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t = cp_.horizon * static_cast<double>(k) / static_cast<double>(n_steps);
        out.push_back(at(k == n_steps ? cp_.horizon : t));
    }
    return out;
}

DefenderSample eval_state(const ControlPoints& cp, double t) {
    return TrajectoryEvaluator(cp).at(t);
}

std::string control_points_to_json(const ControlPoints& cp) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& poly : cp.points) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& p : poly) row.push_back({p.x(), p.y(), p.z()});
        pts.push_back(row);
    }
    nlohmann::json doc = {{"order", cp.order}, {"horizon", cp.horizon}, {"control_points", pts}};
    return doc.dump(2);
}

ControlPoints control_points_from_json(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("", "top level must be an object");
    for (const auto& [key, _] : doc.items())
        if (key != "order" && key != "horizon" && key != "control_points")
            throw ParseError(key, "unknown field");
    for (const char* key : {"order", "horizon", "control_points"})
        if (!doc.contains(key)) throw ParseError(key, "required field missing");
    if (!doc["order"].is_number_integer()) throw ParseError("order", "expected an integer");
    if (!doc["horizon"].is_number()) throw ParseError("horizon", "expected a number");

    ControlPoints cp;
    cp.order = doc["order"].get<int>();
    cp.horizon = doc["horizon"].get<double>();
    check_order(cp.order);
    if (!(cp.horizon > 0.0)) throw ValidationError("horizon > 0 violated");
    const auto& pts = doc["control_points"];
    if (!pts.is_array()) throw ParseError("control_points", "expected an array");
    for (std::size_t m = 0; m < pts.size(); ++m) {
        const std::string path = "control_points[" + std::to_string(m) + "]";
        if (!pts[m].is_array() || pts[m].size() != static_cast<std::size_t>(cp.order) + 1)
            throw ParseError(path, "expected order + 1 points");
        Vec3List poly;
        for (std::size_t j = 0; j < pts[m].size(); ++j) {
            const auto& p = pts[m][j];
            const std::string ppath = path + "[" + std::to_string(j) + "]";
            if (!p.is_array() || p.size() != 3) throw ParseError(ppath, "expected a 3-element array");
            Vec3 v;
            for (int c = 0; c < 3; ++c) {
                if (!p[c].is_number()) throw ParseError(ppath, "expected numbers");
                v[c] = p[c].get<double>();
            }
            if (!v.allFinite()) throw ValidationError(ppath + ": non-finite control point");
            poly.push_back(v);
        }
        cp.points.push_back(std::move(poly));
    }
    return cp;
}

ControlPoints load_control_points_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open control-point file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return control_points_from_json(buf.str());
}

}  // namespace swarmdef
