#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "swarmdef/types.hpp"

namespace swarmdef {

inline constexpr int kMaxBernsteinOrder = 30;

/// Bernstein control polygons of every defender on [0, horizon].
struct ControlPoints {
    int order = 0;          // L
    double horizon = 0.0;   // t_f
    std::vector<Vec3List> points;  // [defender][0..L]

    std::size_t n_defenders() const { return points.size(); }
    bool operator==(const ControlPoints&) const = default;
};

/// b_{j,L}(t) = C(L,j) t^j (t_f - t)^(L-j) / t_f^L.
double basis(int j, int order, double t, double horizon);

/// All L+1 basis values at t, via the de Casteljau-style recursion.
Eigen::VectorXd basis_all(int order, double t, double horizon);

/// Exact binomial coefficient for n <= kMaxBernsteinOrder.
std::uint64_t binomial(int n, int k);

/// Differentiation matrix D such that the derivative of the curve with
/// control points c (a row vector) has control points c * D, expressed in
/// the same degree-L basis.
struct DiffMatrix {
    Eigen::MatrixXd d;
    Eigen::MatrixXd d2;
};

DiffMatrix diff_matrix(int order, double horizon);

struct DefenderSample {
    Vec3List position;
    Vec3List velocity;
    Vec3List control;
};

DefenderSample eval_state(const ControlPoints& cp, double t);

/// Precomputed evaluator for repeated sampling of the same control points.
class TrajectoryEvaluator {
public:
    explicit TrajectoryEvaluator(const ControlPoints& cp);

    DefenderSample at(double t) const;
    /// Sample at t_k = k * horizon / n_steps, k = 0..n_steps.
    std::vector<DefenderSample> on_grid(std::size_t n_steps) const;

private:
    DefenderSample combine(const Eigen::VectorXd& b) const;

    ControlPoints cp_;
    // [defender] (L+1) x 3 control points of position, velocity, acceleration
    std::vector<Eigen::MatrixXd> pos_, vel_, acc_;
};

/// Every defender's control points all equal to `positions[m]`.
ControlPoints constant_control_points(const Vec3List& positions, int order, double horizon);

std::string control_points_to_json(const ControlPoints& cp);
ControlPoints control_points_from_json(std::string_view json_text);
ControlPoints load_control_points_file(const std::string& path);

}  // namespace swarmdef
