#include <doctest.h>

#include <random>

#include "swarmdef/bernstein.hpp"
#include "test_util.hpp"

using namespace swarmdef;
using swarmdef::testing::random_vec;

namespace {

// Degree elevation n -> n+1 of a control polygon.
Vec3List elevate(const Vec3List& c) {
    const double n1 = static_cast<double>(c.size());
    Vec3List out(c.size() + 1);
    out.front() = c.front();
    out.back() = c.back();
    for (std::size_t i = 1; i < c.size(); ++i)
        out[i] = (i / n1) * c[i - 1] + (1.0 - i / n1) * c[i];
    return out;
}

ControlPoints random_cp(std::mt19937_64& gen, std::size_t m, int order, double tf) {
    ControlPoints cp{order, tf, {}};
    for (std::size_t d = 0; d < m; ++d) {
        Vec3List poly;
        for (int j = 0; j <= order; ++j) poly.push_back(random_vec(gen, 5.0));
        cp.points.push_back(poly);
    }
    return cp;
}

}  // namespace

TEST_CASE("basis values") {
    CHECK(basis(0, 5, 0.0, 2.0) == 1.0);
    for (int j = 1; j <= 5; ++j) CHECK(basis(j, 5, 0.0, 2.0) == 0.0);
    CHECK(basis(5, 5, 2.0, 2.0) == 1.0);
    CHECK(basis(2, 4, 1.5, 3.0) == doctest::Approx(0.375).epsilon(1e-15));
    CHECK_THROWS_AS(basis(5, 4, 1.0, 3.0), DomainError);
    CHECK_THROWS_AS(basis(-1, 4, 1.0, 3.0), DomainError);
    CHECK_THROWS_AS(basis(1, 4, 3.5, 3.0), DomainError);
    CHECK(binomial(30, 15) == 155117520ULL);
}

TEST_CASE("partition of unity and non-negativity") {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.0, 7.0);
    for (int order : {2, 8, 15, 16, 25, 30}) {
        for (int trial = 0; trial < 100; ++trial) {
            const double t = u(gen);
            double sum = 0.0;
            const auto all = basis_all(order, t, 7.0);
            for (int j = 0; j <= order; ++j) {
                const double b = basis(j, order, t, 7.0);
                CHECK(b >= 0.0);
                CHECK(b == doctest::Approx(all[j]).epsilon(1e-12).scale(1.0));
                sum += b;
            }
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("diff matrix") {
    CHECK_THROWS_AS(diff_matrix(1, 1.0), ConfigError);
    CHECK_THROWS_AS(diff_matrix(31, 1.0), ConfigError);
    const auto dm = diff_matrix(6, 2.5);
    CHECK((dm.d2 - dm.d * dm.d).norm() < 1e-12);

    SUBCASE("constant polygon") {
        const Eigen::RowVectorXd c = Eigen::RowVectorXd::Constant(7, 5.0);
        CHECK((c * dm.d).norm() < 1e-12);
    }
    SUBCASE("linear ramp") {
        // s(t) = t has control points j * t_f / L
        Eigen::RowVectorXd c(7);
        for (int j = 0; j <= 6; ++j) c[j] = j * 2.5 / 6.0;
        const Eigen::RowVectorXd dc = c * dm.d;
        for (int j = 0; j <= 6; ++j) CHECK(dc[j] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("matches central differences") {
        std::mt19937_64 gen(4);
        const auto cp = random_cp(gen, 1, 6, 2.5);
        const TrajectoryEvaluator ev(cp);
        const double h = 1e-5;
        for (int s = 0; s < 20; ++s) {
            const double t = 0.1 + 2.3 * s / 19.0;
            const Vec3 fd = (ev.at(t + h).position[0] - ev.at(t - h).position[0]) / (2 * h);
            const Vec3 v = ev.at(t).velocity[0];
            CHECK((fd - v).norm() <= 1e-6 * std::max(1.0, v.norm()));
            const Vec3 fa = (ev.at(t + h).velocity[0] - ev.at(t - h).velocity[0]) / (2 * h);
            const Vec3 a = ev.at(t).control[0];
            CHECK((fa - a).norm() <= 1e-6 * std::max(1.0, a.norm()));
        }
    }
}

TEST_CASE("eval_state on known curves") {
    const double tf = 4.0;
    SUBCASE("constant") {
        const auto cp = constant_control_points({Vec3(1, 2, 3), Vec3(-1, 0, 4)}, 8, tf);
        for (double t : {0.0, 1.3, 4.0}) {
            const auto s = eval_state(cp, t);
            CHECK((s.position[1] - Vec3(-1, 0, 4)).norm() < 1e-12);
            CHECK(s.velocity[1].norm() < 1e-12);
            CHECK(s.control[1].norm() < 1e-12);
        }
    }
    SUBCASE("straight line traversed linearly") {
        ControlPoints cp{5, tf, {{}}};
        for (int j = 0; j <= 5; ++j) cp.points[0].push_back(Vec3(1, 1, 0) + j / 5.0 * Vec3(4, -2, 8));
        for (double t : {0.0, 0.7, 3.9}) {
            const auto s = eval_state(cp, t);
            CHECK((s.velocity[0] - Vec3(1, -0.5, 2)).norm() < 1e-12);
            CHECK(s.control[0].norm() < 1e-11);
        }
    }
    SUBCASE("quadratic built by degree elevation") {
        const Vec3 p(1, -2, 0.5), v(0.3, 0.1, -1), a(0.2, -0.4, 0.05);
        Vec3List c{p, p + v * tf / 2, p + v * tf + a * tf * tf / 2};
        while (c.size() < 9) c = elevate(c);
        const ControlPoints cp{8, tf, {c}};
        for (double t : {0.0, 0.5, 2.2, 4.0}) {
            const auto s = eval_state(cp, t);
            CHECK((s.position[0] - (p + v * t + 0.5 * a * t * t)).norm() < 1e-10);
            CHECK((s.velocity[0] - (v + a * t)).norm() < 1e-10);
            CHECK((s.control[0] - a).norm() < 1e-10);
        }
    }
    SUBCASE("out of horizon") {
        const auto cp = constant_control_points({Vec3::Zero()}, 3, tf);
        CHECK_THROWS_AS(eval_state(cp, -0.1), DomainError);
        CHECK_THROWS_AS(eval_state(cp, 4.1), DomainError);
    }
}

TEST_CASE("endpoints and convex hull") {
    std::mt19937_64 gen(9);
    for (int order : {4, 8, 20}) {
        const auto cp = random_cp(gen, 2, order, 3.0);
        const TrajectoryEvaluator ev(cp);
        CHECK((ev.at(0.0).position[1] - cp.points[1].front()).norm() < 1e-12);
        CHECK((ev.at(3.0).position[1] - cp.points[1].back()).norm() < 1e-12);
        for (int s = 0; s < 50; ++s) {
            const Vec3 x = ev.at(3.0 * s / 49.0).position[0];
            for (int d = 0; d < 20; ++d) {
                const Vec3 u = random_vec(gen, 1.0).normalized();
                double support = -1e300;
                for (const auto& c : cp.points[0]) support = std::max(support, u.dot(c));
                CHECK(u.dot(x) <= support + 1e-12);
            }
        }
    }
}

TEST_CASE("grid evaluation agrees with point evaluation") {
    std::mt19937_64 gen(10);
    const auto cp = random_cp(gen, 3, 8, 25.0);
    const TrajectoryEvaluator ev(cp);
    const auto grid = ev.on_grid(250);
    REQUIRE(grid.size() == 251);
    for (std::size_t k : {0u, 17u, 125u, 250u}) {
        const auto s = eval_state(cp, 25.0 * k / 250.0);
        for (std::size_t d = 0; d < 3; ++d) {
            CHECK((grid[k].position[d] - s.position[d]).norm() < 1e-10);
            CHECK((grid[k].velocity[d] - s.velocity[d]).norm() < 1e-10);
        }
    }
}

TEST_CASE("control point JSON round trip") {
    std::mt19937_64 gen(11);
    const auto cp = random_cp(gen, 2, 4, 12.5);
    CHECK(control_points_from_json(control_points_to_json(cp)) == cp);
    CHECK_THROWS_AS(control_points_from_json("{\"order\": 2}"), ParseError);
    CHECK_THROWS_AS(control_points_from_json(
                        R"({"order": 2, "horizon": 1, "control_points": [[[0,0,0],[1,1,1]]]})"),
                    Error);
}
