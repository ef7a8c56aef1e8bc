#include <doctest.h>

#include <cmath>
#include <random>

#include "swarmdef/attrition.hpp"
#include "test_util.hpp"

using namespace swarmdef;
using swarmdef::testing::random_vec;
using swarmdef::testing::small_config;

namespace {

// 2 * integral_x^inf of the standard normal density, by composite Simpson on [x, x + 12].
double phi_oracle(double x) {
    const int n = 200000;
    const double a = x, b = x + 12.0, h = (b - a) / n;
    auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
    double s = pdf(a) + pdf(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * pdf(a + i * h);
    return 2.0 * s * h / 3.0;
}

SurvivalVector random_q(std::mt19937_64& gen, std::size_t n, std::size_t m) {
    std::uniform_real_distribution<double> u(0.2, 1.0);
    SurvivalVector q = SurvivalVector::ones(n, m);
    q.q_hvu = u(gen);
    for (auto& v : q.q_attackers) v = u(gen);
    for (auto& v : q.q_defenders) v = u(gen);
    return q;
}

DamageRates random_rates(std::mt19937_64& gen, std::size_t n, std::size_t m, double hi) {
    std::uniform_real_distribution<double> u(0.0, hi);
    DamageRates r;
    r.att.resize(n, m);
    r.def.resize(m, n);
    r.hvu.resize(n);
    for (Eigen::Index i = 0; i < r.att.size(); ++i) r.att.data()[i] = u(gen);
    for (Eigen::Index i = 0; i < r.def.size(); ++i) r.def.data()[i] = u(gen);
    for (Eigen::Index i = 0; i < r.hvu.size(); ++i) r.hvu[i] = u(gen);
    return r;
}

}  // namespace

TEST_CASE("phi") {
    CHECK(phi(0.0) == 1.0);
    CHECK(phi(40.0) < 1e-12);
    CHECK(phi(1.0) == doctest::Approx(phi_oracle(1.0)).epsilon(1e-10));
    CHECK(phi(1.0) == doctest::Approx(0.3173).epsilon(1e-4));
    CHECK(phi(2.5) == doctest::Approx(phi_oracle(2.5)).epsilon(1e-9));
    double prev = phi(0.0);
    for (double x = 0.01; x < 8.0; x += 0.01) {
        const double v = phi(x);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(phi(-1e-3), DomainError);
    CHECK(phi_gaussian(0.0) == 1.0);
    CHECK_THROWS_AS(phi_gaussian(-1.0), DomainError);
}

TEST_CASE("damage rates") {
    auto cfg = small_config(2, 1);
    cfg.lambda_a = 0.8;
    cfg.lambda_d = 0.6;
    SwarmState s = initial_state(cfg);
    s.hvu_pos = Vec3::Zero();
    s.defender_pos[0] = Vec3(0.0, 0.0, 0.0);

    SUBCASE("co-located pair") {
        s.attacker_pos = {Vec3::Zero(), Vec3(50.0, 0.0, 0.0)};
        const auto r = damage_rates(s, cfg);
        CHECK(r.att(0, 0) == 0.6);
        CHECK(r.def(0, 0) == 0.8);
        CHECK(r.hvu(0) == 0.8);
        CHECK(r.att(1, 0) < 1e-12);
    }
    SUBCASE("hand-placed values") {
        s.attacker_pos = {Vec3(1.0, 2.0, 2.0), Vec3(0.0, 3.0, 4.0)};
        s.defender_pos[0] = Vec3(1.0, 0.0, 0.0);
        const auto r = damage_rates(s, cfg);
        // |s_00|^2 = 8, |s_10|^2 = 26, |h_0|^2 = 9, |h_1|^2 = 25
        CHECK(r.att(0, 0) == doctest::Approx(0.6 * phi_oracle(8.0 / 6.0)).epsilon(1e-9));
        CHECK(r.att(1, 0) == doctest::Approx(0.6 * phi_oracle(26.0 / 6.0)).epsilon(1e-8));
        CHECK(r.def(0, 0) == doctest::Approx(0.8 * phi_oracle(8.0 / 6.0)).epsilon(1e-9));
        CHECK(r.hvu(0) == doctest::Approx(0.8 * phi_oracle(9.0 / 6.0)).epsilon(1e-9));
        CHECK(r.hvu(1) == doctest::Approx(0.8 * phi_oracle(25.0 / 6.0)).epsilon(1e-8));
    }
    SUBCASE("zero lethality") {
        cfg.lambda_d = 0.0;
        const auto r = damage_rates(s, cfg);
        CHECK(r.att.isZero(0.0));
    }
}

TEST_CASE("survival step") {
    std::mt19937_64 gen(21);
    SUBCASE("no fire") {
        const auto q = random_q(gen, 3, 2);
        DamageRates r{Eigen::MatrixXd::Zero(3, 2), Eigen::MatrixXd::Zero(2, 3), Eigen::VectorXd::Zero(3)};
        CHECK(survival_step(q, r, EffectivenessWeights::ones(3, 2), 0.1) == q);
    }
    SUBCASE("single factor") {
        DamageRates r{Eigen::MatrixXd::Constant(1, 1, 0.4), Eigen::MatrixXd::Zero(1, 1),
                      Eigen::VectorXd::Zero(1)};
        SurvivalVector q = SurvivalVector::ones(1, 1);
        q.q_attackers[0] = 0.9;
        const auto out = survival_step(q, r, EffectivenessWeights::ones(1, 1), 0.1);
        CHECK(out.q_attackers[0] == doctest::Approx(0.9 * (1.0 - 0.04)).epsilon(1e-15));
    }
    SUBCASE("log-domain oracle over 5 steps") {
        const std::size_t n = 2, m = 2;
        const double dt = 0.1;
        SurvivalVector q = random_q(gen, n, m);
        std::vector<double> la(n), ld(m);
        double lh = std::log(q.q_hvu);
        for (std::size_t j = 0; j < n; ++j) la[j] = std::log(q.q_attackers[j]);
        for (std::size_t k = 0; k < m; ++k) ld[k] = std::log(q.q_defenders[k]);
        for (int step = 0; step < 5; ++step) {
            const auto r = random_rates(gen, n, m, 3.0);
            const EffectivenessWeights w{q.q_attackers, q.q_defenders};
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < m; ++k) la[j] += std::log1p(-r.att(j, k) * w.defender_w[k] * dt);
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t j = 0; j < n; ++j) ld[k] += std::log1p(-r.def(k, j) * w.attacker_w[j] * dt);
            for (std::size_t j = 0; j < n; ++j) lh += std::log1p(-r.hvu(j) * w.attacker_w[j] * dt);
            q = survival_step(q, r, w, dt);
        }
        CHECK(q.q_hvu == doctest::Approx(std::exp(lh)).epsilon(1e-10));
        for (std::size_t j = 0; j < n; ++j) CHECK(q.q_attackers[j] == doctest::Approx(std::exp(la[j])).epsilon(1e-10));
        for (std::size_t k = 0; k < m; ++k) CHECK(q.q_defenders[k] == doctest::Approx(std::exp(ld[k])).epsilon(1e-10));
    }
    SUBCASE("monotone and in range") {
        for (int trial = 0; trial < 200; ++trial) {
            const auto q = random_q(gen, 4, 3);
            const auto r = random_rates(gen, 4, 3, 10.0);
            const auto out = survival_step(q, r, EffectivenessWeights{q.q_attackers, q.q_defenders}, 0.1);
            CHECK(out.q_hvu <= q.q_hvu);
            CHECK(out.q_hvu >= 0.0);
            for (std::size_t j = 0; j < 4; ++j) CHECK((out.q_attackers[j] <= q.q_attackers[j] && out.q_attackers[j] >= 0.0));
            for (std::size_t k = 0; k < 3; ++k) CHECK((out.q_defenders[k] <= q.q_defenders[k] && out.q_defenders[k] >= 0.0));
        }
    }
    SUBCASE("opponent order does not matter") {
        const auto q = random_q(gen, 3, 3);
        const auto r = random_rates(gen, 3, 3, 5.0);
        const EffectivenessWeights w{q.q_attackers, q.q_defenders};
        const auto out = survival_step(q, r, w, 0.1);
        // reverse defender order
        DamageRates rr = r;
        rr.att = r.att.rowwise().reverse();
        rr.def = r.def.colwise().reverse();
        SurvivalVector qr = q;
        std::reverse(qr.q_defenders.begin(), qr.q_defenders.end());
        EffectivenessWeights wr = w;
        std::reverse(wr.defender_w.begin(), wr.defender_w.end());
        const auto outr = survival_step(qr, rr, wr, 0.1);
        for (std::size_t j = 0; j < 3; ++j) CHECK(outr.q_attackers[j] == doctest::Approx(out.q_attackers[j]).epsilon(1e-12));
        for (std::size_t k = 0; k < 3; ++k) CHECK(outr.q_defenders[2 - k] == doctest::Approx(out.q_defenders[k]).epsilon(1e-12));
    }
    SUBCASE("dead shooters are neutral") {
        const auto q = random_q(gen, 2, 2);
        const auto r = random_rates(gen, 2, 2, 5.0);
        EffectivenessWeights w{{1.0, 0.0}, {0.0, 1.0}};
        const auto out = survival_step(q, r, w, 0.1);
        CHECK(out.q_attackers[0] == doctest::Approx(q.q_attackers[0] * (1 - r.att(0, 1) * 0.1)).epsilon(1e-15));
        CHECK(out.q_defenders[0] == doctest::Approx(q.q_defenders[0] * (1 - r.def(0, 0) * 0.1)).epsilon(1e-15));
        CHECK(out.q_hvu == doctest::Approx(q.q_hvu * (1 - r.hvu(0) * 0.1)).epsilon(1e-15));
    }
    SUBCASE("factor below zero is a configuration error") {
        DamageRates r{Eigen::MatrixXd::Constant(1, 1, 20.0), Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Zero(1)};
        CHECK_THROWS_AS(survival_step(SurvivalVector::ones(1, 1), r, EffectivenessWeights::ones(1, 1), 0.1),
                        ConfigError);
    }
}

TEST_CASE("threshold update") {
    const auto iset = IndexSet::all_alive(2, 3);
    CHECK(threshold_update(iset, SurvivalVector::ones(2, 3), 0.5) == iset);

    SurvivalVector q = SurvivalVector::ones(2, 3);
    q.q_defenders[2] = 0.5;
    q.q_attackers[0] = 0.50000001;
    auto out = threshold_update(iset, q, 0.5);
    CHECK(out.defender_alive[2] == 0);
    CHECK(out.attacker_alive[0] == 1);
    CHECK(out.hvu_alive);

    q.q_hvu = 0.1;
    out = threshold_update(out, q, 0.5);
    CHECK_FALSE(out.hvu_alive);

    // no resurrection once q climbs back in the caller's bookkeeping
    const auto again = threshold_update(out, SurvivalVector::ones(2, 3), 0.5);
    CHECK(again.defender_alive[2] == 0);

    SurvivalVector zero = SurvivalVector::ones(2, 3);
    zero.q_hvu = 0.0;
    zero.q_attackers = {0.0, 0.0};
    CHECK(threshold_update(iset, zero, 0.0) == iset);
}

TEST_CASE("mc removal") {
    SUBCASE("unchanged survival never removes") {
        CounterRng rng{7, 0, 0};
        std::mt19937_64 gen(3);
        for (int trial = 0; trial < 1000; ++trial) {
            const auto q = random_q(gen, 3, 2);
            CHECK(mc_removal(IndexSet::all_alive(3, 2), q, q, rng) == IndexSet::all_alive(3, 2));
        }
        CHECK(rng.step == 1000);
    }
    SUBCASE("zero ratio always removes") {
        CounterRng rng{7, 0, 0};
        SurvivalVector next = SurvivalVector::ones(2, 1);
        next.q_hvu = 0.0;
        next.q_attackers = {0.0, 0.0};
        next.q_defenders = {0.0};
        const auto out = mc_removal(IndexSet::all_alive(2, 1), SurvivalVector::ones(2, 1), next, rng);
        CHECK_FALSE(out.hvu_alive);
        CHECK(out.attackers_alive() == 0);
        CHECK(out.defenders_alive() == 0);
    }
    SUBCASE("removal frequency matches 1 - ratio") {
        CounterRng rng{123, 0, 0};
        SurvivalVector next = SurvivalVector::ones(1, 0);
        next.q_attackers[0] = 0.7;
        const int trials = 100000;
        int removed = 0;
        for (int t = 0; t < trials; ++t)
            removed += mc_removal(IndexSet::all_alive(1, 0), SurvivalVector::ones(1, 0), next, rng)
                           .attacker_alive[0] == 0;
        const double sigma = std::sqrt(0.3 * 0.7 / trials);
        CHECK(std::abs(removed / double(trials) - 0.3) < 3.0 * sigma);
    }
    SUBCASE("one draw per alive party") {
        CounterRng rng{1, 0, 0};
        IndexSet iset = IndexSet::all_alive(4, 3);
        iset.attacker_alive[1] = 0;
        iset.defender_alive[0] = 0;
        mc_removal(iset, SurvivalVector::ones(4, 3), SurvivalVector::ones(4, 3), rng);
        CHECK(rng.draws == 1 + 3 + 2);
        iset.hvu_alive = false;
        mc_removal(iset, SurvivalVector::ones(4, 3), SurvivalVector::ones(4, 3), rng);
        CHECK(rng.draws == 6 + 5);
    }
    SUBCASE("dead stays dead and seeds reproduce") {
        SurvivalVector next = SurvivalVector::ones(5, 5);
        for (auto& v : next.q_attackers) v = 0.5;
        for (auto& v : next.q_defenders) v = 0.5;
        CounterRng a{9, 0, 0}, b{9, 0, 0};
        IndexSet ia = IndexSet::all_alive(5, 5), ib = ia;
        for (int k = 0; k < 10; ++k) {
            const IndexSet prev = ia;
            ia = mc_removal(ia, SurvivalVector::ones(5, 5), next, a);
            ib = mc_removal(ib, SurvivalVector::ones(5, 5), next, b);
            for (std::size_t j = 0; j < 5; ++j) CHECK((prev.attacker_alive[j] || !ia.attacker_alive[j]));
        }
        CHECK(ia == ib);
    }
    SUBCASE("alive party with zero survival is inconsistent") {
        CounterRng rng{1, 0, 0};
        SurvivalVector prev = SurvivalVector::ones(1, 0);
        prev.q_attackers[0] = 0.0;
        CHECK_THROWS_AS(mc_removal(IndexSet::all_alive(1, 0), prev, prev, rng), ConsistencyError);
    }
}
