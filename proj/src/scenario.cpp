#include "swarmdef/scenario.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "swarmdef/rng.hpp"

namespace swarmdef {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& constraint) {
    if (!ok) throw ValidationError(constraint + " violated");
}

const std::set<std::string>& known_fields() {
    static const std::set<std::string> fields = {
        "n_attackers", "n_defenders", "hvu_position", "d0", "d1", "k_rep", "k_att", "s0",
        "k_dref", "leader_gain", "damping", "lambda_a", "lambda_d", "sigma_a", "sigma_d",
        "dt", "n_steps", "u_max", "d_min", "survival_threshold", "bernstein_order",
        "initial_attackers", "initial_defenders", "rng_seed"};
    return fields;
}

const json& field(const json& obj, const std::string& name, const std::string& path) {
    auto it = obj.find(name);
    if (it == obj.end()) throw ParseError(path + name, "required field missing");
    return *it;
}

double get_number(const json& obj, const std::string& name, const std::string& path = "") {
    const json& v = field(obj, name, path);
    if (!v.is_number()) throw ParseError(path + name, "expected a number");
    return v.get<double>();
}

std::uint64_t get_count(const json& obj, const std::string& name) {
    const json& v = field(obj, name, "");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw ParseError(name, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

Vec3 to_vec3(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) throw ParseError(path, "expected a 3-element array");
    Vec3 out;
    for (int c = 0; c < 3; ++c) {
        if (!v[c].is_number())
            throw ParseError(path + "[" + std::to_string(c) + "]", "expected a number");
        out[c] = v[c].get<double>();
    }
    return out;
}

std::vector<AgentInit> to_agents(const json& obj, const std::string& name) {
    const json& list = field(obj, name, "");
    if (!list.is_array()) throw ParseError(name, "expected an array of agents");
    std::vector<AgentInit> out;
    out.reserve(list.size());
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string path = name + "[" + std::to_string(i) + "]";
        const json& a = list[i];
        if (!a.is_object()) throw ParseError(path, "expected an object");
        for (const auto& [key, _] : a.items())
            if (key != "position" && key != "velocity")
                throw ParseError(path + "." + key, "unknown field");
        AgentInit init;
        init.position = to_vec3(field(a, "position", path + "."), path + ".position");
        init.velocity = to_vec3(field(a, "velocity", path + "."), path + ".velocity");
        out.push_back(init);
    }
    return out;
}

json from_vec3(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json from_agents(const std::vector<AgentInit>& agents) {
    json list = json::array();
    for (const auto& a : agents)
        list.push_back({{"position", from_vec3(a.position)}, {"velocity", from_vec3(a.velocity)}});
    return list;
}

}  // namespace

void validate(const ScenarioConfig& cfg) {
    require(cfg.n_attackers >= 1, "n_attackers >= 1");
    require(cfg.n_defenders >= 1, "n_defenders >= 1");
    require(cfg.d0 > 0.0 && cfg.d0 < cfg.d1, "0 < d0 < d1");
    require(cfg.s0 > 0.0, "s0 > 0");
    require(cfg.dt > 0.0, "dt > 0");
    require(cfg.n_steps >= 1, "n_steps >= 1");
    require(cfg.u_max > 0.0, "u_max > 0");
    require(cfg.d_min >= 0.0, "d_min >= 0");
    // 0 is accepted as "thresholding disabled"; see threshold_update.
    require(cfg.survival_threshold >= 0.0 && cfg.survival_threshold < 1.0,
            "0 <= survival_threshold < 1");
    require(cfg.bernstein_order >= 2 && cfg.bernstein_order <= 30, "2 <= bernstein_order <= 30");
    require(cfg.k_rep >= 0.0 && cfg.k_att >= 0.0 && cfg.k_dref >= 0.0, "force gains >= 0");
    require(cfg.leader_gain >= 0.0 && cfg.damping >= 0.0, "leader_gain, damping >= 0");
    require(cfg.lambda_a >= 0.0 && cfg.lambda_d >= 0.0, "lambda_a, lambda_d >= 0");
    require(cfg.sigma_a > 0.0 && cfg.sigma_d > 0.0, "sigma_a, sigma_d > 0");
    // each survival factor is 1 - rate*weight*dt with rate <= lambda
    require(cfg.lambda_a * cfg.dt <= 1.0 && cfg.lambda_d * cfg.dt <= 1.0, "lambda * dt <= 1");
    require(cfg.initial_attackers.size() == cfg.n_attackers,
            "len(initial_attackers) == n_attackers");
    require(cfg.initial_defenders.size() == cfg.n_defenders,
            "len(initial_defenders) == n_defenders");
    auto finite = [](const Vec3& v) { return v.allFinite(); };
    require(finite(cfg.hvu_position), "finite hvu_position");
    for (const auto& a : cfg.initial_attackers)
        require(finite(a.position) && finite(a.velocity), "finite initial attacker state");
    for (const auto& d : cfg.initial_defenders)
        require(finite(d.position) && finite(d.velocity), "finite initial defender state");
}

ScenarioConfig load_scenario(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("", "top level must be an object");
    for (const auto& [key, _] : doc.items())
        if (!known_fields().contains(key)) throw ParseError(key, "unknown field");

    ScenarioConfig cfg;
    cfg.n_attackers = get_count(doc, "n_attackers");
    cfg.n_defenders = get_count(doc, "n_defenders");
    cfg.hvu_position = to_vec3(field(doc, "hvu_position", ""), "hvu_position");
    cfg.d0 = get_number(doc, "d0");
    cfg.d1 = get_number(doc, "d1");
    cfg.k_rep = get_number(doc, "k_rep");
    cfg.k_att = get_number(doc, "k_att");
    cfg.s0 = get_number(doc, "s0");
    cfg.k_dref = get_number(doc, "k_dref");
    cfg.leader_gain = get_number(doc, "leader_gain");
    cfg.damping = get_number(doc, "damping");
    cfg.lambda_a = get_number(doc, "lambda_a");
    cfg.lambda_d = get_number(doc, "lambda_d");
    cfg.sigma_a = get_number(doc, "sigma_a");
    cfg.sigma_d = get_number(doc, "sigma_d");
    cfg.dt = get_number(doc, "dt");
    cfg.n_steps = get_count(doc, "n_steps");
    cfg.u_max = get_number(doc, "u_max");
    cfg.d_min = get_number(doc, "d_min");
    if (doc.contains("survival_threshold"))
        cfg.survival_threshold = get_number(doc, "survival_threshold");
    cfg.bernstein_order = static_cast<int>(get_count(doc, "bernstein_order"));
    cfg.initial_attackers = to_agents(doc, "initial_attackers");
    cfg.initial_defenders = to_agents(doc, "initial_defenders");
    cfg.rng_seed = get_count(doc, "rng_seed");

    validate(cfg);
    return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str());
}

std::string save_scenario(const ScenarioConfig& cfg) {
    json doc = {
        {"n_attackers", cfg.n_attackers},
        {"n_defenders", cfg.n_defenders},
        {"hvu_position", from_vec3(cfg.hvu_position)},
        {"d0", cfg.d0},
        {"d1", cfg.d1},
        {"k_rep", cfg.k_rep},
        {"k_att", cfg.k_att},
        {"s0", cfg.s0},
        {"k_dref", cfg.k_dref},
        {"leader_gain", cfg.leader_gain},
        {"damping", cfg.damping},
        {"lambda_a", cfg.lambda_a},
        {"lambda_d", cfg.lambda_d},
        {"sigma_a", cfg.sigma_a},
        {"sigma_d", cfg.sigma_d},
        {"dt", cfg.dt},
        {"n_steps", cfg.n_steps},
        {"u_max", cfg.u_max},
        {"d_min", cfg.d_min},
        {"survival_threshold", cfg.survival_threshold},
        {"bernstein_order", cfg.bernstein_order},
        {"initial_attackers", from_agents(cfg.initial_attackers)},
        {"initial_defenders", from_agents(cfg.initial_defenders)},
        {"rng_seed", cfg.rng_seed},
    };
    return doc.dump(2);
}

std::vector<AgentInit> default_initializer(std::size_t n, double radius, const Vec3& center,
                                           std::uint64_t seed, double d_min) {
    if (n < 1) throw DomainError("default_initializer: n must be >= 1");
    if (!(radius > 0.0)) throw DomainError("default_initializer: radius must be > 0");
    constexpr int kMaxAttemptsPerAgent = 10000;

    std::mt19937_64 gen(seed);
    auto unit = [&gen] { return 2.0 * bits_to_unit(gen()) - 1.0; };

    std::vector<AgentInit> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxAttemptsPerAgent && !placed; ++attempt) {
            Vec3 offset(unit(), unit(), unit());
            if (offset.squaredNorm() > 1.0) continue;
            Vec3 p = center + radius * offset;
            bool clear = true;
            for (const auto& other : out)
                if ((other.position - p).norm() < d_min) {
                    clear = false;
                    break;
                }
            if (!clear) continue;
            out.push_back({p, Vec3::Zero()});
            placed = true;
        }
        if (!placed)
            throw ConfigError("default_initializer: could not place " + std::to_string(n) +
                              " agents with separation " + std::to_string(d_min) +
                              "; use a larger radius");
    }
    return out;
}

double spatial_extent(const ScenarioConfig& cfg) {
    Vec3List pts{cfg.hvu_position};
    for (const auto& a : cfg.initial_attackers) pts.push_back(a.position);
    for (const auto& d : cfg.initial_defenders) pts.push_back(d.position);
    double extent = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            extent = std::max(extent, (pts[i] - pts[j]).norm());
    return extent;
}

}  // namespace swarmdef
