#include "absim/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace absim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& reason) {
    throw ConfigError(field + ": " + reason);
}

void check_known_keys(const json& obj, const std::string& section,
                      std::initializer_list<const char*> known) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            if (item.key() == k) { ok = true; break; }
        if (!ok) fail(section.empty() ? item.key() : section + "." + item.key(),
                      "unknown key");
    }
}

double get_number(const json& obj, const std::string& section, const char* key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(section + "." + key, "expected a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& section, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(section + "." + key, "expected an integer");
    return v.get<int>();
}

bool get_bool(const json& obj, const std::string& section, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(section + "." + key, "expected a boolean");
    return v.get<bool>();
}

// Accepts [x, y] or [x, y, z]; when z is omitted it falls back to default_z.
Position3 get_position(const json& obj, const std::string& section, const char* key,
                       Position3 fallback, double default_z) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array() || (v.size() != 2 && v.size() != 3))
        fail(section + "." + key, "expected [x, y] or [x, y, z]");
    for (const auto& c : v)
        if (!c.is_number()) fail(section + "." + key, "coordinates must be numbers");
    Position3 p;
    p.x = v[0].get<double>();
    p.y = v[1].get<double>();
    p.z = v.size() == 3 ? v[2].get<double>() : default_z;
    return p;
}

WorldConfig parse_world(const json& root) {
    WorldConfig w;  // struct defaults are the documented defaults
    if (!root.contains("world")) return w;
    const json& obj = root.at("world");
    if (!obj.is_object()) fail("world", "expected an object");
    check_known_keys(obj, "world",
                     {"ue_pos", "eve_pos", "uav_start", "altitude", "bounds", "grid_step",
                      "p_max", "p1", "initial_power", "ref_snr", "slots_per_episode",
                      "observe_power", "random_start"});

    if (obj.contains("bounds")) {
        const json& b = obj.at("bounds");
        if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
            fail("world.bounds", "expected [L_x, L_y]");
        w.bound_x = b[0].get<double>();
        w.bound_y = b[1].get<double>();
    }
    w.altitude = get_number(obj, "world", "altitude", w.altitude);
    w.ue_pos = get_position(obj, "world", "ue_pos", w.ue_pos, 0.0);
    w.eve_pos = get_position(obj, "world", "eve_pos", w.eve_pos, 0.0);
    w.uav_start = get_position(obj, "world", "uav_start",
                               Position3{w.uav_start.x, w.uav_start.y, w.altitude},
                               w.altitude);
    w.grid_step = get_number(obj, "world", "grid_step", w.grid_step);
    w.p_max = get_number(obj, "world", "p_max", w.p_max);
    w.p1 = get_number(obj, "world", "p1", w.p_max / 10.0);
    w.initial_power = get_number(obj, "world", "initial_power", w.p_max / 2.0);
    w.ref_snr = get_number(obj, "world", "ref_snr", w.ref_snr);
    w.slots_per_episode = get_int(obj, "world", "slots_per_episode", w.slots_per_episode);
    w.observe_power = get_bool(obj, "world", "observe_power", w.observe_power);
    w.random_start = get_bool(obj, "world", "random_start", w.random_start);
    return w;
}

DqnParams parse_dqn(const json& root) {
    DqnParams p;
    if (!root.contains("dqn")) return p;
    const json& obj = root.at("dqn");
    if (!obj.is_object()) fail("dqn", "expected an object");
    check_known_keys(obj, "dqn",
                     {"gamma", "epsilon_initial", "epsilon_min", "epsilon_decay",
                      "replay_capacity", "batch_size", "target_sync_period",
                      "learning_rate", "episodes", "hidden_layers", "raw_reward"});
    p.gamma = get_number(obj, "dqn", "gamma", p.gamma);
    p.epsilon_initial = get_number(obj, "dqn", "epsilon_initial", p.epsilon_initial);
    p.epsilon_min = get_number(obj, "dqn", "epsilon_min", p.epsilon_min);
    p.epsilon_decay = get_number(obj, "dqn", "epsilon_decay", p.epsilon_decay);
    p.replay_capacity = static_cast<std::size_t>(
        get_int(obj, "dqn", "replay_capacity", static_cast<int>(p.replay_capacity)));
    p.batch_size = static_cast<std::size_t>(
        get_int(obj, "dqn", "batch_size", static_cast<int>(p.batch_size)));
    p.target_sync_period = get_int(obj, "dqn", "target_sync_period", p.target_sync_period);
    p.learning_rate = get_number(obj, "dqn", "learning_rate", p.learning_rate);
    p.episodes = get_int(obj, "dqn", "episodes", p.episodes);
    if (obj.contains("hidden_layers")) {
        const json& h = obj.at("hidden_layers");
        if (!h.is_array()) fail("dqn.hidden_layers", "expected an array of widths");
        p.hidden_layers.clear();
        for (const auto& v : h) {
            if (!v.is_number_integer()) fail("dqn.hidden_layers", "widths must be integers");
            p.hidden_layers.push_back(v.get<int>());
        }
    }
    p.raw_reward = get_bool(obj, "dqn", "raw_reward", p.raw_reward);
    return p;
}

QLearnParams parse_tabular(const json& root) {
    QLearnParams p;
    if (!root.contains("tabular")) return p;
    const json& obj = root.at("tabular");
    if (!obj.is_object()) fail("tabular", "expected an object");
    check_known_keys(obj, "tabular",
                     {"alpha", "gamma", "epsilon_initial", "epsilon_min", "epsilon_decay",
                      "episodes", "random_init"});
    p.alpha = get_number(obj, "tabular", "alpha", p.alpha);
    p.gamma = get_number(obj, "tabular", "gamma", p.gamma);
    p.epsilon_initial = get_number(obj, "tabular", "epsilon_initial", p.epsilon_initial);
    p.epsilon_min = get_number(obj, "tabular", "epsilon_min", p.epsilon_min);
    p.epsilon_decay = get_number(obj, "tabular", "epsilon_decay", p.epsilon_decay);
    p.episodes = get_int(obj, "tabular", "episodes", p.episodes);
    p.random_init = get_bool(obj, "tabular", "random_init", p.random_init);
    return p;
}

json position_to_json(const Position3& p) {
    return json::array({p.x, p.y, p.z});
}

}  // namespace

AppConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    check_known_keys(root, "", {"world", "dqn", "tabular"});

    AppConfig cfg;
    cfg.world = parse_world(root);
    cfg.dqn = parse_dqn(root);
    cfg.tabular = parse_tabular(root);
    cfg.world.validate();
    cfg.dqn.validate();
    cfg.tabular.validate();
    return cfg;
}

AppConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const AppConfig& config) {
    json root;
    json& w = root["world"];
    w["ue_pos"] = position_to_json(config.world.ue_pos);
    w["eve_pos"] = position_to_json(config.world.eve_pos);
    w["uav_start"] = position_to_json(config.world.uav_start);
    w["altitude"] = config.world.altitude;
    w["bounds"] = json::array({config.world.bound_x, config.world.bound_y});
    w["grid_step"] = config.world.grid_step;
    w["p_max"] = config.world.p_max;
    w["p1"] = config.world.p1;
    w["initial_power"] = config.world.initial_power;
    w["ref_snr"] = config.world.ref_snr;
    w["slots_per_episode"] = config.world.slots_per_episode;
    w["observe_power"] = config.world.observe_power;
    w["random_start"] = config.world.random_start;

    json& d = root["dqn"];
    d["gamma"] = config.dqn.gamma;
    d["epsilon_initial"] = config.dqn.epsilon_initial;
    d["epsilon_min"] = config.dqn.epsilon_min;
    d["epsilon_decay"] = config.dqn.epsilon_decay;
    d["replay_capacity"] = config.dqn.replay_capacity;
    d["batch_size"] = config.dqn.batch_size;
    d["target_sync_period"] = config.dqn.target_sync_period;
    d["learning_rate"] = config.dqn.learning_rate;
    d["episodes"] = config.dqn.episodes;
    d["hidden_layers"] = config.dqn.hidden_layers;
    d["raw_reward"] = config.dqn.raw_reward;

    json& t = root["tabular"];
    t["alpha"] = config.tabular.alpha;
    t["gamma"] = config.tabular.gamma;
    t["epsilon_initial"] = config.tabular.epsilon_initial;
    t["epsilon_min"] = config.tabular.epsilon_min;
    t["epsilon_decay"] = config.tabular.epsilon_decay;
    t["episodes"] = config.tabular.episodes;
    t["random_init"] = config.tabular.random_init;

    return root.dump(2) + "\n";
}

void save_config(const std::string& path, const AppConfig& config) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("config: cannot write file " + path);
    out << serialize_config(config);
    if (!out) throw ConfigError("config: write failed for " + path);
}

}  // namespace absim
