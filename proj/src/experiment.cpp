#include "absim/experiment.hpp"

#include <filesystem>
#include <fstream>

#include "absim/manifest.hpp"
#include "absim/tabular.hpp"

namespace fs = std::filesystem;

namespace absim {

RunMode parse_mode(const std::string& name) {
    if (name == "dqn") return RunMode::Dqn;
    if (name == "tabular") return RunMode::Tabular;
    if (name == "random") return RunMode::Random;
    if (name == "static-optimal") return RunMode::StaticOptimal;
    throw ConfigError("mode: must be one of dqn, tabular, random, static-optimal (got '" +
                      name + "')");
}

std::string mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::Dqn: return "dqn";
        case RunMode::Tabular: return "tabular";
        case RunMode::Random: return "random";
        case RunMode::StaticOptimal: return "static-optimal";
    }
    return "?";
}

namespace {

EpisodeMetrics static_optimal_row(const WorldConfig& world) {
    const StaticOptimum opt = optimal_static_policy(world);
    const ChannelParams params = world.channel_params();
    const double c_u = capacity_from_snr(opt.reward);
    const double c_j =
        wiretap_capacity(opt.power, distance(world.ue_pos, world.eve_pos), params);
    EpisodeMetrics row;
    row.episode = 1;
    row.cumulative_reward = opt.reward * world.slots_per_episode;
    row.mean_c_u = c_u;
    row.mean_c_j = c_j;
    row.secrecy_capacity = secrecy_rate(c_u, c_j);
    row.final_dx = opt.uav_pos.x - world.ue_pos.x;
    row.final_dy = opt.uav_pos.y - world.ue_pos.y;
    row.final_power = opt.power;
    row.epsilon = 0.0;
    return row;
}

/// Greedy policy backed by a stored Q-table.
Policy qtable_policy(const QTable& table, const WorldConfig& world) {
    const Lattice lattice = table.lattice();
    const Position3 ue = world.ue_pos;
    return [table, lattice, ue](const State& s, double power) {
        const int ix = lattice.x_index(s.dx + ue.x);
        const int iy = lattice.y_index(s.dy + ue.y);
        const int ip = lattice.power_index(power);
        return Action(table.greedy(ix, iy, ip));
    };
}

bool file_starts_with(const std::string& path, const char* magic, std::size_t n) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::string head(n, '\0');
    in.read(head.data(), static_cast<std::streamsize>(n));
    return in && head.compare(0, n, magic, n) == 0;
}

}  // namespace

RunArtifacts run_experiment(RunMode mode, const AppConfig& config, std::uint64_t seed,
                            const std::string& out_dir) {
    config.world.validate();
    fs::create_directories(out_dir);

    RunArtifacts art;
    art.out_dir = out_dir;
    art.manifest_path = (fs::path(out_dir) / "manifest.txt").string();
    art.metrics_path = (fs::path(out_dir) / "metrics.csv").string();
    art.config_snapshot_path = (fs::path(out_dir) / "config.json").string();

    RunManifest manifest;
    manifest.mode = mode_name(mode);
    manifest.seed = seed;
    manifest.code_version = kCodeVersion;
    manifest.config_snapshot = "config.json";
    manifest.status = "running";
    manifest.started_utc = utc_timestamp_now();
    manifest.outputs = {"config.json", "metrics.csv"};

    save_config(art.config_snapshot_path, config);

    std::string checkpoint_name;
    switch (mode) {
        case RunMode::Dqn: checkpoint_name = "weights.mlp"; break;
        case RunMode::Tabular: checkpoint_name = "qtable.txt"; break;
        default: break;
    }
    if (!checkpoint_name.empty()) {
        manifest.outputs.push_back(checkpoint_name);
        art.checkpoint_path = (fs::path(out_dir) / checkpoint_name).string();
    }
    write_manifest(art.manifest_path, manifest);

    try {
        switch (mode) {
            case RunMode::Dqn: {
                DqnParams params = config.dqn;
                params.seed = seed;
                TrainResult result = train_dqn(config.world, params);
                art.metrics = std::move(result.episodes);
                save_mlp(result.net, art.checkpoint_path);
                break;
            }
            case RunMode::Tabular: {
                TabularResult result = train_tabular(config.world, config.tabular, seed);
                art.metrics = std::move(result.episodes);
                result.table.save(art.checkpoint_path);
                break;
            }
            case RunMode::Random: {
                // baseline over the same episode count as the DQN, for
                // directly comparable training curves
                EvalResult result = evaluate_policy(random_policy(derive_seed(seed, 7)),
                                                    config.world, config.dqn.episodes, seed);
                art.metrics = std::move(result.episodes);
                for (EpisodeMetrics& row : art.metrics) row.epsilon = 1.0;
                break;
            }
            case RunMode::StaticOptimal: {
                art.metrics = {static_optimal_row(config.world)};
                break;
            }
        }
        write_metrics_csv(art.metrics_path, art.metrics);
    } catch (const std::exception& e) {
        manifest.status = "failed";
        manifest.note = e.what();
        manifest.finished_utc = utc_timestamp_now();
        write_manifest(art.manifest_path, manifest);
        throw;
    }

    manifest.status = "completed";
    manifest.finished_utc = utc_timestamp_now();
    write_manifest(art.manifest_path, manifest);
    return art;
}

EvalArtifacts run_evaluation(const std::string& checkpoint_path, const AppConfig& config,
                             int episodes, std::uint64_t seed, const std::string& out_dir) {
    config.world.validate();
    if (!fs::exists(checkpoint_path))
        throw ConfigError("checkpoint: file does not exist: " + checkpoint_path);

    Policy policy;
    if (file_starts_with(checkpoint_path, kMlpMagic, sizeof kMlpMagic)) {
        const Mlp net = load_mlp(checkpoint_path);
        const StateEncoder encoder(config.world);
        if (net.input_dim() != encoder.dim())
            throw ConfigError("checkpoint: network input dim " +
                              std::to_string(net.input_dim()) +
                              " does not match the world's observation dim " +
                              std::to_string(encoder.dim()));
        if (net.output_dim() != kNumActions)
            throw ConfigError("checkpoint: network output dim must be 12");
        policy = greedy_policy(net, encoder);
    } else if (file_starts_with(checkpoint_path, "absim-qtable-v1", 15)) {
        const QTable table = QTable::load(checkpoint_path);
        if (!(table.lattice() == Lattice::from_config(config.world)))
            throw ConfigError("checkpoint: Q-table lattice does not match the world");
        policy = qtable_policy(table, config.world);
    } else {
        throw ConfigError("checkpoint: unrecognized file format: " + checkpoint_path);
    }

    fs::create_directories(out_dir);
    EvalArtifacts art;
    art.out_dir = out_dir;
    art.manifest_path = (fs::path(out_dir) / "manifest.txt").string();
    art.metrics_path = (fs::path(out_dir) / "metrics.csv").string();

    RunManifest manifest;
    manifest.mode = "evaluate";
    manifest.seed = seed;
    manifest.code_version = kCodeVersion;
    manifest.config_snapshot = "-";
    manifest.status = "running";
    manifest.started_utc = utc_timestamp_now();
    manifest.outputs = {"metrics.csv"};
    write_manifest(art.manifest_path, manifest);

    try {
        art.result = evaluate_policy(policy, config.world, episodes, seed);
        write_metrics_csv(art.metrics_path, art.result.episodes);
    } catch (const std::exception& e) {
        manifest.status = "failed";
        manifest.note = e.what();
        manifest.finished_utc = utc_timestamp_now();
        write_manifest(art.manifest_path, manifest);
        throw;
    }

    manifest.status = "completed";
    manifest.finished_utc = utc_timestamp_now();
    write_manifest(art.manifest_path, manifest);
    return art;
}

}  // namespace absim
