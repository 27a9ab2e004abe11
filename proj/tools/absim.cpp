// absim - aerial base station placement / power control experiment runner.
// Subcommands: train (dqn | tabular | random | static-optimal), evaluate, sweep.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "absim/config_io.hpp"
#include "absim/experiment.hpp"
#include "absim/world.hpp"

namespace fs = std::filesystem;

namespace {

struct TrainOptions {
    std::string config_path;
    std::string mode = "dqn";
    std::uint64_t seed = 0;
    std::string out_dir;
};

struct EvalOptions {
    std::string config_path;
    std::string checkpoint;
    int episodes = 100;
    std::uint64_t seed = 0;
    std::string out_dir;
};

struct SweepOptions {
    std::string config_path;
    std::string mode = "dqn";
    std::vector<std::uint64_t> seeds;
    int jobs = 1;
    std::string out_dir = "sweeps";
};

std::string default_out_dir(const std::string& mode, std::uint64_t seed) {
    return "runs/" + mode + "-seed" + std::to_string(seed);
}

void print_summary(const absim::RunArtifacts& art) {
    std::cout << "run complete: " << art.out_dir << "\n";
    if (!art.metrics.empty()) {
        const auto& last = art.metrics.back();
        std::cout << "  episodes: " << art.metrics.size()
                  << "  final cumulative_reward: " << absim::format_double(last.cumulative_reward)
                  << "  final secrecy_capacity: " << absim::format_double(last.secrecy_capacity)
                  << "\n";
    }
    std::cout << "  metrics: " << art.metrics_path << "\n";
    if (!art.checkpoint_path.empty())
        std::cout << "  checkpoint: " << art.checkpoint_path << "\n";
}

int run_train(const TrainOptions& opt) {
    const absim::AppConfig config = absim::load_config(opt.config_path);
    const absim::RunMode mode = absim::parse_mode(opt.mode);
    const std::string out =
        opt.out_dir.empty() ? default_out_dir(opt.mode, opt.seed) : opt.out_dir;
    const absim::RunArtifacts art = absim::run_experiment(mode, config, opt.seed, out);
    print_summary(art);
    return 0;
}

int run_evaluate(const EvalOptions& opt) {
    const absim::AppConfig config = absim::load_config(opt.config_path);
    const std::string out =
        opt.out_dir.empty() ? default_out_dir("evaluate", opt.seed) : opt.out_dir;
    const absim::EvalArtifacts art =
        absim::run_evaluation(opt.checkpoint, config, opt.episodes, opt.seed, out);
    std::cout << "evaluation complete: " << art.out_dir << "\n"
              << "  episodes: " << art.result.episodes.size()
              << "  mean cumulative_reward: "
              << absim::format_double(art.result.mean_cumulative_reward)
              << "  mean secrecy_capacity: "
              << absim::format_double(art.result.mean_secrecy_capacity) << "\n"
              << "  metrics: " << art.metrics_path << "\n";
    return 0;
}

int run_sweep(const SweepOptions& opt) {
    if (opt.seeds.empty()) throw absim::ConfigError("sweep: --seeds must list at least one seed");
    if (opt.jobs < 1) throw absim::ConfigError("sweep: --jobs must be >= 1");
    const absim::AppConfig config = absim::load_config(opt.config_path);
    const absim::RunMode mode = absim::parse_mode(opt.mode);

    std::mutex io_mutex;
    std::vector<std::string> failures;
    std::size_t next = 0;

    auto worker = [&]() {
        for (;;) {
            std::uint64_t seed;
            {
                std::scoped_lock lock(io_mutex);
                if (next >= opt.seeds.size()) return;
                seed = opt.seeds[next++];
            }
            const std::string out =
                (fs::path(opt.out_dir) / (opt.mode + "-seed" + std::to_string(seed))).string();
            try {
                const absim::RunArtifacts art = absim::run_experiment(mode, config, seed, out);
                std::scoped_lock lock(io_mutex);
                const auto& last = art.metrics.back();
                std::cout << "seed " << seed << ": secrecy_capacity "
                          << absim::format_double(last.secrecy_capacity) << "  ("
                          << art.out_dir << ")\n";
            } catch (const std::exception& e) {
                std::scoped_lock lock(io_mutex);
                failures.push_back("seed " + std::to_string(seed) + ": " + e.what());
            }
        }
    };

    const int n_workers = std::min<int>(opt.jobs, static_cast<int>(opt.seeds.size()));
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (int i = 0; i < n_workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    if (!failures.empty()) {
        for (const std::string& f : failures) std::cerr << "error: " << f << "\n";
        return 2;
    }
    std::cout << "sweep complete: " << opt.seeds.size() << " runs under " << opt.out_dir
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aerial base station positioning and power control trainer"};
    app.set_version_flag("--version", absim::kCodeVersion);
    app.require_subcommand(1);

    TrainOptions train_opt;
    CLI::App* train = app.add_subcommand("train", "run one training / baseline experiment");
    train->add_option("--config", train_opt.config_path, "config file (JSON)")->required();
    train->add_option("--mode", train_opt.mode, "dqn | tabular | random | static-optimal");
    train->add_option("--seed", train_opt.seed, "run seed (default 0)");
    train->add_option("--out-dir", train_opt.out_dir, "output directory");

    EvalOptions eval_opt;
    CLI::App* evaluate = app.add_subcommand("evaluate", "greedy rollouts of a checkpoint");
    evaluate->add_option("--config", eval_opt.config_path, "config file (JSON)")->required();
    evaluate->add_option("--checkpoint", eval_opt.checkpoint, "weights.mlp or qtable.txt")
        ->required();
    evaluate->add_option("--episodes", eval_opt.episodes, "evaluation episodes (default 100)");
    evaluate->add_option("--seed", eval_opt.seed, "evaluation seed (default 0)");
    evaluate->add_option("--out-dir", eval_opt.out_dir, "output directory");

    SweepOptions sweep_opt;
    CLI::App* sweep = app.add_subcommand("sweep", "run one mode across several seeds");
    sweep->add_option("--config", sweep_opt.config_path, "config file (JSON)")->required();
    sweep->add_option("--mode", sweep_opt.mode, "dqn | tabular | random | static-optimal");
    sweep->add_option("--seeds", sweep_opt.seeds, "seed list, e.g. --seeds 1 2 3")
        ->required()
        ->delimiter(',');
    sweep->add_option("--jobs", sweep_opt.jobs, "parallel workers (default 1)");
    sweep->add_option("--out-dir", sweep_opt.out_dir, "base output directory");

    try {
        app.parse(argc, argv);
        if (*train) return run_train(train_opt);
        if (*evaluate) return run_evaluate(eval_opt);
        if (*sweep) return run_sweep(sweep_opt);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // help/version exit cleanly, usage errors are 1
    } catch (const absim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
