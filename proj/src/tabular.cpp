#include "absim/tabular.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace absim {

namespace {

// True when value/step is within rounding dust of an integer.
bool on_lattice(double value, double step) {
    const double q = value / step;
    return std::abs(q - std::round(q)) < 1e-9;
}

int checked_index(double value, double step, int count, const char* what) {
    const long i = std::lround(value / step);
    if (i < 0 || i >= count)
        throw std::out_of_range(std::string(what) + ": value off the lattice");
    return static_cast<int>(i);
}

}  // namespace

Lattice Lattice::from_config(const WorldConfig& config) {
    config.validate();
    if (!on_lattice(config.bound_x, config.grid_step))
        throw ConfigError("lattice: world.grid_step must divide world.bounds L_x");
    if (!on_lattice(config.bound_y, config.grid_step))
        throw ConfigError("lattice: world.grid_step must divide world.bounds L_y");
    if (!on_lattice(config.p_max, config.p1))
        throw ConfigError("lattice: world.p1 must divide world.p_max");
    if (!on_lattice(config.uav_start.x, config.grid_step) ||
        !on_lattice(config.uav_start.y, config.grid_step))
        throw ConfigError("lattice: world.uav_start must sit on the grid lattice");
    if (!on_lattice(config.initial_power, config.p1))
        throw ConfigError("lattice: world.initial_power must be a multiple of world.p1");

    Lattice l;
    l.grid_step = config.grid_step;
    l.p1 = config.p1;
    l.nx = static_cast<int>(std::lround(config.bound_x / config.grid_step)) + 1;
    l.ny = static_cast<int>(std::lround(config.bound_y / config.grid_step)) + 1;
    l.np = static_cast<int>(std::lround(config.p_max / config.p1)) + 1;
    return l;
}

int Lattice::x_index(double x) const { return checked_index(x, grid_step, nx, "x_index"); }
int Lattice::y_index(double y) const { return checked_index(y, grid_step, ny, "y_index"); }
int Lattice::power_index(double p) const { return checked_index(p, p1, np, "power_index"); }

int greedy_action(std::span<const double> q, double tie_tol) {
    double best = q[0];
    for (std::size_t i = 1; i < q.size(); ++i) best = std::max(best, q[i]);
    const double band = tie_tol * std::max(1.0, std::abs(best));
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] >= best - band) return static_cast<int>(i);
    }
    return 0;  // unreachable
}

QTable::QTable(const Lattice& lattice)
    : lattice_(lattice),
      values_(static_cast<std::size_t>(lattice.n_states()) * kNumActions, 0.0) {}

double& QTable::at(int ix, int iy, int ip, int action) {
    return values_[static_cast<std::size_t>(lattice_.state_index(ix, iy, ip)) * kNumActions +
                   action];
}

double QTable::at(int ix, int iy, int ip, int action) const {
    return values_[static_cast<std::size_t>(lattice_.state_index(ix, iy, ip)) * kNumActions +
                   action];
}

std::span<double> QTable::row(int ix, int iy, int ip) {
    return {values_.data() + static_cast<std::size_t>(lattice_.state_index(ix, iy, ip)) *
                                 kNumActions,
            kNumActions};
}

std::span<const double> QTable::row(int ix, int iy, int ip) const {
    return {values_.data() + static_cast<std::size_t>(lattice_.state_index(ix, iy, ip)) *
                                 kNumActions,
            kNumActions};
}

double QTable::max_value(int ix, int iy, int ip) const {
    const auto r = row(ix, iy, ip);
    return *std::max_element(r.begin(), r.end());
}

int QTable::greedy(int ix, int iy, int ip, double tie_tol) const {
    return greedy_action(row(ix, iy, ip), tie_tol);
}

void QTable::randomize(std::uint64_t seed, double scale) {
    Rng rng(seed);
    for (double& v : values_) v = rng.uniform(-scale, scale);
}

double QTable::sup_norm_diff(const QTable& other) const {
    if (!(lattice_ == other.lattice_))
        throw std::invalid_argument("QTable::sup_norm_diff: lattice mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        worst = std::max(worst, std::abs(values_[i] - other.values_[i]));
    return worst;
}

void QTable::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("QTable::save: cannot open " + path);
    out << "absim-qtable-v1\n";
    out << lattice_.nx << ' ' << lattice_.ny << ' ' << lattice_.np << ' '
        << format_double(lattice_.grid_step) << ' ' << format_double(lattice_.p1) << '\n';
    out << "# ix iy ip action q\n";
    for (int ix = 0; ix < lattice_.nx; ++ix)
        for (int iy = 0; iy < lattice_.ny; ++iy)
            for (int ip = 0; ip < lattice_.np; ++ip)
                for (int a = 0; a < kNumActions; ++a)
                    out << ix << ' ' << iy << ' ' << ip << ' ' << a << ' '
                        << format_double(at(ix, iy, ip, a)) << '\n';
    if (!out) throw std::runtime_error("QTable::save: write failed for " + path);
}

QTable QTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("QTable::load: cannot open " + path);
    std::string magic;
    std::getline(in, magic);
    if (magic != "absim-qtable-v1")
        throw std::runtime_error("QTable::load: unrecognized file header in " + path);
    Lattice l;
    in >> l.nx >> l.ny >> l.np >> l.grid_step >> l.p1;
    if (!in || l.nx <= 0 || l.ny <= 0 || l.np <= 0)
        throw std::runtime_error("QTable::load: corrupt lattice line in " + path);
    std::string rest;
    std::getline(in, rest);   // end of lattice line
    std::getline(in, rest);   // column comment
    QTable table(l);
    std::size_t rows = 0;
    int ix, iy, ip, a;
    double q;
    while (in >> ix >> iy >> ip >> a >> q) {
        if (ix < 0 || ix >= l.nx || iy < 0 || iy >= l.ny || ip < 0 || ip >= l.np ||
            a < 0 || a >= kNumActions)
            throw std::runtime_error("QTable::load: entry out of range in " + path);
        table.at(ix, iy, ip, a) = q;
        ++rows;
    }
    if (rows != table.size())
        throw std::runtime_error("QTable::load: expected " + std::to_string(table.size()) +
                                 " entries, found " + std::to_string(rows) + " in " + path);
    return table;
}

void QLearnParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("tabular.alpha: must lie in (0, 1]");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("tabular.gamma: must lie in (0, 1)");
    if (!(epsilon_initial >= 0.0 && epsilon_initial <= 1.0))
        throw ConfigError("tabular.epsilon_initial: must lie in [0, 1]");
    if (!(epsilon_min >= 0.0 && epsilon_min <= epsilon_initial))
        throw ConfigError("tabular.epsilon_min: must lie in [0, epsilon_initial]");
    if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0))
        throw ConfigError("tabular.epsilon_decay: must lie in (0, 1]");
    if (episodes < 1) throw ConfigError("tabular.episodes: must be >= 1");
}

double q_update(double q_old, double reward, double max_next_q, const QLearnParams& params) {
    return (1.0 - params.alpha) * q_old +
           params.alpha * (reward + params.gamma * max_next_q);
}

TabularChoice select_tabular_action(const QTable& table, int ix, int iy, int ip,
                                    double epsilon, Rng& rng) {
    if (rng.uniform01() < epsilon)
        return {Action(static_cast<int>(rng.uniform_int(kNumActions))), true};
    return {Action(table.greedy(ix, iy, ip)), false};
}

TabularResult train_tabular(const WorldConfig& config, const QLearnParams& params,
                            std::uint64_t seed) {
    params.validate();
    const Lattice lattice = Lattice::from_config(config);
    Environment env(config);

    QTable table(lattice);
    if (params.random_init) table.randomize(derive_seed(seed, 1), 0.01);

    Rng action_rng(derive_seed(seed, 2));
    double epsilon = params.epsilon_initial;
    std::vector<EpisodeMetrics> metrics;
    metrics.reserve(params.episodes);

    for (int episode = 1; episode <= params.episodes; ++episode) {
        State s = env.reset(derive_seed(seed, 0x10000 + static_cast<std::uint64_t>(episode)));
        int ix = lattice.x_index(env.uav_position().x);
        int iy = lattice.y_index(env.uav_position().y);
        int ip = lattice.power_index(env.power());

        double cumulative = 0.0;
        while (!env.done()) {
            const auto choice = select_tabular_action(table, ix, iy, ip, epsilon, action_rng);
            const StepOutcome out = env.step(choice.action);
            const int nix = lattice.x_index(out.diag.uav_pos.x);
            const int niy = lattice.y_index(out.diag.uav_pos.y);
            const int nip = lattice.power_index(out.diag.power);
            // horizon cut, not a terminal state: bootstrap through done
            const double max_next = table.max_value(nix, niy, nip);
            double& q = table.at(ix, iy, ip, choice.action.index());
            q = q_update(q, out.reward, max_next, params);
            cumulative += out.reward;
            ix = nix;
            iy = niy;
            ip = nip;
            s = out.next_state;
        }

        const auto& totals = env.episode_totals();
        const double slots = static_cast<double>(totals.slots);
        EpisodeMetrics row;
        row.episode = episode;
        row.cumulative_reward = cumulative;
        row.mean_c_u = totals.c_u_sum / slots;
        row.mean_c_j = totals.c_j_sum / slots;
        row.secrecy_capacity = totals.secrecy_sum / slots;
        row.final_dx = s.dx;
        row.final_dy = s.dy;
        row.final_power = env.power();
        row.epsilon = epsilon;
        metrics.push_back(row);

        epsilon = std::max(params.epsilon_min, epsilon * params.epsilon_decay);
    }

    return TabularResult{std::move(table), std::move(metrics)};
}

QSolveResult solve_deterministic_q(int n_states, int n_actions,
                                   const std::function<int(int, int)>& next_state,
                                   const std::function<double(int, int)>& reward,
                                   double gamma, double tol, int max_sweeps) {
    if (n_states <= 0 || n_actions <= 0)
        throw std::invalid_argument("solve_deterministic_q: empty state or action space");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("solve_deterministic_q: gamma must lie in [0, 1)");

    // cache the deterministic model once; sweeps then touch memory only
    std::vector<int> next(static_cast<std::size_t>(n_states) * n_actions);
    std::vector<double> r(next.size());
    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            const std::size_t i = static_cast<std::size_t>(s) * n_actions + a;
            next[i] = next_state(s, a);
            if (next[i] < 0 || next[i] >= n_states)
                throw std::invalid_argument("solve_deterministic_q: transition out of range");
            r[i] = reward(s, a);
        }
    }

    QSolveResult res;
    res.q.assign(next.size(), 0.0);
    std::vector<double> scratch(next.size());
    std::vector<double> best(n_states, 0.0);

    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        for (int s = 0; s < n_states; ++s) {
            const double* row = res.q.data() + static_cast<std::size_t>(s) * n_actions;
            double m = row[0];
            for (int a = 1; a < n_actions; ++a) m = std::max(m, row[a]);
            best[s] = m;
        }
        double residual = 0.0;
        for (std::size_t i = 0; i < scratch.size(); ++i) {
            scratch[i] = r[i] + gamma * best[next[i]];
            residual = std::max(residual, std::abs(scratch[i] - res.q[i]));
        }
        res.q.swap(scratch);
        res.sweeps = sweep;
        res.residual = residual;
        res.residual_history.push_back(residual);
        if (residual < tol) return res;
    }
    throw std::runtime_error("solve_deterministic_q: no convergence within max_sweeps");
}

QTable value_iteration(const WorldConfig& config, double gamma, double tol, int max_sweeps,
                       std::vector<double>* residual_history) {
    const Lattice l = Lattice::from_config(config);

    // transition and reward written directly in lattice index space; shares
    // no code with Environment::step on purpose
    const auto decode = [&](int s, int* ix, int* iy, int* ip) {
        *ip = s % l.np;
        *iy = (s / l.np) % l.ny;
        *ix = s / (l.np * l.ny);
    };
    const auto apply = [&](int s, int a, int* ix, int* iy, int* ip) {
        decode(s, ix, iy, ip);
        const Action action(a);
        switch (action.move()) {
            case Move::PlusX: *ix = std::min(*ix + 1, l.nx - 1); break;
            case Move::MinusX: *ix = std::max(*ix - 1, 0); break;
            case Move::PlusY: *iy = std::min(*iy + 1, l.ny - 1); break;
            case Move::MinusY: *iy = std::max(*iy - 1, 0); break;
        }
        switch (action.power_delta()) {
            case PowerDelta::Up: *ip = std::min(*ip + 1, l.np - 1); break;
            case PowerDelta::Hold: break;
            case PowerDelta::Down: *ip = std::max(*ip - 1, 0); break;
        }
    };
    const auto next_fn = [&](int s, int a) {
        int ix, iy, ip;
        apply(s, a, &ix, &iy, &ip);
        return l.state_index(ix, iy, ip);
    };
    const auto reward_fn = [&](int s, int a) {
        int ix, iy, ip;
        apply(s, a, &ix, &iy, &ip);
        const double x = ix * l.grid_step;
        const double y = iy * l.grid_step;
        const double p = ip * l.p1;
        const double ddx = x - config.ue_pos.x;
        const double ddy = y - config.ue_pos.y;
        const double ddz = config.altitude - config.ue_pos.z;
        const double d2 = ddx * ddx + ddy * ddy + ddz * ddz;
        return config.ref_snr * p / d2;
    };

    const QSolveResult res = solve_deterministic_q(l.n_states(), kNumActions, next_fn,
                                                   reward_fn, gamma, tol, max_sweeps);
    if (residual_history) *residual_history = res.residual_history;

    QTable table(l);
    for (int ix = 0; ix < l.nx; ++ix)
        for (int iy = 0; iy < l.ny; ++iy)
            for (int ip = 0; ip < l.np; ++ip) {
                const int s = l.state_index(ix, iy, ip);
                for (int a = 0; a < kNumActions; ++a)
                    table.at(ix, iy, ip, a) =
                        res.q[static_cast<std::size_t>(s) * kNumActions + a];
            }
    return table;
}

}  // namespace absim
