#include "absim/neural.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "absim/rng.hpp"

namespace absim {

namespace {

// Four independent partial sums keep the reduction off the FP latency chain
// without changing the summation order between runs.
double dot(const double* w, const double* x, int n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += w[i] * x[i];
        s1 += w[i + 1] * x[i + 1];
        s2 += w[i + 2] * x[i + 2];
        s3 += w[i + 3] * x[i + 3];
    }
    for (; i < n; ++i) s0 += w[i] * x[i];
    return (s0 + s1) + (s2 + s3);
}

void affine(const Layer& layer, const double* x, double* out) {
    for (int j = 0; j < layer.out; ++j)
        out[j] = dot(layer.weights.data() + static_cast<std::size_t>(j) * layer.in, x,
                     layer.in) +
                 layer.biases[j];
}

double activate(Activation act, double z) {
    return act == Activation::Rectifier ? std::max(z, 0.0) : z;
}

// pre[l], post[l] for layer l; post[l] feeds layer l+1
struct Trace {
    std::vector<std::vector<double>> pre;
    std::vector<std::vector<double>> post;
};

Trace forward_trace(const Mlp& net, std::span<const double> input) {
    Trace t;
    t.pre.resize(net.layers.size());
    t.post.resize(net.layers.size());
    const double* x = input.data();
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const Layer& layer = net.layers[l];
        t.pre[l].resize(layer.out);
        t.post[l].resize(layer.out);
        affine(layer, x, t.pre[l].data());
        for (int j = 0; j < layer.out; ++j)
            t.post[l][j] = activate(layer.activation, t.pre[l][j]);
        x = t.post[l].data();
    }
    return t;
}

double bootstrap_target(const Sample& sample, const Mlp& target_net, double gamma) {
    if (sample.done) return sample.reward;
    const std::vector<double> q_next = forward(target_net, sample.next_state);
    return sample.reward + gamma * *std::max_element(q_next.begin(), q_next.end());
}

void check_sample(const Sample& sample, const Mlp& train_net) {
    if (static_cast<int>(sample.state.size()) != train_net.input_dim())
        throw std::invalid_argument("loss: sample state dimension mismatch");
    if (sample.action < 0 || sample.action >= train_net.output_dim())
        throw std::invalid_argument("loss: sample action out of range");
    if (!sample.done &&
        static_cast<int>(sample.next_state.size()) != train_net.input_dim())
        throw std::invalid_argument("loss: sample next_state dimension mismatch");
}

void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::ifstream& in, const std::string& path) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw std::runtime_error("load_mlp: truncated file " + path);
    return v;
}

}  // namespace

void validate_shapes(const Mlp& net) {
    if (net.layers.empty()) throw std::invalid_argument("Mlp: no layers");
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const Layer& layer = net.layers[l];
        if (layer.in <= 0 || layer.out <= 0)
            throw std::invalid_argument("Mlp: layer dimensions must be positive");
        if (l > 0 && layer.in != net.layers[l - 1].out)
            throw std::invalid_argument("Mlp: layer dimensions do not chain");
        if (layer.weights.size() != static_cast<std::size_t>(layer.in) * layer.out)
            throw std::invalid_argument("Mlp: weight block has the wrong size");
        if (layer.biases.size() != static_cast<std::size_t>(layer.out))
            throw std::invalid_argument("Mlp: bias block has the wrong size");
        for (double w : layer.weights)
            if (!std::isfinite(w)) throw std::invalid_argument("Mlp: non-finite weight");
        for (double b : layer.biases)
            if (!std::isfinite(b)) throw std::invalid_argument("Mlp: non-finite bias");
    }
    if (net.layers.back().activation != Activation::Identity)
        throw std::invalid_argument("Mlp: output layer must be linear");
}

Mlp make_mlp(std::span<const int> dims, std::uint64_t seed) {
    if (dims.size() < 2) throw std::invalid_argument("make_mlp: need at least two dims");
    Rng rng(seed);
    Mlp net;
    net.layers.resize(dims.size() - 1);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        Layer& layer = net.layers[l];
        layer.in = dims[l];
        layer.out = dims[l + 1];
        layer.activation =
            (l + 2 == dims.size()) ? Activation::Identity : Activation::Rectifier;
        if (layer.in <= 0 || layer.out <= 0)
            throw std::invalid_argument("make_mlp: dims must be positive");
        const double limit = std::sqrt(6.0 / (layer.in + layer.out));
        layer.weights.resize(static_cast<std::size_t>(layer.in) * layer.out);
        for (double& w : layer.weights) w = rng.uniform(-limit, limit);
        layer.biases.assign(layer.out, 0.0);
    }
    return net;
}

std::vector<double> forward(const Mlp& net, std::span<const double> input) {
    if (net.layers.empty()) throw std::invalid_argument("forward: empty network");
    if (static_cast<int>(input.size()) != net.input_dim())
        throw std::invalid_argument("forward: input dimension mismatch");
    std::vector<double> cur(input.begin(), input.end());
    std::vector<double> next;
    for (const Layer& layer : net.layers) {
        next.resize(layer.out);
        affine(layer, cur.data(), next.data());
        for (int j = 0; j < layer.out; ++j) next[j] = activate(layer.activation, next[j]);
        cur.swap(next);
    }
    return cur;
}

double loss(const Batch& batch, const Mlp& train_net, const Mlp& target_net, double gamma) {
    if (batch.empty()) throw std::invalid_argument("loss: batch must be non-empty");
    double sum = 0.0;
    for (const Sample& sample : batch) {
        check_sample(sample, train_net);
        const double target = bootstrap_target(sample, target_net, gamma);
        const std::vector<double> q = forward(train_net, sample.state);
        const double err = target - q[sample.action];
        sum += err * err;
    }
    return sum / static_cast<double>(batch.size());
}

Gradients zero_gradients(const Mlp& net) {
    Gradients g;
    g.layers.resize(net.layers.size());
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        g.layers[l].weights.assign(net.layers[l].weights.size(), 0.0);
        g.layers[l].biases.assign(net.layers[l].biases.size(), 0.0);
    }
    return g;
}

Gradients backward(const Batch& batch, const Mlp& train_net, const Mlp& target_net,
                   double gamma) {
    return backward(batch, train_net, target_net, gamma, nullptr);
}

Gradients backward(const Batch& batch, const Mlp& train_net, const Mlp& target_net,
                   double gamma, double* loss_out) {
    if (batch.empty()) throw std::invalid_argument("backward: batch must be non-empty");
    Gradients grads = zero_gradients(train_net);
    const double inv_m = 1.0 / static_cast<double>(batch.size());
    const std::size_t n_layers = train_net.layers.size();
    double loss_sum = 0.0;

    std::vector<double> delta, delta_prev;
    for (const Sample& sample : batch) {
        check_sample(sample, train_net);
        const double target = bootstrap_target(sample, target_net, gamma);
        const Trace trace = forward_trace(train_net, sample.state);
        const double predicted = trace.post.back()[sample.action];
        const double err = target - predicted;
        loss_sum += err * err;

        // d(mean squared error)/d(q[action]); the bootstrap term is constant
        delta.assign(train_net.layers.back().out, 0.0);
        delta[sample.action] = -2.0 * err * inv_m;

        for (std::size_t l = n_layers; l-- > 0;) {
            const Layer& layer = train_net.layers[l];
            const double* below =
                (l == 0) ? sample.state.data() : trace.post[l - 1].data();
            Gradients::LayerGrads& lg = grads.layers[l];
            for (int j = 0; j < layer.out; ++j) {
                const double d = delta[j];
                if (d == 0.0) continue;
                double* wrow = lg.weights.data() + static_cast<std::size_t>(j) * layer.in;
                for (int i = 0; i < layer.in; ++i) wrow[i] += d * below[i];
                lg.biases[j] += d;
            }
            if (l == 0) break;
            const Layer& lower = train_net.layers[l - 1];
            delta_prev.assign(layer.in, 0.0);
            for (int j = 0; j < layer.out; ++j) {
                const double d = delta[j];
                if (d == 0.0) continue;
                const double* wrow =
                    layer.weights.data() + static_cast<std::size_t>(j) * layer.in;
                for (int i = 0; i < layer.in; ++i) delta_prev[i] += d * wrow[i];
            }
            if (lower.activation == Activation::Rectifier) {
                for (int i = 0; i < layer.in; ++i)
                    if (trace.pre[l - 1][i] <= 0.0) delta_prev[i] = 0.0;
            }
            delta.swap(delta_prev);
        }
    }
    if (loss_out) *loss_out = loss_sum * inv_m;
    return grads;
}

void sgd_step(Mlp& net, const Gradients& grads, double learning_rate) {
    if (!(learning_rate > 0.0))
        throw std::invalid_argument("sgd_step: learning rate must be > 0");
    if (grads.layers.size() != net.layers.size())
        throw std::invalid_argument("sgd_step: gradient/network layer count mismatch");
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        Layer& layer = net.layers[l];
        const Gradients::LayerGrads& lg = grads.layers[l];
        if (lg.weights.size() != layer.weights.size() ||
            lg.biases.size() != layer.biases.size())
            throw std::invalid_argument("sgd_step: gradient shape mismatch");
        for (std::size_t i = 0; i < layer.weights.size(); ++i)
            layer.weights[i] -= learning_rate * lg.weights[i];
        for (std::size_t i = 0; i < layer.biases.size(); ++i)
            layer.biases[i] -= learning_rate * lg.biases[i];
    }
}

void save_mlp(const Mlp& net, const std::string& path) {
    validate_shapes(net);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_mlp: cannot open " + path);
    out.write(kMlpMagic, sizeof kMlpMagic);
    write_u32(out, 1u);  // format version
    write_u32(out, static_cast<std::uint32_t>(net.layers.size()));
    for (const Layer& layer : net.layers) {
        write_u32(out, static_cast<std::uint32_t>(layer.in));
        write_u32(out, static_cast<std::uint32_t>(layer.out));
        write_u32(out, static_cast<std::uint32_t>(layer.activation));
    }
    for (const Layer& layer : net.layers) {
        out.write(reinterpret_cast<const char*>(layer.weights.data()),
                  static_cast<std::streamsize>(layer.weights.size() * sizeof(double)));
        out.write(reinterpret_cast<const char*>(layer.biases.data()),
                  static_cast<std::streamsize>(layer.biases.size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("save_mlp: write failed for " + path);
}

Mlp load_mlp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_mlp: cannot open " + path);
    char magic[sizeof kMlpMagic];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMlpMagic, sizeof magic) != 0)
        throw std::runtime_error("load_mlp: bad magic in " + path);
    const std::uint32_t version = read_u32(in, path);
    if (version != 1u)
        throw std::runtime_error("load_mlp: unsupported version in " + path);
    const std::uint32_t n_layers = read_u32(in, path);
    if (n_layers == 0 || n_layers > 64)
        throw std::runtime_error("load_mlp: implausible layer count in " + path);

    Mlp net;
    net.layers.resize(n_layers);
    for (Layer& layer : net.layers) {
        layer.in = static_cast<int>(read_u32(in, path));
        layer.out = static_cast<int>(read_u32(in, path));
        const std::uint32_t act = read_u32(in, path);
        if (act > 1u) throw std::runtime_error("load_mlp: unknown activation in " + path);
        layer.activation = static_cast<Activation>(act);
    }
    for (Layer& layer : net.layers) {
        if (layer.in <= 0 || layer.out <= 0 || layer.in > 1 << 20 || layer.out > 1 << 20)
            throw std::runtime_error("load_mlp: implausible layer dims in " + path);
        layer.weights.resize(static_cast<std::size_t>(layer.in) * layer.out);
        layer.biases.resize(layer.out);
        in.read(reinterpret_cast<char*>(layer.weights.data()),
                static_cast<std::streamsize>(layer.weights.size() * sizeof(double)));
        in.read(reinterpret_cast<char*>(layer.biases.data()),
                static_cast<std::streamsize>(layer.biases.size() * sizeof(double)));
        if (!in) throw std::runtime_error("load_mlp: truncated file " + path);
    }
    char extra;
    if (in.read(&extra, 1))
        throw std::runtime_error("load_mlp: trailing bytes in " + path);
    try {
        validate_shapes(net);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("load_mlp: ") + e.what() + " in " + path);
    }
    return net;
}

}  // namespace absim
