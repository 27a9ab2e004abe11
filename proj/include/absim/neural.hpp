#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace absim {

enum class Activation { Identity = 0, Rectifier = 1 };

struct Layer {
    int in = 0;
    int out = 0;
    Activation activation = Activation::Identity;
    std::vector<double> weights;  // row-major, out x in
    std::vector<double> biases;   // out
};

/// Plain fully connected network, evaluated in 64-bit floats throughout.
/// Copying an Mlp deep-copies every parameter; the target-network sync is
/// an ordinary assignment.
struct Mlp {
    std::vector<Layer> layers;

    int input_dim() const { return layers.empty() ? 0 : layers.front().in; }
    int output_dim() const { return layers.empty() ? 0 : layers.back().out; }
};

/// Throws std::invalid_argument when layer dimensions do not chain, a
/// parameter block has the wrong size, or a parameter is non-finite.
void validate_shapes(const Mlp& net);

/// Network with the given layer widths (dims.size() >= 2). Hidden layers use
/// the rectifier, the output layer is linear. Weights are seeded uniform in
/// +-sqrt(6 / (fan_in + fan_out)); biases start at zero.
Mlp make_mlp(std::span<const int> dims, std::uint64_t seed);

/// Throws std::invalid_argument when input.size() != net.input_dim().
std::vector<double> forward(const Mlp& net, std::span<const double> input);

/// One replay transition, already encoded as network inputs.
struct Sample {
    std::vector<double> state;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_state;
    bool done = false;
};
using Batch = std::vector<Sample>;

/// Mean squared TD error over the batch. The bootstrap term is the maximum
/// of the target network's outputs on the next state; terminal transitions
/// use the bare reward. The predicted term indexes the training network at
/// the taken action. Throws std::invalid_argument on an empty batch.
double loss(const Batch& batch, const Mlp& train_net, const Mlp& target_net, double gamma);

struct Gradients {
    struct LayerGrads {
        std::vector<double> weights;
        std::vector<double> biases;
    };
    std::vector<LayerGrads> layers;
};

Gradients zero_gradients(const Mlp& net);

/// Exact gradient of loss() with respect to the training network's
/// parameters; the target network is held constant.
Gradients backward(const Batch& batch, const Mlp& train_net, const Mlp& target_net,
                   double gamma);

/// Same as backward(), also reporting the batch loss computed from the same
/// forward passes (used by the training loop's divergence guard).
Gradients backward(const Batch& batch, const Mlp& train_net, const Mlp& target_net,
                   double gamma, double* loss_out);

/// theta <- theta - learning_rate * grad. Shapes must match the network.
void sgd_step(Mlp& net, const Gradients& grads, double learning_rate);

/// Little-endian binary checkpoint: magic, version, layer dims, then
/// row-major 64-bit parameters. load_mlp rejects files whose header,
/// dimensions or payload size do not line up.
inline constexpr char kMlpMagic[8] = {'A', 'B', 'S', 'M', 'L', 'P', '0', '1'};

void save_mlp(const Mlp& net, const std::string& path);
Mlp load_mlp(const std::string& path);

}  // namespace absim
