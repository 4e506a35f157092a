#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "l2t/json_io.hpp"
#include "l2t/matrix.hpp"
#include "l2t/rng.hpp"

namespace l2t {

enum class OutputHead { Linear, Sigmoid };

// Feed-forward network: tanh hidden layers, configurable output head.
// weights[l] is (layer_dims[l+1] x layer_dims[l]).
struct Mlp {
    std::vector<std::size_t> layer_dims;
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    OutputHead head = OutputHead::Linear;

    std::size_t input_dim() const { return layer_dims.front(); }
    std::size_t output_dim() const { return layer_dims.back(); }
    std::size_t num_layers() const { return weights.size(); }
    std::size_t parameter_count() const;
};

// Gradient with the same shapes as an Mlp's parameters.
struct MlpGrad {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;

    static MlpGrad zeros_like(const Mlp& net);
    void set_zero();
    double squared_norm() const;
};

// Per-layer activations kept for the backward pass; activations[0] is the
// input, activations[l+1] the output of layer l.
struct MlpTape {
    std::vector<std::vector<double>> activations;
};

Mlp make_mlp(std::span<const std::size_t> layer_dims, OutputHead head, Rng& rng,
             double output_scale = 1.0);

// Throws std::invalid_argument on input dimension mismatch.
std::vector<double> forward(const Mlp& net, std::span<const double> input, MlpTape* tape = nullptr);

// Accumulates d(output . grad_out)/d(params) into grad.
void backward(const Mlp& net, const MlpTape& tape, std::span<const double> grad_out, MlpGrad& grad);

MlpGrad backprop(const Mlp& net, std::span<const double> input, std::span<const double> grad_out);

inline constexpr double kLogStdMin = -10.0;
inline constexpr double kLogStdMax = 2.0;

struct AgentParams {
    std::size_t num_tasks = 2;
    Mlp actor;    // state -> action mean in (0,1)^{3K}
    Mlp critic;   // state -> value
    std::vector<double> log_std;  // per action component

    std::size_t state_dim() const { return actor.input_dim(); }
    std::size_t action_dim() const { return actor.output_dim(); }
};

AgentParams make_agent(std::size_t num_tasks, std::span<const std::size_t> hidden, double init_std,
                       Rng& rng);

std::vector<double> actor_forward(const AgentParams& agent, std::span<const double> state);
double critic_forward(const AgentParams& agent, std::span<const double> state);

// Diagonal Gaussian log-density.
double gaussian_log_prob(std::span<const double> x, std::span<const double> mean,
                         std::span<const double> log_std);

// Entropy of the diagonal Gaussian defined by log_std.
double gaussian_entropy(std::span<const double> log_std);

struct ActionSample {
    std::vector<double> mean;
    std::vector<double> raw;      // Gaussian sample (or mean when deterministic)
    std::vector<double> clipped;  // raw clamped to [0,1]
    double log_prob = 0.0;        // density of raw
};

ActionSample sample_action(const AgentParams& agent, std::span<const double> state, Rng& rng,
                           bool deterministic = false);

Json agent_to_json(const AgentParams& agent);
// Throws FormatError naming the offending field.
AgentParams agent_from_json(const Json& j, const std::string& context = "agent");

void save_agent(const AgentParams& agent, const std::filesystem::path& path);
AgentParams load_agent(const std::filesystem::path& path);

}  // namespace l2t
