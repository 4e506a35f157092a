#include "l2t/neural_agent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "l2t/errors.hpp"
#include "l2t/kernels.hpp"
#include "l2t/state_features.hpp"

namespace l2t {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
    return n;
}

MlpGrad MlpGrad::zeros_like(const Mlp& net) {
    MlpGrad g;
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        g.weights.emplace_back(net.weights[l].rows(), net.weights[l].cols());
        g.biases.emplace_back(net.biases[l].size(), 0.0);
    }
    return g;
}

void MlpGrad::set_zero() {
    for (auto& w : weights) w.fill(0.0);
    for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
}

double MlpGrad::squared_norm() const {
    double s = 0.0;
    for (const auto& w : weights)
        for (double v : w.flat()) s += v * v;
    for (const auto& b : biases)
        for (double v : b) s += v * v;
    return s;
}

Mlp make_mlp(std::span<const std::size_t> layer_dims, OutputHead head, Rng& rng,
             double output_scale) {
    if (layer_dims.size() < 2) throw std::invalid_argument("make_mlp: need at least two layer dims");
    Mlp net;
    net.layer_dims.assign(layer_dims.begin(), layer_dims.end());
    net.head = head;
    for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
        const std::size_t in = layer_dims[l];
        const std::size_t out = layer_dims[l + 1];
        // Glorot uniform; the last layer can be shrunk so the initial
        // policy starts near the middle of the action box.
        double limit = std::sqrt(6.0 / static_cast<double>(in + out));
        if (l + 2 == layer_dims.size()) limit *= output_scale;
        Matrix w(out, in);
        for (double& v : w.flat()) v = rng.uniform(-limit, limit);
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(out, 0.0);
    }
    return net;
}

std::vector<double> forward(const Mlp& net, std::span<const double> input, MlpTape* tape) {
    if (input.size() != net.input_dim())
        throw std::invalid_argument("mlp forward: expected input of size " +
                                    std::to_string(net.input_dim()) + ", got " +
                                    std::to_string(input.size()));
    const auto& k = kernels::active();
    std::vector<double> x(input.begin(), input.end());
    if (tape) {
        tape->activations.clear();
        tape->activations.push_back(x);
    }
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        const Matrix& w = net.weights[l];
        std::vector<double> y(w.rows());
        k.gemv(w.data(), w.rows(), w.cols(), x.data(), net.biases[l].data(), y.data());
        const bool last = l + 1 == net.num_layers();
        if (!last) {
            for (double& v : y) v = std::tanh(v);
        } else if (net.head == OutputHead::Sigmoid) {
            for (double& v : y) v = sigmoid(v);
        }
        if (tape) tape->activations.push_back(y);
        x = std::move(y);
    }
    return x;
}

void backward(const Mlp& net, const MlpTape& tape, std::span<const double> grad_out, MlpGrad& grad) {
    if (grad_out.size() != net.output_dim() || tape.activations.size() != net.num_layers() + 1)
        throw std::invalid_argument("mlp backward: shape mismatch");
    const auto& k = kernels::active();
    std::vector<double> delta(grad_out.begin(), grad_out.end());
    for (std::size_t l = net.num_layers(); l-- > 0;) {
        const auto& out = tape.activations[l + 1];
        const bool last = l + 1 == net.num_layers();
        // Pre-activation gradient.
        if (!last) {
            for (std::size_t i = 0; i < delta.size(); ++i) delta[i] *= 1.0 - out[i] * out[i];
        } else if (net.head == OutputHead::Sigmoid) {
            for (std::size_t i = 0; i < delta.size(); ++i) delta[i] *= out[i] * (1.0 - out[i]);
        }
        const Matrix& w = net.weights[l];
        const auto& in = tape.activations[l];
        k.ger(grad.weights[l].data(), w.rows(), w.cols(), delta.data(), in.data());
        for (std::size_t i = 0; i < delta.size(); ++i) grad.biases[l][i] += delta[i];
        if (l > 0) {
            std::vector<double> prev(w.cols(), 0.0);
            k.gemv_t_acc(w.data(), w.rows(), w.cols(), delta.data(), prev.data());
            delta = std::move(prev);
        }
    }
}

MlpGrad backprop(const Mlp& net, std::span<const double> input, std::span<const double> grad_out) {
    MlpTape tape;
    forward(net, input, &tape);
    MlpGrad g = MlpGrad::zeros_like(net);
    backward(net, tape, grad_out, g);
    return g;
}

AgentParams make_agent(std::size_t num_tasks, std::span<const std::size_t> hidden, double init_std,
                       Rng& rng) {
    if (!(init_std > 0.0)) throw ConfigError("init_std must be positive");
    AgentParams a;
    a.num_tasks = num_tasks;
    std::vector<std::size_t> dims{state_dim(num_tasks)};
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    std::vector<std::size_t> actor_dims = dims;
    actor_dims.push_back(3 * num_tasks);
    std::vector<std::size_t> critic_dims = dims;
    critic_dims.push_back(1);
    a.actor = make_mlp(actor_dims, OutputHead::Sigmoid, rng, 0.01);
    a.critic = make_mlp(critic_dims, OutputHead::Linear, rng, 1.0);
    a.log_std.assign(3 * num_tasks, std::clamp(std::log(init_std), kLogStdMin, kLogStdMax));
    return a;
}

std::vector<double> actor_forward(const AgentParams& agent, std::span<const double> state) {
    return forward(agent.actor, state);
}

double critic_forward(const AgentParams& agent, std::span<const double> state) {
    return forward(agent.critic, state).front();
}

double gaussian_log_prob(std::span<const double> x, std::span<const double> mean,
                         std::span<const double> log_std) {
    constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * ln(2 pi)
    double lp = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double z = (x[i] - mean[i]) / std::exp(log_std[i]);
        lp += -kHalfLog2Pi - log_std[i] - 0.5 * z * z;
    }
    return lp;
}

double gaussian_entropy(std::span<const double> log_std) {
    constexpr double kHalfLog2PiE = 1.41893853320467274178;  // 0.5 * ln(2 pi e)
    double h = 0.0;
    for (double ls : log_std) h += kHalfLog2PiE + ls;
    return h;
}

ActionSample sample_action(const AgentParams& agent, std::span<const double> state, Rng& rng,
                           bool deterministic) {
    ActionSample s;
    s.mean = actor_forward(agent, state);
    s.raw = s.mean;
    if (!deterministic)
        for (std::size_t i = 0; i < s.raw.size(); ++i)
            s.raw[i] += std::exp(agent.log_std[i]) * rng.normal();
    s.clipped.resize(s.raw.size());
    for (std::size_t i = 0; i < s.raw.size(); ++i) s.clipped[i] = std::clamp(s.raw[i], 0.0, 1.0);
    s.log_prob = gaussian_log_prob(s.raw, s.mean, agent.log_std);
    return s;
}

namespace {

Json weights_json(const Mlp& net) {
    Json arr = Json::array();
    for (const auto& w : net.weights) arr.push_back(std::vector<double>(w.flat().begin(), w.flat().end()));
    return arr;
}

Mlp mlp_from_json(const Json& j, const std::string& dims_key, const std::string& w_key,
                  const std::string& b_key, OutputHead head, const std::string& ctx) {
    Mlp net;
    net.head = head;
    net.layer_dims = get_field<std::vector<std::size_t>>(j, dims_key, ctx);
    if (net.layer_dims.size() < 2)
        throw FormatError(ctx + ": field \"" + dims_key + "\" needs at least two entries");
    const auto ws = get_field<std::vector<std::vector<double>>>(j, w_key, ctx);
    const auto bs = get_field<std::vector<std::vector<double>>>(j, b_key, ctx);
    const std::size_t layers = net.layer_dims.size() - 1;
    if (ws.size() != layers)
        throw FormatError(ctx + ": field \"" + w_key + "\" has " + std::to_string(ws.size()) +
                          " layers, expected " + std::to_string(layers));
    if (bs.size() != layers)
        throw FormatError(ctx + ": field \"" + b_key + "\" has " + std::to_string(bs.size()) +
                          " layers, expected " + std::to_string(layers));
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t in = net.layer_dims[l];
        const std::size_t out = net.layer_dims[l + 1];
        if (ws[l].size() != in * out)
            throw FormatError(ctx + ": field \"" + w_key + "\"[" + std::to_string(l) +
                              "] has wrong size for layer dims");
        if (bs[l].size() != out)
            throw FormatError(ctx + ": field \"" + b_key + "\"[" + std::to_string(l) +
                              "] has wrong size for layer dims");
        Matrix w(out, in);
        std::copy(ws[l].begin(), ws[l].end(), w.data());
        for (double v : ws[l])
            if (!std::isfinite(v)) throw FormatError(ctx + ": field \"" + w_key + "\" is not finite");
        net.weights.push_back(std::move(w));
        net.biases.push_back(bs[l]);
    }
    return net;
}

}  // namespace

Json agent_to_json(const AgentParams& agent) {
    Json j;
    j["format_version"] = 1;
    j["num_tasks"] = agent.num_tasks;
    j["layer_dims_actor"] = agent.actor.layer_dims;
    j["layer_dims_critic"] = agent.critic.layer_dims;
    j["actor_weights"] = weights_json(agent.actor);
    j["actor_biases"] = agent.actor.biases;
    j["critic_weights"] = weights_json(agent.critic);
    j["critic_biases"] = agent.critic.biases;
    j["log_std"] = agent.log_std;
    return j;
}

AgentParams agent_from_json(const Json& j, const std::string& ctx) {
    const auto version = get_field<int>(j, "format_version", ctx);
    if (version != 1)
        throw FormatError(ctx + ": field \"format_version\" is " + std::to_string(version) +
                          ", expected 1");
    AgentParams a;
    a.num_tasks = get_field<std::size_t>(j, "num_tasks", ctx);
    a.actor = mlp_from_json(j, "layer_dims_actor", "actor_weights", "actor_biases",
                            OutputHead::Sigmoid, ctx);
    a.critic = mlp_from_json(j, "layer_dims_critic", "critic_weights", "critic_biases",
                             OutputHead::Linear, ctx);
    a.log_std = get_field<std::vector<double>>(j, "log_std", ctx);
    if (a.actor.input_dim() != state_dim(a.num_tasks))
        throw FormatError(ctx + ": field \"layer_dims_actor\" input does not match num_tasks");
    if (a.critic.input_dim() != a.actor.input_dim())
        throw FormatError(ctx + ": field \"layer_dims_critic\" input differs from actor input");
    if (a.actor.output_dim() != 3 * a.num_tasks)
        throw FormatError(ctx + ": field \"layer_dims_actor\" output must be 3*num_tasks");
    if (a.critic.output_dim() != 1)
        throw FormatError(ctx + ": field \"layer_dims_critic\" output must be 1");
    if (a.log_std.size() != a.action_dim())
        throw FormatError(ctx + ": field \"log_std\" must have 3*num_tasks entries");
    for (double v : a.log_std)
        if (!(v >= kLogStdMin && v <= kLogStdMax))
            throw FormatError(ctx + ": field \"log_std\" entry outside [-10, 2]");
    return a;
}

void save_agent(const AgentParams& agent, const std::filesystem::path& path) {
    write_text_file(path, dump_json(agent_to_json(agent)));
}

AgentParams load_agent(const std::filesystem::path& path) {
    return agent_from_json(read_json_file(path), path.string());
}

}  // namespace l2t
