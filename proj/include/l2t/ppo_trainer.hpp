#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "l2t/de_solver.hpp"
#include "l2t/neural_agent.hpp"
#include "l2t/problem_io.hpp"
#include "l2t/reward.hpp"
#include "l2t/rollout_env.hpp"

namespace l2t {

struct PpoConfig {
    double gamma = 0.99;
    double lam = 0.95;
    double clip_eps = 0.2;
    double learning_rate = 3e-4;
    std::size_t epochs_per_update = 10;
    std::size_t minibatch_size = 64;
    std::size_t buffer_size = 2048;
    std::size_t num_envs = 4;
    std::size_t total_timesteps = 100000;
    std::size_t rollout_generations = 100;  // G_roll
    std::size_t feature_horizon = 0;        // G_max used by the features; 0 = G_roll
    bool normalize_advantages = true;
    double entropy_coef = 0.0;
    bool learn_std = true;
    double init_std = 0.3;
    std::vector<std::size_t> hidden_sizes{64, 64};
    std::size_t init_pool_size = 100;  // N_P
    std::size_t best_window = 10;

    void validate() const;  // throws ConfigError
};

struct GaeResult {
    std::vector<double> advantages;
    std::vector<double> returns;
};

// values has one more entry than rewards: the bootstrap value of the
// state after the last step.
GaeResult gae(std::span<const double> rewards, std::span<const double> values, double gamma,
              double lam);

struct SurrogateTerm {
    double value = 0.0;          // min(rho A, clip(rho) A)
    double d_log_prob = 0.0;     // derivative of value w.r.t. the new log-prob
    bool clipped = false;        // |rho - 1| > eps
};

SurrogateTerm actor_objective(double log_prob_new, double log_prob_old, double advantage,
                              double eps);

// -(advantage + value_old - value_new)^2
double critic_objective(double value_new, double value_old, double advantage);

struct Sample {
    StateVector state;
    std::vector<double> raw_action;
    double log_prob_old = 0.0;
    double value_old = 0.0;
    double reward = 0.0;
    double advantage = 0.0;
    double ret = 0.0;
};

class TrajectoryBuffer {
public:
    // Appends an episode and computes its advantages and returns.
    void add_episode(const Episode& ep, double gamma, double lam);

    std::span<Sample> samples() { return samples_; }
    std::span<const Sample> samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    std::size_t episodes() const { return episode_returns_.size(); }
    double mean_episode_return() const;
    void clear();

private:
    std::vector<Sample> samples_;
    std::vector<double> episode_returns_;
};

// Gradients of the maximized objectives for one minibatch.
struct PpoGradients {
    MlpGrad actor;
    std::vector<double> log_std;
    MlpGrad critic;
    double surrogate = 0.0;   // mean clipped surrogate
    double critic_obj = 0.0;  // mean critic objective
    double mean_ratio = 0.0;
    double clip_frac = 0.0;

    double actor_squared_norm() const;
};

PpoGradients compute_ppo_gradients(const AgentParams& agent, std::span<const Sample> samples,
                                   std::span<const std::size_t> batch, const PpoConfig& cfg);

// First-order adaptive-moment gradient ascent over a fixed set of tensors.
class Adam {
public:
    Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    // params[i] += lr * mhat / (sqrt(vhat) + eps) for gradient grads[i].
    void ascend(std::span<const std::span<double>> params,
                std::span<const std::span<const double>> grads);

private:
    double lr_, beta1_, beta2_, eps_;
    std::size_t t_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

struct UpdateStats {
    double actor_loss = 0.0;   // -mean surrogate
    double critic_loss = 0.0;  // mean squared return error
    double clip_frac = 0.0;
    double mean_ratio = 0.0;
};

// Holds optimizer state across updates.
class PpoUpdater {
public:
    explicit PpoUpdater(PpoConfig cfg);

    // Throws InvalidState on an empty buffer. May normalize the buffer's
    // advantages in place.
    UpdateStats update(AgentParams& agent, TrajectoryBuffer& buffer, Rng& rng);

private:
    PpoConfig cfg_;
    Adam actor_opt_;
    Adam critic_opt_;
};

// Single update with a fresh optimizer.
UpdateStats ppo_update(AgentParams& agent, TrajectoryBuffer& buffer, const PpoConfig& cfg, Rng& rng);

struct TrainLogRecord {
    std::size_t update = 0;
    std::size_t timesteps = 0;
    double mean_return = 0.0;
    double actor_loss = 0.0;
    double critic_loss = 0.0;
    double clip_frac = 0.0;
    double mean_ratio = 0.0;
};

void write_train_log_csv(std::ostream& out, std::span<const TrainLogRecord> log);

struct TrainResult {
    AgentParams best;
    AgentParams last;
    std::vector<TrainLogRecord> log;
};

// Produces one episode for environment env_index using that
// environment's private stream. Called concurrently for distinct envs with
// a shared read-only agent snapshot.
using EpisodeSource =
    std::function<Episode(const AgentParams& agent, std::size_t env_index, Rng& env_rng)>;

// Called after each update with the updated agent; returning false stops
// training early.
using TrainProgress = std::function<bool(const TrainLogRecord&, const AgentParams&)>;

// Generic PPO loop: collect >= buffer_size steps from num_envs
// environments, update, repeat until total_timesteps.
TrainResult train_with_source(AgentParams agent, const PpoConfig& cfg, const EpisodeSource& source,
                              std::uint64_t seed, const TrainProgress& progress = {});

// Learning stage on an MTOP problem set.
TrainResult train(const std::vector<MtopInstance>& problem_set, const PpoConfig& cfg,
                  const RewardConfig& reward_cfg, const DeConfig& de_cfg, std::uint64_t seed,
                  const TrainProgress& progress = {});

}  // namespace l2t
