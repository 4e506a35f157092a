#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "l2t/baseline_agents.hpp"
#include "l2t/de_solver.hpp"
#include "l2t/kt_engine.hpp"
#include "l2t/neural_agent.hpp"
#include "l2t/problem_suite.hpp"
#include "l2t/reward.hpp"
#include "l2t/state_features.hpp"

namespace l2t {

using InitPool = std::vector<Matrix>;

// Learning stage: rewards computed from known optima; tasks start from
// populations drawn out of a pre-generated pool.
struct LearningMode {
    RewardConfig reward;
    std::shared_ptr<const InitPool> init_pool;
};

// Utilization stage: no rewards, no optimum knowledge, fresh Latin
// hypercube start per task.
struct UtilizationMode {};

struct EpisodeConfig {
    std::size_t horizon = 100;
    // Generation count used to normalize the time and stagnation
    // features; 0 means `horizon`.
    std::size_t feature_horizon = 0;
    DeConfig de;
    std::variant<LearningMode, UtilizationMode> mode = UtilizationMode{};

    bool learning() const { return std::holds_alternative<LearningMode>(mode); }
    std::size_t g_max() const { return feature_horizon ? feature_horizon : horizon; }
    void validate() const;  // throws ConfigError
};

struct TaskStepInfo {
    double q_kt = 0.0;
    double r_conv = 0.0;
    double r_kt = 0.0;
    double reward = 0.0;
    std::size_t kt_count = 0;
    double best_f = 0.0;
};

struct StepResult {
    StateVector state;
    double reward = 0.0;
    std::vector<TaskStepInfo> tasks;
};

// One EMT run over an MTOP instance. Every generation all tasks generate
// offspring from the current parent populations, are evaluated, and then
// undergo truncation selection. Each task draws from its own random
// stream.
class EmtEnvironment {
public:
    EmtEnvironment(const MtopInstance& instance, EpisodeConfig cfg);

    // Derives per-task streams from rng and initializes all tasks.
    StateVector reset(Rng& rng);

    // Explicit per-task stream seeds (one per task).
    StateVector reset_with_task_seeds(std::span<const std::uint64_t> seeds, Rng& pool_rng);

    // action: 3K components, clipped to [0,1] here as a guard.
    StepResult step(std::span<const double> action);

    const std::vector<TaskState>& tasks() const { return tasks_; }
    const EpisodeConfig& config() const { return cfg_; }
    std::size_t generation() const { return generation_; }
    std::size_t evaluations() const { return evaluations_; }
    std::size_t num_tasks() const { return instance_.num_tasks(); }
    StateVector state() const;

private:
    double evaluate(std::size_t task, std::span<const double> x);

    MtopInstance instance_;
    EpisodeConfig cfg_;
    std::vector<TaskState> tasks_;
    std::vector<Rng> task_rngs_;
    std::vector<TargetBonus> bonus_;
    std::size_t generation_ = 0;
    std::size_t evaluations_ = 0;
};

struct Transition {
    StateVector state;
    std::vector<double> raw_action;
    double log_prob = 0.0;
    double value = 0.0;
    double reward = 0.0;
};

struct Episode {
    std::vector<Transition> steps;
    double bootstrap_value = 0.0;  // critic value of the state after the last step
    bool terminal = false;         // true absorbing end: bootstrap treated as 0
    double total_return() const;
};

// Learning-stage rollout with stochastic actions.
Episode run_learning_episode(const MtopInstance& instance, const AgentParams& agent,
                             const EpisodeConfig& cfg, Rng& rng);

struct UtilizationResult {
    // curves[k][g]: best fitness of task k after generation g (g = 0 is the
    // initial population).
    std::vector<std::vector<double>> curves;
    std::vector<std::vector<double>> best_x;
    std::vector<double> best_f;
    std::size_t evaluations = 0;
};

UtilizationResult run_utilization_episode(const MtopInstance& instance, const Policy& policy,
                                          const EpisodeConfig& cfg, Rng& rng);

}  // namespace l2t
