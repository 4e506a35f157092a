#include "l2t/rollout_env.hpp"

#include <algorithm>
#include <stdexcept>

#include "l2t/errors.hpp"

namespace l2t {

void EpisodeConfig::validate() const {
    if (horizon < 1) throw ConfigError("episode horizon must be >= 1");
    de.validate();
    if (const auto* m = std::get_if<LearningMode>(&mode)) {
        m->reward.validate();
        if (!m->init_pool || m->init_pool->empty())
            throw InvalidState("learning episodes need a non-empty initial population pool");
    }
}

EmtEnvironment::EmtEnvironment(const MtopInstance& instance, EpisodeConfig cfg)
    : instance_(instance), cfg_(std::move(cfg)) {
    if (instance_.num_tasks() < 2)
        throw std::invalid_argument("EmtEnvironment: instance needs at least two tasks");
}

double EmtEnvironment::evaluate(std::size_t task, std::span<const double> x) {
    ++evaluations_;
    return evaluate_task(instance_.tasks[task], x);
}

StateVector EmtEnvironment::reset(Rng& rng) {
    const std::uint64_t base = rng.next_u64();
    std::vector<std::uint64_t> seeds(num_tasks());
    for (std::size_t k = 0; k < seeds.size(); ++k) seeds[k] = mix_seed(base, k);
    return reset_with_task_seeds(seeds, rng);
}

StateVector EmtEnvironment::reset_with_task_seeds(std::span<const std::uint64_t> seeds,
                                                  Rng& pool_rng) {
    cfg_.validate();
    if (seeds.size() != num_tasks())
        throw std::invalid_argument("reset_with_task_seeds: need one seed per task");
    const std::size_t n = cfg_.de.pop_size;
    const std::size_t d = instance_.dim();
    task_rngs_.clear();
    for (auto s : seeds) task_rngs_.emplace_back(s);
    tasks_.clear();
    bonus_.assign(num_tasks(), {});
    generation_ = 0;
    evaluations_ = 0;

    const auto* learning = std::get_if<LearningMode>(&cfg_.mode);
    for (std::size_t k = 0; k < num_tasks(); ++k) {
        Matrix pop;
        if (learning) {
            const InitPool& pool = *learning->init_pool;
            pop = pool[pool_rng.below(pool.size())];
            if (pop.rows() != n || pop.cols() != d)
                throw InvalidState("initial population pool has the wrong shape");
        } else {
            pop = latin_hypercube(n, d, task_rngs_[k]);
        }
        std::vector<double> fit(n);
        for (std::size_t i = 0; i < n; ++i) fit[i] = evaluate(k, pop.row(i));
        tasks_.push_back(make_task_state(std::move(pop), std::move(fit)));
    }
    return state();
}

StateVector EmtEnvironment::state() const { return assemble_state(generation_, cfg_.g_max(), tasks_); }

StepResult EmtEnvironment::step(std::span<const double> action) {
    const std::size_t k_tasks = num_tasks();
    if (tasks_.empty()) throw InvalidState("EmtEnvironment::step called before reset");
    if (action.size() != 3 * k_tasks)
        throw std::invalid_argument("EmtEnvironment::step: action must have 3K components");

    std::vector<KtAction> actions(k_tasks);
    for (std::size_t k = 0; k < k_tasks; ++k)
        actions[k] = {std::clamp(action[3 * k], 0.0, 1.0), std::clamp(action[3 * k + 1], 0.0, 1.0),
                      std::clamp(action[3 * k + 2], 0.0, 1.0)};

    std::vector<OffspringBatch> batches;
    batches.reserve(k_tasks);
    for (std::size_t k = 0; k < k_tasks; ++k)
        batches.push_back(generate_offspring(tasks_, k, actions[k], cfg_.de, task_rngs_[k]));

    const auto* learning = std::get_if<LearningMode>(&cfg_.mode);
    StepResult result;
    result.tasks.resize(k_tasks);
    std::vector<double> rewards(k_tasks, 0.0);
    for (std::size_t k = 0; k < k_tasks; ++k) {
        const OffspringBatch& batch = batches[k];
        TaskState& task = tasks_[k];
        const std::size_t n = batch.positions.rows();
        std::vector<double> fit(n);
        std::vector<double> base_fit;
        std::vector<double> kt_fit;
        for (std::size_t i = 0; i < n; ++i) {
            fit[i] = evaluate(k, batch.positions.row(i));
            (batch.from_kt[i] ? kt_fit : base_fit).push_back(fit[i]);
        }
        TaskStepInfo& info = result.tasks[k];
        info.kt_count = kt_fit.size();
        info.q_kt = transfer_quality(task.fitness, kt_fit);
        if (learning) info.r_kt = kt_gain(base_fit, kt_fit, task.fitness);

        truncation_selection(task, batch.positions, fit);
        task.last_action = actions[k];
        task.last_q_kt = info.q_kt;
        info.best_f = task.best_f;

        if (learning) {
            const double f_star = instance_.tasks[k].f_star;
            info.r_conv = conv_gain(task.best_f, task.best_f_initial, f_star);
            info.reward =
                task_reward(learning->reward, info.r_conv, info.r_kt, task.best_f, f_star, bonus_[k]);
            rewards[k] = info.reward;
        }
    }
    ++generation_;
    result.reward = learning ? total_reward(rewards) : 0.0;
    result.state = state();
    return result;
}

double Episode::total_return() const {
    double r = 0.0;
    for (const auto& s : steps) r += s.reward;
    return r;
}

Episode run_learning_episode(const MtopInstance& instance, const AgentParams& agent,
                             const EpisodeConfig& cfg, Rng& rng) {
    if (!cfg.learning()) throw ConfigError("run_learning_episode needs a learning-mode config");
    if (agent.state_dim() != state_dim(instance.num_tasks()) ||
        agent.action_dim() != 3 * instance.num_tasks())
        throw ConfigError("agent dimensions do not match the instance's task count");
    EmtEnvironment env(instance, cfg);
    StateVector s = env.reset(rng);
    Episode ep;
    ep.steps.reserve(cfg.horizon);
    for (std::size_t g = 0; g < cfg.horizon; ++g) {
        ActionSample a = sample_action(agent, s, rng);
        Transition t;
        t.value = critic_forward(agent, s);
        t.log_prob = a.log_prob;
        StepResult r = env.step(a.clipped);
        t.state = std::move(s);
        t.raw_action = std::move(a.raw);
        t.reward = r.reward;
        ep.steps.push_back(std::move(t));
        s = std::move(r.state);
    }
    ep.bootstrap_value = critic_forward(agent, s);
    return ep;
}

UtilizationResult run_utilization_episode(const MtopInstance& instance, const Policy& policy,
                                          const EpisodeConfig& cfg, Rng& rng) {
    if (cfg.learning()) throw ConfigError("run_utilization_episode needs a utilization config");
    const std::size_t k_tasks = instance.num_tasks();
    if (const auto* p = std::get_if<LearnedPolicy>(&policy))
        if (p->agent->state_dim() != state_dim(k_tasks))
            throw ConfigError("agent input size does not match 4 + 7K for this instance");
    EmtEnvironment env(instance, cfg);
    StateVector s = env.reset(rng);
    UtilizationResult out;
    out.curves.assign(k_tasks, {});
    for (std::size_t k = 0; k < k_tasks; ++k) out.curves[k].push_back(env.tasks()[k].best_f);
    for (std::size_t g = 0; g < cfg.horizon; ++g) {
        const auto action = policy_action(policy, s, k_tasks, rng);
        StepResult r = env.step(action);
        for (std::size_t k = 0; k < k_tasks; ++k) out.curves[k].push_back(env.tasks()[k].best_f);
        s = std::move(r.state);
    }
    for (const auto& t : env.tasks()) {
        out.best_x.push_back(t.best_x);
        out.best_f.push_back(t.best_f);
    }
    out.evaluations = env.evaluations();
    return out;
}

}  // namespace l2t
