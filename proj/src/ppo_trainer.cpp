#include "l2t/ppo_trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numeric>
#include <ostream>
#include <thread>

#include "l2t/errors.hpp"

namespace l2t {

void PpoConfig::validate() const {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must be in [0,1]");
    if (!(lam >= 0.0 && lam <= 1.0)) throw ConfigError("lam must be in [0,1]");
    if (!(clip_eps > 0.0)) throw ConfigError("clip_eps must be positive");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
    if (epochs_per_update == 0) throw ConfigError("epochs_per_update must be >= 1");
    if (minibatch_size == 0) throw ConfigError("minibatch_size must be >= 1");
    if (buffer_size < minibatch_size) throw ConfigError("buffer_size must be >= minibatch_size");
    if (num_envs == 0) throw ConfigError("num_envs must be >= 1");
    if (rollout_generations == 0) throw ConfigError("rollout_generations must be >= 1");
    if (entropy_coef < 0.0) throw ConfigError("entropy_coef must be >= 0");
    if (!(init_std > 0.0)) throw ConfigError("init_std must be positive");
    if (init_pool_size == 0) throw ConfigError("init_pool_size must be >= 1");
    if (best_window == 0) throw ConfigError("best_window must be >= 1");
}

GaeResult gae(std::span<const double> rewards, std::span<const double> values, double gamma,
              double lam) {
    if (values.size() != rewards.size() + 1)
        throw std::invalid_argument("gae: values must have one more entry than rewards");
    const std::size_t n = rewards.size();
    GaeResult out{std::vector<double>(n), std::vector<double>(n)};
    double running = 0.0;
    for (std::size_t t = n; t-- > 0;) {
        const double delta = rewards[t] + gamma * values[t + 1] - values[t];
        running = delta + gamma * lam * running;
        out.advantages[t] = running;
        out.returns[t] = running + values[t];
    }
    return out;
}

SurrogateTerm actor_objective(double log_prob_new, double log_prob_old, double advantage,
                              double eps) {
    const double rho = std::exp(log_prob_new - log_prob_old);
    const double unclipped = rho * advantage;
    const double clipped = std::clamp(rho, 1.0 - eps, 1.0 + eps) * advantage;
    SurrogateTerm t;
    t.clipped = std::abs(rho - 1.0) > eps;
    if (unclipped <= clipped) {
        t.value = unclipped;
        t.d_log_prob = unclipped;  // d(rho A)/d log_prob = rho A
    } else {
        t.value = clipped;
    }
    return t;
}

double critic_objective(double value_new, double value_old, double advantage) {
    const double residual = advantage + value_old - value_new;
    return -residual * residual;
}

void TrajectoryBuffer::add_episode(const Episode& ep, double gamma, double lam) {
    std::vector<double> rewards;
    std::vector<double> values;
    rewards.reserve(ep.steps.size());
    values.reserve(ep.steps.size() + 1);
    for (const auto& s : ep.steps) {
        rewards.push_back(s.reward);
        values.push_back(s.value);
    }
    values.push_back(ep.terminal ? 0.0 : ep.bootstrap_value);
    const GaeResult g = gae(rewards, values, gamma, lam);
    for (std::size_t t = 0; t < ep.steps.size(); ++t) {
        const Transition& tr = ep.steps[t];
        samples_.push_back(
            {tr.state, tr.raw_action, tr.log_prob, tr.value, tr.reward, g.advantages[t], g.returns[t]});
    }
    episode_returns_.push_back(ep.total_return());
}

double TrajectoryBuffer::mean_episode_return() const {
    if (episode_returns_.empty()) return 0.0;
    return std::accumulate(episode_returns_.begin(), episode_returns_.end(), 0.0) /
           static_cast<double>(episode_returns_.size());
}

void TrajectoryBuffer::clear() {
    samples_.clear();
    episode_returns_.clear();
}

double PpoGradients::actor_squared_norm() const {
    double s = actor.squared_norm();
    for (double v : log_std) s += v * v;
    return s;
}

PpoGradients compute_ppo_gradients(const AgentParams& agent, std::span<const Sample> samples,
                                   std::span<const std::size_t> batch, const PpoConfig& cfg) {
    PpoGradients g;
    g.actor = MlpGrad::zeros_like(agent.actor);
    g.critic = MlpGrad::zeros_like(agent.critic);
    g.log_std.assign(agent.log_std.size(), 0.0);
    if (batch.empty()) return g;

    const double inv_b = 1.0 / static_cast<double>(batch.size());
    const std::size_t adim = agent.action_dim();
    std::vector<double> inv_var(adim);
    for (std::size_t j = 0; j < adim; ++j) inv_var[j] = std::exp(-2.0 * agent.log_std[j]);

    MlpTape tape;
    std::vector<double> grad_mu(adim);
    std::size_t clipped = 0;
    for (std::size_t idx : batch) {
        const Sample& s = samples[idx];
        const auto mu = forward(agent.actor, s.state, &tape);
        const double lp = gaussian_log_prob(s.raw_action, mu, agent.log_std);
        const SurrogateTerm term = actor_objective(lp, s.log_prob_old, s.advantage, cfg.clip_eps);
        g.surrogate += term.value * inv_b;
        g.mean_ratio += std::exp(lp - s.log_prob_old) * inv_b;
        clipped += term.clipped ? 1 : 0;

        const double w = term.d_log_prob * inv_b;
        if (w != 0.0) {
            for (std::size_t j = 0; j < adim; ++j) {
                const double diff = s.raw_action[j] - mu[j];
                grad_mu[j] = w * diff * inv_var[j];
                g.log_std[j] += w * (diff * diff * inv_var[j] - 1.0);
            }
            backward(agent.actor, tape, grad_mu, g.actor);
        }

        const double v = forward(agent.critic, s.state, &tape).front();
        g.critic_obj += critic_objective(v, s.value_old, s.advantage) * inv_b;
        const double dv = 2.0 * (s.advantage + s.value_old - v) * inv_b;
        backward(agent.critic, tape, std::span<const double>(&dv, 1), g.critic);
    }
    if (cfg.entropy_coef > 0.0)
        for (double& v : g.log_std) v += cfg.entropy_coef;  // dH/dlog_std = 1
    if (!cfg.learn_std) std::fill(g.log_std.begin(), g.log_std.end(), 0.0);
    g.clip_frac = static_cast<double>(clipped) * inv_b;
    return g;
}

void Adam::ascend(std::span<const std::span<double>> params,
                  std::span<const std::span<const double>> grads) {
    if (m_.empty()) {
        for (const auto& p : params) {
            m_.emplace_back(p.size(), 0.0);
            v_.emplace_back(p.size(), 0.0);
        }
    }
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto p = params[i];
        auto g = grads[i];
        auto& m = m_[i];
        auto& v = v_[i];
        for (std::size_t j = 0; j < p.size(); ++j) {
            m[j] = beta1_ * m[j] + (1.0 - beta1_) * g[j];
            v[j] = beta2_ * v[j] + (1.0 - beta2_) * g[j] * g[j];
            p[j] += lr_ * (m[j] / c1) / (std::sqrt(v[j] / c2) + eps_);
        }
    }
}

namespace {

void collect_spans(Mlp& net, std::vector<std::span<double>>& out) {
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        out.push_back(net.weights[l].flat());
        out.push_back(net.biases[l]);
    }
}

void collect_spans(const MlpGrad& g, std::vector<std::span<const double>>& out) {
    for (std::size_t l = 0; l < g.weights.size(); ++l) {
        out.push_back(g.weights[l].flat());
        out.push_back(g.biases[l]);
    }
}

}  // namespace

PpoUpdater::PpoUpdater(PpoConfig cfg)
    : cfg_(std::move(cfg)), actor_opt_(cfg_.learning_rate), critic_opt_(cfg_.learning_rate) {}

UpdateStats PpoUpdater::update(AgentParams& agent, TrajectoryBuffer& buffer, Rng& rng) {
    if (buffer.empty()) throw InvalidState("ppo update on an empty trajectory buffer");
    auto samples = buffer.samples();
    if (cfg_.normalize_advantages && samples.size() > 1) {
        double mean = 0.0;
        for (const auto& s : samples) mean += s.advantage;
        mean /= static_cast<double>(samples.size());
        double var = 0.0;
        for (const auto& s : samples) var += (s.advantage - mean) * (s.advantage - mean);
        const double sd = std::sqrt(var / static_cast<double>(samples.size()));
        for (auto& s : samples) s.advantage = (s.advantage - mean) / (sd + 1e-8);
    }

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    UpdateStats stats;
    std::size_t batches = 0;
    for (std::size_t epoch = 0; epoch < cfg_.epochs_per_update; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng.engine());
        for (std::size_t start = 0; start < order.size(); start += cfg_.minibatch_size) {
            const std::size_t end = std::min(order.size(), start + cfg_.minibatch_size);
            const std::span<const std::size_t> batch(order.data() + start, end - start);
            const PpoGradients g = compute_ppo_gradients(agent, samples, batch, cfg_);

            std::vector<std::span<double>> ap;
            std::vector<std::span<const double>> ag;
            collect_spans(agent.actor, ap);
            collect_spans(g.actor, ag);
            ap.push_back(agent.log_std);
            ag.push_back(g.log_std);
            actor_opt_.ascend(ap, ag);
            for (double& ls : agent.log_std) ls = std::clamp(ls, kLogStdMin, kLogStdMax);

            std::vector<std::span<double>> cp;
            std::vector<std::span<const double>> cg;
            collect_spans(agent.critic, cp);
            collect_spans(g.critic, cg);
            critic_opt_.ascend(cp, cg);

            stats.actor_loss -= g.surrogate;
            stats.critic_loss -= g.critic_obj;
            stats.clip_frac += g.clip_frac;
            stats.mean_ratio += g.mean_ratio;
            ++batches;
        }
    }
    const double inv = 1.0 / static_cast<double>(batches);
    stats.actor_loss *= inv;
    stats.critic_loss *= inv;
    stats.clip_frac *= inv;
    stats.mean_ratio *= inv;
    return stats;
}

UpdateStats ppo_update(AgentParams& agent, TrajectoryBuffer& buffer, const PpoConfig& cfg, Rng& rng) {
    PpoUpdater updater(cfg);
    return updater.update(agent, buffer, rng);
}

void write_train_log_csv(std::ostream& out, std::span<const TrainLogRecord> log) {
    out << "update,timesteps,mean_return,actor_loss,critic_loss,clip_frac,mean_ratio\n";
    char buf[256];
    for (const auto& r : log) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.update,
                      r.timesteps, r.mean_return, r.actor_loss, r.critic_loss, r.clip_frac,
                      r.mean_ratio);
        out << buf;
    }
}

TrainResult train_with_source(AgentParams agent, const PpoConfig& cfg, const EpisodeSource& source,
                              std::uint64_t seed, const TrainProgress& progress) {
    cfg.validate();
    Rng update_rng(mix_seed(seed, 0x5eed));
    std::vector<Rng> env_rngs;
    for (std::size_t e = 0; e < cfg.num_envs; ++e) env_rngs.emplace_back(seed + e);

    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, cfg.num_envs);

    PpoUpdater updater(cfg);
    TrainResult result{agent, agent, {}};
    std::deque<double> window;
    double best_window_mean = -std::numeric_limits<double>::infinity();
    std::size_t timesteps = 0;
    std::size_t update_index = 0;
    TrajectoryBuffer buffer;
    std::vector<Episode> episodes(cfg.num_envs);

    while (timesteps < cfg.total_timesteps) {
        buffer.clear();
        while (buffer.size() < cfg.buffer_size) {
            // Environments read the same frozen snapshot; results are merged
            // in env-index order so scheduling does not matter.
            auto run_env = [&](std::size_t e) { episodes[e] = source(agent, e, env_rngs[e]); };
            if (workers == 1) {
                for (std::size_t e = 0; e < cfg.num_envs; ++e) run_env(e);
            } else {
                std::vector<std::jthread> pool;
                for (std::size_t w = 0; w < workers; ++w)
                    pool.emplace_back([&, w] {
                        for (std::size_t e = w; e < cfg.num_envs; e += workers) run_env(e);
                    });
            }
            for (const auto& ep : episodes) {
                buffer.add_episode(ep, cfg.gamma, cfg.lam);
                timesteps += ep.steps.size();
            }
        }

        const AgentParams snapshot = agent;
        const UpdateStats st = updater.update(agent, buffer, update_rng);
        TrainLogRecord rec{++update_index,  timesteps,      buffer.mean_episode_return(),
                           st.actor_loss,   st.critic_loss, st.clip_frac,
                           st.mean_ratio};
        result.log.push_back(rec);

        window.push_back(rec.mean_return);
        if (window.size() > cfg.best_window) window.pop_front();
        const double wmean =
            std::accumulate(window.begin(), window.end(), 0.0) / static_cast<double>(window.size());
        if (wmean > best_window_mean) {
            best_window_mean = wmean;
            result.best = snapshot;
        }
        if (progress && !progress(rec, agent)) break;
    }
    result.last = agent;
    return result;
}

TrainResult train(const std::vector<MtopInstance>& problem_set, const PpoConfig& cfg,
                  const RewardConfig& reward_cfg, const DeConfig& de_cfg, std::uint64_t seed,
                  const TrainProgress& progress) {
    if (problem_set.empty()) throw ConfigError("train: problem set is empty");
    cfg.validate();
    reward_cfg.validate();
    de_cfg.validate();
    const std::size_t k = problem_set.front().num_tasks();
    const std::size_t dim = problem_set.front().dim();
    for (const auto& inst : problem_set)
        if (inst.num_tasks() != k || inst.dim() != dim)
            throw ConfigError("train: all instances must share task count and dimension");
    if (k != 2) throw ConfigError("train: the state features are defined for two-task instances");

    Rng master(seed);
    auto pool = std::make_shared<InitPool>();
    for (std::size_t p = 0; p < cfg.init_pool_size; ++p)
        pool->push_back(latin_hypercube(de_cfg.pop_size, dim, master));
    AgentParams agent = make_agent(k, cfg.hidden_sizes, cfg.init_std, master);

    EpisodeConfig ep_cfg;
    ep_cfg.horizon = cfg.rollout_generations;
    ep_cfg.feature_horizon = cfg.feature_horizon;
    ep_cfg.de = de_cfg;
    ep_cfg.mode = LearningMode{reward_cfg, pool};

    const EpisodeSource source = [&](const AgentParams& a, std::size_t, Rng& rng) {
        const MtopInstance& inst = problem_set[rng.below(problem_set.size())];
        return run_learning_episode(inst, a, ep_cfg, rng);
    };
    return train_with_source(std::move(agent), cfg, source, mix_seed(seed, 1), progress);
}

}  // namespace l2t
