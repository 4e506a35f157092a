#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

#include "../test_util.hpp"
#include "l2t/errors.hpp"
#include "l2t/kt_engine.hpp"
#include "l2t/reward.hpp"
#include "l2t/rollout_env.hpp"

using namespace l2t;
using l2t::testing::two_task_instance;

namespace {

EpisodeConfig learning_cfg(std::size_t horizon, std::shared_ptr<const InitPool> pool) {
    EpisodeConfig cfg;
    cfg.horizon = horizon;
    cfg.mode = LearningMode{RewardConfig{}, std::move(pool)};
    return cfg;
}

std::shared_ptr<const InitPool> make_pool(std::size_t count, std::size_t n, std::size_t d, Rng& rng) {
    auto pool = std::make_shared<InitPool>();
    for (std::size_t i = 0; i < count; ++i) pool->push_back(latin_hypercube(n, d, rng));
    return pool;
}

AgentParams agent_for(std::size_t k, Rng& rng) {
    const std::vector<std::size_t> hidden{16};
    return make_agent(k, hidden, 0.3, rng);
}

}  // namespace

TEST_CASE("reset in learning mode") {
    Rng rng(1);
    const auto inst = two_task_instance(FunctionId::Sphere, FunctionId::Rastrigin, 5, 0.4, 0.6);
    EpisodeConfig bad = learning_cfg(10, std::make_shared<InitPool>());
    EmtEnvironment env_bad(inst, bad);
    CHECK_THROWS_AS(env_bad.reset(rng), InvalidState);

    EmtEnvironment env(inst, learning_cfg(10, make_pool(1, 20, 5, rng)));
    const auto s = env.reset(rng);
    CHECK(s.size() == 18);
    CHECK(env.tasks()[0].positions == env.tasks()[1].positions);
    CHECK(env.tasks()[0].fitness != env.tasks()[1].fitness);
    for (const auto& t : env.tasks()) {
        CHECK(t.stagnation_count == 0);
        CHECK_FALSE(t.improved);
    }
    CHECK(env.evaluations() == 40);
}

TEST_CASE("utilization reset is reproducible") {
    const auto inst = two_task_instance(FunctionId::Ackley, FunctionId::Griewank, 4);
    EpisodeConfig cfg;
    cfg.horizon = 5;
    EmtEnvironment a(inst, cfg), b(inst, cfg);
    Rng r1(7), r2(7);
    a.reset(r1);
    b.reset(r2);
    CHECK(a.tasks()[0].positions == b.tasks()[0].positions);
    CHECK(a.tasks()[1].positions == b.tasks()[1].positions);
    CHECK(a.tasks()[0].positions != a.tasks()[1].positions);
}

TEST_CASE("no-transfer step equals independent DE generations") {
    const auto inst = two_task_instance(FunctionId::Sphere, FunctionId::Rosenbrock, 6, 0.3, 0.7);
    EpisodeConfig cfg;
    cfg.horizon = 3;
    EmtEnvironment env(inst, cfg);
    const std::uint64_t seeds[2] = {101, 202};
    Rng pool_rng(0);
    env.reset_with_task_seeds(seeds, pool_rng);

    std::vector<TaskState> manual;
    std::vector<Rng> streams{Rng(101), Rng(202)};
    for (std::size_t k = 0; k < 2; ++k) {
        Matrix pop = latin_hypercube(20, 6, streams[k]);
        std::vector<double> fit(20);
        for (std::size_t i = 0; i < 20; ++i) fit[i] = evaluate_task(inst.tasks[k], pop.row(i));
        manual.push_back(make_task_state(std::move(pop), std::move(fit)));
    }
    for (int g = 0; g < 3; ++g) {
        const auto r = env.step(std::vector<double>{0, 0.4, 0.9, 0, 1, 1});
        for (std::size_t k = 0; k < 2; ++k) {
            CHECK(r.tasks[k].r_kt == 0.0);
            CHECK(r.tasks[k].kt_count == 0);
            Matrix off(20, 6);
            std::vector<double> of(20);
            for (std::size_t i = 0; i < 20; ++i) {
                const auto v = de_mutation(manual[k].positions, i, 0.5, streams[k]);
                const auto u = binomial_crossover(v, manual[k].positions.row(i), 0.9, streams[k]);
                std::copy(u.begin(), u.end(), off.row(i).begin());
                of[i] = evaluate_task(inst.tasks[k], u);
            }
            truncation_selection(manual[k], off, of);
            CHECK(env.tasks()[k].positions == manual[k].positions);
            CHECK(env.tasks()[k].fitness == manual[k].fitness);
        }
    }
}

TEST_CASE("mirrored tasks receive equal rewards") {
    Rng rng(2);
    const auto inst = two_task_instance(FunctionId::Rastrigin, FunctionId::Rastrigin, 5, 0.45, 0.45);
    EmtEnvironment env(inst, learning_cfg(20, make_pool(1, 20, 5, rng)));
    const std::uint64_t seeds[2] = {9, 9};
    env.reset_with_task_seeds(seeds, rng);
    for (int g = 0; g < 20; ++g) {
        const double a1 = rng.uniform(), a2 = rng.uniform(), a3 = rng.uniform();
        const auto r = env.step(std::vector<double>{a1, a2, a3, a1, a2, a3});
        CHECK(r.tasks[0].reward == r.tasks[1].reward);
        CHECK(r.reward == 2.0 * r.tasks[0].reward);
        CHECK(env.tasks()[0].positions == env.tasks()[1].positions);
    }
}

TEST_CASE("steps are elitist, bounded and count evaluations") {
    Rng rng(3);
    const auto inst = two_task_instance(FunctionId::Weierstrass, FunctionId::Schwefel, 8, 0.5, 0.52);
    EmtEnvironment env(inst, learning_cfg(15, make_pool(4, 20, 8, rng)));
    auto s = env.reset(rng);
    for (int g = 0; g < 15; ++g) {
        const double before0 = env.tasks()[0].best_f;
        const double before1 = env.tasks()[1].best_f;
        std::vector<double> a(6);
        for (double& v : a) v = rng.uniform();
        const auto r = env.step(a);
        CHECK(r.state.size() == 18);
        CHECK(env.tasks()[0].best_f <= before0);
        CHECK(env.tasks()[1].best_f <= before1);
        for (const auto& t : r.tasks) {
            CHECK(t.r_conv >= -1.0);
            CHECK(t.r_conv <= 0.0);
            CHECK(t.q_kt >= 0.0);
            CHECK(t.q_kt <= 1.0);
        }
        for (double v : r.state) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    CHECK(env.evaluations() == 2 * 20 * 16);
}

TEST_CASE("learning episodes") {
    Rng rng(4);
    const auto inst = two_task_instance(FunctionId::Sphere, FunctionId::Rastrigin, 5, 0.5, 0.55);
    const AgentParams agent = agent_for(2, rng);
    const auto one = run_learning_episode(inst, agent, learning_cfg(1, make_pool(3, 20, 5, rng)), rng);
    CHECK(one.steps.size() == 1);
    const auto ep = run_learning_episode(inst, agent, learning_cfg(12, make_pool(3, 20, 5, rng)), rng);
    REQUIRE(ep.steps.size() == 12);
    for (const auto& t : ep.steps) {
        CHECK(t.state.size() == 18);
        CHECK(t.raw_action.size() == 6);
    }
    CHECK_FALSE(ep.terminal);
    CHECK(std::isfinite(ep.bootstrap_value));
    const AgentParams wrong = agent_for(3, rng);
    CHECK_THROWS_AS(run_learning_episode(inst, wrong, learning_cfg(2, make_pool(1, 20, 5, rng)), rng),
                    ConfigError);
}

TEST_CASE("utilization curves") {
    const auto inst = two_task_instance(FunctionId::Sphere, FunctionId::Sphere, 6);
    EpisodeConfig cfg;
    cfg.horizon = 30;
    Rng rng(5);
    const auto res = run_utilization_episode(inst, Policy{FixedPolicy{{1, 1, 1}}}, cfg, rng);
    CHECK(res.evaluations == 2 * 20 * 31);
    for (const auto& c : res.curves) {
        REQUIRE(c.size() == 31);
        for (std::size_t g = 1; g < c.size(); ++g) CHECK(c[g] <= c[g - 1]);
    }
    CHECK(res.best_f[0] == res.curves[0].back());
    CHECK(evaluate_task(inst.tasks[1], res.best_x[1]) == res.best_f[1]);

    Rng a(6), b(6);
    const Policy stde = SingleTaskPolicy{};
    const Policy zero = FixedPolicy{{0, 0.3, 0.8}};
    CHECK(run_utilization_episode(inst, stde, cfg, a).curves ==
          run_utilization_episode(inst, zero, cfg, b).curves);

    EpisodeConfig learn = learning_cfg(3, nullptr);
    CHECK_THROWS_AS(run_utilization_episode(inst, stde, learn, rng), ConfigError);
}

TEST_CASE("per-generation transfer overhead scales at most quadratically in N") {
    auto overhead = [](std::size_t n) {
        Rng rng(7);
        auto tasks = l2t::testing::random_tasks(2, n, 10, rng);
        const AgentParams agent = agent_for(2, rng);
        double best = 1e30;
        for (int trial = 0; trial < 5; ++trial) {
            const auto t0 = std::chrono::steady_clock::now();
            double sink = 0.0;
            for (int it = 0; it < 40; ++it) {
                const auto s = assemble_state(3, 100, tasks);
                const auto a = sample_action(agent, s, rng);
                for (std::size_t k = 0; k < 2; ++k) {
                    const auto batch = generate_offspring(tasks, k, {1.0, 0.5, 0.5}, DeConfig{n, 0.5, 0.9}, rng);
                    std::vector<double> base, kt;
                    for (std::size_t i = 0; i < n; ++i)
                        (batch.from_kt[i] ? kt : base).push_back(rng.uniform(0, 100));
                    sink += transfer_quality(tasks[k].fitness, kt) + kt_gain(base, kt, tasks[k].fitness);
                }
                sink += a.log_prob;
            }
            const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            best = std::min(best, dt + sink * 0.0);
        }
        return best;
    };
    const double t1 = overhead(100);
    const double t2 = overhead(200);
    MESSAGE("overhead ratio N=200 vs N=100: ", t2 / t1);
    CHECK(t2 / t1 <= 4.5);
}
