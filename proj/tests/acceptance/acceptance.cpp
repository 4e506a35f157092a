// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Pass criterion numbers as arguments to run a
// subset.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../gradcheck.hpp"
#include "../stateless_env.hpp"
#include "../test_util.hpp"
#include "l2t/baseline_agents.hpp"
#include "l2t/cli.hpp"
#include "l2t/eval_harness.hpp"
#include "l2t/kt_engine.hpp"
#include "l2t/ppo_trainer.hpp"
#include "l2t/problem_suite.hpp"
#include "l2t/state_features.hpp"
#include "l2t/statistics.hpp"

using namespace l2t;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

// Corner operators written out from the action-space table.
std::vector<double> corner_trial(const KtAction& a, const Matrix& xk, const Matrix& xj,
                                 const KtIndices& idx, double f, std::size_t d) {
    std::vector<double> v(d);
    for (std::size_t c = 0; c < d; ++c) {
        if (a == kDifferentialTransferCorner)
            v[c] = xk(idx.target_base, c) + f * (xj(idx.source_plus, c) - xj(idx.source_minus, c));
        else if (a == kBaseVectorCorner)
            v[c] = xj(idx.source_base, c) + f * (xk(idx.target_plus, c) - xk(idx.target_minus, c));
        else
            v[c] = xj(idx.source_base, c) + f * (xj(idx.source_plus, c) - xj(idx.source_minus, c));
    }
    return v;
}

Outcome operator_recovery() {
    Rng rng(101);
    const DeConfig de{20, 0.5, 0.9};
    std::size_t mismatches = 0, rows = 0;
    for (const KtAction& a : {kDifferentialTransferCorner, kBaseVectorCorner, kDirectTransferCorner}) {
        for (int p = 0; p < 1000; ++p) {
            auto tasks = l2t::testing::random_tasks(2, 20, 10, rng);
            const std::size_t k = p % 2, j = 1 - k;
            const auto batch = generate_offspring(tasks, k, a, de, rng);
            if (batch.kt_count() != 10) ++mismatches;
            const Matrix& xk = tasks[k].positions;
            const Matrix& xj = tasks[j].positions;
            for (const KtDraw& draw : batch.kt_draws) {
                ++rows;
                if (draw.source != j || !batch.from_kt[draw.row]) ++mismatches;
                const auto v = corner_trial(a, xk, xj, draw.indices, de.scale_factor, 10);
                for (std::size_t c = 0; c < 10; ++c) {
                    const double mixed = draw.mask.from_trial[c] ? v[c] : xk(draw.row, c);
                    const double expect = std::clamp(mixed, 0.0, 1.0);
                    if (std::bit_cast<std::uint64_t>(expect) != std::bit_cast<std::uint64_t>(batch.positions(draw.row, c))) {
                        ++mismatches;
                        break;
                    }
                }
            }
        }
    }
    return {mismatches == 0, fmt("%.0f transfer rows, %.0f mismatches", double(rows), double(mismatches))};
}

Outcome gradient_correctness() {
    Rng rng(202);
    double worst = 0.0;
    for (int config = 0; config < 20; ++config) {
        std::vector<std::size_t> hidden(1 + rng.below(2));
        for (auto& h : hidden) h = 3 + rng.below(10);
        AgentParams agent = make_agent(2, hidden, rng.uniform(0.1, 0.6), rng);
        StateVector s(18);
        for (double& v : s) v = rng.uniform();
        std::vector<double> g6(6), g1{rng.uniform(-1, 1)};
        for (double& v : g6) v = rng.uniform(-1, 1);
        worst = std::max(worst, l2t::testing::mlp_gradient_error(agent.actor, s, g6));
        worst = std::max(worst, l2t::testing::mlp_gradient_error(agent.critic, s, g1));
        const auto a = sample_action(agent, s, rng);
        worst = std::max(worst, l2t::testing::log_prob_gradient_error(agent, s, a.raw));

        std::vector<Sample> samples;
        for (int i = 0; i < 8; ++i) {
            Sample smp;
            smp.state.resize(18);
            for (double& v : smp.state) v = rng.uniform();
            const auto act = sample_action(agent, smp.state, rng);
            smp.raw_action = act.raw;
            smp.log_prob_old = act.log_prob + rng.uniform(-0.05, 0.05);
            smp.value_old = rng.uniform(-1, 1);
            smp.advantage = rng.uniform(-2, 2);
            samples.push_back(smp);
        }
        std::vector<std::size_t> batch(samples.size());
        std::iota(batch.begin(), batch.end(), std::size_t{0});
        PpoConfig cfg;
        cfg.clip_eps = 0.5;
        const auto g = compute_ppo_gradients(agent, samples, batch, cfg);
        auto surrogate = [&] { return compute_ppo_gradients(agent, samples, batch, cfg).surrogate; };
        auto critic = [&] { return compute_ppo_gradients(agent, samples, batch, cfg).critic_obj; };
        using l2t::testing::fd_check;
        worst = std::max(worst, fd_check(agent.log_std, g.log_std, surrogate));
        for (std::size_t l = 0; l < agent.actor.num_layers(); ++l) {
            worst = std::max(worst, fd_check(agent.actor.weights[l].flat(), g.actor.weights[l].flat(), surrogate));
            worst = std::max(worst, fd_check(agent.actor.biases[l], g.actor.biases[l], surrogate));
            worst = std::max(worst, fd_check(agent.critic.weights[l].flat(), g.critic.weights[l].flat(), critic));
            worst = std::max(worst, fd_check(agent.critic.biases[l], g.critic.biases[l], critic));
        }
    }
    return {worst < 1e-4, fmt("max relative error %.3g over 20 configurations", worst)};
}

Outcome gae_oracle() {
    Rng rng(303);
    double worst = 0.0;
    for (int ep = 0; ep < 100; ++ep) {
        const std::size_t n = 1 + rng.below(100);
        std::vector<double> r(n), v(n + 1);
        for (double& x : r) x = rng.uniform(-10, 10);
        for (double& x : v) x = rng.uniform(-10, 10);
        const double gamma = rng.uniform(), lam = rng.uniform();
        const auto res = gae(r, v, gamma, lam);
        for (std::size_t t = 0; t < n; ++t) {
            double ref = 0.0;
            for (std::size_t l = 0; t + l < n; ++l)
                ref += std::pow(gamma * lam, double(l)) * (r[t + l] + gamma * v[t + l + 1] - v[t + l]);
            worst = std::max(worst, std::abs(res.advantages[t] - ref));
        }
    }
    return {worst <= 1e-10, fmt("max abs difference %.3g over 100 episodes", worst)};
}

Outcome ppo_sanity() {
    const std::vector<double> target{0.7, 0.2, 0.9, 0.1, 0.5, 0.3};
    const PpoConfig cfg;
    PpoConfig run = cfg;
    run.total_timesteps = 200 * cfg.buffer_size;
    Rng init(0);
    AgentParams agent = make_agent(2, cfg.hidden_sizes, cfg.init_std, init);
    const StateVector obs(18, 0.5);
    std::size_t reached = 0;
    double err = 0.0;
    auto progress = [&](const TrainLogRecord& rec, const AgentParams& a) {
        const auto mu = actor_forward(a, obs);
        err = 0.0;
        for (std::size_t j = 0; j < 6; ++j) err = std::max(err, std::abs(mu[j] - target[j]));
        if (err <= 0.05) reached = rec.update;
        return reached == 0;
    };
    train_with_source(agent, run, l2t::testing::quadratic_source(target, 18), 0, progress);
    if (reached == 0) return {false, fmt("mean still %.3g away after 200 updates", err)};
    return {true, fmt("within %.3g of the target after %.0f updates", err, double(reached))};
}

Outcome l2t_effectiveness() {
    ProblemSetSpec spec;
    spec.name = "sphere-rastrigin";
    spec.functions = {FunctionId::Sphere, FunctionId::Rastrigin};
    spec.dim = 10;
    spec.distribution = RangeDistribution{0.05};
    spec.instance_count = 50;
    spec.seed = 1;
    const auto train_set = make_problem_set(spec);
    spec.instance_count = 20;
    spec.seed = 2;
    const auto test_set = make_problem_set(spec);

    PpoConfig cfg;
    cfg.total_timesteps = 100000;
    cfg.rollout_generations = 50;
    DeConfig de;
    de.pop_size = 20;
    const TrainResult trained = train(train_set, cfg, RewardConfig{}, de, 0);

    SolveConfig solve;
    solve.runs = 10;
    solve.gmax = 50;
    solve.seed = 7;
    solve.de = de;
    auto matrix = [&](const Policy& p) { return result_matrix_at(solve_batch(test_set, p, solve), 50, "run"); };
    const auto learned = matrix(LearnedPolicy{std::make_shared<const AgentParams>(trained.best)});
    const auto random = matrix(RandomPolicy{});
    const auto stde = matrix(SingleTaskPolicy{});
    const double ptr_learned = positive_transfer_rate(learned, stde);
    const double ptr_random = positive_transfer_rate(random, stde);
    const auto w = wtl_count(learned, stde);
    return {ptr_learned > ptr_random && w.wins > w.losses,
            fmt("PTR learned %.2f vs random %.2f; learned vs STDE W/T/L %.0f/", ptr_learned, ptr_random,
                double(w.wins)) +
                fmt("%.0f/%.0f", double(w.ties), double(w.losses))};
}

Outcome feature_contract() {
    Rng rng(606);
    std::size_t bad = 0;
    for (int s = 0; s < 10000; ++s) {
        const std::size_t n = 5 + rng.below(40), d = 1 + rng.below(30);
        std::vector<TaskState> tasks;
        for (int k = 0; k < 2; ++k) {
            Matrix pos(n, d);
            const int style = static_cast<int>(rng.below(3));
            for (double& v : pos.flat()) v = style == 0 ? rng.uniform() : style == 1 ? 0.5 : std::floor(rng.uniform() * 2);
            std::vector<double> fit(n);
            const double scale = std::pow(10.0, rng.uniform(-300, 300));
            for (double& f : fit) f = rng.below(4) == 0 ? 0.0 : scale * rng.uniform(-1, 1);
            TaskState t = make_task_state(std::move(pos), std::move(fit));
            t.best_f_initial = rng.below(5) == 0 ? t.best_f : scale * rng.uniform(-1, 1);
            t.stagnation_count = rng.below(500);
            t.improved = rng.below(2) == 1;
            t.last_action = {rng.uniform(), rng.uniform(), rng.uniform()};
            t.last_q_kt = rng.uniform();
            tasks.push_back(std::move(t));
        }
        const std::size_t g_max = 1 + rng.below(200);
        const auto state = assemble_state(rng.below(g_max + 50), g_max, tasks);
        if (state.size() != state_dim(2) || state.size() != 18) ++bad;
        for (double v : state)
            if (!(v >= 0.0 && v <= 1.0)) ++bad;
    }
    std::size_t q_bad = 0;
    for (int s = 0; s < 1000; ++s) {
        std::vector<double> parents(1 + rng.below(40)), kt(rng.below(25));
        const bool coarse = s % 2 == 0;
        for (double& v : parents) v = coarse ? double(rng.below(6)) : rng.normal();
        for (double& v : kt) v = coarse ? double(rng.below(6)) : rng.normal();
        std::size_t better = 0;
        for (double o : kt)
            for (double p : parents) better += o < p;
        const double expect = kt.empty() ? 0.0 : double(better) / (double(kt.size()) * double(parents.size()));
        if (transfer_quality(parents, kt) != expect) ++q_bad;
    }
    return {bad == 0 && q_bad == 0,
            fmt("%.0f state violations in 1e4 states, %.0f quality mismatches in 1000 sets", double(bad), double(q_bad))};
}

Outcome convergence_restriction() {
    Rng rng(707);
    std::size_t violations = 0, max_seen = 0;
    for (int s = 0; s < 10000; ++s) {
        const std::size_t n = 5 + rng.below(40), d = 1 + rng.below(12);
        auto tasks = l2t::testing::random_tasks(2, n, d, rng);
        const KtAction a{rng.uniform(), rng.uniform(), rng.uniform()};
        const auto batch = generate_offspring(tasks, s % 2, a, DeConfig{n, 0.5, 0.9}, rng);
        const auto flagged = static_cast<std::size_t>(std::count(batch.from_kt.begin(), batch.from_kt.end(), true));
        const std::size_t cap = (n + 1) / 2;
        if (batch.kt_count() > cap || flagged != batch.kt_count()) ++violations;
        max_seen = std::max(max_seen, batch.kt_count());
    }
    return {violations == 0, fmt("%.0f violations in 1e4 actions (largest transfer count %.0f)", double(violations),
                                 double(max_seen))};
}

Outcome statistics_oracle() {
    const double alpha = 0.05;
    std::size_t checked = 0, disagree = 0;
    for (std::size_t n = 5; n <= 8; ++n) {
        const std::size_t total = 2 * n;
        std::vector<bool> pick(total, false);
        std::fill(pick.begin(), pick.begin() + n, true);
        do {
            std::vector<double> x, y;
            for (std::size_t i = 0; i < total; ++i) (pick[i] ? x : y).push_back(double(i));
            const double exact = rank_sum_exact_p(x, y);
            if (std::abs(exact - alpha) <= 0.01) continue;
            ++checked;
            const bool exact_sig = exact < alpha;
            const bool normal_sig = wilcoxon_rank_sum(x, y, alpha) != TestOutcome::Same;
            if (exact_sig != normal_sig) ++disagree;
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    using O = TestOutcome;
    std::size_t table_bad = 0;
    const O all[3] = {O::XBetter, O::Same, O::YBetter};
    for (O a : all)
        for (O b : all) {
            const O pair[2] = {a, b};
            const Verdict expect = (a == O::YBetter || b == O::YBetter)   ? Verdict::Lose
                                   : (a == O::XBetter || b == O::XBetter) ? Verdict::Win
                                                                          : Verdict::Tie;
            if (verdict_from_outcomes(pair) != expect) ++table_bad;
        }
    return {disagree == 0 && table_bad == 0,
            fmt("%.0f configurations checked, %.0f disagreements, %.0f/9 truth-table errors", double(checked),
                double(disagree), double(table_bad))};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "l2t");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome determinism() {
    const fs::path dir = fs::temp_directory_path() / ("l2t_accept_" + std::to_string(Rng(std::random_device{}()).next_u64()));
    fs::create_directories(dir);
    auto p = [&](const char* name) { return (dir / name).string(); };
    std::ofstream(p("spec.json"))
        << R"({"name":"m","functions":["ackley","griewank","weierstrass"],"dim":10,"num_tasks":2,)"
           R"("distribution":{"type":"clusters","count":3},"instance_count":5,"seed":3})";
    int rc = 0;
    rc |= cli({"gen-problems", p("spec.json"), "-o", p("a.json")});
    rc |= cli({"gen-problems", p("spec.json"), "-o", p("b.json")});
    const std::vector<std::string> solve{"solve", p("a.json"), "--policy", "random", "--runs", "4",
                                         "--gmax", "30", "--seed", "11", "--workers", "1", "-o"};
    auto with = [&](const char* out) {
        auto v = solve;
        v.push_back(p(out));
        return v;
    };
    rc |= cli(with("c1.csv"));
    rc |= cli(with("c2.csv"));
    const bool sets_equal = slurp(p("a.json")) == slurp(p("b.json"));
    const std::string c1 = slurp(p("c1.csv"));
    const bool curves_equal = !c1.empty() && c1 == slurp(p("c2.csv"));
    fs::remove_all(dir);
    std::string detail = rc == 0 ? "commands succeeded" : "a command failed";
    detail += sets_equal ? ", problem sets identical" : ", problem sets differ";
    detail += curves_equal ? fmt(", curves identical (%.0f bytes)", double(c1.size())) : ", curves differ";
    return {rc == 0 && sets_equal && curves_equal, detail};
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;  // <= 0: no hard limit
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "operator recovery", 10, operator_recovery},
        {2, "gradient correctness", 30, gradient_correctness},
        {3, "GAE oracle equivalence", 5, gae_oracle},
        {4, "PPO sanity", 120, ppo_sanity},
        {5, "desk-scale effectiveness", 0, l2t_effectiveness},
        {6, "feature contract", 10, feature_contract},
        {7, "convergence restriction", 5, convergence_restriction},
        {8, "statistics oracle", 60, statistics_oracle},
        {9, "determinism", 60, determinism},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : all) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && dt >= c.budget_s) {
            o.pass = false;
            o.detail += fmt("; over the %.0f s budget", c.budget_s);
        }
        std::printf("%s %d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), dt);
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
