#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <map>
#include <set>

#include "../test_util.hpp"
#include "l2t/kt_engine.hpp"

using namespace l2t;
using l2t::testing::random_tasks;

TEST_CASE("transfer quota") {
    CHECK(kt_quota(0.0, 20) == 0);
    CHECK(kt_quota(0.0, 7) == 0);
    CHECK(kt_quota(1.0, 20) == 10);
    CHECK(kt_quota(0.3, 20) == 3);
    CHECK(kt_quota(1.0, 21) == 11);
    CHECK(kt_quota(0.01, 20) == 1);
    for (int i = 0; i <= 1000; ++i)
        for (std::size_t n : {5u, 20u, 33u}) CHECK(kt_quota(i / 1000.0, n) <= (n + 1) / 2);
}

TEST_CASE("corner operators") {
    Rng rng(1);
    auto tasks = random_tasks(2, 20, 10, rng);
    const Matrix& xk = tasks[0].positions;
    const Matrix& xj = tasks[1].positions;
    const double f = 0.5;
    for (int rep = 0; rep < 100; ++rep) {
        const KtIndices idx = draw_kt_indices(20, rng);
        CHECK(idx.target_plus != idx.target_minus);
        CHECK(idx.source_plus != idx.source_minus);
        const auto direct = kt_trial_vector(xk, xj, idx, {1, 1, 1}, f);
        const auto base = kt_trial_vector(xk, xj, idx, {1, 1, 0}, f);
        const auto diff = kt_trial_vector(xk, xj, idx, {1, 0, 1}, f);
        const auto self = kt_trial_vector(xk, xj, idx, {1, 0, 0}, f);
        for (std::size_t d = 0; d < 10; ++d) {
            const double dk = xk(idx.target_plus, d) - xk(idx.target_minus, d);
            const double dj = xj(idx.source_plus, d) - xj(idx.source_minus, d);
            CHECK(direct[d] == doctest::Approx(xj(idx.source_base, d) + f * dj).epsilon(1e-15));
            CHECK(base[d] == doctest::Approx(xj(idx.source_base, d) + f * dk).epsilon(1e-15));
            CHECK(diff[d] == doctest::Approx(xk(idx.target_base, d) + f * dj).epsilon(1e-15));
            CHECK(self[d] == doctest::Approx(xk(idx.target_base, d) + f * dk).epsilon(1e-15));
        }
        // Bilinear in (a2, a3): the centre equals the corner average.
        const auto mid = kt_trial_vector(xk, xj, idx, {1, 0.5, 0.5}, f);
        for (std::size_t d = 0; d < 10; ++d)
            CHECK(std::abs(mid[d] - 0.25 * (direct[d] + base[d] + diff[d] + self[d])) < 1e-14);
    }
}

TEST_CASE("sample_kt_trial needs distinct tasks") {
    Rng rng(2);
    auto tasks = random_tasks(2, 10, 3, rng);
    std::vector<Matrix> pops{tasks[0].positions, tasks[1].positions};
    CHECK_THROWS_AS(sample_kt_trial(pops, 0, 0, {1, 0.5, 0.5}, 0.5, rng), std::invalid_argument);
    CHECK(sample_kt_trial(pops, 0, 1, {1, 0.5, 0.5}, 0.5, rng).size() == 3);
}

TEST_CASE("a1 = 0 reduces to plain DE offspring") {
    Rng setup(3);
    auto tasks = random_tasks(2, 20, 10, setup);
    const DeConfig de;
    Rng a(44), b(44);
    const auto batch = generate_offspring(tasks, 0, {0.0, 0.7, 0.2}, de, a);
    CHECK(batch.kt_count() == 0);
    for (std::size_t i = 0; i < 20; ++i) {
        const auto v = de_mutation(tasks[0].positions, i, de.scale_factor, b);
        const auto u = binomial_crossover(v, tasks[0].positions.row(i), de.crossover_rate, b);
        CHECK(std::equal(u.begin(), u.end(), batch.positions.row(i).begin()));
        CHECK_FALSE(batch.from_kt[i]);
    }
}

TEST_CASE("full intensity replaces half the population") {
    Rng rng(4);
    auto tasks = random_tasks(2, 20, 10, rng);
    const auto batch = generate_offspring(tasks, 1, {1.0, 1.0, 1.0}, DeConfig{}, rng);
    CHECK(batch.kt_count() == 10);
    CHECK(std::count(batch.from_kt.begin(), batch.from_kt.end(), true) == 10);
    std::set<std::size_t> rows;
    for (const auto& d : batch.kt_draws) {
        rows.insert(d.row);
        CHECK(d.source == 0);
    }
    CHECK(rows.size() == 10);
    for (double v : batch.positions.flat()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("source task is drawn uniformly among the other tasks") {
    Rng rng(5);
    auto tasks = random_tasks(4, 20, 3, rng);
    std::map<std::size_t, int> count;
    for (int rep = 0; rep < 500; ++rep) {
        const auto batch = generate_offspring(tasks, 2, {1.0, 0.5, 0.5}, DeConfig{}, rng);
        for (const auto& d : batch.kt_draws) ++count[d.source];
    }
    CHECK(count.count(2) == 0);
    REQUIRE(count.size() == 3);
    for (const auto& [src, c] : count) CHECK(std::abs(c - 5000.0 / 3.0) < 200.0);
}
