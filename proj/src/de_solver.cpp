#include "l2t/de_solver.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "l2t/errors.hpp"

namespace l2t {

void DeConfig::validate() const {
    if (pop_size < 5) throw ConfigError("pop_size must be >= 5, got " + std::to_string(pop_size));
    if (!(scale_factor > 0.0 && scale_factor <= 1.0))
        throw ConfigError("scale_factor must be in (0, 1]");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0))
        throw ConfigError("crossover_rate must be in [0, 1]");
}

TaskState make_task_state(Matrix positions, std::vector<double> fitness) {
    if (positions.rows() != fitness.size() || fitness.empty())
        throw std::invalid_argument("make_task_state: fitness length must equal population size");
    TaskState s;
    const auto best = static_cast<std::size_t>(
        std::min_element(fitness.begin(), fitness.end()) - fitness.begin());
    const auto row = positions.row(best);
    s.best_x.assign(row.begin(), row.end());
    s.best_f = fitness[best];
    s.best_f_initial = s.best_f;
    s.positions = std::move(positions);
    s.fitness = std::move(fitness);
    return s;
}

Rand1Indices draw_rand1_indices(std::size_t pop_size, std::size_t target, Rng& rng) {
    if (pop_size < 5)
        throw ConfigError("rand/1 mutation needs pop_size >= 5, got " + std::to_string(pop_size));
    std::size_t r[3];
    for (int k = 0; k < 3; ++k) {
        std::size_t c;
        do {
            c = rng.below(pop_size);
        } while (c == target || std::find(r, r + k, c) != r + k);
        r[k] = c;
    }
    return {r[0], r[1], r[2]};
}

std::vector<double> rand1_mutation(const Matrix& positions, const Rand1Indices& idx, double f) {
    const auto a = positions.row(idx.base);
    const auto b = positions.row(idx.diff_plus);
    const auto c = positions.row(idx.diff_minus);
    std::vector<double> v(positions.cols());
    for (std::size_t d = 0; d < v.size(); ++d) v[d] = a[d] + f * (b[d] - c[d]);
    return v;
}

std::vector<double> de_mutation(const Matrix& positions, std::size_t target, double f, Rng& rng) {
    return rand1_mutation(positions, draw_rand1_indices(positions.rows(), target, rng), f);
}

CrossoverMask draw_crossover_mask(std::size_t dim, double cr, Rng& rng) {
    CrossoverMask m;
    m.forced_dim = rng.below(dim);
    m.from_trial.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        const bool pick = rng.uniform() <= cr;
        m.from_trial[d] = pick || d == m.forced_dim;
    }
    return m;
}

std::vector<double> apply_crossover(std::span<const double> trial, std::span<const double> parent,
                                    const CrossoverMask& mask) {
    std::vector<double> u(trial.size());
    for (std::size_t d = 0; d < u.size(); ++d)
        u[d] = std::clamp(mask.from_trial[d] ? trial[d] : parent[d], 0.0, 1.0);
    return u;
}

std::vector<double> binomial_crossover(std::span<const double> trial,
                                       std::span<const double> parent, double cr, Rng& rng) {
    if (trial.size() != parent.size())
        throw std::invalid_argument("binomial_crossover: length mismatch");
    return apply_crossover(trial, parent, draw_crossover_mask(trial.size(), cr, rng));
}

void truncation_selection(TaskState& state, const Matrix& offspring,
                          std::span<const double> offspring_fitness) {
    const std::size_t n = state.pop_size();
    if (offspring.rows() != n || offspring_fitness.size() != n || offspring.cols() != state.dim())
        throw std::invalid_argument("truncation_selection: offspring shape mismatch");

    // Merged index m: [0, n) parents, [n, 2n) offspring.
    auto fit = [&](std::size_t m) { return m < n ? state.fitness[m] : offspring_fitness[m - n]; };
    std::vector<std::size_t> order(2 * n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fit(a) < fit(b); });
    order.resize(n);
    std::sort(order.begin(), order.end());

    Matrix next(n, state.dim());
    std::vector<double> next_fit(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t m = order[i];
        const auto src = m < n ? state.positions.row(m) : offspring.row(m - n);
        std::copy(src.begin(), src.end(), next.row(i).begin());
        next_fit[i] = fit(m);
    }
    state.positions = std::move(next);
    state.fitness = std::move(next_fit);

    const auto best = static_cast<std::size_t>(
        std::min_element(state.fitness.begin(), state.fitness.end()) - state.fitness.begin());
    if (state.fitness[best] < state.best_f) {
        state.best_f = state.fitness[best];
        const auto row = state.positions.row(best);
        state.best_x.assign(row.begin(), row.end());
        state.improved = true;
        state.stagnation_count = 0;
    } else {
        state.improved = false;
        ++state.stagnation_count;
    }
}

}  // namespace l2t
