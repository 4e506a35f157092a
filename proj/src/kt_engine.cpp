#include "l2t/kt_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace l2t {

std::size_t kt_quota(double a1, std::size_t pop_size) {
    const double a = std::clamp(a1, 0.0, 1.0);
    // Slack absorbs representation error such as 0.5*0.3*20 = 3.0000000000000004.
    const double q = std::ceil(0.5 * a * static_cast<double>(pop_size) - 1e-9);
    const auto cap = (pop_size + 1) / 2;
    return std::min(static_cast<std::size_t>(std::max(q, 0.0)), cap);
}

KtIndices draw_kt_indices(std::size_t pop_size, Rng& rng) {
    KtIndices idx{};
    idx.target_base = rng.below(pop_size);
    idx.source_base = rng.below(pop_size);
    idx.target_plus = rng.below(pop_size);
    do {
        idx.target_minus = rng.below(pop_size);
    } while (idx.target_minus == idx.target_plus);
    idx.source_plus = rng.below(pop_size);
    do {
        idx.source_minus = rng.below(pop_size);
    } while (idx.source_minus == idx.source_plus);
    return idx;
}

std::vector<double> kt_trial_vector(const Matrix& target, const Matrix& source,
                                    const KtIndices& idx, const KtAction& action, double f) {
    const auto xk1 = target.row(idx.target_base);
    const auto xj2 = source.row(idx.source_base);
    const auto xk3 = target.row(idx.target_plus);
    const auto xk4 = target.row(idx.target_minus);
    const auto xj5 = source.row(idx.source_plus);
    const auto xj6 = source.row(idx.source_minus);
    const double wk = 1.0 - action.a2;
    const double wj = action.a2;
    const double fk = f * (1.0 - action.a3);
    const double fj = f * action.a3;
    std::vector<double> v(target.cols());
    for (std::size_t d = 0; d < v.size(); ++d)
        v[d] = wk * xk1[d] + wj * xj2[d] + fk * (xk3[d] - xk4[d]) + fj * (xj5[d] - xj6[d]);
    return v;
}

std::vector<double> sample_kt_trial(std::span<const Matrix> populations, std::size_t target,
                                    std::size_t source, const KtAction& action, double f,
                                    Rng& rng) {
    if (target == source)
        throw std::invalid_argument("sample_kt_trial: source task must differ from target");
    const Matrix& xk = populations[target];
    return kt_trial_vector(xk, populations[source], draw_kt_indices(xk.rows(), rng), action, f);
}

OffspringBatch generate_offspring(std::span<const TaskState> tasks, std::size_t target,
                                  const KtAction& action, const DeConfig& de, Rng& rng) {
    if (tasks.size() < 2) throw std::invalid_argument("generate_offspring: needs K >= 2 tasks");
    const TaskState& self = tasks[target];
    const std::size_t n = self.pop_size();
    const std::size_t dim = self.dim();

    OffspringBatch out;
    out.positions = Matrix(n, dim);
    out.from_kt.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = de_mutation(self.positions, i, de.scale_factor, rng);
        const auto u = binomial_crossover(v, self.positions.row(i), de.crossover_rate, rng);
        std::copy(u.begin(), u.end(), out.positions.row(i).begin());
    }

    const std::size_t quota = kt_quota(action.a1, n);
    if (quota == 0) return out;

    // Partial Fisher-Yates: the first `quota` entries are the replaced rows.
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    for (std::size_t i = 0; i < quota; ++i) std::swap(rows[i], rows[i + rng.below(n - i)]);

    const std::size_t k = tasks.size();
    for (std::size_t q = 0; q < quota; ++q) {
        KtDraw draw;
        draw.row = rows[q];
        if (k == 2) {
            draw.source = 1 - target;
        } else {
            const std::size_t pick = rng.below(k - 1);
            draw.source = pick < target ? pick : pick + 1;
        }
        draw.indices = draw_kt_indices(n, rng);
        const auto v = kt_trial_vector(self.positions, tasks[draw.source].positions, draw.indices,
                                       action, de.scale_factor);
        draw.mask = draw_crossover_mask(dim, de.crossover_rate, rng);
        const auto u = apply_crossover(v, self.positions.row(draw.row), draw.mask);
        std::copy(u.begin(), u.end(), out.positions.row(draw.row).begin());
        out.from_kt[draw.row] = true;
        out.kt_draws.push_back(std::move(draw));
    }
    return out;
}

}  // namespace l2t
