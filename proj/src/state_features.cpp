#include "l2t/state_features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "l2t/kernels.hpp"

namespace l2t {

namespace {

double ratio(std::size_t num, std::size_t den) {
    if (den == 0) return 0.0;
    return std::clamp(static_cast<double>(num) / static_cast<double>(den), 0.0, 1.0);
}

double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

struct Moments {
    std::vector<double> mean;
    std::vector<double> stddev;
};

Moments population_moments(const Matrix& x) {
    Moments m{std::vector<double>(x.cols()), std::vector<double>(x.cols())};
    kernels::active().column_moments(x.data(), x.rows(), x.cols(), m.mean.data(),
                                     m.stddev.data());
    return m;
}

}  // namespace

std::array<double, kCommonFeatures> common_features(std::size_t generation, std::size_t g_max,
                                                    std::span<const TaskState> tasks) {
    if (tasks.size() != 2)
        throw std::invalid_argument("common_features: defined for exactly two tasks");
    const double dim = static_cast<double>(tasks[0].dim());
    const Moments m0 = population_moments(tasks[0].positions);
    const Moments m1 = population_moments(tasks[1].positions);
    return {ratio(generation, g_max),
            std::clamp(distance(tasks[0].best_x, tasks[1].best_x) / std::sqrt(dim), 0.0, 1.0),
            std::clamp(distance(m0.mean, m1.mean) / std::sqrt(dim), 0.0, 1.0),
            std::clamp(distance(m0.stddev, m1.stddev) / std::sqrt(0.5 * dim), 0.0, 1.0)};
}

double transfer_quality(std::span<const double> parent_fitness,
                        std::span<const double> kt_fitness) {
    if (kt_fitness.empty() || parent_fitness.empty()) return 0.0;
    std::vector<double> sorted(parent_fitness.begin(), parent_fitness.end());
    std::sort(sorted.begin(), sorted.end());
    std::size_t beaten = 0;
    for (double y : kt_fitness)
        beaten += static_cast<std::size_t>(sorted.end() -
                                           std::upper_bound(sorted.begin(), sorted.end(), y));
    return static_cast<double>(beaten) /
           (static_cast<double>(kt_fitness.size()) * static_cast<double>(parent_fitness.size()));
}

std::array<double, kTaskFeatures> task_features(const TaskState& task, std::size_t g_max) {
    const Moments m = population_moments(task.positions);
    double mean_std = 0.0;
    for (double s : m.stddev) mean_std += s;
    if (!m.stddev.empty()) mean_std /= static_cast<double>(m.stddev.size());
    return {ratio(task.stagnation_count, g_max),
            task.improved ? 1.0 : 0.0,
            std::clamp(task.last_q_kt, 0.0, 1.0),
            std::clamp(mean_std, 0.0, 1.0),
            std::clamp(task.last_action.a1, 0.0, 1.0),
            std::clamp(task.last_action.a2, 0.0, 1.0),
            std::clamp(task.last_action.a3, 0.0, 1.0)};
}

StateVector assemble_state(std::size_t generation, std::size_t g_max,
                           std::span<const TaskState> tasks) {
    StateVector s;
    s.reserve(state_dim(tasks.size()));
    const auto common = common_features(generation, g_max, tasks);
    s.insert(s.end(), common.begin(), common.end());
    for (const auto& t : tasks) {
        const auto f = task_features(t, g_max);
        s.insert(s.end(), f.begin(), f.end());
    }
    for (double& v : s) v = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
    return s;
}

}  // namespace l2t
