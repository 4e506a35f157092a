#include "l2t/reward.hpp"

#include <algorithm>

#include "l2t/errors.hpp"

namespace l2t {

void RewardConfig::validate() const {
    if (beta1 < 0.0 || beta2 < 0.0 || beta3 < 0.0)
        throw ConfigError("reward weights beta1..beta3 must be non-negative");
    if (!(xi > 0.0)) throw ConfigError("reward target accuracy xi must be positive");
}

double score(double y, std::span<const double> parent_fitness) {
    if (parent_fitness.empty()) return 0.0;
    const auto worse = std::count_if(parent_fitness.begin(), parent_fitness.end(),
                                     [y](double p) { return y < p; });
    return static_cast<double>(worse) / static_cast<double>(parent_fitness.size());
}

namespace {

double mean_score(std::span<const double> ys, std::span<const double> parents) {
    double s = 0.0;
    for (double y : ys) s += score(y, parents);
    return s / static_cast<double>(ys.size());
}

}  // namespace

double kt_gain(std::span<const double> base_offspring_fitness,
               std::span<const double> kt_offspring_fitness,
               std::span<const double> parent_fitness) {
    if (base_offspring_fitness.empty() || kt_offspring_fitness.empty()) return 0.0;
    return mean_score(kt_offspring_fitness, parent_fitness) -
           mean_score(base_offspring_fitness, parent_fitness);
}

double conv_gain(double best_f, double best_f_initial, double f_star) {
    const double gap0 = best_f_initial - f_star;
    if (gap0 < 1e-12) return 0.0;
    return -(best_f - f_star) / gap0;
}

double task_reward(const RewardConfig& cfg, double r_conv, double r_kt, double best_f,
                   double f_star, TargetBonus& bonus) {
    double r = cfg.beta1 * r_conv + cfg.beta2 * r_kt;
    if (best_f - f_star < cfg.xi && (cfg.repeat_bonus || !bonus.paid)) {
        r += cfg.beta3;
        bonus.paid = true;
    }
    return r;
}

double total_reward(std::span<const double> per_task) {
    double r = 0.0;
    for (double v : per_task) r += v;
    return r;
}

}  // namespace l2t
