#pragma once

#include <span>

namespace l2t {

struct RewardConfig {
    double beta1 = 1.0;    // convergence gain weight
    double beta2 = 10.0;   // transfer gain weight
    double beta3 = 100.0;  // target-accuracy bonus
    double xi = 1e-6;      // target accuracy
    bool repeat_bonus = false;  // pay beta3 every generation below xi, not just the first

    void validate() const;  // throws ConfigError
};

// Fraction of parents strictly worse than y.
double score(double y, std::span<const double> parent_fitness);

// Mean score of transfer offspring minus mean score of DE offspring;
// 0 if either group is empty.
double kt_gain(std::span<const double> base_offspring_fitness,
               std::span<const double> kt_offspring_fitness,
               std::span<const double> parent_fitness);

// -(best_f - f_star) / (best_f_initial - f_star); 0 when the initial gap
// is below 1e-12.
double conv_gain(double best_f, double best_f_initial, double f_star);

// Tracks the once-per-episode accuracy bonus of one task.
struct TargetBonus {
    bool paid = false;
};

double task_reward(const RewardConfig& cfg, double r_conv, double r_kt, double best_f,
                   double f_star, TargetBonus& bonus);

double total_reward(std::span<const double> per_task);

}  // namespace l2t
