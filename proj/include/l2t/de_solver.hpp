#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "l2t/kt_action.hpp"
#include "l2t/matrix.hpp"
#include "l2t/rng.hpp"

namespace l2t {

struct DeConfig {
    std::size_t pop_size = 20;
    double scale_factor = 0.5;
    double crossover_rate = 0.9;

    void validate() const;  // throws ConfigError
};

// Evolution state of one task inside an EMT run.
struct TaskState {
    Matrix positions;              // N x D, all entries in [0,1]
    std::vector<double> fitness;   // fitness[i] belongs to positions.row(i)
    std::vector<double> best_x;
    double best_f = std::numeric_limits<double>::infinity();
    double best_f_initial = std::numeric_limits<double>::infinity();
    std::size_t stagnation_count = 0;
    bool improved = false;
    KtAction last_action{};
    double last_q_kt = 0.0;

    std::size_t pop_size() const { return positions.rows(); }
    std::size_t dim() const { return positions.cols(); }
};

// Builds a task state from an evaluated initial population.
TaskState make_task_state(Matrix positions, std::vector<double> fitness);

struct Rand1Indices {
    std::size_t base;
    std::size_t diff_plus;
    std::size_t diff_minus;
};

// Three distinct row indices, none equal to target.
Rand1Indices draw_rand1_indices(std::size_t pop_size, std::size_t target, Rng& rng);

// X[base] + F * (X[diff_plus] - X[diff_minus]), no clamping.
std::vector<double> rand1_mutation(const Matrix& positions, const Rand1Indices& idx, double f);

// Draws indices and applies rand/1. Throws ConfigError when N < 5.
std::vector<double> de_mutation(const Matrix& positions, std::size_t target, double f, Rng& rng);

// Which components of an offspring come from the trial vector.
struct CrossoverMask {
    std::size_t forced_dim = 0;
    std::vector<bool> from_trial;
};

CrossoverMask draw_crossover_mask(std::size_t dim, double cr, Rng& rng);

// Mixes trial and parent per the mask, then clamps to [0,1].
std::vector<double> apply_crossover(std::span<const double> trial, std::span<const double> parent,
                                    const CrossoverMask& mask);

std::vector<double> binomial_crossover(std::span<const double> trial,
                                       std::span<const double> parent, double cr, Rng& rng);

// (mu + lambda) truncation: keeps the N best of parents and offspring
// (ties: parents first, then lower row). Survivors keep their relative
// order. Updates best-so-far, improved flag and stagnation counter.
void truncation_selection(TaskState& state, const Matrix& offspring,
                          std::span<const double> offspring_fitness);

}  // namespace l2t
