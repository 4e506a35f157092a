#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "l2t/de_solver.hpp"

namespace l2t {

inline constexpr std::size_t kCommonFeatures = 4;
inline constexpr std::size_t kTaskFeatures = 7;

constexpr std::size_t state_dim(std::size_t num_tasks) {
    return kCommonFeatures + kTaskFeatures * num_tasks;
}

// Observation layout: [common(4), task_1(7), ..., task_K(7)], every entry
// clamped to [0,1].
using StateVector = std::vector<double>;

// Generation ratio, best-solution distance, population-mean distance and
// population-std distance between tasks 0 and 1. Requires K == 2.
std::array<double, kCommonFeatures> common_features(std::size_t generation, std::size_t g_max,
                                                    std::span<const TaskState> tasks);

// Fraction of (transfer offspring, parent) pairs where the offspring is
// strictly better. 0 when no transfer offspring exist.
double transfer_quality(std::span<const double> parent_fitness,
                        std::span<const double> kt_fitness);

// Stagnation ratio, improved flag, last transfer quality, mean population
// std, last action (a1, a2, a3).
std::array<double, kTaskFeatures> task_features(const TaskState& task, std::size_t g_max);

StateVector assemble_state(std::size_t generation, std::size_t g_max,
                           std::span<const TaskState> tasks);

}  // namespace l2t
