#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "l2t/de_solver.hpp"
#include "l2t/kt_action.hpp"
#include "l2t/matrix.hpp"
#include "l2t/rng.hpp"

namespace l2t {

// Number of offspring replaced by transfer: ceil(0.5 * a1 * N).
std::size_t kt_quota(double a1, std::size_t pop_size);

// Row draws for one transfer trial vector. target_base, diff pair on the
// target population; source_base, diff pair on the source population.
struct KtIndices {
    std::size_t target_base;   // r1
    std::size_t source_base;   // r2
    std::size_t target_plus;   // r3
    std::size_t target_minus;  // r4
    std::size_t source_plus;   // r5
    std::size_t source_minus;  // r6
};

KtIndices draw_kt_indices(std::size_t pop_size, Rng& rng);

// v = (1-a2) Xk[r1] + a2 Xj[r2] + F(1-a3)(Xk[r3]-Xk[r4]) + F a3 (Xj[r5]-Xj[r6])
std::vector<double> kt_trial_vector(const Matrix& target, const Matrix& source,
                                    const KtIndices& idx, const KtAction& action, double f);

// Draws indices and builds the trial vector for target k from source j.
// Throws std::invalid_argument if j == k.
std::vector<double> sample_kt_trial(std::span<const Matrix> populations, std::size_t target,
                                    std::size_t source, const KtAction& action, double f, Rng& rng);

// Record of one transfer-generated offspring row.
struct KtDraw {
    std::size_t row;
    std::size_t source;
    KtIndices indices;
    CrossoverMask mask;
};

struct OffspringBatch {
    Matrix positions;            // N x D, clamped to [0,1]
    std::vector<bool> from_kt;   // row generated by transfer
    std::vector<KtDraw> kt_draws;

    std::size_t kt_count() const { return kt_draws.size(); }
};

// DE offspring for every parent row, then ceil(0.5*a1*N) distinct rows
// replaced by crossed-over transfer trial vectors.
OffspringBatch generate_offspring(std::span<const TaskState> tasks, std::size_t target,
                                  const KtAction& action, const DeConfig& de, Rng& rng);

}  // namespace l2t
