#pragma once

namespace l2t {

// Per-task transfer decision. a1: transfer intensity, a2: base-vector
// blend toward the source task, a3: differential-vector blend toward the
// source task. All components in [0,1].
struct KtAction {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;

    // Weight of self-evolution in the offspring mixture; always >= 0.5.
    double self_evolution_weight() const { return 1.0 - 0.5 * a1; }

    friend bool operator==(const KtAction&, const KtAction&) = default;
};

}  // namespace l2t
