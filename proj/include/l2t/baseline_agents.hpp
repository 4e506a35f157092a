#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "l2t/kt_action.hpp"
#include "l2t/neural_agent.hpp"
#include "l2t/rng.hpp"

namespace l2t {

// Trained agent; deterministic actor mean unless `stochastic`.
struct LearnedPolicy {
    std::shared_ptr<const AgentParams> agent;
    bool stochastic = false;
};

// MTDE-f(a1,a2,a3): the same action for every task and generation.
struct FixedPolicy {
    KtAction action;
};

// MTDE-r: fresh uniform [0,1]^3 per task per generation.
struct RandomPolicy {};

// STDE: a1 = 0 everywhere, i.e. no transfer.
struct SingleTaskPolicy {};

using Policy = std::variant<LearnedPolicy, FixedPolicy, RandomPolicy, SingleTaskPolicy>;

// Parses "fixed:a1,a2,a3", "random", "single" or "learned:<path>".
// Throws ConfigError on bad syntax, IoError/FormatError for agent files.
Policy parse_policy(std::string_view text);

std::string policy_name(const Policy& policy);

// 3K action components in [0,1].
std::vector<double> policy_action(const Policy& policy, std::span<const double> state,
                                  std::size_t num_tasks, Rng& rng);

// Presets named after published designs that live inside the action space.
inline constexpr KtAction kMfdeAction{0.5, 0.0, 1.0};
inline constexpr KtAction kDifferentialTransferCorner{1.0, 0.0, 1.0};
inline constexpr KtAction kBaseVectorCorner{1.0, 1.0, 0.0};
inline constexpr KtAction kDirectTransferCorner{1.0, 1.0, 1.0};

}  // namespace l2t
