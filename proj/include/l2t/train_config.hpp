#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "l2t/de_solver.hpp"
#include "l2t/json_io.hpp"
#include "l2t/ppo_trainer.hpp"
#include "l2t/problem_suite.hpp"
#include "l2t/reward.hpp"

namespace l2t {

// Training config document. Flat object holding any PpoConfig,
// RewardConfig and DeConfig field, plus `seed`, `save` ("best" or "last")
// and exactly one of `problem_set` (path, relative to the config file) or
// `problem_spec` (inline spec object).
struct TrainSetup {
    PpoConfig ppo;
    RewardConfig reward;
    DeConfig de;
    std::uint64_t seed = 0;
    bool save_best = true;
    std::vector<MtopInstance> problem_set;
};

TrainSetup train_setup_from_json(const Json& j, const std::filesystem::path& base_dir,
                                 const std::string& context);
TrainSetup load_train_setup(const std::filesystem::path& path);

}  // namespace l2t
