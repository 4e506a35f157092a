#include "l2t/train_config.hpp"

#include "l2t/errors.hpp"
#include "l2t/problem_io.hpp"

namespace l2t {

namespace {

template <typename T>
void read_opt(const Json& j, const char* key, const std::string& ctx, T& dst) {
    if (j.contains(key)) dst = get_field<T>(j, key, ctx);
}

}  // namespace

TrainSetup train_setup_from_json(const Json& j, const std::filesystem::path& base_dir,
                                 const std::string& context) {
    if (!j.is_object()) throw FormatError(context + ": expected a JSON object");
    reject_unknown_keys(
        j,
        {"gamma", "lam", "clip_eps", "learning_rate", "epochs_per_update", "minibatch_size",
         "buffer_size", "num_envs", "total_timesteps", "rollout_generations", "feature_horizon",
         "normalize_advantages", "entropy_coef", "learn_std", "init_std", "hidden_sizes",
         "init_pool_size", "best_window", "beta1", "beta2", "beta3", "xi", "repeat_bonus",
         "pop_size", "scale_factor", "crossover_rate", "seed", "save", "problem_set",
         "problem_spec"},
        context);
    TrainSetup s;
    auto& p = s.ppo;
    read_opt(j, "gamma", context, p.gamma);
    read_opt(j, "lam", context, p.lam);
    read_opt(j, "clip_eps", context, p.clip_eps);
    read_opt(j, "learning_rate", context, p.learning_rate);
    read_opt(j, "epochs_per_update", context, p.epochs_per_update);
    read_opt(j, "minibatch_size", context, p.minibatch_size);
    read_opt(j, "buffer_size", context, p.buffer_size);
    read_opt(j, "num_envs", context, p.num_envs);
    read_opt(j, "total_timesteps", context, p.total_timesteps);
    read_opt(j, "rollout_generations", context, p.rollout_generations);
    read_opt(j, "feature_horizon", context, p.feature_horizon);
    read_opt(j, "normalize_advantages", context, p.normalize_advantages);
    read_opt(j, "entropy_coef", context, p.entropy_coef);
    read_opt(j, "learn_std", context, p.learn_std);
    read_opt(j, "init_std", context, p.init_std);
    read_opt(j, "hidden_sizes", context, p.hidden_sizes);
    read_opt(j, "init_pool_size", context, p.init_pool_size);
    read_opt(j, "best_window", context, p.best_window);
    read_opt(j, "beta1", context, s.reward.beta1);
    read_opt(j, "beta2", context, s.reward.beta2);
    read_opt(j, "beta3", context, s.reward.beta3);
    read_opt(j, "xi", context, s.reward.xi);
    read_opt(j, "repeat_bonus", context, s.reward.repeat_bonus);
    read_opt(j, "pop_size", context, s.de.pop_size);
    read_opt(j, "scale_factor", context, s.de.scale_factor);
    read_opt(j, "crossover_rate", context, s.de.crossover_rate);
    read_opt(j, "seed", context, s.seed);
    if (j.contains("save")) {
        const auto save = get_field<std::string>(j, "save", context);
        if (save != "best" && save != "last")
            throw FormatError(context + ": field \"save\" must be \"best\" or \"last\"");
        s.save_best = save == "best";
    }

    const bool has_path = j.contains("problem_set");
    const bool has_spec = j.contains("problem_spec");
    if (has_path == has_spec)
        throw FormatError(context + ": exactly one of \"problem_set\" or \"problem_spec\" is required");
    if (has_path) {
        auto path = std::filesystem::path(get_field<std::string>(j, "problem_set", context));
        if (path.is_relative()) path = base_dir / path;
        s.problem_set = load_problem_set(path).instances;
    } else {
        s.problem_set = make_problem_set(spec_from_json(j.at("problem_spec"), context + ".problem_spec"));
    }

    try {
        s.ppo.validate();
        s.reward.validate();
        s.de.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(context + ": " + e.what());
    }
    return s;
}

TrainSetup load_train_setup(const std::filesystem::path& path) {
    return train_setup_from_json(read_json_file(path), path.parent_path(), path.string());
}

}  // namespace l2t
