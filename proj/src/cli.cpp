#include "l2t/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "l2t/errors.hpp"
#include "l2t/eval_harness.hpp"
#include "l2t/problem_io.hpp"
#include "l2t/train_config.hpp"

namespace l2t {

namespace {

std::string algorithm_name(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

int gen_problems(const std::string& spec_path, const std::string& out_path) {
    const ProblemSetSpec spec = spec_from_json(read_json_file(spec_path), spec_path);
    const ProblemSet set{spec, make_problem_set(spec)};
    write_text_file(out_path, dump_json(problem_set_to_json(set)) + "\n");
    return 0;
}

int train_cmd(const std::string& cfg_path, const std::string& out_path, const std::string& log_path,
              std::ostream& err) {
    const TrainSetup setup = load_train_setup(cfg_path);
    const auto progress = [&](const TrainLogRecord& r, const AgentParams&) {
        err << "update " << r.update << " timesteps " << r.timesteps << " mean_return "
            << r.mean_return << '\n';
        return true;
    };
    const TrainResult res =
        train(setup.problem_set, setup.ppo, setup.reward, setup.de, setup.seed, progress);
    save_agent(setup.save_best ? res.best : res.last, out_path);
    if (!log_path.empty()) {
        std::ostringstream log;
        write_train_log_csv(log, res.log);
        write_text_file(log_path, log.str());
    }
    return 0;
}

int solve_cmd(const std::string& set_path, const std::string& policy_text, bool stochastic,
              const SolveConfig& cfg, const std::string& out_path) {
    const ProblemSet set = load_problem_set(set_path);
    Policy policy = parse_policy(policy_text);
    if (auto* p = std::get_if<LearnedPolicy>(&policy)) p->stochastic = stochastic;
    const auto rows = solve_batch(set.instances, policy, cfg);
    std::ostringstream out;
    write_curves_csv(out, rows);
    write_text_file(out_path, out.str());
    return 0;
}

std::size_t resolve_generation(const std::vector<CurveRow>& rows, const std::optional<std::size_t>& at,
                               const std::string& source) {
    if (at) return *at;
    const auto gens = available_generations(rows);
    if (gens.empty()) throw FormatError(source + ": no curve rows");
    return gens.back();
}

int evaluate_cmd(const std::vector<std::string>& inputs, const std::optional<std::size_t>& at,
                 const std::string& out_path) {
    std::vector<SummaryRow> summary;
    for (const auto& path : inputs) {
        const auto rows = read_curves_csv(path);
        const std::size_t g = resolve_generation(rows, at, path);
        const auto part = summarize(algorithm_name(path), result_matrix_at(rows, g, path));
        summary.insert(summary.end(), part.begin(), part.end());
    }
    std::ostringstream out;
    write_summary_csv(out, summary);
    write_text_file(out_path, out.str());
    return 0;
}

int compare_cmd(const std::string& target_path, const std::vector<std::string>& baselines,
                double alpha, const std::optional<std::size_t>& at, const std::string& out_path,
                std::ostream& out) {
    const auto target_rows = read_curves_csv(target_path);
    const std::size_t g = resolve_generation(target_rows, at, target_path);
    const ResultMatrix target = result_matrix_at(target_rows, g, target_path);
    std::vector<NamedWtl> table;
    for (const auto& path : baselines) {
        const ResultMatrix base = result_matrix_at(read_curves_csv(path), g, path);
        WtlCount c;
        try {
            c = wtl_count(target, base, alpha);
        } catch (const std::invalid_argument& e) {
            throw FormatError(path + ": " + e.what());
        }
        table.push_back({algorithm_name(path), c});
        out << algorithm_name(target_path) << " vs " << algorithm_name(path) << " at generation " << g
            << ": W/T/L " << c.wins << '/' << c.ties << '/' << c.losses << '\n';
    }
    std::ostringstream csv;
    write_wtl_csv(csv, table);
    write_text_file(out_path, csv.str());
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Learned knowledge transfer for evolutionary multitasking", "l2t"};
    app.require_subcommand(1);

    std::string spec_path, set_out;
    auto* gen = app.add_subcommand("gen-problems", "Generate a problem set from a spec");
    gen->add_option("spec", spec_path, "Problem-set spec JSON")->required();
    gen->add_option("-o,--output", set_out, "Output problem-set JSON")->required();

    std::string train_cfg, agent_out, log_out;
    auto* tr = app.add_subcommand("train", "Train an agent with PPO");
    tr->add_option("config", train_cfg, "Training config JSON")->required();
    tr->add_option("-o,--output", agent_out, "Output agent JSON")->required();
    tr->add_option("--log", log_out, "Training log CSV");

    std::string set_path, policy_text, curves_out;
    SolveConfig solve_cfg;
    auto* sv = app.add_subcommand("solve", "Run a policy on a problem set");
    sv->add_option("problem_set", set_path, "Problem-set JSON")->required();
    sv->add_option("--policy", policy_text, "fixed:a1,a2,a3 | random | single | learned:<path>")
        ->required();
    sv->add_option("--runs", solve_cfg.runs, "Independent runs per instance")->capture_default_str();
    sv->add_option("--gmax", solve_cfg.gmax, "Generations per run")->capture_default_str();
    sv->add_option("--seed", solve_cfg.seed, "Base seed")->capture_default_str();
    sv->add_option("--workers", solve_cfg.workers, "Parallel workers")->capture_default_str();
    sv->add_option("--feature-horizon", solve_cfg.feature_horizon,
                   "Generation count used to normalize time features (0 = gmax)")
        ->capture_default_str();
    bool stochastic = false;
    sv->add_flag("--stochastic", stochastic, "Sample learned actions instead of using the mean");
    sv->add_option("--pop-size", solve_cfg.de.pop_size, "Population size")->capture_default_str();
    sv->add_option("-o,--output", curves_out, "Output curves CSV")->required();

    std::vector<std::string> eval_inputs;
    std::optional<std::size_t> eval_at;
    std::string summary_out;
    auto* ev = app.add_subcommand("evaluate", "Summarize final fitness per instance and task");
    ev->add_option("curves", eval_inputs, "Curves CSV files")->required();
    ev->add_option("--at", eval_at, "Generation to evaluate (default: last)");
    ev->add_option("-o,--output", summary_out, "Output summary CSV")->required();

    std::vector<std::string> cmp_inputs;
    std::optional<std::size_t> cmp_at;
    double alpha = 0.05;
    std::string wtl_out;
    auto* cmp = app.add_subcommand("compare", "W/T/L of a target against baselines");
    cmp->add_option("curves", cmp_inputs, "Target curves CSV followed by baseline CSVs")
        ->required()
        ->expected(2, -1);
    cmp->add_option("--alpha", alpha, "Significance level")->capture_default_str();
    cmp->add_option("--at", cmp_at, "Generation to compare (default: last)");
    cmp->add_option("-o,--output", wtl_out, "Output W/T/L CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) return gen_problems(spec_path, set_out);
        if (*tr) return train_cmd(train_cfg, agent_out, log_out, err);
        if (*sv) return solve_cmd(set_path, policy_text, stochastic, solve_cfg, curves_out);
        if (*ev) return evaluate_cmd(eval_inputs, eval_at, summary_out);
        if (*cmp) {
            if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("--alpha must be in (0,1)");
            const std::vector<std::string> baselines(cmp_inputs.begin() + 1, cmp_inputs.end());
            return compare_cmd(cmp_inputs.front(), baselines, alpha, cmp_at, wtl_out, out);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace l2t
