#include "l2t/eval_harness.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <thread>

#include "l2t/errors.hpp"
#include "l2t/rollout_env.hpp"

namespace l2t {

namespace {

constexpr const char* kCurveHeader = "instance_id,run,task,generation,best_fitness";

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void bad_field(const std::string& source, std::size_t line, const char* field) {
    throw FormatError(source + ":" + std::to_string(line) + ": invalid field '" + field + "'");
}

std::size_t parse_index(const std::string& text, const std::string& source, std::size_t line,
                        const char* field) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        bad_field(source, line, field);
    return v;
}

double parse_real(const std::string& text, const std::string& source, std::size_t line,
                  const char* field) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        bad_field(source, line, field);
    return v;
}

}  // namespace

void write_curves_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
    out << kCurveHeader << '\n';
    for (const auto& r : rows)
        out << r.instance_id << ',' << r.run << ',' << r.task << ',' << r.generation << ','
            << fmt_double(r.best_fitness) << '\n';
}

std::vector<CurveRow> parse_curves_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError(source + ": empty file, expected a header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCurveHeader)
        throw FormatError(source + ":1: header must be '" + std::string(kCurveHeader) + "'");
    std::vector<CurveRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_commas(line);
        if (f.size() != 5)
            throw FormatError(source + ":" + std::to_string(lineno) + ": expected 5 fields");
        if (f[0].empty()) bad_field(source, lineno, "instance_id");
        rows.push_back({f[0], parse_index(f[1], source, lineno, "run"),
                        parse_index(f[2], source, lineno, "task"),
                        parse_index(f[3], source, lineno, "generation"),
                        parse_real(f[4], source, lineno, "best_fitness")});
    }
    return rows;
}

std::vector<CurveRow> read_curves_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_curves_csv(in, path.string());
}

std::vector<std::size_t> available_generations(const std::vector<CurveRow>& rows) {
    std::set<std::size_t> g;
    for (const auto& r : rows) g.insert(r.generation);
    return {g.begin(), g.end()};
}

ResultMatrix result_matrix_at(const std::vector<CurveRow>& rows, std::size_t generation,
                              const std::string& source) {
    // instance -> task -> run -> value
    std::map<std::string, std::map<std::size_t, std::map<std::size_t, double>>> cells;
    bool found = false;
    for (const auto& r : rows) {
        if (r.generation != generation) continue;
        found = true;
        auto& runs = cells[r.instance_id][r.task];
        if (!runs.emplace(r.run, r.best_fitness).second)
            throw FormatError(source + ": duplicate row for instance " + r.instance_id + " run " +
                              std::to_string(r.run) + " task " + std::to_string(r.task));
    }
    if (!found)
        throw ConfigError(source + ": generation " + std::to_string(generation) +
                          " not present in the curves");

    ResultMatrix m;
    std::size_t runs_expected = 0;
    for (const auto& [id, tasks] : cells) {
        TaskSamples samples;
        std::size_t k_expected = 0;
        for (const auto& [k, runs] : tasks) {
            if (k != k_expected++)
                throw FormatError(source + ": instance " + id + " is missing task " + std::to_string(k - 1));
            if (runs_expected == 0) runs_expected = runs.size();
            if (runs.size() != runs_expected || runs.rbegin()->first + 1 != runs.size())
                throw FormatError(source + ": instance " + id + " task " + std::to_string(k) +
                                  " has an incomplete set of runs");
            std::vector<double> v;
            for (const auto& [run, value] : runs) v.push_back(value);
            samples.push_back(std::move(v));
        }
        m.emplace(id, std::move(samples));
    }
    return m;
}

std::vector<SummaryRow> summarize(const std::string& algorithm, const ResultMatrix& m) {
    std::vector<SummaryRow> out;
    for (const auto& [id, samples] : m)
        for (std::size_t k = 0; k < samples.size(); ++k)
            out.push_back({algorithm, id, k, mean(samples[k]), population_std(samples[k])});
    return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << "algorithm,instance_id,task,mean_best,std_best\n";
    for (const auto& r : rows)
        out << r.algorithm << ',' << r.instance_id << ',' << r.task << ',' << fmt_double(r.mean_best)
            << ',' << fmt_double(r.std_best) << '\n';
}

void write_wtl_csv(std::ostream& out, const std::vector<NamedWtl>& rows) {
    out << "baseline,wins,ties,losses\n";
    for (const auto& r : rows)
        out << r.baseline << ',' << r.count.wins << ',' << r.count.ties << ',' << r.count.losses << '\n';
}

void SolveConfig::validate() const {
    if (runs == 0) throw ConfigError("runs must be >= 1");
    if (gmax == 0) throw ConfigError("gmax must be >= 1");
    if (workers == 0) throw ConfigError("workers must be >= 1");
    de.validate();
}

std::vector<std::vector<double>> solve_instance(const MtopInstance& instance, const Policy& policy,
                                                const SolveConfig& cfg, Rng& rng) {
    EpisodeConfig ep;
    ep.horizon = cfg.gmax;
    ep.feature_horizon = cfg.feature_horizon;
    ep.de = cfg.de;
    ep.mode = UtilizationMode{};

    const std::size_t k = instance.num_tasks();
    if (k == 2) return run_utilization_episode(instance, policy, ep, rng).curves;
    if (k < 2 || k % 2 != 0)
        throw ConfigError("instance " + instance.instance_id +
                          ": task count must be 2 or an even number for pairing");

    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    std::vector<std::vector<double>> curves(k);
    for (std::size_t p = 0; p < k; p += 2) {
        MtopInstance sub{instance.instance_id, {instance.tasks[perm[p]], instance.tasks[perm[p + 1]]}};
        auto res = run_utilization_episode(sub, policy, ep, rng);
        curves[perm[p]] = std::move(res.curves[0]);
        curves[perm[p + 1]] = std::move(res.curves[1]);
    }
    return curves;
}

std::vector<CurveRow> solve_batch(const std::vector<MtopInstance>& instances, const Policy& policy,
                                  const SolveConfig& cfg) {
    cfg.validate();
    const std::size_t jobs = instances.size() * cfg.runs;
    std::vector<std::vector<std::vector<double>>> results(jobs);
    std::vector<std::exception_ptr> errors(jobs);

    auto run_job = [&](std::size_t j) {
        const std::size_t i = j / cfg.runs;
        const std::size_t r = j % cfg.runs;
        try {
            Rng rng(mix_seed(cfg.seed, i, r));
            results[j] = solve_instance(instances[i], policy, cfg, rng);
        } catch (...) {
            errors[j] = std::current_exception();
        }
    };
    const std::size_t workers = std::min(cfg.workers, std::max<std::size_t>(jobs, 1));
    if (workers <= 1) {
        for (std::size_t j = 0; j < jobs; ++j) run_job(j);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t j = w; j < jobs; j += workers) run_job(j);
            });
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<CurveRow> rows;
    for (std::size_t j = 0; j < jobs; ++j) {
        const std::size_t i = j / cfg.runs;
        const std::size_t r = j % cfg.runs;
        for (std::size_t k = 0; k < results[j].size(); ++k)
            for (std::size_t g = 0; g < results[j][k].size(); ++g)
                rows.push_back({instances[i].instance_id, r, k, g, results[j][k][g]});
    }
    return rows;
}

}  // namespace l2t
