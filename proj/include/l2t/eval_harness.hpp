#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "l2t/baseline_agents.hpp"
#include "l2t/de_solver.hpp"
#include "l2t/problem_suite.hpp"
#include "l2t/statistics.hpp"

namespace l2t {

struct CurveRow {
    std::string instance_id;
    std::size_t run = 0;
    std::size_t task = 0;
    std::size_t generation = 0;
    double best_fitness = 0.0;
};

void write_curves_csv(std::ostream& out, const std::vector<CurveRow>& rows);
// Throws FormatError naming `source`, the line and the field.
std::vector<CurveRow> parse_curves_csv(std::istream& in, const std::string& source);
std::vector<CurveRow> read_curves_csv(const std::filesystem::path& path);

std::vector<std::size_t> available_generations(const std::vector<CurveRow>& rows);

// Final fitness per (instance, task, run) at `generation`. Throws
// ConfigError if no row has that generation and FormatError if the matrix
// has holes or duplicates.
ResultMatrix result_matrix_at(const std::vector<CurveRow>& rows, std::size_t generation,
                              const std::string& source);

struct SummaryRow {
    std::string algorithm;
    std::string instance_id;
    std::size_t task = 0;
    double mean_best = 0.0;
    double std_best = 0.0;  // population convention
};

std::vector<SummaryRow> summarize(const std::string& algorithm, const ResultMatrix& m);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

struct NamedWtl {
    std::string baseline;
    WtlCount count;
};
void write_wtl_csv(std::ostream& out, const std::vector<NamedWtl>& rows);

struct SolveConfig {
    std::size_t runs = 20;
    std::size_t gmax = 100;
    std::size_t feature_horizon = 0;  // 0 = gmax
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    DeConfig de;

    void validate() const;  // throws ConfigError
};

// curves[k][g] for one run. Two-task instances run directly; instances
// with an even number of tasks above two are split into randomly paired
// two-task sub-problems.
std::vector<std::vector<double>> solve_instance(const MtopInstance& instance, const Policy& policy,
                                                const SolveConfig& cfg, Rng& rng);

// All (instance, run) episodes; run r of instance i uses the stream
// mix_seed(seed, i, r), so the output does not depend on `workers`.
// Rows are ordered by instance, run, task, generation.
std::vector<CurveRow> solve_batch(const std::vector<MtopInstance>& instances, const Policy& policy,
                                  const SolveConfig& cfg);

}  // namespace l2t
