#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace l2t {

enum class TestOutcome { XBetter, Same, YBetter };
enum class Verdict { Win, Tie, Lose };

const char* outcome_name(TestOutcome o);
const char* verdict_name(Verdict v);

struct RankSumResult {
    double rank_sum_x = 0.0;  // sum of pooled midranks of x
    double z = 0.0;
    double p_value = 1.0;
};

// Two-sided rank-sum test, normal approximation with tie and continuity
// corrections. Throws std::invalid_argument if either sample has fewer
// than 5 values.
RankSumResult rank_sum_normal(std::span<const double> x, std::span<const double> y);

// Exact two-sided p-value under the permutation null: the fraction of all
// C(n+m, n) relabelings whose rank sum is at least as far from its mean
// as the observed one. Midranks handle ties. Intended for n + m <= 40.
double rank_sum_exact_p(std::span<const double> x, std::span<const double> y);

// Lower fitness is better. Same when p >= alpha.
TestOutcome wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y,
                              double alpha = 0.05);

// Win iff every task is XBetter or Same and at least one is XBetter; Tie
// iff every task is Same; Lose otherwise.
Verdict verdict_from_outcomes(std::span<const TestOutcome> per_task);

// samples[task][run] final best fitness.
using TaskSamples = std::vector<std::vector<double>>;

struct ComparisonOutcome {
    Verdict verdict = Verdict::Tie;
    std::vector<TestOutcome> per_task;
};

ComparisonOutcome compare_instance(const TaskSamples& a, const TaskSamples& b, double alpha = 0.05);

// instance_id -> samples.
using ResultMatrix = std::map<std::string, TaskSamples>;

struct WtlCount {
    std::size_t wins = 0;
    std::size_t ties = 0;
    std::size_t losses = 0;
};

// Throws std::invalid_argument unless both matrices cover the same
// instances with the same task and run counts.
WtlCount wtl_count(const ResultMatrix& target, const ResultMatrix& baseline, double alpha = 0.05);

std::vector<WtlCount> wtl_table(const ResultMatrix& target, std::span<const ResultMatrix> baselines,
                                double alpha = 0.05);

// Fraction of instances on which the EMT results win against STDE.
double positive_transfer_rate(const ResultMatrix& emt, const ResultMatrix& stde, double alpha = 0.05);

struct MssEntry {
    std::string algorithm;
    double mss = 0.0;
};

// Mean over (instance, task) of the z-score of each algorithm's mean final
// fitness among all algorithms (population std; zero-variance cells give
// 0). Returned ascending by MSS. Throws std::invalid_argument for fewer
// than two algorithms.
std::vector<MssEntry> mean_standard_score(const std::vector<std::string>& names,
                                          std::span<const ResultMatrix> results);

double mean(std::span<const double> v);
double population_std(std::span<const double> v);

}  // namespace l2t
