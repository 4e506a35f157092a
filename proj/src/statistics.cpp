#include "l2t/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace l2t {

const char* outcome_name(TestOutcome o) {
    switch (o) {
        case TestOutcome::XBetter: return "better";
        case TestOutcome::Same: return "same";
        case TestOutcome::YBetter: return "worse";
    }
    return "?";
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Win: return "win";
        case Verdict::Tie: return "tie";
        case Verdict::Lose: return "lose";
    }
    return "?";
}

namespace {

struct PooledRanks {
    std::vector<long> doubled;  // 2 * midrank, pooled order: x then y
    double tie_term = 0.0;      // sum of t^3 - t over tie groups
};

PooledRanks pooled_ranks(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size() + y.size();
    std::vector<double> v(x.begin(), x.end());
    v.insert(v.end(), y.begin(), y.end());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });

    PooledRanks r;
    r.doubled.assign(n, 0);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const long twice_rank = static_cast<long>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) r.doubled[order[k]] = twice_rank;
        const double t = static_cast<double>(j - i + 1);
        r.tie_term += t * t * t - t;
        i = j + 1;
    }
    return r;
}

void check_sizes(std::span<const double> x, std::span<const double> y) {
    if (x.size() < 5 || y.size() < 5)
        throw std::invalid_argument("rank-sum test needs at least 5 values per sample");
}

}  // namespace

RankSumResult rank_sum_normal(std::span<const double> x, std::span<const double> y) {
    check_sizes(x, y);
    const PooledRanks pr = pooled_ranks(x, y);
    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());
    const double total = n + m;

    long w2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) w2 += pr.doubled[i];
    RankSumResult res;
    res.rank_sum_x = 0.5 * static_cast<double>(w2);

    const double mu = n * (total + 1.0) / 2.0;
    const double var = n * m / 12.0 * ((total + 1.0) - pr.tie_term / (total * (total - 1.0)));
    if (!(var > 0.0)) return res;
    const double sd = std::sqrt(var);
    const double dev = std::max(0.0, std::abs(res.rank_sum_x - mu) - 0.5);
    res.z = std::copysign(dev / sd, res.rank_sum_x - mu);
    res.p_value = std::min(1.0, std::erfc(dev / sd / std::sqrt(2.0)));
    return res;
}

double rank_sum_exact_p(std::span<const double> x, std::span<const double> y) {
    const PooledRanks pr = pooled_ranks(x, y);
    const std::size_t n = x.size();
    const std::size_t total = pr.doubled.size();
    long max_sum = 0;
    for (long r : pr.doubled) max_sum += r;

    // ways[k][s]: number of k-subsets of the pooled ranks with doubled sum s.
    std::vector<std::vector<double>> ways(n + 1, std::vector<double>(max_sum + 1, 0.0));
    ways[0][0] = 1.0;
    for (std::size_t i = 0; i < total; ++i) {
        const long r = pr.doubled[i];
        for (std::size_t k = std::min(n, i + 1); k >= 1; --k)
            for (long s = max_sum; s >= r; --s) ways[k][s] += ways[k - 1][s - r];
    }

    long observed = 0;
    for (std::size_t i = 0; i < n; ++i) observed += pr.doubled[i];
    // Sums are doubled ranks, so the doubled mean n(N+1) stays integral.
    const long centre = static_cast<long>(n * (total + 1));
    const long obs_dev = std::labs(observed - centre);
    double extreme = 0.0;
    double all = 0.0;
    for (long s = 0; s <= max_sum; ++s) {
        const double c = ways[n][s];
        if (c == 0.0) continue;
        all += c;
        if (std::labs(s - centre) >= obs_dev) extreme += c;
    }
    return extreme / all;
}

TestOutcome wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y, double alpha) {
    const RankSumResult r = rank_sum_normal(x, y);
    if (r.p_value >= alpha) return TestOutcome::Same;
    const double mu = static_cast<double>(x.size()) * static_cast<double>(x.size() + y.size() + 1) / 2.0;
    return r.rank_sum_x < mu ? TestOutcome::XBetter : TestOutcome::YBetter;
}

Verdict verdict_from_outcomes(std::span<const TestOutcome> per_task) {
    bool any_better = false;
    for (TestOutcome o : per_task) {
        if (o == TestOutcome::YBetter) return Verdict::Lose;
        any_better = any_better || o == TestOutcome::XBetter;
    }
    return any_better ? Verdict::Win : Verdict::Tie;
}

ComparisonOutcome compare_instance(const TaskSamples& a, const TaskSamples& b, double alpha) {
    if (a.size() != b.size()) throw std::invalid_argument("compare_instance: task counts differ");
    ComparisonOutcome out;
    for (std::size_t k = 0; k < a.size(); ++k) out.per_task.push_back(wilcoxon_rank_sum(a[k], b[k], alpha));
    out.verdict = verdict_from_outcomes(out.per_task);
    return out;
}

namespace {

void check_matching(const ResultMatrix& a, const ResultMatrix& b) {
    if (a.size() != b.size()) throw std::invalid_argument("result matrices cover different instance sets");
    for (const auto& [id, samples] : a) {
        auto it = b.find(id);
        if (it == b.end()) throw std::invalid_argument("instance " + id + " missing from one result matrix");
        if (it->second.size() != samples.size())
            throw std::invalid_argument("instance " + id + ": task counts differ");
        for (std::size_t k = 0; k < samples.size(); ++k)
            if (samples[k].size() != it->second[k].size())
                throw std::invalid_argument("instance " + id + ": run counts differ");
    }
}

}  // namespace

WtlCount wtl_count(const ResultMatrix& target, const ResultMatrix& baseline, double alpha) {
    check_matching(target, baseline);
    WtlCount c;
    for (const auto& [id, samples] : target) {
        switch (compare_instance(samples, baseline.at(id), alpha).verdict) {
            case Verdict::Win: ++c.wins; break;
            case Verdict::Tie: ++c.ties; break;
            case Verdict::Lose: ++c.losses; break;
        }
    }
    return c;
}

std::vector<WtlCount> wtl_table(const ResultMatrix& target, std::span<const ResultMatrix> baselines,
                                double alpha) {
    std::vector<WtlCount> out;
    for (const auto& b : baselines) out.push_back(wtl_count(target, b, alpha));
    return out;
}

double positive_transfer_rate(const ResultMatrix& emt, const ResultMatrix& stde, double alpha) {
    if (emt.empty()) return 0.0;
    const WtlCount c = wtl_count(emt, stde, alpha);
    return static_cast<double>(c.wins) / static_cast<double>(emt.size());
}

double mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_std(std::span<const double> v) {
    if (v.empty()) return 0.0;
    const double mu = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return std::sqrt(s / static_cast<double>(v.size()));
}

std::vector<MssEntry> mean_standard_score(const std::vector<std::string>& names,
                                          std::span<const ResultMatrix> results) {
    if (results.size() < 2) throw std::invalid_argument("mean standard score needs at least two algorithms");
    if (names.size() != results.size()) throw std::invalid_argument("one name per algorithm required");
    for (std::size_t a = 1; a < results.size(); ++a) check_matching(results[0], results[a]);

    const std::size_t algs = results.size();
    std::vector<double> total(algs, 0.0);
    std::size_t cells = 0;
    std::vector<double> means(algs);
    for (const auto& [id, samples] : results[0]) {
        for (std::size_t k = 0; k < samples.size(); ++k) {
            for (std::size_t a = 0; a < algs; ++a) means[a] = mean(results[a].at(id)[k]);
            const double mu = mean(means);
            const double sd = population_std(means);
            if (sd > 0.0)
                for (std::size_t a = 0; a < algs; ++a) total[a] += (means[a] - mu) / sd;
            ++cells;
        }
    }
    std::vector<MssEntry> out;
    for (std::size_t a = 0; a < algs; ++a)
        out.push_back({names[a], cells ? total[a] / static_cast<double>(cells) : 0.0});
    std::stable_sort(out.begin(), out.end(), [](const MssEntry& l, const MssEntry& r) { return l.mss < r.mss; });
    return out;
}

}  // namespace l2t
