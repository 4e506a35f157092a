#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "l2t/matrix.hpp"
#include "l2t/rng.hpp"

namespace l2t {

enum class FunctionId { Sphere, Rosenbrock, Ackley, Griewank, Rastrigin, Weierstrass, Schwefel };

inline constexpr FunctionId kAllFunctions[] = {
    FunctionId::Sphere,    FunctionId::Rosenbrock,  FunctionId::Ackley,  FunctionId::Griewank,
    FunctionId::Rastrigin, FunctionId::Weierstrass, FunctionId::Schwefel};

struct Bounds {
    double lower;
    double upper;
};

std::string_view function_name(FunctionId id);
FunctionId parse_function(std::string_view name);  // throws ConfigError

// Per-function box in which the base function is normally defined.
Bounds natural_domain(FunctionId id);

// Location of the unshifted minimum (same value in every coordinate).
double natural_optimum(FunctionId id);

// The unshifted base function in natural coordinates. Minimum 0.
double base_function(FunctionId id, std::span<const double> z);

struct TaskDef {
    FunctionId function = FunctionId::Sphere;
    std::vector<double> shift;  // unified-cube location of the optimum
    double f_star = 0.0;

    std::size_t dim() const { return shift.size(); }
};

// Maps a unified-cube point into the function's natural box.
double decode(FunctionId id, double u);

// Fitness of a unified-cube point x (minimization). Throws
// std::invalid_argument on dimension mismatch or x outside [0,1]^D.
double evaluate_task(const TaskDef& task, std::span<const double> x);

struct MtopInstance {
    std::string instance_id;
    std::vector<TaskDef> tasks;

    std::size_t num_tasks() const { return tasks.size(); }
    std::size_t dim() const { return tasks.empty() ? 0 : tasks.front().dim(); }
};

struct RangeDistribution {
    double radius = 0.05;
};

struct ClusterDistribution {
    std::size_t count = 1;
    double cluster_radius = 0.03;
    std::uint64_t center_seed = 0;
};

using OptimumDistribution = std::variant<RangeDistribution, ClusterDistribution>;

struct ProblemSetSpec {
    std::string name = "set";
    std::vector<FunctionId> functions;
    std::size_t dim = 10;
    std::size_t num_tasks = 2;
    OptimumDistribution distribution = RangeDistribution{};
    std::size_t instance_count = 100;
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError
};

// Named presets: VS, S, M, L, VL (range) and C1..C5 (clusters).
ProblemSetSpec preset_spec(std::string_view name, std::vector<FunctionId> functions,
                           std::size_t dim = 10, std::uint64_t seed = 0);

// Cluster centers for a Clusters distribution, drawn in [0.1, 0.9]^D.
std::vector<std::vector<double>> cluster_centers(const ClusterDistribution& c, std::size_t dim);

std::vector<double> sample_optimum(const ProblemSetSpec& spec, Rng& rng);

std::vector<MtopInstance> make_problem_set(const ProblemSetSpec& spec);

// n x d matrix, one point per row, one point per stratum [j/n, (j+1)/n)
// in every dimension.
Matrix latin_hypercube(std::size_t n, std::size_t d, Rng& rng);

}  // namespace l2t
