#include "l2t/problem_suite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "l2t/errors.hpp"

namespace l2t {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Weierstrass expansion parameters.
constexpr double kWeierA = 0.5;
constexpr double kWeierB = 3.0;
constexpr int kWeierKMax = 20;

double schwefel_term(double z) { return z * std::sin(std::sqrt(std::abs(z))); }

// Maximizer of z*sin(sqrt(z)) on [0, 500], refined by Newton on the
// derivative sin(s) + s/2 cos(s) with s = sqrt(z).
double schwefel_optimum() {
    double s = std::sqrt(420.968746);
    for (int it = 0; it < 50; ++it) {
        const double g = std::sin(s) + 0.5 * s * std::cos(s);
        const double dg = 1.5 * std::cos(s) - 0.5 * s * std::sin(s);
        const double step = g / dg;
        s -= step;
        if (std::abs(step) < 1e-15) break;
    }
    return s * s;
}

const double kSchwefelOpt = schwefel_optimum();
const double kSchwefelPeak = schwefel_term(kSchwefelOpt);

double sphere(std::span<const double> z) {
    double s = 0.0;
    for (double v : z) s += v * v;
    return s;
}

double rosenbrock(std::span<const double> z) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        const double a = z[i + 1] - z[i] * z[i];
        const double b = z[i] - 1.0;
        s += 100.0 * a * a + b * b;
    }
    return s;
}

double ackley(std::span<const double> z) {
    const double n = static_cast<double>(z.size());
    double sq = 0.0;
    double cs = 0.0;
    for (double v : z) {
        sq += v * v;
        cs += std::cos(kTwoPi * v);
    }
    const double e1 = std::exp(-0.2 * std::sqrt(sq / n));
    const double e2 = std::exp(cs / n);
    // Grouped so that the optimum evaluates to exactly 0.
    return 20.0 * (1.0 - e1) + (std::numbers::e - e2);
}

double griewank(std::span<const double> z) {
    double s = 0.0;
    double p = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        s += z[i] * z[i];
        p *= std::cos(z[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return (1.0 - p) + s / 4000.0;
}

double rastrigin(std::span<const double> z) {
    double s = 0.0;
    for (double v : z) s += v * v - 10.0 * std::cos(kTwoPi * v) + 10.0;
    return s;
}

double weierstrass(std::span<const double> z) {
    double s = 0.0;
    for (double v : z) {
        double ak = 1.0;
        double bk = 1.0;
        for (int k = 0; k <= kWeierKMax; ++k) {
            s += ak * (std::cos(kTwoPi * bk * (v + 0.5)) - std::cos(std::numbers::pi * bk));
            ak *= kWeierA;
            bk *= kWeierB;
        }
    }
    return s;
}

double schwefel(std::span<const double> z) {
    const Bounds b = natural_domain(FunctionId::Schwefel);
    double s = 0.0;
    for (double v : z) s += kSchwefelPeak - schwefel_term(std::clamp(v, b.lower, b.upper));
    return s;
}

}  // namespace

std::string_view function_name(FunctionId id) {
    switch (id) {
        case FunctionId::Sphere: return "sphere";
        case FunctionId::Rosenbrock: return "rosenbrock";
        case FunctionId::Ackley: return "ackley";
        case FunctionId::Griewank: return "griewank";
        case FunctionId::Rastrigin: return "rastrigin";
        case FunctionId::Weierstrass: return "weierstrass";
        case FunctionId::Schwefel: return "schwefel";
    }
    return "unknown";
}

FunctionId parse_function(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (FunctionId id : kAllFunctions)
        if (function_name(id) == lower) return id;
    throw ConfigError("unknown benchmark function '" + std::string(name) + "'");
}

Bounds natural_domain(FunctionId id) {
    switch (id) {
        case FunctionId::Sphere: return {-100.0, 100.0};
        case FunctionId::Rosenbrock: return {-50.0, 50.0};
        case FunctionId::Ackley: return {-50.0, 50.0};
        case FunctionId::Griewank: return {-100.0, 100.0};
        case FunctionId::Rastrigin: return {-50.0, 50.0};
        case FunctionId::Weierstrass: return {-0.5, 0.5};
        case FunctionId::Schwefel: return {-500.0, 500.0};
    }
    return {0.0, 1.0};
}

double natural_optimum(FunctionId id) {
    switch (id) {
        case FunctionId::Rosenbrock: return 1.0;
        case FunctionId::Schwefel: return kSchwefelOpt;
        default: return 0.0;
    }
}

double base_function(FunctionId id, std::span<const double> z) {
    switch (id) {
        case FunctionId::Sphere: return sphere(z);
        case FunctionId::Rosenbrock: return rosenbrock(z);
        case FunctionId::Ackley: return ackley(z);
        case FunctionId::Griewank: return griewank(z);
        case FunctionId::Rastrigin: return rastrigin(z);
        case FunctionId::Weierstrass: return weierstrass(z);
        case FunctionId::Schwefel: return schwefel(z);
    }
    return 0.0;
}

double decode(FunctionId id, double u) {
    const Bounds b = natural_domain(id);
    return b.lower + (b.upper - b.lower) * u;
}

double evaluate_task(const TaskDef& task, std::span<const double> x) {
    const std::size_t d = task.dim();
    if (x.size() != d)
        throw std::invalid_argument("evaluate_task: expected " + std::to_string(d) +
                                    " components, got " + std::to_string(x.size()));
    // Stack buffer for the usual small dimensions.
    double local[64];
    std::vector<double> heap;
    double* z = local;
    if (d > 64) {
        heap.resize(d);
        z = heap.data();
    }
    const double offset = natural_optimum(task.function);
    for (std::size_t i = 0; i < d; ++i) {
        if (!(x[i] >= 0.0 && x[i] <= 1.0))
            throw std::invalid_argument("evaluate_task: component " + std::to_string(i) +
                                        " outside [0,1]");
        z[i] = decode(task.function, x[i]) - decode(task.function, task.shift[i]) + offset;
    }
    return base_function(task.function, {z, d}) + task.f_star;
}

void ProblemSetSpec::validate() const {
    if (name.empty() || name.find_first_of(",\n\r\"") != std::string::npos)
        throw ConfigError("problem set name must be non-empty without commas, quotes or newlines");
    if (functions.empty()) throw ConfigError("problem set '" + name + "': functions is empty");
    if (dim == 0) throw ConfigError("problem set '" + name + "': dim must be positive");
    if (num_tasks < 2) throw ConfigError("problem set '" + name + "': num_tasks must be >= 2");
    if (instance_count == 0)
        throw ConfigError("problem set '" + name + "': instance_count must be >= 1");
    if (const auto* r = std::get_if<RangeDistribution>(&distribution)) {
        if (!(r->radius >= 0.0 && r->radius <= 0.5))
            throw ConfigError("problem set '" + name + "': range radius must be in [0, 0.5]");
    } else {
        const auto& c = std::get<ClusterDistribution>(distribution);
        if (c.count == 0) throw ConfigError("problem set '" + name + "': cluster count must be >= 1");
        if (!(c.cluster_radius >= 0.0))
            throw ConfigError("problem set '" + name + "': cluster_radius must be >= 0");
    }
}

ProblemSetSpec preset_spec(std::string_view name, std::vector<FunctionId> functions,
                           std::size_t dim, std::uint64_t seed) {
    ProblemSetSpec spec;
    spec.name = std::string(name);
    spec.functions = std::move(functions);
    spec.dim = dim;
    spec.seed = seed;
    if (name == "VS") spec.distribution = RangeDistribution{0.01};
    else if (name == "S") spec.distribution = RangeDistribution{0.05};
    else if (name == "M") spec.distribution = RangeDistribution{0.1};
    else if (name == "L") spec.distribution = RangeDistribution{0.25};
    else if (name == "VL") spec.distribution = RangeDistribution{0.5};
    else if (name.size() == 2 && name[0] == 'C' && name[1] >= '1' && name[1] <= '5')
        spec.distribution = ClusterDistribution{static_cast<std::size_t>(name[1] - '0'), 0.03, seed};
    else
        throw ConfigError("unknown problem-set preset '" + std::string(name) + "'");
    return spec;
}

std::vector<std::vector<double>> cluster_centers(const ClusterDistribution& c, std::size_t dim) {
    Rng rng(c.center_seed);
    std::vector<std::vector<double>> centers(c.count, std::vector<double>(dim));
    for (auto& center : centers)
        for (double& v : center) v = rng.uniform(0.1, 0.9);
    return centers;
}

namespace {

std::vector<double> sample_with_centers(const ProblemSetSpec& spec,
                                        const std::vector<std::vector<double>>& centers,
                                        Rng& rng) {
    std::vector<double> shift(spec.dim);
    if (const auto* r = std::get_if<RangeDistribution>(&spec.distribution)) {
        for (double& v : shift) v = rng.uniform(0.5 - r->radius, 0.5 + r->radius);
    } else {
        const auto& c = std::get<ClusterDistribution>(spec.distribution);
        const auto& center = centers[rng.below(centers.size())];
        for (std::size_t i = 0; i < spec.dim; ++i)
            shift[i] = std::clamp(
                rng.uniform(center[i] - c.cluster_radius, center[i] + c.cluster_radius), 0.0, 1.0);
    }
    return shift;
}

}  // namespace

std::vector<double> sample_optimum(const ProblemSetSpec& spec, Rng& rng) {
    spec.validate();
    std::vector<std::vector<double>> centers;
    if (const auto* c = std::get_if<ClusterDistribution>(&spec.distribution))
        centers = cluster_centers(*c, spec.dim);
    return sample_with_centers(spec, centers, rng);
}

std::vector<MtopInstance> make_problem_set(const ProblemSetSpec& spec) {
    spec.validate();
    std::vector<std::vector<double>> centers;
    if (const auto* c = std::get_if<ClusterDistribution>(&spec.distribution))
        centers = cluster_centers(*c, spec.dim);

    Rng rng(spec.seed);
    std::vector<MtopInstance> out;
    out.reserve(spec.instance_count);
    for (std::size_t i = 0; i < spec.instance_count; ++i) {
        MtopInstance inst;
        inst.instance_id = spec.name + "-" + std::to_string(i);
        for (std::size_t k = 0; k < spec.num_tasks; ++k) {
            TaskDef task;
            task.function = spec.functions[rng.below(spec.functions.size())];
            task.shift = sample_with_centers(spec, centers, rng);
            task.f_star = 0.0;
            inst.tasks.push_back(std::move(task));
        }
        out.push_back(std::move(inst));
    }
    return out;
}

Matrix latin_hypercube(std::size_t n, std::size_t d, Rng& rng) {
    Matrix m(n, d);
    std::vector<std::size_t> perm(n);
    const double nd = static_cast<double>(n);
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
        for (std::size_t r = 0; r < n; ++r) {
            const double j = static_cast<double>(perm[r]);
            // (j + u) / n can round up onto the next stratum boundary.
            const double upper = std::nextafter((j + 1.0) / nd, 0.0);
            m(r, c) = std::min((j + rng.uniform()) / nd, upper);
        }
    }
    return m;
}

}  // namespace l2t
