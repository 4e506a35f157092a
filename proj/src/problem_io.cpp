#include "l2t/problem_io.hpp"

#include "l2t/errors.hpp"

namespace l2t {

ProblemSetSpec spec_from_json(const Json& j, const std::string& context) {
    reject_unknown_keys(j, {"name", "functions", "dim", "num_tasks", "distribution",
                            "instance_count", "seed"},
                        context);
    ProblemSetSpec spec;
    spec.name = get_field<std::string>(j, "name", context);
    for (const auto& f : get_field<std::vector<std::string>>(j, "functions", context)) {
        try {
            spec.functions.push_back(parse_function(f));
        } catch (const ConfigError& e) {
            throw FormatError(context + ": field \"functions\": " + e.what());
        }
    }
    spec.dim = get_field<std::size_t>(j, "dim", context);
    spec.num_tasks = get_field<std::size_t>(j, "num_tasks", context);
    spec.instance_count = get_field<std::size_t>(j, "instance_count", context);
    spec.seed = get_field<std::uint64_t>(j, "seed", context);

    const Json& dist = require_key(j, "distribution", context);
    const std::string dctx = context + ".distribution";
    const auto type = get_field<std::string>(dist, "type", dctx);
    if (type == "range") {
        reject_unknown_keys(dist, {"type", "radius"}, dctx);
        spec.distribution = RangeDistribution{get_field<double>(dist, "radius", dctx)};
    } else if (type == "clusters") {
        reject_unknown_keys(dist, {"type", "count", "cluster_radius", "center_seed"}, dctx);
        ClusterDistribution c;
        c.count = get_field<std::size_t>(dist, "count", dctx);
        c.cluster_radius = dist.contains("cluster_radius")
                               ? get_field<double>(dist, "cluster_radius", dctx)
                               : 0.03;
        c.center_seed = dist.contains("center_seed")
                            ? get_field<std::uint64_t>(dist, "center_seed", dctx)
                            : spec.seed;
        spec.distribution = c;
    } else {
        throw FormatError(dctx + ": field \"type\" must be \"range\" or \"clusters\"");
    }
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        throw FormatError(context + ": " + e.what());
    }
    return spec;
}

Json spec_to_json(const ProblemSetSpec& spec) {
    Json j;
    j["name"] = spec.name;
    Json fns = Json::array();
    for (FunctionId f : spec.functions) fns.push_back(std::string(function_name(f)));
    j["functions"] = fns;
    j["dim"] = spec.dim;
    j["num_tasks"] = spec.num_tasks;
    j["instance_count"] = spec.instance_count;
    j["seed"] = spec.seed;
    if (const auto* r = std::get_if<RangeDistribution>(&spec.distribution)) {
        j["distribution"] = {{"type", "range"}, {"radius", r->radius}};
    } else {
        const auto& c = std::get<ClusterDistribution>(spec.distribution);
        j["distribution"] = {{"type", "clusters"},
                             {"count", c.count},
                             {"cluster_radius", c.cluster_radius},
                             {"center_seed", c.center_seed}};
    }
    return j;
}

Json problem_set_to_json(const ProblemSet& set) {
    Json j;
    j["spec"] = spec_to_json(set.spec);
    Json insts = Json::array();
    for (const auto& inst : set.instances) {
        Json ji;
        ji["instance_id"] = inst.instance_id;
        Json tasks = Json::array();
        for (const auto& t : inst.tasks)
            tasks.push_back({{"function", std::string(function_name(t.function))},
                             {"dim", t.dim()},
                             {"shift", t.shift},
                             {"f_star", t.f_star}});
        ji["tasks"] = tasks;
        insts.push_back(ji);
    }
    j["instances"] = insts;
    return j;
}

ProblemSet problem_set_from_json(const Json& j, const std::string& context) {
    ProblemSet set;
    set.spec = spec_from_json(require_key(j, "spec", context), context + ".spec");
    const Json& insts = require_key(j, "instances", context);
    if (!insts.is_array() || insts.empty())
        throw FormatError(context + ": field \"instances\" must be a non-empty array");
    for (std::size_t i = 0; i < insts.size(); ++i) {
        const std::string ictx = context + ".instances[" + std::to_string(i) + "]";
        MtopInstance inst;
        inst.instance_id = get_field<std::string>(insts[i], "instance_id", ictx);
        const Json& tasks = require_key(insts[i], "tasks", ictx);
        if (!tasks.is_array() || tasks.size() < 2)
            throw FormatError(ictx + ": field \"tasks\" must hold at least two tasks");
        for (std::size_t k = 0; k < tasks.size(); ++k) {
            const std::string tctx = ictx + ".tasks[" + std::to_string(k) + "]";
            TaskDef t;
            try {
                t.function = parse_function(get_field<std::string>(tasks[k], "function", tctx));
            } catch (const ConfigError& e) {
                throw FormatError(tctx + ": " + e.what());
            }
            t.shift = get_field<std::vector<double>>(tasks[k], "shift", tctx);
            t.f_star = get_field<double>(tasks[k], "f_star", tctx);
            if (get_field<std::size_t>(tasks[k], "dim", tctx) != t.shift.size())
                throw FormatError(tctx + ": field \"dim\" does not match shift length");
            for (double s : t.shift)
                if (!(s >= 0.0 && s <= 1.0))
                    throw FormatError(tctx + ": field \"shift\" has a component outside [0,1]");
            if (!inst.tasks.empty() && inst.tasks.front().dim() != t.dim())
                throw FormatError(tctx + ": tasks in one instance must share the dimension");
            inst.tasks.push_back(std::move(t));
        }
        set.instances.push_back(std::move(inst));
    }
    return set;
}

ProblemSet load_problem_set(const std::filesystem::path& path) {
    return problem_set_from_json(read_json_file(path), path.string());
}

}  // namespace l2t
