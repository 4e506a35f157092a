#pragma once

#include <filesystem>
#include <vector>

#include "l2t/json_io.hpp"
#include "l2t/problem_suite.hpp"

namespace l2t {

// Problem-set spec file: keys exactly {name, functions, dim, num_tasks,
// distribution, instance_count, seed}.
ProblemSetSpec spec_from_json(const Json& j, const std::string& context = "problem spec");
Json spec_to_json(const ProblemSetSpec& spec);

struct ProblemSet {
    ProblemSetSpec spec;
    std::vector<MtopInstance> instances;
};

Json problem_set_to_json(const ProblemSet& set);
ProblemSet problem_set_from_json(const Json& j, const std::string& context = "problem set");

ProblemSet load_problem_set(const std::filesystem::path& path);

}  // namespace l2t
