#pragma once

#include <vector>

#include "l2t/de_solver.hpp"
#include "l2t/problem_suite.hpp"
#include "l2t/rng.hpp"

namespace l2t::testing {

inline Matrix random_population(std::size_t n, std::size_t d, Rng& rng) {
    Matrix m(n, d);
    for (double& v : m.flat()) v = rng.uniform();
    return m;
}

inline std::vector<TaskState> random_tasks(std::size_t k, std::size_t n, std::size_t d, Rng& rng) {
    std::vector<TaskState> tasks;
    for (std::size_t t = 0; t < k; ++t) {
        std::vector<double> fit(n);
        for (double& f : fit) f = rng.uniform(0.0, 100.0);
        tasks.push_back(make_task_state(random_population(n, d, rng), std::move(fit)));
    }
    return tasks;
}

inline MtopInstance two_task_instance(FunctionId f0, FunctionId f1, std::size_t d, double s0 = 0.5,
                                      double s1 = 0.5) {
    return {"test-0", {{f0, std::vector<double>(d, s0), 0.0}, {f1, std::vector<double>(d, s1), 0.0}}};
}

}  // namespace l2t::testing
