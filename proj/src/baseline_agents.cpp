#include "l2t/baseline_agents.hpp"

#include <charconv>
#include <cstdio>

#include "l2t/errors.hpp"

namespace l2t {

namespace {

double parse_component(std::string_view s, std::string_view whole) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || !(v >= 0.0 && v <= 1.0))
        throw ConfigError("policy '" + std::string(whole) +
                          "': fixed action components must be numbers in [0,1]");
    return v;
}

}  // namespace

Policy parse_policy(std::string_view text) {
    if (text == "random") return RandomPolicy{};
    if (text == "single") return SingleTaskPolicy{};
    if (text.starts_with("fixed:")) {
        std::string_view rest = text.substr(6);
        double a[3];
        for (int i = 0; i < 3; ++i) {
            const auto comma = rest.find(',');
            if ((i < 2) == (comma == std::string_view::npos))
                throw ConfigError("policy '" + std::string(text) + "': expected fixed:a1,a2,a3");
            a[i] = parse_component(rest.substr(0, comma), text);
            if (i < 2) rest = rest.substr(comma + 1);
        }
        return FixedPolicy{{a[0], a[1], a[2]}};
    }
    if (text.starts_with("learned:")) {
        const std::string path(text.substr(8));
        if (path.empty()) throw ConfigError("policy 'learned:' needs an agent file path");
        return LearnedPolicy{std::make_shared<const AgentParams>(load_agent(path)), false};
    }
    throw ConfigError("unknown policy '" + std::string(text) +
                      "' (expected fixed:a1,a2,a3 | random | single | learned:<path>)");
}

std::string policy_name(const Policy& policy) {
    struct Visitor {
        std::string operator()(const LearnedPolicy&) const { return "learned"; }
        std::string operator()(const FixedPolicy& p) const {
            char buf[96];
            std::snprintf(buf, sizeof buf, "fixed(%g,%g,%g)", p.action.a1, p.action.a2, p.action.a3);
            return buf;
        }
        std::string operator()(const RandomPolicy&) const { return "random"; }
        std::string operator()(const SingleTaskPolicy&) const { return "single"; }
    };
    return std::visit(Visitor{}, policy);
}

std::vector<double> policy_action(const Policy& policy, std::span<const double> state,
                                  std::size_t num_tasks, Rng& rng) {
    std::vector<double> a(3 * num_tasks, 0.0);
    if (const auto* p = std::get_if<FixedPolicy>(&policy)) {
        for (std::size_t k = 0; k < num_tasks; ++k) {
            a[3 * k] = p->action.a1;
            a[3 * k + 1] = p->action.a2;
            a[3 * k + 2] = p->action.a3;
        }
    } else if (std::holds_alternative<RandomPolicy>(policy)) {
        for (double& v : a) v = rng.uniform();
    } else if (const auto* p = std::get_if<LearnedPolicy>(&policy)) {
        if (p->agent->action_dim() != a.size())
            throw ConfigError("learned policy action size does not match the number of tasks");
        a = sample_action(*p->agent, state, rng, !p->stochastic).clipped;
    }
    return a;
}

}  // namespace l2t
