#include "evdemand/models/common.hpp"

#include "evdemand/errors.hpp"

#include <map>

namespace evdemand {

const char* task_name(Task t) {
    return t == Task::Classify ? "classify" : "regress";
}

Task task_from_string(const std::string& name) {
    if (name == "classify") return Task::Classify;
    if (name == "regress") return Task::Regress;
    throw ConfigError("unknown task: " + name);
}

int majority_label(std::span<const int> votes) {
    if (votes.empty()) throw ModelError("majority_label: no votes");
    std::map<int, int> counts;
    for (int v : votes) ++counts[v];
    int best = counts.begin()->first;
    int best_n = counts.begin()->second;
    for (const auto& [label, n] : counts) {
        if (n > best_n) { // map iterates labels ascending, so ties keep the smaller
            best = label;
            best_n = n;
        }
    }
    return best;
}

} // namespace evdemand
