#pragma once

#include <span>
#include <string>

namespace evdemand {

enum class Task { Classify, Regress };

const char* task_name(Task t);
Task task_from_string(const std::string& name);

// Majority vote; ties broken by the smallest label value.
int majority_label(std::span<const int> votes);

} // namespace evdemand
