#pragma once

#include "evdemand/models/tree.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace evdemand {

// Bagged CART ensemble. Tree i draws its bootstrap sample and per-split
// feature subsets from an RNG derived only from base_seed + i, so fitting is
// schedule-independent: any thread count yields bit-identical trees.
struct RandomForest {
    Task task = Task::Classify;
    int n_trees = 0;
    int max_depth = 0;
    int min_leaf = 1;
    int mtry = 0; // features considered per split; 0 = all
    std::uint64_t base_seed = 0;
    bool bootstrap = true;
    std::vector<DecisionTree> trees;
};

struct ForestParams {
    int n_trees = 100;
    int max_depth = 8;
    int min_leaf = 1;
    int mtry = 0; // 0 = auto: ceil(sqrt(d)) classify, ceil(d/3) regress
    std::uint64_t base_seed = 0;
    bool bootstrap = true;
    int n_threads = 0; // 0 = hardware concurrency
};

int auto_mtry(std::size_t n_features, Task task);

RandomForest rf_fit(const Matrix& x, std::span<const int> labels, const ForestParams& params);
RandomForest rf_fit(const Matrix& x, std::span<const double> values, const ForestParams& params);

// Classify: majority vote over trees (ties -> smallest label).
int rf_predict_label(const RandomForest& forest, std::span<const double> x);
// Regress: mean of tree outputs, accumulated in tree order.
double rf_predict_value(const RandomForest& forest, std::span<const double> x);

} // namespace evdemand
