#pragma once

#include "evdemand/matrix.hpp"
#include "evdemand/models/common.hpp"
#include "evdemand/rng.hpp"

#include <span>
#include <utility>
#include <vector>

namespace evdemand {

struct TreeNode {
    int feature = -1;  // split feature; -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    // Leaf payload; class_counts only for Classify, value only for Regress.
    std::vector<std::pair<int, int>> class_counts; // (label, count), ascending label
    double value = 0.0;
    int n = 0; // training rows reaching the node

    bool is_leaf() const { return feature < 0; }
};

// Greedy CART. Split criterion: Gini impurity decrease (Classify) or variance
// reduction (Regress). Candidate thresholds are midpoints between consecutive
// distinct sorted values; the maximal-gain split wins with ties broken by
// lower feature index, then lower threshold. Zero-gain splits are taken:
// recursion stops only at max_depth, node purity, or the min_leaf floor.
struct DecisionTree {
    Task task = Task::Classify;
    int max_depth = 0;
    int min_leaf = 1;
    std::vector<TreeNode> nodes; // nodes[0] is the root
};

DecisionTree dt_fit(const Matrix& x, std::span<const int> labels, int max_depth,
                    int min_leaf = 1);
DecisionTree dt_fit(const Matrix& x, std::span<const double> values, int max_depth,
                    int min_leaf = 1);

// Forest building block: optional per-split feature subsampling (mtry > 0
// draws that many distinct features from rng; 0 considers all).
struct TreeFitParams {
    int max_depth = 8;
    int min_leaf = 1;
    int mtry = 0;
};

DecisionTree dt_fit_ex(const Matrix& x, std::span<const int> labels,
                       std::span<const double> values, Task task,
                       const TreeFitParams& params, Rng* rng);

int dt_predict_label(const DecisionTree& tree, std::span<const double> x);
double dt_predict_value(const DecisionTree& tree, std::span<const double> x);

int dt_depth(const DecisionTree& tree);

} // namespace evdemand
