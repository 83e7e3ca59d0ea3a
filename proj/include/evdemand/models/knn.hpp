#pragma once

#include "evdemand/matrix.hpp"
#include "evdemand/models/common.hpp"

#include <span>
#include <vector>

namespace evdemand {

// Brute-force k-nearest-neighbors over a stored (already standardized)
// feature matrix. Euclidean metric; neighbors with equal distance are taken
// in training-row order.
struct KnnModel {
    Matrix train;
    std::vector<int> labels;    // Classify
    std::vector<double> values; // Regress
    int k = 1;
    Task task = Task::Classify;
};

KnnModel knn_fit(Matrix train, std::vector<int> labels, int k);
KnnModel knn_fit(Matrix train, std::vector<double> values, int k);

// Classify: majority vote among the k nearest (ties -> smallest label).
int knn_predict_label(const KnnModel& model, std::span<const double> query);
// Regress: mean target of the k nearest.
double knn_predict_value(const KnnModel& model, std::span<const double> query);

} // namespace evdemand
