#pragma once

#include "evdemand/features.hpp"
#include "evdemand/models/trained.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace evdemand {

// Classification accuracy in percent.
double accuracy(std::span<const int> pred, std::span<const int> truth);
double rmse(std::span<const double> pred, std::span<const double> truth);

struct ConfusionMatrix {
    std::vector<int> labels; // sorted union of truth and predictions
    Matrix counts;           // rows = truth, cols = predicted
};

ConfusionMatrix confusion(std::span<const int> pred, std::span<const int> truth);
std::string confusion_to_csv(const ConfusionMatrix& cm);

struct EvalOptions {
    int zone_count = 9;
    int n_trees = 100;
    int min_leaf = 1;
    int mtry = 0;
    std::uint64_t model_seed = 0;
    // When set, sweep scoring moves from the test set (as published) to a
    // validation slice carved out of the training set.
    std::optional<double> validation_frac;
};

struct SweepPoint {
    int param = 0;
    double score = 0.0;
};

// Grid scores for one (family, target) pair. chosen maximizes accuracy
// (label) or minimizes RMSE (t_end, soc_req); ties go to the smallest
// parameter value.
struct SweepResult {
    Family family = Family::Knn;
    Target target = Target::Label;
    std::string param_name; // "k" or "depth"
    std::string metric;     // "accuracy" or "rmse"
    std::vector<SweepPoint> points; // grid order
    int chosen = 0;
    double chosen_score = 0.0;
};

SweepResult sweep(Family family, Target target, std::span<const int> grid,
                  const SplitDataset& split, const EvalOptions& opt);

struct SweepGrids {
    std::vector<int> knn_k = {3, 4, 5, 8, 10, 11};
    std::vector<int> dt_depth = {2, 4, 6, 8, 10, 12};
    std::vector<int> rf_depth = {4, 5, 6, 8, 10, 14, 18};
};

struct EvaluatedModel {
    SweepResult sweep;
    TrainedModel model;     // trained on the full train split at the chosen setting
    double test_score = 0.0;
};

// 3 families x 3 targets, families (knn, dt, rf) per target in order.
struct Evaluation {
    std::vector<EvaluatedModel> entries;

    const EvaluatedModel& best(Target target) const; // ties -> earlier family
};

Evaluation evaluate_all(const SweepGrids& grids, const SplitDataset& split,
                        const EvalOptions& opt);

// Batch prediction helpers. Regression targets use the rows' actual labels as
// the label feature where the model requires one.
std::vector<int> predict_labels(const TrainedModel& model, std::span<const DataRow> rows,
                                std::span<const std::size_t> idx);
std::vector<double> predict_values(const TrainedModel& model, std::span<const DataRow> rows,
                                   std::span<const std::size_t> idx);

std::string comparison_to_csv(const Evaluation& ev);
std::string comparison_to_json(const Evaluation& ev);

} // namespace evdemand
