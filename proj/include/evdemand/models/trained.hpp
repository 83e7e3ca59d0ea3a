#pragma once

#include "evdemand/features.hpp"
#include "evdemand/models/forest.hpp"
#include "evdemand/models/knn.hpp"
#include "evdemand/models/tree.hpp"

#include <optional>
#include <span>
#include <string>

namespace evdemand {

enum class Family { Knn, Dt, Rf };

const char* family_name(Family f);
Family family_from_string(const std::string& name);

struct ModelHyper {
    int k = 10;        // Knn
    int depth = 8;     // Dt / Rf
    int min_leaf = 1;
    int n_trees = 100; // Rf
    int mtry = 0;      // Rf; 0 = auto
    std::uint64_t seed = 0;
};

// One tuned model bound to its target and feature encoding. soc_req models
// are trained only on charging rows (label <= zone_count) and take the zone
// label as an extra input feature.
struct TrainedModel {
    Family family = Family::Rf;
    Task task = Task::Classify;
    Target target = Target::Label;
    int zone_count = 9;
    bool include_label = false;
    ModelHyper hyper;

    std::optional<KnnEncoder> encoder; // Knn only
    std::optional<KnnModel> knn;
    std::optional<DecisionTree> tree;
    std::optional<RandomForest> forest;

    int predict_label(const FeatureRow& x) const;
    double predict_value(const FeatureRow& x, std::optional<int> label = std::nullopt) const;
};

TrainedModel train_model(Family family, Target target, std::span<const DataRow> rows,
                         std::span<const std::size_t> train_idx, const ModelHyper& hyper,
                         int zone_count);

// Versioned JSON persistence; save -> load -> save is byte-identical.
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

} // namespace evdemand
