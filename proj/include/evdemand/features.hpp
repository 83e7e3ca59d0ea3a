#pragma once

#include "evdemand/charging.hpp"
#include "evdemand/matrix.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace evdemand {

enum class Target { Label, TEnd, SocReq };

const char* target_name(Target t);
Target target_from_string(const std::string& name);

// Model inputs: one row per retained trip.
struct FeatureRow {
    std::int64_t vehicle_id = 0;
    double t_start = 0.0;
    double soc_dep = 0.0;
    double origin_lat = 0.0;
    double origin_lon = 0.0;
};

struct TargetRow {
    int label = 0;       // 1..n+1
    double t_end = 0.0;
    double soc_req = 0.0;
};

struct DataRow {
    FeatureRow x;
    TargetRow y;
};

// Keeps only trips from vehicle-days that contain at least one charging
// event (soc_req > 0 on some trip of the day).
std::vector<DataRow> build_dataset(std::span<const LabeledTrip> labeled);

struct SplitDataset {
    std::vector<DataRow> rows;
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
    std::uint64_t seed = 0;
    double test_frac = 0.25;
    bool stratified = false;
};

// Seeded uniform shuffle; the first round-half-up(test_frac*N) indices form
// the test set. With stratify the rounding applies per label group.
SplitDataset train_test_split(std::vector<DataRow> rows, double test_frac,
                              std::uint64_t seed, bool stratify = false);

// Carves a validation set out of split.train_idx (same rounding rule, seeded
// from seed+1 so it never mirrors the test shuffle). Returns
// (new_train, validation).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
carve_validation(const SplitDataset& split, double validation_frac);

// Column z-scoring with population stddev; zero-variance columns map to 0.
struct Scaler {
    std::vector<double> mean;
    std::vector<double> stddev;
};

Scaler fit_scaler(const Matrix& train);
Matrix apply_scaler(const Scaler& s, const Matrix& m);
void apply_scaler_row(const Scaler& s, std::span<double> row);

// KNN feature encoding: one-hot vehicle block (vocabulary from the training
// rows; unseen vehicles encode to all zeros) followed by the standardized
// numeric block [t_start, soc_dep, origin_lat, origin_lon (, label)]. The
// label column exists only for the soc_req regressor.
struct KnnEncoder {
    std::vector<std::int64_t> vehicle_vocab;  // sorted, unique
    Scaler scaler;                            // over the numeric block
    bool include_label = false;

    std::size_t dim() const {
        return vehicle_vocab.size() + 4 + (include_label ? 1 : 0);
    }
};

KnnEncoder fit_knn_encoder(std::span<const DataRow> rows,
                           std::span<const std::size_t> idx, bool include_label);
Matrix knn_encode(const KnnEncoder& enc, std::span<const DataRow> rows,
                  std::span<const std::size_t> idx);
std::vector<double> knn_encode_row(const KnnEncoder& enc, const FeatureRow& x,
                                   std::optional<int> label);

// Tree feature encoding: raw columns [vehicle_id, t_start, soc_dep,
// origin_lat, origin_lon (, label)] — trees are scale-invariant and split
// vehicle_id directly.
Matrix tree_encode(std::span<const DataRow> rows, std::span<const std::size_t> idx,
                   bool include_label);
std::vector<double> tree_encode_row(const FeatureRow& x, std::optional<int> label);

std::vector<int> label_targets(std::span<const DataRow> rows,
                               std::span<const std::size_t> idx);
std::vector<double> numeric_targets(std::span<const DataRow> rows,
                                    std::span<const std::size_t> idx, Target target);

// Indices (into rows) restricted to charging trips (label <= zone_count);
// soc_req models train and evaluate only on these.
std::vector<std::size_t> charging_only(std::span<const DataRow> rows,
                                       std::span<const std::size_t> idx,
                                       int zone_count);

// CSV layout: vehicle_id, t_start, soc_dep, origin_lat, origin_lon, label,
// t_end, soc_req. parse(serialize(rows)) == rows.
std::string dataset_to_csv(std::span<const DataRow> rows);
std::vector<DataRow> dataset_from_csv(const std::string& text);

// Split audit file (JSON): seed, test_frac, stratified, train/test indices.
std::string split_to_json(const SplitDataset& split);

} // namespace evdemand
