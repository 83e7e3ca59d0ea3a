#include "evdemand/models/knn.hpp"

#include "evdemand/errors.hpp"

#include <algorithm>
#include <utility>

namespace evdemand {

namespace {

void check_fit(const Matrix& train, std::size_t n_targets, int k) {
    if (train.rows == 0) throw ModelError("knn_fit: empty training set");
    if (train.rows != n_targets) throw ModelError("knn_fit: target length mismatch");
    if (k < 1) throw ModelError("knn_fit: k must be >= 1");
    if (static_cast<std::size_t>(k) > train.rows)
        throw ModelError("knn_fit: k exceeds training size");
}

// Indices of the k nearest rows, ordered by (distance, row index).
std::vector<std::size_t> nearest(const KnnModel& model, std::span<const double> query) {
    if (query.size() != model.train.cols)
        throw ModelError("knn_predict: query dimension mismatch");
    std::vector<std::pair<double, std::size_t>> dist(model.train.rows);
    for (std::size_t r = 0; r < model.train.rows; ++r) {
        auto row = model.train.row(r);
        double s = 0.0;
        for (std::size_t c = 0; c < row.size(); ++c) {
            double d = row[c] - query[c];
            s += d * d;
        }
        dist[r] = {s, r};
    }
    std::size_t k = static_cast<std::size_t>(model.k);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                      dist.end()); // pair ordering = (distance, index)
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = dist[i].second;
    return idx;
}

} // namespace

KnnModel knn_fit(Matrix train, std::vector<int> labels, int k) {
    check_fit(train, labels.size(), k);
    KnnModel m;
    m.train = std::move(train);
    m.labels = std::move(labels);
    m.k = k;
    m.task = Task::Classify;
    return m;
}

KnnModel knn_fit(Matrix train, std::vector<double> values, int k) {
    check_fit(train, values.size(), k);
    KnnModel m;
    m.train = std::move(train);
    m.values = std::move(values);
    m.k = k;
    m.task = Task::Regress;
    return m;
}

int knn_predict_label(const KnnModel& model, std::span<const double> query) {
    if (model.task != Task::Classify) throw ModelError("knn_predict_label: regression model");
    std::vector<int> votes;
    for (std::size_t i : nearest(model, query)) votes.push_back(model.labels[i]);
    return majority_label(votes);
}

double knn_predict_value(const KnnModel& model, std::span<const double> query) {
    if (model.task != Task::Regress) throw ModelError("knn_predict_value: classification model");
    double sum = 0.0;
    for (std::size_t i : nearest(model, query)) sum += model.values[i];
    return sum / static_cast<double>(model.k);
}

} // namespace evdemand
