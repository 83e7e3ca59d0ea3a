#include "evdemand/models/forest.hpp"

#include "evdemand/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace evdemand {

int auto_mtry(std::size_t n_features, Task task) {
    double d = static_cast<double>(n_features);
    double m = task == Task::Classify ? std::ceil(std::sqrt(d)) : std::ceil(d / 3.0);
    return std::max(1, static_cast<int>(m));
}

namespace {

RandomForest fit_impl(const Matrix& x, std::span<const int> labels,
                      std::span<const double> values, Task task,
                      const ForestParams& params) {
    std::size_t n_targets = task == Task::Classify ? labels.size() : values.size();
    if (x.rows == 0) throw ModelError("rf_fit: empty training set");
    if (x.rows != n_targets) throw ModelError("rf_fit: target length mismatch");
    if (params.n_trees < 1) throw ModelError("rf_fit: n_trees must be >= 1");

    RandomForest forest;
    forest.task = task;
    forest.n_trees = params.n_trees;
    forest.max_depth = params.max_depth;
    forest.min_leaf = params.min_leaf;
    forest.mtry = params.mtry > 0 ? params.mtry : auto_mtry(x.cols, task);
    forest.base_seed = params.base_seed;
    forest.bootstrap = params.bootstrap;
    forest.trees.resize(static_cast<std::size_t>(params.n_trees));

    auto fit_tree = [&](std::size_t i) {
        Rng rng(forest.base_seed + i);
        TreeFitParams tp{params.max_depth, params.min_leaf, forest.mtry};
        if (!forest.bootstrap) {
            forest.trees[i] = dt_fit_ex(x, labels, values, task, tp, &rng);
            return;
        }
        const std::size_t n = x.rows;
        Matrix bx(n, x.cols);
        std::vector<int> bl;
        std::vector<double> bv;
        if (task == Task::Classify) bl.resize(n);
        else bv.resize(n);
        for (std::size_t r = 0; r < n; ++r) {
            std::size_t j = rng.below(n);
            std::copy(x.row(j).begin(), x.row(j).end(), bx.row(r).begin());
            if (task == Task::Classify) bl[r] = labels[j];
            else bv[r] = values[j];
        }
        forest.trees[i] = dt_fit_ex(bx, bl, bv, task, tp, &rng);
    };

    std::size_t n_threads = params.n_threads > 0
                                ? static_cast<std::size_t>(params.n_threads)
                                : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<std::size_t>(n_threads, forest.trees.size());
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < forest.trees.size(); ++i) fit_tree(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < forest.trees.size();
                     i = next.fetch_add(1))
                    fit_tree(i);
            });
        }
        for (auto& w : workers) w.join();
    }
    return forest;
}

} // namespace

RandomForest rf_fit(const Matrix& x, std::span<const int> labels, const ForestParams& params) {
    return fit_impl(x, labels, {}, Task::Classify, params);
}

RandomForest rf_fit(const Matrix& x, std::span<const double> values, const ForestParams& params) {
    return fit_impl(x, {}, values, Task::Regress, params);
}

int rf_predict_label(const RandomForest& forest, std::span<const double> x) {
    if (forest.task != Task::Classify) throw ModelError("rf_predict_label: regression forest");
    if (forest.trees.empty()) throw ModelError("rf_predict_label: empty forest");
    std::vector<int> votes;
    votes.reserve(forest.trees.size());
    for (const DecisionTree& t : forest.trees) votes.push_back(dt_predict_label(t, x));
    return majority_label(votes);
}

double rf_predict_value(const RandomForest& forest, std::span<const double> x) {
    if (forest.task != Task::Regress) throw ModelError("rf_predict_value: classification forest");
    if (forest.trees.empty()) throw ModelError("rf_predict_value: empty forest");
    double sum = 0.0;
    for (const DecisionTree& t : forest.trees) sum += dt_predict_value(t, x);
    return sum / static_cast<double>(forest.trees.size());
}

} // namespace evdemand
