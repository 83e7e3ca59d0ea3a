#include "evdemand/models/tree.hpp"

#include "evdemand/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>

namespace evdemand {

namespace {

struct Candidate {
    bool found = false;
    double gain = -1.0;
    int feature = -1;
    double threshold = 0.0;
};

struct Fitter {
    const Matrix& x;
    std::span<const int> labels;
    std::span<const double> values;
    Task task;
    TreeFitParams params;
    Rng* rng;

    // Compact label indexing so count vectors are dense.
    std::vector<int> label_set;             // sorted distinct labels
    std::vector<int> compact;               // per row, index into label_set
    std::vector<TreeNode> nodes;

    void index_labels() {
        if (task != Task::Classify) return;
        label_set.assign(labels.begin(), labels.end());
        std::sort(label_set.begin(), label_set.end());
        label_set.erase(std::unique(label_set.begin(), label_set.end()), label_set.end());
        compact.resize(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i)
            compact[i] = static_cast<int>(
                std::lower_bound(label_set.begin(), label_set.end(), labels[i]) -
                label_set.begin());
    }

    std::vector<int> split_features() {
        int d = static_cast<int>(x.cols);
        if (params.mtry <= 0 || params.mtry >= d || rng == nullptr) {
            std::vector<int> all(static_cast<std::size_t>(d));
            for (int f = 0; f < d; ++f) all[static_cast<std::size_t>(f)] = f;
            return all;
        }
        // Partial Fisher-Yates draw of mtry distinct features, then sorted so
        // the lower-feature-index tie rule applies within the sample.
        std::vector<int> pool(static_cast<std::size_t>(d));
        for (int f = 0; f < d; ++f) pool[static_cast<std::size_t>(f)] = f;
        for (int i = 0; i < params.mtry; ++i) {
            std::size_t j = static_cast<std::size_t>(i) +
                            rng->below(static_cast<std::uint64_t>(d - i));
            std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        }
        pool.resize(static_cast<std::size_t>(params.mtry));
        std::sort(pool.begin(), pool.end());
        return pool;
    }

    bool pure(const std::vector<std::size_t>& idx) const {
        if (task == Task::Classify) {
            int first = compact[idx[0]];
            for (std::size_t i : idx)
                if (compact[i] != first) return false;
        } else {
            double first = values[idx[0]];
            for (std::size_t i : idx)
                if (values[i] != first) return false;
        }
        return true;
    }

    void fill_payload(TreeNode& node, const std::vector<std::size_t>& idx) const {
        node.n = static_cast<int>(idx.size());
        if (task == Task::Classify) {
            std::map<int, int> counts;
            for (std::size_t i : idx) ++counts[labels[i]];
            node.class_counts.assign(counts.begin(), counts.end());
        } else {
            double sum = 0.0;
            for (std::size_t i : idx) sum += values[i];
            node.value = sum / static_cast<double>(idx.size());
        }
    }

    // Best split over one feature; sorted sweep with incremental class counts
    // (Classify, exact integer arithmetic) or prefix sums (Regress).
    void scan_feature(int f, const std::vector<std::size_t>& idx, Candidate& best) const {
        const std::size_t n = idx.size();
        std::vector<std::pair<double, std::size_t>> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = {x.at(idx[i], static_cast<std::size_t>(f)), idx[i]};
        std::sort(order.begin(), order.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (order.front().first == order.back().first) return; // constant feature

        const std::size_t min_leaf = static_cast<std::size_t>(params.min_leaf);
        const double dn = static_cast<double>(n);

        if (task == Task::Classify) {
            std::vector<std::int64_t> left(label_set.size(), 0);
            std::vector<std::int64_t> total(label_set.size(), 0);
            for (std::size_t i = 0; i < n; ++i) ++total[static_cast<std::size_t>(compact[order[i].second])];
            std::int64_t sumsq_total = 0;
            for (std::int64_t c : total) sumsq_total += c * c;
            double gini_parent = 1.0 - static_cast<double>(sumsq_total) / (dn * dn);

            std::int64_t sumsq_left = 0;
            std::int64_t sumsq_right = sumsq_total;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                std::size_t ci = static_cast<std::size_t>(compact[order[i].second]);
                sumsq_left += 2 * left[ci] + 1;
                std::int64_t r = total[ci] - left[ci];
                sumsq_right -= 2 * r - 1;
                ++left[ci];
                if (order[i].first == order[i + 1].first) continue;
                std::size_t nl = i + 1, nr = n - nl;
                if (nl < min_leaf || nr < min_leaf) continue;
                double dl = static_cast<double>(nl), dr = static_cast<double>(nr);
                double gini_l = 1.0 - static_cast<double>(sumsq_left) / (dl * dl);
                double gini_r = 1.0 - static_cast<double>(sumsq_right) / (dr * dr);
                double gain = gini_parent - (dl * gini_l + dr * gini_r) / dn;
                if (!best.found || gain > best.gain) {
                    best.found = true;
                    best.gain = gain;
                    best.feature = f;
                    best.threshold = midpoint(order[i].first, order[i + 1].first);
                }
            }
        } else {
            double sum_total = 0.0, sumsq_total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double v = values[order[i].second];
                sum_total += v;
                sumsq_total += v * v;
            }
            auto sse = [](double sum, double sumsq, double cnt) {
                double s = sumsq - sum * sum / cnt;
                return s > 0.0 ? s : 0.0;
            };
            double sse_parent = sse(sum_total, sumsq_total, dn);

            double sum_l = 0.0, sumsq_l = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                double v = values[order[i].second];
                sum_l += v;
                sumsq_l += v * v;
                if (order[i].first == order[i + 1].first) continue;
                std::size_t nl = i + 1, nr = n - nl;
                if (nl < min_leaf || nr < min_leaf) continue;
                double gain = (sse_parent - sse(sum_l, sumsq_l, static_cast<double>(nl)) -
                               sse(sum_total - sum_l, sumsq_total - sumsq_l,
                                   static_cast<double>(nr))) /
                              dn;
                if (!best.found || gain > best.gain) {
                    best.found = true;
                    best.gain = gain;
                    best.feature = f;
                    best.threshold = midpoint(order[i].first, order[i + 1].first);
                }
            }
        }
    }

    // Midpoint guarded so the <= predicate reproduces the swept partition even
    // when rounding would land on the upper value.
    static double midpoint(double lo, double hi) {
        double m = lo + (hi - lo) / 2.0;
        if (!(m >= lo) || m >= hi) m = lo;
        return m;
    }

    int build(const std::vector<std::size_t>& idx, int depth) {
        int id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        fill_payload(nodes[static_cast<std::size_t>(id)], idx);

        if (depth >= params.max_depth || idx.size() < 2 * static_cast<std::size_t>(params.min_leaf) ||
            pure(idx))
            return id;

        Candidate best;
        for (int f : split_features()) scan_feature(f, idx, best);
        if (!best.found) return id;

        std::vector<std::size_t> left_idx, right_idx;
        left_idx.reserve(idx.size());
        for (std::size_t i : idx) {
            if (x.at(i, static_cast<std::size_t>(best.feature)) <= best.threshold)
                left_idx.push_back(i);
            else
                right_idx.push_back(i);
        }

        nodes[static_cast<std::size_t>(id)].feature = best.feature;
        nodes[static_cast<std::size_t>(id)].threshold = best.threshold;
        int l = build(left_idx, depth + 1);
        nodes[static_cast<std::size_t>(id)].left = l;
        int r = build(right_idx, depth + 1);
        nodes[static_cast<std::size_t>(id)].right = r;
        return id;
    }
};

} // namespace

DecisionTree dt_fit_ex(const Matrix& x, std::span<const int> labels,
                       std::span<const double> values, Task task,
                       const TreeFitParams& params, Rng* rng) {
    std::size_t n_targets = task == Task::Classify ? labels.size() : values.size();
    if (x.rows == 0) throw ModelError("dt_fit: empty training set");
    if (x.rows != n_targets) throw ModelError("dt_fit: target length mismatch");
    if (params.max_depth < 0) throw ModelError("dt_fit: max_depth must be >= 0");
    if (params.min_leaf < 1) throw ModelError("dt_fit: min_leaf must be >= 1");
    if (params.mtry < 0 || static_cast<std::size_t>(params.mtry) > x.cols)
        throw ModelError("dt_fit: mtry out of range");

    Fitter fitter{x, labels, values, task, params, rng, {}, {}, {}};
    fitter.index_labels();
    std::vector<std::size_t> idx(x.rows);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    fitter.build(idx, 0);

    DecisionTree tree;
    tree.task = task;
    tree.max_depth = params.max_depth;
    tree.min_leaf = params.min_leaf;
    tree.nodes = std::move(fitter.nodes);
    return tree;
}

DecisionTree dt_fit(const Matrix& x, std::span<const int> labels, int max_depth,
                    int min_leaf) {
    return dt_fit_ex(x, labels, {}, Task::Classify, {max_depth, min_leaf, 0}, nullptr);
}

DecisionTree dt_fit(const Matrix& x, std::span<const double> values, int max_depth,
                    int min_leaf) {
    return dt_fit_ex(x, {}, values, Task::Regress, {max_depth, min_leaf, 0}, nullptr);
}

namespace {

const TreeNode& descend(const DecisionTree& tree, std::span<const double> x) {
    if (tree.nodes.empty()) throw ModelError("dt_predict: empty tree");
    const TreeNode* node = &tree.nodes[0];
    while (!node->is_leaf()) {
        std::size_t f = static_cast<std::size_t>(node->feature);
        if (f >= x.size()) throw ModelError("dt_predict: query dimension mismatch");
        node = &tree.nodes[static_cast<std::size_t>(x[f] <= node->threshold ? node->left
                                                                            : node->right)];
    }
    return *node;
}

} // namespace

int dt_predict_label(const DecisionTree& tree, std::span<const double> x) {
    if (tree.task != Task::Classify) throw ModelError("dt_predict_label: regression tree");
    const TreeNode& leaf = descend(tree, x);
    int best = leaf.class_counts.front().first;
    int best_n = leaf.class_counts.front().second;
    for (const auto& [label, n] : leaf.class_counts) {
        if (n > best_n) { // counts iterate by ascending label: ties keep the smaller
            best = label;
            best_n = n;
        }
    }
    return best;
}

double dt_predict_value(const DecisionTree& tree, std::span<const double> x) {
    if (tree.task != Task::Regress) throw ModelError("dt_predict_value: classification tree");
    return descend(tree, x).value;
}

int dt_depth(const DecisionTree& tree) {
    std::function<int(int)> walk = [&](int id) -> int {
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
        if (node.is_leaf()) return 0;
        return 1 + std::max(walk(node.left), walk(node.right));
    };
    return tree.nodes.empty() ? 0 : walk(0);
}

} // namespace evdemand
