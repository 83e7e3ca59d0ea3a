#include "evdemand/eval.hpp"

#include "evdemand/csv.hpp"
#include "evdemand/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace evdemand {

using nlohmann::json;

double accuracy(std::span<const int> pred, std::span<const int> truth) {
    if (pred.size() != truth.size()) throw ModelError("accuracy: length mismatch");
    if (pred.empty()) throw ModelError("accuracy: empty input");
    std::size_t equal = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        if (pred[i] == truth[i]) ++equal;
    return 100.0 * static_cast<double>(equal) / static_cast<double>(pred.size());
}

double rmse(std::span<const double> pred, std::span<const double> truth) {
    if (pred.size() != truth.size()) throw ModelError("rmse: length mismatch");
    if (pred.empty()) throw ModelError("rmse: empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        double d = pred[i] - truth[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(pred.size()));
}

ConfusionMatrix confusion(std::span<const int> pred, std::span<const int> truth) {
    if (pred.size() != truth.size()) throw ModelError("confusion: length mismatch");
    if (pred.empty()) throw ModelError("confusion: empty input");
    ConfusionMatrix cm;
    cm.labels.insert(cm.labels.end(), truth.begin(), truth.end());
    cm.labels.insert(cm.labels.end(), pred.begin(), pred.end());
    std::sort(cm.labels.begin(), cm.labels.end());
    cm.labels.erase(std::unique(cm.labels.begin(), cm.labels.end()), cm.labels.end());
    auto pos = [&](int label) {
        return static_cast<std::size_t>(
            std::lower_bound(cm.labels.begin(), cm.labels.end(), label) - cm.labels.begin());
    };
    cm.counts = Matrix(cm.labels.size(), cm.labels.size());
    for (std::size_t i = 0; i < pred.size(); ++i) cm.counts.at(pos(truth[i]), pos(pred[i])) += 1.0;
    return cm;
}

std::string confusion_to_csv(const ConfusionMatrix& cm) {
    std::ostringstream ss;
    CsvWriter w(ss);
    std::vector<std::string> header = {"truth_label"};
    for (int l : cm.labels) header.push_back("pred_" + std::to_string(l));
    w.row(header);
    for (std::size_t r = 0; r < cm.labels.size(); ++r) {
        std::vector<std::string> row = {std::to_string(cm.labels[r])};
        for (std::size_t c = 0; c < cm.labels.size(); ++c)
            row.push_back(std::to_string(static_cast<long long>(cm.counts.at(r, c))));
        w.row(row);
    }
    return ss.str();
}

std::vector<int> predict_labels(const TrainedModel& model, std::span<const DataRow> rows,
                                std::span<const std::size_t> idx) {
    std::vector<int> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(model.predict_label(rows[i].x));
    return out;
}

std::vector<double> predict_values(const TrainedModel& model, std::span<const DataRow> rows,
                                   std::span<const std::size_t> idx) {
    std::vector<double> out;
    out.reserve(idx.size());
    for (std::size_t i : idx)
        out.push_back(model.predict_value(
            rows[i].x, model.include_label ? std::optional<int>(rows[i].y.label) : std::nullopt));
    return out;
}

namespace {

ModelHyper make_hyper(Family family, int param, const EvalOptions& opt) {
    ModelHyper h;
    h.min_leaf = opt.min_leaf;
    h.n_trees = opt.n_trees;
    h.mtry = opt.mtry;
    h.seed = opt.model_seed;
    if (family == Family::Knn) h.k = param;
    else h.depth = param;
    return h;
}

// Score one trained model on the given evaluation rows: accuracy for the
// label target, RMSE otherwise (soc_req restricted to charging rows).
double score_model(const TrainedModel& model, const SplitDataset& split,
                   std::span<const std::size_t> eval_idx, const EvalOptions& opt) {
    std::vector<std::size_t> idx(eval_idx.begin(), eval_idx.end());
    if (model.target == Target::SocReq) {
        idx = charging_only(split.rows, idx, opt.zone_count);
        if (idx.empty()) throw ModelError("evaluation: no charging rows in the scoring split");
    }
    if (model.target == Target::Label)
        return accuracy(predict_labels(model, split.rows, idx),
                        label_targets(split.rows, idx));
    return rmse(predict_values(model, split.rows, idx),
                numeric_targets(split.rows, idx, model.target));
}

} // namespace

SweepResult sweep(Family family, Target target, std::span<const int> grid,
                  const SplitDataset& split, const EvalOptions& opt) {
    if (grid.empty()) throw ConfigError("sweep: empty parameter grid");

    std::vector<std::size_t> fit_idx = split.train_idx;
    std::vector<std::size_t> eval_idx = split.test_idx;
    if (opt.validation_frac) {
        auto [tr, val] = carve_validation(split, *opt.validation_frac);
        fit_idx = std::move(tr);
        eval_idx = std::move(val);
    }

    SweepResult result;
    result.family = family;
    result.target = target;
    result.param_name = family == Family::Knn ? "k" : "depth";
    result.metric = target == Target::Label ? "accuracy" : "rmse";
    const bool maximize = target == Target::Label;

    for (int param : grid) {
        TrainedModel model = train_model(family, target, split.rows, fit_idx,
                                         make_hyper(family, param, opt), opt.zone_count);
        double score = score_model(model, split, eval_idx, opt);
        result.points.push_back({param, score});
    }

    const SweepPoint* best = nullptr;
    for (const SweepPoint& p : result.points) {
        bool better = best == nullptr ||
                      (maximize ? p.score > best->score : p.score < best->score) ||
                      (p.score == best->score && p.param < best->param);
        if (better) best = &p;
    }
    result.chosen = best->param;
    result.chosen_score = best->score;
    return result;
}

const EvaluatedModel& Evaluation::best(Target target) const {
    const EvaluatedModel* best = nullptr;
    const bool maximize = target == Target::Label;
    for (const EvaluatedModel& e : entries) {
        if (e.sweep.target != target) continue;
        if (best == nullptr ||
            (maximize ? e.test_score > best->test_score : e.test_score < best->test_score))
            best = &e;
    }
    if (best == nullptr) throw ModelError("evaluation: no entry for target");
    return *best;
}

Evaluation evaluate_all(const SweepGrids& grids, const SplitDataset& split,
                        const EvalOptions& opt) {
    Evaluation ev;
    const Target targets[] = {Target::Label, Target::TEnd, Target::SocReq};
    const Family families[] = {Family::Knn, Family::Dt, Family::Rf};
    for (Target target : targets) {
        for (Family family : families) {
            std::span<const int> grid = family == Family::Knn
                                            ? std::span<const int>(grids.knn_k)
                                            : family == Family::Dt
                                                  ? std::span<const int>(grids.dt_depth)
                                                  : std::span<const int>(grids.rf_depth);
            EvaluatedModel entry;
            entry.sweep = sweep(family, target, grid, split, opt);
            entry.model = train_model(family, target, split.rows, split.train_idx,
                                      make_hyper(family, entry.sweep.chosen, opt),
                                      opt.zone_count);
            entry.test_score = score_model(entry.model, split, split.test_idx, opt);
            ev.entries.push_back(std::move(entry));
        }
    }
    return ev;
}

std::string comparison_to_csv(const Evaluation& ev) {
    std::ostringstream ss;
    CsvWriter w(ss);
    w.row({"family", "target", "metric", "param_name", "chosen_param", "sweep_score",
           "test_score"});
    for (const EvaluatedModel& e : ev.entries) {
        w.row({family_name(e.sweep.family), target_name(e.sweep.target), e.sweep.metric,
               e.sweep.param_name, std::to_string(e.sweep.chosen),
               format_double(e.sweep.chosen_score), format_double(e.test_score)});
    }
    return ss.str();
}

std::string comparison_to_json(const Evaluation& ev) {
    json cells = json::array();
    for (const EvaluatedModel& e : ev.entries) {
        json points = json::array();
        for (const SweepPoint& p : e.sweep.points)
            points.push_back({{"param", p.param}, {"score", p.score}});
        cells.push_back({{"family", family_name(e.sweep.family)},
                         {"target", target_name(e.sweep.target)},
                         {"metric", e.sweep.metric},
                         {"param_name", e.sweep.param_name},
                         {"points", std::move(points)},
                         {"chosen_param", e.sweep.chosen},
                         {"sweep_score", e.sweep.chosen_score},
                         {"test_score", e.test_score}});
    }
    json j{{"version", 1}, {"cells", std::move(cells)}};
    return j.dump(2) + "\n";
}

} // namespace evdemand
