#include "evdemand/models/trained.hpp"

#include "evdemand/csv.hpp"
#include "evdemand/errors.hpp"

#include <nlohmann/json.hpp>

#include <utility>

namespace evdemand {

using nlohmann::json;

const char* family_name(Family f) {
    switch (f) {
        case Family::Knn: return "knn";
        case Family::Dt: return "dt";
        case Family::Rf: return "rf";
    }
    return "?";
}

Family family_from_string(const std::string& name) {
    if (name == "knn") return Family::Knn;
    if (name == "dt") return Family::Dt;
    if (name == "rf") return Family::Rf;
    throw ConfigError("unknown model family: " + name);
}

TrainedModel train_model(Family family, Target target, std::span<const DataRow> rows,
                         std::span<const std::size_t> train_idx, const ModelHyper& hyper,
                         int zone_count) {
    TrainedModel m;
    m.family = family;
    m.target = target;
    m.task = target == Target::Label ? Task::Classify : Task::Regress;
    m.zone_count = zone_count;
    m.include_label = target == Target::SocReq;
    m.hyper = hyper;

    std::vector<std::size_t> idx(train_idx.begin(), train_idx.end());
    if (m.include_label) idx = charging_only(rows, idx, zone_count);
    if (idx.empty()) throw ModelError("train_model: no usable training rows");

    std::vector<int> yl;
    std::vector<double> yv;
    if (m.task == Task::Classify) yl = label_targets(rows, idx);
    else yv = numeric_targets(rows, idx, target);

    switch (family) {
        case Family::Knn: {
            m.encoder = fit_knn_encoder(rows, idx, m.include_label);
            Matrix x = knn_encode(*m.encoder, rows, idx);
            m.knn = m.task == Task::Classify ? knn_fit(std::move(x), std::move(yl), hyper.k)
                                             : knn_fit(std::move(x), std::move(yv), hyper.k);
            break;
        }
        case Family::Dt: {
            Matrix x = tree_encode(rows, idx, m.include_label);
            m.tree = m.task == Task::Classify
                         ? dt_fit(x, yl, hyper.depth, hyper.min_leaf)
                         : dt_fit(x, yv, hyper.depth, hyper.min_leaf);
            break;
        }
        case Family::Rf: {
            Matrix x = tree_encode(rows, idx, m.include_label);
            ForestParams fp;
            fp.n_trees = hyper.n_trees;
            fp.max_depth = hyper.depth;
            fp.min_leaf = hyper.min_leaf;
            fp.mtry = hyper.mtry;
            fp.base_seed = hyper.seed;
            m.forest = m.task == Task::Classify ? rf_fit(x, yl, fp) : rf_fit(x, yv, fp);
            break;
        }
    }
    return m;
}

namespace {

std::vector<double> encode_query(const TrainedModel& m, const FeatureRow& x,
                                 std::optional<int> label) {
    if (m.include_label && !label)
        throw ModelError("predict: model expects a label feature");
    if (m.family == Family::Knn) return knn_encode_row(*m.encoder, x, label);
    return tree_encode_row(x, m.include_label ? label : std::nullopt);
}

} // namespace

int TrainedModel::predict_label(const FeatureRow& x) const {
    if (task != Task::Classify) throw ModelError("predict_label: regression model");
    std::vector<double> q = encode_query(*this, x, std::nullopt);
    switch (family) {
        case Family::Knn: return knn_predict_label(*knn, q);
        case Family::Dt: return dt_predict_label(*tree, q);
        case Family::Rf: return rf_predict_label(*forest, q);
    }
    throw ModelError("predict_label: bad family");
}

double TrainedModel::predict_value(const FeatureRow& x, std::optional<int> label) const {
    if (task != Task::Regress) throw ModelError("predict_value: classification model");
    std::vector<double> q = encode_query(*this, x, label);
    switch (family) {
        case Family::Knn: return knn_predict_value(*knn, q);
        case Family::Dt: return dt_predict_value(*tree, q);
        case Family::Rf: return rf_predict_value(*forest, q);
    }
    throw ModelError("predict_value: bad family");
}

namespace {

json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    m.data = j.at("data").get<std::vector<double>>();
    if (m.data.size() != m.rows * m.cols) throw ModelError("model file: matrix shape mismatch");
    return m;
}

json tree_to_json(const DecisionTree& t) {
    json nodes = json::array();
    for (const TreeNode& n : t.nodes) {
        json jn{{"f", n.feature}, {"l", n.left}, {"r", n.right}, {"n", n.n}};
        if (!n.is_leaf()) jn["t"] = n.threshold;
        if (t.task == Task::Classify) {
            json counts = json::array();
            for (const auto& [label, cnt] : n.class_counts) counts.push_back({label, cnt});
            jn["c"] = std::move(counts);
        } else {
            jn["v"] = n.value;
        }
        nodes.push_back(std::move(jn));
    }
    return json{{"task", task_name(t.task)},
                {"max_depth", t.max_depth},
                {"min_leaf", t.min_leaf},
                {"nodes", std::move(nodes)}};
}

DecisionTree tree_from_json(const json& j) {
    DecisionTree t;
    t.task = task_from_string(j.at("task").get<std::string>());
    t.max_depth = j.at("max_depth").get<int>();
    t.min_leaf = j.at("min_leaf").get<int>();
    for (const json& jn : j.at("nodes")) {
        TreeNode n;
        n.feature = jn.at("f").get<int>();
        n.left = jn.at("l").get<int>();
        n.right = jn.at("r").get<int>();
        n.n = jn.at("n").get<int>();
        if (!n.is_leaf()) n.threshold = jn.at("t").get<double>();
        if (t.task == Task::Classify)
            for (const json& c : jn.at("c"))
                n.class_counts.emplace_back(c.at(0).get<int>(), c.at(1).get<int>());
        else
            n.value = jn.at("v").get<double>();
        t.nodes.push_back(std::move(n));
    }
    if (t.nodes.empty()) throw ModelError("model file: empty tree");
    return t;
}

} // namespace

std::string model_to_json(const TrainedModel& m) {
    json j;
    j["version"] = 1;
    j["family"] = family_name(m.family);
    j["task"] = task_name(m.task);
    j["target"] = target_name(m.target);
    j["zone_count"] = m.zone_count;
    j["include_label"] = m.include_label;
    j["hyper"] = {{"k", m.hyper.k},           {"depth", m.hyper.depth},
                  {"min_leaf", m.hyper.min_leaf}, {"n_trees", m.hyper.n_trees},
                  {"mtry", m.hyper.mtry},     {"seed", m.hyper.seed}};
    if (m.encoder) {
        j["encoder"] = {{"vehicle_vocab", m.encoder->vehicle_vocab},
                        {"mean", m.encoder->scaler.mean},
                        {"stddev", m.encoder->scaler.stddev},
                        {"include_label", m.encoder->include_label}};
    }
    if (m.knn) {
        json k{{"k", m.knn->k},
               {"task", task_name(m.knn->task)},
               {"train", matrix_to_json(m.knn->train)}};
        if (m.knn->task == Task::Classify) k["labels"] = m.knn->labels;
        else k["values"] = m.knn->values;
        j["knn"] = std::move(k);
    }
    if (m.tree) j["tree"] = tree_to_json(*m.tree);
    if (m.forest) {
        json trees = json::array();
        for (const DecisionTree& t : m.forest->trees) trees.push_back(tree_to_json(t));
        j["forest"] = {{"task", task_name(m.forest->task)},
                       {"n_trees", m.forest->n_trees},
                       {"max_depth", m.forest->max_depth},
                       {"min_leaf", m.forest->min_leaf},
                       {"mtry", m.forest->mtry},
                       {"base_seed", m.forest->base_seed},
                       {"bootstrap", m.forest->bootstrap},
                       {"trees", std::move(trees)}};
    }
    return j.dump(2) + "\n";
}

TrainedModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ModelError(std::string("model file: invalid JSON: ") + e.what());
    }
    try {
        if (j.at("version").get<int>() != 1) throw ModelError("model file: unsupported version");
        TrainedModel m;
        m.family = family_from_string(j.at("family").get<std::string>());
        m.task = task_from_string(j.at("task").get<std::string>());
        m.target = target_from_string(j.at("target").get<std::string>());
        m.zone_count = j.at("zone_count").get<int>();
        m.include_label = j.at("include_label").get<bool>();
        const json& h = j.at("hyper");
        m.hyper.k = h.at("k").get<int>();
        m.hyper.depth = h.at("depth").get<int>();
        m.hyper.min_leaf = h.at("min_leaf").get<int>();
        m.hyper.n_trees = h.at("n_trees").get<int>();
        m.hyper.mtry = h.at("mtry").get<int>();
        m.hyper.seed = h.at("seed").get<std::uint64_t>();
        if (j.contains("encoder")) {
            KnnEncoder enc;
            const json& e = j.at("encoder");
            enc.vehicle_vocab = e.at("vehicle_vocab").get<std::vector<std::int64_t>>();
            enc.scaler.mean = e.at("mean").get<std::vector<double>>();
            enc.scaler.stddev = e.at("stddev").get<std::vector<double>>();
            enc.include_label = e.at("include_label").get<bool>();
            m.encoder = std::move(enc);
        }
        if (j.contains("knn")) {
            const json& k = j.at("knn");
            KnnModel knn;
            knn.k = k.at("k").get<int>();
            knn.task = task_from_string(k.at("task").get<std::string>());
            knn.train = matrix_from_json(k.at("train"));
            if (knn.task == Task::Classify) knn.labels = k.at("labels").get<std::vector<int>>();
            else knn.values = k.at("values").get<std::vector<double>>();
            m.knn = std::move(knn);
        }
        if (j.contains("tree")) m.tree = tree_from_json(j.at("tree"));
        if (j.contains("forest")) {
            const json& f = j.at("forest");
            RandomForest forest;
            forest.task = task_from_string(f.at("task").get<std::string>());
            forest.n_trees = f.at("n_trees").get<int>();
            forest.max_depth = f.at("max_depth").get<int>();
            forest.min_leaf = f.at("min_leaf").get<int>();
            forest.mtry = f.at("mtry").get<int>();
            forest.base_seed = f.at("base_seed").get<std::uint64_t>();
            forest.bootstrap = f.at("bootstrap").get<bool>();
            for (const json& t : f.at("trees")) forest.trees.push_back(tree_from_json(t));
            m.forest = std::move(forest);
        }
        bool has_model = m.knn.has_value() || m.tree.has_value() || m.forest.has_value();
        if (!has_model) throw ModelError("model file: no model payload");
        if (m.family == Family::Knn && (!m.knn || !m.encoder))
            throw ModelError("model file: knn payload missing");
        if (m.family == Family::Dt && !m.tree) throw ModelError("model file: tree payload missing");
        if (m.family == Family::Rf && !m.forest)
            throw ModelError("model file: forest payload missing");
        return m;
    } catch (const json::exception& e) {
        throw ModelError(std::string("model file: malformed field: ") + e.what());
    }
}

void save_model(const TrainedModel& model, const std::string& path) {
    write_file(path, model_to_json(model));
}

TrainedModel load_model(const std::string& path) {
    return model_from_json(read_file(path));
}

} // namespace evdemand
