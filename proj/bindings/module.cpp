#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "evdemand/charging.hpp"
#include "evdemand/config.hpp"
#include "evdemand/errors.hpp"
#include "evdemand/eval.hpp"
#include "evdemand/geo.hpp"
#include "evdemand/models/forest.hpp"
#include "evdemand/models/knn.hpp"
#include "evdemand/models/tree.hpp"
#include "evdemand/pipeline.hpp"
#include "evdemand/synth.hpp"

#include <utility>
#include <vector>

namespace py = pybind11;
using namespace evdemand;

namespace {

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ModelError("feature matrix is empty");
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols)
            throw ModelError("ragged feature matrix: row " + std::to_string(r));
        for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = rows[r][c];
    }
    return m;
}

ForestParams forest_params(int n_trees, int max_depth, int min_leaf, int mtry,
                           std::uint64_t seed, bool bootstrap, int n_threads) {
    ForestParams p;
    p.n_trees = n_trees;
    p.max_depth = max_depth;
    p.min_leaf = min_leaf;
    p.mtry = mtry;
    p.base_seed = seed;
    p.bootstrap = bootstrap;
    p.n_threads = n_threads;
    return p;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "EV charging demand pipeline: trip extraction, charging-event labeling, "
              "from-scratch KNN/CART/random-forest models, and hourly demand profiles.";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ModelError>(m, "ModelError", PyExc_RuntimeError);

    m.def(
        "haversine_km",
        [](double lat1, double lon1, double lat2, double lon2) {
            return haversine_km({lat1, lon1}, {lat2, lon2});
        },
        py::arg("lat1"), py::arg("lon1"), py::arg("lat2"), py::arg("lon2"),
        "Great-circle distance in km on the mean-radius sphere.");

    py::class_<ZoneGrid>(m, "ZoneGrid")
        .def(py::init([](double lat_min, double lat_max, double lon_min, double lon_max,
                         int rows, int cols) {
                 ZoneGrid g{{lat_min, lat_max, lon_min, lon_max}, rows, cols};
                 validate(g);
                 return g;
             }),
             py::arg("lat_min"), py::arg("lat_max"), py::arg("lon_min"), py::arg("lon_max"),
             py::arg("rows") = 3, py::arg("cols") = 3)
        .def_property_readonly("zone_count", &ZoneGrid::zone_count)
        .def_readonly("rows", &ZoneGrid::rows)
        .def_readonly("cols", &ZoneGrid::cols)
        .def(
            "zone_of",
            [](const ZoneGrid& g, double lat, double lon) { return zone_of(g, {lat, lon}); },
            py::arg("lat"), py::arg("lon"),
            "1-based zone index, row-major from the south-west corner.");

    m.def(
        "charging_demand",
        [](double soc_req, double cap_kwh, double alpha_kw, double eta) {
            return charging_demand(soc_req, {cap_kwh, alpha_kw, eta});
        },
        py::arg("soc_req"), py::arg("cap_kwh") = 24.0, py::arg("alpha_kw") = 6.6,
        py::arg("eta") = 0.9, "Energy (kWh) implied by a positive SOC requirement; 0 otherwise.");
    m.def(
        "charging_duration",
        [](double cd_kwh, double cap_kwh, double alpha_kw, double eta) {
            return charging_duration(cd_kwh, {cap_kwh, alpha_kw, eta});
        },
        py::arg("cd_kwh"), py::arg("cap_kwh") = 24.0, py::arg("alpha_kw") = 6.6,
        py::arg("eta") = 0.9, "Hours to deliver cd_kwh at the charger rate and efficiency.");

    m.def(
        "accuracy",
        [](const std::vector<int>& pred, const std::vector<int>& truth) {
            return accuracy(pred, truth);
        },
        py::arg("pred"), py::arg("truth"), "Classification accuracy in percent.");
    m.def(
        "rmse",
        [](const std::vector<double>& pred, const std::vector<double>& truth) {
            return rmse(pred, truth);
        },
        py::arg("pred"), py::arg("truth"));

    py::class_<KnnModel>(m, "KNN")
        .def_static(
            "classify",
            [](const std::vector<std::vector<double>>& x, std::vector<int> labels, int k) {
                return knn_fit(to_matrix(x), std::move(labels), k);
            },
            py::arg("x"), py::arg("labels"), py::arg("k"))
        .def_static(
            "regress",
            [](const std::vector<std::vector<double>>& x, std::vector<double> values, int k) {
                return knn_fit(to_matrix(x), std::move(values), k);
            },
            py::arg("x"), py::arg("values"), py::arg("k"))
        .def_readonly("k", &KnnModel::k)
        .def(
            "predict_label",
            [](const KnnModel& mdl, const std::vector<double>& q) {
                return knn_predict_label(mdl, q);
            },
            py::arg("x"))
        .def(
            "predict_value",
            [](const KnnModel& mdl, const std::vector<double>& q) {
                return knn_predict_value(mdl, q);
            },
            py::arg("x"));

    py::class_<DecisionTree>(m, "DecisionTree")
        .def_static(
            "classify",
            [](const std::vector<std::vector<double>>& x, const std::vector<int>& labels,
               int max_depth, int min_leaf) {
                return dt_fit(to_matrix(x), labels, max_depth, min_leaf);
            },
            py::arg("x"), py::arg("labels"), py::arg("max_depth") = 8, py::arg("min_leaf") = 1)
        .def_static(
            "regress",
            [](const std::vector<std::vector<double>>& x, const std::vector<double>& values,
               int max_depth, int min_leaf) {
                return dt_fit(to_matrix(x), values, max_depth, min_leaf);
            },
            py::arg("x"), py::arg("values"), py::arg("max_depth") = 8, py::arg("min_leaf") = 1)
        .def_property_readonly("depth", &dt_depth)
        .def_property_readonly("node_count",
                               [](const DecisionTree& t) { return t.nodes.size(); })
        .def(
            "predict_label",
            [](const DecisionTree& t, const std::vector<double>& q) {
                return dt_predict_label(t, q);
            },
            py::arg("x"))
        .def(
            "predict_value",
            [](const DecisionTree& t, const std::vector<double>& q) {
                return dt_predict_value(t, q);
            },
            py::arg("x"));

    py::class_<RandomForest>(m, "RandomForest")
        .def_static(
            "classify",
            [](const std::vector<std::vector<double>>& x, const std::vector<int>& labels,
               int n_trees, int max_depth, int min_leaf, int mtry, std::uint64_t seed,
               bool bootstrap, int n_threads) {
                return rf_fit(to_matrix(x), labels,
                              forest_params(n_trees, max_depth, min_leaf, mtry, seed, bootstrap,
                                            n_threads));
            },
            py::arg("x"), py::arg("labels"), py::arg("n_trees") = 100, py::arg("max_depth") = 8,
            py::arg("min_leaf") = 1, py::arg("mtry") = 0, py::arg("seed") = 0,
            py::arg("bootstrap") = true, py::arg("n_threads") = 0)
        .def_static(
            "regress",
            [](const std::vector<std::vector<double>>& x, const std::vector<double>& values,
               int n_trees, int max_depth, int min_leaf, int mtry, std::uint64_t seed,
               bool bootstrap, int n_threads) {
                return rf_fit(to_matrix(x), values,
                              forest_params(n_trees, max_depth, min_leaf, mtry, seed, bootstrap,
                                            n_threads));
            },
            py::arg("x"), py::arg("values"), py::arg("n_trees") = 100, py::arg("max_depth") = 8,
            py::arg("min_leaf") = 1, py::arg("mtry") = 0, py::arg("seed") = 0,
            py::arg("bootstrap") = true, py::arg("n_threads") = 0)
        .def_readonly("n_trees", &RandomForest::n_trees)
        .def_readonly("mtry", &RandomForest::mtry)
        .def(
            "predict_label",
            [](const RandomForest& f, const std::vector<double>& q) {
                return rf_predict_label(f, q);
            },
            py::arg("x"))
        .def(
            "predict_value",
            [](const RandomForest& f, const std::vector<double>& q) {
                return rf_predict_value(f, q);
            },
            py::arg("x"));

    m.def("default_config", [] { return config_to_json(PipelineConfig{}); },
          "The full default config as a JSON string; edit and pass to Pipeline.");
    m.def("stages", [] { return pipeline_stages(); });

    py::class_<PipelineRunner>(m, "Pipeline")
        .def(py::init([](const std::string& config_json, const std::string& out_dir,
                         std::optional<std::uint64_t> seed) {
                 PipelineConfig cfg;
                 if (!config_json.empty()) cfg = config_from_json(config_json);
                 if (!out_dir.empty()) cfg.out_dir = out_dir;
                 if (seed) {
                     cfg.seed = *seed;
                     cfg.synth.seed = *seed;
                 }
                 return PipelineRunner(std::move(cfg));
             }),
             py::arg("config_json") = "", py::arg("out_dir") = "",
             py::arg("seed") = py::none(),
             "Build a runner from a config JSON string (empty = defaults, which use the "
             "synthetic source). Artifacts land under out_dir.")
        .def("run", &PipelineRunner::run, py::arg("stage"),
             "Run one stage ('report' = everything); returns the artifact names written.")
        .def("config_json", [](PipelineRunner& p) { return config_to_json(p.config()); });
}
