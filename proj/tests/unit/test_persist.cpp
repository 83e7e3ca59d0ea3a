#include <doctest.h>

#include "evdemand/errors.hpp"
#include "evdemand/models/trained.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

using namespace evdemand;

namespace {

std::vector<DataRow> make_rows(std::size_t n) {
    std::vector<DataRow> rows;
    for (std::size_t i = 0; i < n; ++i) {
        DataRow r;
        r.x.vehicle_id = static_cast<std::int64_t>(300 + i % 5);
        r.x.t_start = std::fmod(0.9 * static_cast<double>(i) + 6.0, 24.0);
        r.x.soc_dep = 25.0 + static_cast<double>((i * 7) % 60);
        r.x.origin_lat = 42.15 + 0.01 * static_cast<double>(i % 30);
        r.x.origin_lon = -83.85 + 0.015 * static_cast<double>(i % 30);
        r.y.label = 1 + static_cast<int>(i % 10);
        r.y.t_end = r.x.t_start + 0.25;
        r.y.soc_req = r.y.label <= 9 ? 3.0 + static_cast<double>(i) : 0.0;
        rows.push_back(r);
    }
    return rows;
}

std::vector<std::size_t> all_idx(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
}

ModelHyper small_hyper() {
    ModelHyper h;
    h.k = 3;
    h.depth = 4;
    h.n_trees = 5;
    h.seed = 9;
    return h;
}

} // namespace

TEST_CASE("family names") {
    CHECK(std::string(family_name(Family::Knn)) == "knn");
    CHECK(std::string(family_name(Family::Dt)) == "dt");
    CHECK(std::string(family_name(Family::Rf)) == "rf");
    CHECK(family_from_string("knn") == Family::Knn);
    CHECK(family_from_string("dt") == Family::Dt);
    CHECK(family_from_string("rf") == Family::Rf);
    CHECK_THROWS_AS(family_from_string("svm"), ConfigError);
}

TEST_CASE("model JSON round-trips byte-identically for every family and target") {
    auto rows = make_rows(24);
    auto idx = all_idx(rows.size());
    for (Family family : {Family::Knn, Family::Dt, Family::Rf}) {
        for (Target target : {Target::Label, Target::TEnd, Target::SocReq}) {
            CAPTURE(family_name(family));
            CAPTURE(target_name(target));
            TrainedModel m = train_model(family, target, rows, idx, small_hyper(), 9);
            const std::string s1 = model_to_json(m);
            TrainedModel m2 = model_from_json(s1);
            CHECK(model_to_json(m2) == s1);

            // The rehydrated model must answer exactly like the original.
            for (std::size_t i = 0; i < 5; ++i) {
                if (target == Target::Label) {
                    CHECK(m2.predict_label(rows[i].x) == m.predict_label(rows[i].x));
                } else {
                    std::optional<int> lab =
                        target == Target::SocReq ? std::optional<int>(rows[i].y.label)
                                                 : std::nullopt;
                    CHECK(m2.predict_value(rows[i].x, lab) == m.predict_value(rows[i].x, lab));
                }
            }
        }
    }
}

TEST_CASE("save and load a model file") {
    auto rows = make_rows(20);
    auto idx = all_idx(rows.size());
    TrainedModel m = train_model(Family::Dt, Target::Label, rows, idx, small_hyper(), 9);
    auto path = std::filesystem::temp_directory_path() / "evdemand_model_roundtrip.json";
    save_model(m, path.string());
    TrainedModel back = load_model(path.string());
    CHECK(model_to_json(back) == model_to_json(m));
    std::filesystem::remove(path);
}

TEST_CASE("model JSON rejects malformed input") {
    CHECK_THROWS_WITH_AS(model_from_json("{nope"), doctest::Contains("invalid JSON"),
                         ModelError);
    CHECK_THROWS_AS(model_from_json("{}"), ModelError);

    auto rows = make_rows(20);
    auto idx = all_idx(rows.size());
    TrainedModel m = train_model(Family::Dt, Target::TEnd, rows, idx, small_hyper(), 9);
    const std::string good = model_to_json(m);

    auto j = nlohmann::json::parse(good);
    j["version"] = 2;
    CHECK_THROWS_WITH_AS(model_from_json(j.dump()), doctest::Contains("version"),
                         ModelError);

    j = nlohmann::json::parse(good);
    j.erase("tree");
    CHECK_THROWS_AS(model_from_json(j.dump()), ModelError);

    j = nlohmann::json::parse(good);
    j["hyper"].erase("k");
    CHECK_THROWS_AS(model_from_json(j.dump()), ModelError);
}

TEST_CASE("train_model needs usable rows") {
    auto rows = make_rows(20);
    CHECK_THROWS_AS(
        train_model(Family::Dt, Target::Label, rows, std::vector<std::size_t>{},
                    small_hyper(), 9),
        ModelError);

    // Every row a non-event: nothing to fit the requirement regressor on.
    for (DataRow& r : rows) {
        r.y.label = 10;
        r.y.soc_req = 0.0;
    }
    CHECK_THROWS_AS(
        train_model(Family::Knn, Target::SocReq, rows, all_idx(rows.size()),
                    small_hyper(), 9),
        ModelError);
}

TEST_CASE("requirement models demand the label feature at predict time") {
    auto rows = make_rows(24);
    auto idx = all_idx(rows.size());
    TrainedModel m = train_model(Family::Rf, Target::SocReq, rows, idx, small_hyper(), 9);
    CHECK(m.include_label);
    CHECK_THROWS_AS(m.predict_value(rows[0].x, std::nullopt), ModelError);
    CHECK(m.predict_value(rows[0].x, 4) >= 0.0);
    CHECK_THROWS_AS(m.predict_label(rows[0].x), ModelError);

    TrainedModel clf = train_model(Family::Knn, Target::Label, rows, idx, small_hyper(), 9);
    CHECK_THROWS_AS(clf.predict_value(rows[0].x, std::nullopt), ModelError);
    int label = clf.predict_label(rows[0].x);
    CHECK(label >= 1);
    CHECK(label <= 10);
}
