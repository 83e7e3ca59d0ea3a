#include "evdemand/features.hpp"

#include "evdemand/csv.hpp"
#include "evdemand/errors.hpp"
#include "evdemand/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

namespace evdemand {

const char* target_name(Target t) {
    switch (t) {
        case Target::Label: return "label";
        case Target::TEnd: return "t_end";
        case Target::SocReq: return "soc_req";
    }
    return "?";
}

Target target_from_string(const std::string& name) {
    if (name == "label") return Target::Label;
    if (name == "t_end") return Target::TEnd;
    if (name == "soc_req") return Target::SocReq;
    throw ConfigError("unknown target: " + name);
}

std::vector<DataRow> build_dataset(std::span<const LabeledTrip> labeled) {
    std::map<std::pair<std::int64_t, int>, bool> day_has_event;
    for (const LabeledTrip& lt : labeled) {
        auto key = std::make_pair(lt.trip.vehicle_id, lt.trip.day_index);
        if (lt.soc_req > 0.0) day_has_event[key] = true;
        else day_has_event.try_emplace(key, false);
    }

    std::vector<const LabeledTrip*> kept;
    for (const LabeledTrip& lt : labeled) {
        auto key = std::make_pair(lt.trip.vehicle_id, lt.trip.day_index);
        if (day_has_event.at(key)) kept.push_back(&lt);
    }
    // Canonical row order so the table is independent of input ordering.
    std::stable_sort(kept.begin(), kept.end(), [](const LabeledTrip* a, const LabeledTrip* b) {
        const Trip& ta = a->trip;
        const Trip& tb = b->trip;
        if (ta.vehicle_id != tb.vehicle_id) return ta.vehicle_id < tb.vehicle_id;
        if (ta.day_index != tb.day_index) return ta.day_index < tb.day_index;
        if (ta.t_start != tb.t_start) return ta.t_start < tb.t_start;
        return ta.trip_no < tb.trip_no;
    });

    std::vector<DataRow> rows;
    rows.reserve(kept.size());
    for (const LabeledTrip* lt : kept) {
        DataRow r;
        r.x.vehicle_id = lt->trip.vehicle_id;
        r.x.t_start = lt->trip.t_start;
        r.x.soc_dep = lt->trip.soc_dep.value_or(0.0);
        r.x.origin_lat = lt->trip.origin.lat;
        r.x.origin_lon = lt->trip.origin.lon;
        r.y.label = lt->label;
        r.y.t_end = lt->trip.t_end;
        r.y.soc_req = lt->soc_req;
        rows.push_back(r);
    }
    return rows;
}

namespace {

std::size_t round_half_up(double x) {
    return static_cast<std::size_t>(std::floor(x + 0.5));
}

} // namespace

SplitDataset train_test_split(std::vector<DataRow> rows, double test_frac,
                              std::uint64_t seed, bool stratify) {
    if (rows.empty()) throw DataError("train_test_split: empty dataset");
    if (!(test_frac > 0.0) || !(test_frac < 1.0))
        throw ConfigError("test_frac must be in (0, 1)");

    SplitDataset out;
    out.seed = seed;
    out.test_frac = test_frac;
    out.stratified = stratify;

    Rng rng(seed);
    if (!stratify) {
        std::vector<std::size_t> idx(rows.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        rng.shuffle(idx);
        std::size_t t = round_half_up(test_frac * static_cast<double>(rows.size()));
        out.test_idx.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(t));
        out.train_idx.assign(idx.begin() + static_cast<std::ptrdiff_t>(t), idx.end());
    } else {
        std::map<int, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < rows.size(); ++i) groups[rows[i].y.label].push_back(i);
        for (auto& [label, idx] : groups) {
            rng.shuffle(idx);
            std::size_t t = round_half_up(test_frac * static_cast<double>(idx.size()));
            out.test_idx.insert(out.test_idx.end(), idx.begin(),
                                idx.begin() + static_cast<std::ptrdiff_t>(t));
            out.train_idx.insert(out.train_idx.end(),
                                 idx.begin() + static_cast<std::ptrdiff_t>(t), idx.end());
        }
    }
    if (out.train_idx.empty()) throw DataError("train_test_split: empty train partition");
    out.rows = std::move(rows);
    return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
carve_validation(const SplitDataset& split, double validation_frac) {
    if (!(validation_frac > 0.0) || !(validation_frac < 1.0))
        throw ConfigError("validation_frac must be in (0, 1)");
    std::vector<std::size_t> pool = split.train_idx;
    Rng rng(split.seed + 1);
    rng.shuffle(pool);
    std::size_t v = round_half_up(validation_frac * static_cast<double>(pool.size()));
    if (v == 0 || v >= pool.size())
        throw ConfigError("validation_frac leaves an empty partition");
    std::vector<std::size_t> val(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(v));
    std::vector<std::size_t> train(pool.begin() + static_cast<std::ptrdiff_t>(v), pool.end());
    return {std::move(train), std::move(val)};
}

Scaler fit_scaler(const Matrix& train) {
    if (train.rows < 2) throw ModelError("fit_scaler: need at least 2 rows");
    Scaler s;
    s.mean.assign(train.cols, 0.0);
    s.stddev.assign(train.cols, 0.0);
    for (std::size_t r = 0; r < train.rows; ++r)
        for (std::size_t c = 0; c < train.cols; ++c) s.mean[c] += train.at(r, c);
    for (double& m : s.mean) m /= static_cast<double>(train.rows);
    for (std::size_t r = 0; r < train.rows; ++r)
        for (std::size_t c = 0; c < train.cols; ++c) {
            double d = train.at(r, c) - s.mean[c];
            s.stddev[c] += d * d;
        }
    for (double& v : s.stddev) v = std::sqrt(v / static_cast<double>(train.rows));
    return s;
}

void apply_scaler_row(const Scaler& s, std::span<double> row) {
    if (row.size() != s.mean.size()) throw ModelError("apply_scaler: column mismatch");
    for (std::size_t c = 0; c < row.size(); ++c)
        row[c] = s.stddev[c] > 0.0 ? (row[c] - s.mean[c]) / s.stddev[c] : 0.0;
}

Matrix apply_scaler(const Scaler& s, const Matrix& m) {
    Matrix out = m;
    for (std::size_t r = 0; r < out.rows; ++r) apply_scaler_row(s, out.row(r));
    return out;
}

namespace {

Matrix numeric_block(std::span<const DataRow> rows, std::span<const std::size_t> idx,
                     bool include_label) {
    Matrix m(idx.size(), include_label ? 5 : 4);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const DataRow& row = rows[idx[r]];
        m.at(r, 0) = row.x.t_start;
        m.at(r, 1) = row.x.soc_dep;
        m.at(r, 2) = row.x.origin_lat;
        m.at(r, 3) = row.x.origin_lon;
        if (include_label) m.at(r, 4) = static_cast<double>(row.y.label);
    }
    return m;
}

} // namespace

KnnEncoder fit_knn_encoder(std::span<const DataRow> rows,
                           std::span<const std::size_t> idx, bool include_label) {
    KnnEncoder enc;
    enc.include_label = include_label;
    for (std::size_t i : idx) enc.vehicle_vocab.push_back(rows[i].x.vehicle_id);
    std::sort(enc.vehicle_vocab.begin(), enc.vehicle_vocab.end());
    enc.vehicle_vocab.erase(std::unique(enc.vehicle_vocab.begin(), enc.vehicle_vocab.end()),
                            enc.vehicle_vocab.end());
    enc.scaler = fit_scaler(numeric_block(rows, idx, include_label));
    return enc;
}

std::vector<double> knn_encode_row(const KnnEncoder& enc, const FeatureRow& x,
                                   std::optional<int> label) {
    if (enc.include_label && !label)
        throw ModelError("knn_encode_row: encoder expects a label feature");
    std::vector<double> v(enc.dim(), 0.0);
    auto it = std::lower_bound(enc.vehicle_vocab.begin(), enc.vehicle_vocab.end(),
                               x.vehicle_id);
    if (it != enc.vehicle_vocab.end() && *it == x.vehicle_id)
        v[static_cast<std::size_t>(it - enc.vehicle_vocab.begin())] = 1.0;
    std::size_t base = enc.vehicle_vocab.size();
    v[base + 0] = x.t_start;
    v[base + 1] = x.soc_dep;
    v[base + 2] = x.origin_lat;
    v[base + 3] = x.origin_lon;
    if (enc.include_label) v[base + 4] = static_cast<double>(*label);
    apply_scaler_row(enc.scaler, std::span<double>(v).subspan(base));
    return v;
}

Matrix knn_encode(const KnnEncoder& enc, std::span<const DataRow> rows,
                  std::span<const std::size_t> idx) {
    Matrix m(idx.size(), enc.dim());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const DataRow& row = rows[idx[r]];
        std::vector<double> v = knn_encode_row(
            enc, row.x, enc.include_label ? std::optional<int>(row.y.label) : std::nullopt);
        std::copy(v.begin(), v.end(), m.row(r).begin());
    }
    return m;
}

std::vector<double> tree_encode_row(const FeatureRow& x, std::optional<int> label) {
    std::vector<double> v = {static_cast<double>(x.vehicle_id), x.t_start, x.soc_dep,
                             x.origin_lat, x.origin_lon};
    if (label) v.push_back(static_cast<double>(*label));
    return v;
}

Matrix tree_encode(std::span<const DataRow> rows, std::span<const std::size_t> idx,
                   bool include_label) {
    Matrix m(idx.size(), include_label ? 6 : 5);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const DataRow& row = rows[idx[r]];
        std::vector<double> v = tree_encode_row(
            row.x, include_label ? std::optional<int>(row.y.label) : std::nullopt);
        std::copy(v.begin(), v.end(), m.row(r).begin());
    }
    return m;
}

std::vector<int> label_targets(std::span<const DataRow> rows,
                               std::span<const std::size_t> idx) {
    std::vector<int> y;
    y.reserve(idx.size());
    for (std::size_t i : idx) y.push_back(rows[i].y.label);
    return y;
}

std::vector<double> numeric_targets(std::span<const DataRow> rows,
                                    std::span<const std::size_t> idx, Target target) {
    if (target == Target::Label)
        throw ModelError("numeric_targets: label is categorical");
    std::vector<double> y;
    y.reserve(idx.size());
    for (std::size_t i : idx)
        y.push_back(target == Target::TEnd ? rows[i].y.t_end : rows[i].y.soc_req);
    return y;
}

std::vector<std::size_t> charging_only(std::span<const DataRow> rows,
                                       std::span<const std::size_t> idx,
                                       int zone_count) {
    std::vector<std::size_t> out;
    for (std::size_t i : idx)
        if (rows[i].y.label <= zone_count) out.push_back(i);
    return out;
}

std::string dataset_to_csv(std::span<const DataRow> rows) {
    std::ostringstream ss;
    CsvWriter w(ss);
    w.row({"vehicle_id", "t_start", "soc_dep", "origin_lat", "origin_lon", "label",
           "t_end", "soc_req"});
    for (const DataRow& r : rows) {
        w.row({std::to_string(r.x.vehicle_id), format_double(r.x.t_start),
               format_double(r.x.soc_dep), format_double(r.x.origin_lat),
               format_double(r.x.origin_lon), std::to_string(r.y.label),
               format_double(r.y.t_end), format_double(r.y.soc_req)});
    }
    return ss.str();
}

namespace {

double need_double(const std::string& field, const char* col, std::size_t line) {
    auto v = parse_double(field);
    if (!v)
        throw DataError("dataset CSV: bad " + std::string(col) + " at line " +
                        std::to_string(line));
    return *v;
}

std::int64_t need_int(const std::string& field, const char* col, std::size_t line) {
    auto v = parse_int(field);
    if (!v)
        throw DataError("dataset CSV: bad " + std::string(col) + " at line " +
                        std::to_string(line));
    return *v;
}

} // namespace

std::vector<DataRow> dataset_from_csv(const std::string& text) {
    std::istringstream in(text);
    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw DataError("dataset CSV: empty file");
    const std::vector<std::string> expect = {"vehicle_id", "t_start",    "soc_dep",
                                             "origin_lat", "origin_lon", "label",
                                             "t_end",      "soc_req"};
    if (fields != expect) throw DataError("dataset CSV: unexpected header");
    std::vector<DataRow> rows;
    while (reader.next(fields)) {
        if (fields.size() != expect.size())
            throw DataError("dataset CSV: wrong field count at line " +
                            std::to_string(reader.line()));
        DataRow r;
        r.x.vehicle_id = need_int(fields[0], "vehicle_id", reader.line());
        r.x.t_start = need_double(fields[1], "t_start", reader.line());
        r.x.soc_dep = need_double(fields[2], "soc_dep", reader.line());
        r.x.origin_lat = need_double(fields[3], "origin_lat", reader.line());
        r.x.origin_lon = need_double(fields[4], "origin_lon", reader.line());
        r.y.label = static_cast<int>(need_int(fields[5], "label", reader.line()));
        r.y.t_end = need_double(fields[6], "t_end", reader.line());
        r.y.soc_req = need_double(fields[7], "soc_req", reader.line());
        rows.push_back(r);
    }
    return rows;
}

std::string split_to_json(const SplitDataset& split) {
    nlohmann::json j;
    j["version"] = 1;
    j["seed"] = split.seed;
    j["test_frac"] = split.test_frac;
    j["stratified"] = split.stratified;
    j["n_rows"] = split.rows.size();
    j["train_idx"] = split.train_idx;
    j["test_idx"] = split.test_idx;
    return j.dump(2) + "\n";
}

} // namespace evdemand
