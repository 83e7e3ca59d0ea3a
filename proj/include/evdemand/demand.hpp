#pragma once

#include "evdemand/charging.hpp"
#include "evdemand/features.hpp"
#include "evdemand/matrix.hpp"
#include "evdemand/models/trained.hpp"

#include <span>
#include <string>
#include <vector>

namespace evdemand {

// Zonal hourly energy profile over a single representative 0-24h day.
struct DemandProfile {
    int zone_count = 0;
    int case_id = 0; // 1 = predicted labels, 2 = actual labels, 0 = direct
    std::size_t event_count = 0;
    bool grid_side = false;
    bool impulse = false;
    Matrix zones;              // zone_count x 24, kWh per hour bin
    std::vector<double> total; // 24 bins, sum over zones
};

struct DemandOptions {
    // Default bins battery-side energy, so totals equal the summed CD;
    // grid_side bins the grid draw CD/eta instead.
    bool grid_side = false;
    // All energy into the starting hour bin instead of spreading over the
    // charging duration.
    bool impulse = false;
};

// Each event deposits energy at a constant rate over [start, start+duration),
// hours taken mod 24. Events must carry zone in 1..zone_count.
DemandProfile aggregate(std::span<const ChargingEvent> events, int zone_count,
                        const ChargerParams& params, const DemandOptions& opt = {});

struct CaseModels {
    const TrainedModel* label = nullptr;
    const TrainedModel* t_end = nullptr;
    const TrainedModel* soc_req = nullptr;
};

// Case 1 uses the classifier's labels, case 2 the actual ones; rows resolving
// to the dummy class produce no event. Predicted soc_req is clamped to
// [0, 100] and predicted t_end to >= t_start.
std::vector<ChargingEvent> predict_events(int case_id, const CaseModels& models,
                                          std::span<const DataRow> rows,
                                          std::span<const std::size_t> idx, int zone_count,
                                          const ChargerParams& params);

// Ground-truth events of the given rows; the case-2 pipeline with perfect
// regressors reproduces exactly these.
std::vector<ChargingEvent> actual_events(std::span<const DataRow> rows,
                                         std::span<const std::size_t> idx, int zone_count,
                                         const ChargerParams& params);

// CSV columns: hour, zone_1..zone_n, total.
std::string demand_to_csv(const DemandProfile& profile);
std::string demand_to_json(const DemandProfile& profile);

} // namespace evdemand
