#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "actpat/insight.hpp"
#include "actpat/learn.hpp"

namespace actpat {

// Train on attribute-labeled sessions, predict that attribute for
// activity-labeled foreign sessions.
struct TransferPlan {
    std::vector<Session> train;
    std::vector<Session> test;
    Attribute target = Attribute::Gender;
    ClassifierSpec spec = SvmLinear{};
};

// Canonical schema over the sensor intersection of the two sides. Throws
// ValueError when the intersection is empty.
FeatureSchema align_schema(const std::vector<SensorKind>& train_sensors,
                           const std::vector<SensorKind>& test_sensors);

struct TransferResult {
    Model model;
    FeatureSchema schema;
    std::vector<std::string> row_ids;     // test session ids
    std::vector<std::string> activities;  // test activity labels
    std::vector<std::string> predicted;   // attribute labels from the model
    ContingencyTable table;               // activity x predicted attribute
    IgReport ig;                          // test features scored against predicted labels
};

// Fits plan.spec on the full training set over the aligned schema, predicts
// one label per test session, cross-tabulates against the test activities,
// and ranks test features by IG against the predictions. Every test session
// must carry an activity label (ValueError names the first that does not).
TransferResult cross_predict(const TransferPlan& plan, std::uint64_t seed);

// CSV: row_id,activity,predicted_<attribute>.
std::string predictions_csv(const TransferResult& result, Attribute target,
                            const std::vector<std::string>& header_comment = {});
void write_predictions_csv(const TransferResult& result, Attribute target, const std::filesystem::path& path,
                           const std::vector<std::string>& header_comment = {});

}  // namespace actpat
