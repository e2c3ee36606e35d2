#pragma once

#include <Eigen/Dense>
#include <array>
#include <compare>
#include <filesystem>
#include <string>
#include <vector>

#include "actpat/types.hpp"

namespace actpat {

// The nine per-axis statistics, in canonical order. The three quantiles are
// the tertile cut points plus the maximum (q at p = 1/3, 2/3, 1).
enum class StatKind {
    Mean = 0,
    Median,
    Mode,
    QuantileOneThird,
    QuantileTwoThirds,
    QuantileFull,
    PopulationStd,
    SampleStd,
    Variance
};

inline constexpr int kStatsPerAxis = 9;

inline constexpr std::array<StatKind, kStatsPerAxis> kAllStats{
    StatKind::Mean,          StatKind::Median,           StatKind::Mode,
    StatKind::QuantileOneThird, StatKind::QuantileTwoThirds, StatKind::QuantileFull,
    StatKind::PopulationStd, StatKind::SampleStd,        StatKind::Variance};

std::string_view to_string(StatKind stat);

struct FeatureId {
    SensorKind sensor;
    AxisName axis;
    StatKind stat;

    std::string name() const;  // "<sensor>_<axis>_<stat>"
    auto operator<=>(const FeatureId&) const = default;
};

// Ordered feature layout: sensors in canonical order x axes (x,y,z) x the
// nine statistics. Length is always 27 per sensor.
struct FeatureSchema {
    std::vector<FeatureId> ids;

    static FeatureSchema for_sensors(std::vector<SensorKind> sensors);

    std::size_t size() const { return ids.size(); }
    std::vector<std::string> names() const;
    std::vector<SensorKind> sensors() const;  // canonical order, deduplicated

    bool operator==(const FeatureSchema&) const = default;
};

// All nine statistics of one series, in StatKind order. Throws ValueError on
// an empty series. SampleStd and Variance are 0 for a single sample.
std::array<double, kStatsPerAxis> axis_statistics(const AxisSeries& series);

// Values laid out exactly in schema order. Throws ValueError when the session
// lacks a sensor the schema names.
std::vector<double> featurize_session(const Session& session, const FeatureSchema& schema);

// Feature matrix with one target attribute, ready for training.
struct Dataset {
    FeatureSchema schema;
    Eigen::MatrixXd x;                 // rows x features
    std::vector<std::string> targets;  // one label value per row
    std::vector<std::string> row_ids;
    Attribute attribute = Attribute::Gender;

    Eigen::Index rows() const { return x.rows(); }
    Eigen::Index cols() const { return x.cols(); }

    // Distinct target values in canonical attribute order (values absent from
    // the attribute's canonical list sort last, lexicographically).
    std::vector<std::string> classes() const;

    Dataset subset(const std::vector<int>& row_indices) const;
};

// One row per session, in input order. Throws ValueError when a session lacks
// the target attribute (listing the offending ids), when no sessions are
// given, or when all sessions share one label value.
Dataset build_dataset(const std::vector<Session>& sessions, Attribute target, const FeatureSchema& schema);

// Sensors present in every session of the list.
std::vector<SensorKind> common_sensors(const std::vector<Session>& sessions);

// CSV export: row_id, target, then one column per canonical feature name.
// `provenance` (when non-empty) is written first as a '#' comment row.
void write_feature_csv(const std::filesystem::path& path, const Dataset& dataset, const std::string& provenance = {});

}  // namespace actpat
