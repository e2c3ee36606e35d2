#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "actpat/types.hpp"

namespace actpat {

// One manifest line: a subject's labels plus the per-sensor trace files.
struct ManifestRecord {
    std::string subject_id;
    Labels labels;
    std::map<SensorKind, std::filesystem::path> files;  // relative to the manifest directory
};

struct StudyManifest {
    std::filesystem::path base_dir;
    std::vector<ManifestRecord> records;
};

// Manifest line format:
//   subject_id,gender,age_group,hand,app,accel_path,gyro_path,mag_path
// An empty path means the sensor is absent; an empty label field means that
// attribute is absent. '#' lines and blank lines are skipped.
StudyManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRecord>& records,
                    const std::string& provenance = {});

// Trace CSV: header "timestamp_ms,x,y,z" or "x,y,z", one sample per row.
SensorTrace parse_trace_csv(const std::filesystem::path& path, SensorKind kind);
void write_trace_csv(const std::filesystem::path& path, const SensorTrace& trace);

// One Session per manifest record, labels copied verbatim.
std::vector<Session> load_study(const StudyManifest& manifest);

enum class UciSplit { Train, Test };
enum class UciAccelSource { Total, Body };  // total_acc_* (default) or body_acc_* files

std::string_view to_string(UciSplit split);

// Published UCI HAR raw-inertial layout:
//   <root>/<split>/Inertial Signals/{total|body}_acc_{x,y,z}_<split>.txt
//   <root>/<split>/Inertial Signals/body_gyro_{x,y,z}_<split>.txt
//   <root>/<split>/y_<split>.txt
//   <root>/activity_labels.txt
struct UciLayout {
    std::filesystem::path root;
    UciSplit split = UciSplit::Test;
    UciAccelSource accel = UciAccelSource::Total;
};

// One Session per 128-sample window line, with accelerometer + gyroscope
// traces and an activity label resolved through activity_labels.txt.
std::vector<Session> load_uci_har(const UciLayout& layout);

}  // namespace actpat
