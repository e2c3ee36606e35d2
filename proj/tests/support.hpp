#pragma once

// Shared fixtures: temp dirs, hand-built sessions, and a UCI-HAR-shaped
// directory writer for loader and transfer tests.

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>
#include <unistd.h>

#include "actpat/rng.hpp"
#include "actpat/types.hpp"

namespace testsupport {

class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("actpat_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

inline actpat::AxisSeries constant_axis(std::size_t n, double value) {
    actpat::AxisSeries axis;
    axis.samples.assign(n, value);
    return axis;
}

inline actpat::SensorTrace make_trace(actpat::SensorKind kind, std::size_t n, double base, actpat::Rng* rng = nullptr,
                                      double noise = 0.0) {
    actpat::SensorTrace trace;
    trace.kind = kind;
    for (actpat::AxisSeries* axis : {&trace.x, &trace.y, &trace.z}) {
        axis->samples.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            axis->samples[i] = base + (rng != nullptr ? noise * rng->gaussian() : 0.0);
    }
    return trace;
}

// Full three-sensor session with every attribute label set.
inline actpat::Session make_session(const std::string& subject, std::size_t n = 32, double base = 0.0,
                                    actpat::Rng* rng = nullptr, double noise = 0.0) {
    actpat::Session s;
    s.subject_id = subject;
    s.labels.gender = actpat::Gender::Female;
    s.labels.age_group = actpat::AgeGroup::From20To25;
    s.labels.hand = actpat::Hand::Right;
    s.labels.app = actpat::App::Whatsapp;
    s.traces[actpat::SensorKind::Accelerometer] = make_trace(actpat::SensorKind::Accelerometer, n, base, rng, noise);
    s.traces[actpat::SensorKind::Gyroscope] = make_trace(actpat::SensorKind::Gyroscope, n, base + 1.0, rng, noise);
    s.traces[actpat::SensorKind::Magnetometer] = make_trace(actpat::SensorKind::Magnetometer, n, base + 2.0, rng, noise);
    return s;
}

// Published per-activity test-split window counts (grand total 2947).
inline const std::map<std::string, int>& uci_test_counts() {
    static const std::map<std::string, int> counts{
        {"Walking", 496},  {"WalkingUpstairs", 471}, {"WalkingDownstairs", 420},
        {"Sitting", 491},  {"Standing", 532},        {"Laying", 537},
    };
    return counts;
}

// Writes a directory with the published UCI HAR raw-inertial layout:
// activity_labels.txt, <split>/y_<split>.txt, and 128-column total_acc_* /
// body_gyro_* signal files. Label ids follow the dataset's numbering
// (1 WALKING .. 6 LAYING); values are activity-dependent with seeded noise.
inline void write_uci_dir(const std::filesystem::path& root, const std::map<std::string, int>& counts,
                          const std::string& split = "test", std::uint64_t seed = 97) {
    namespace fs = std::filesystem;
    const fs::path split_dir = root / split;
    const fs::path signals = split_dir / "Inertial Signals";
    fs::create_directories(signals);

    {
        std::ofstream out(root / "activity_labels.txt");
        out << "1 WALKING\n2 WALKING_UPSTAIRS\n3 WALKING_DOWNSTAIRS\n4 SITTING\n5 STANDING\n6 LAYING\n";
    }

    const std::array<std::string, 6> order{"Walking",  "WalkingUpstairs", "WalkingDownstairs",
                                           "Sitting",  "Standing",        "Laying"};
    std::vector<int> ids;
    for (std::size_t a = 0; a < order.size(); ++a) {
        const auto it = counts.find(order[a]);
        const int n = it == counts.end() ? 0 : it->second;
        ids.insert(ids.end(), static_cast<std::size_t>(n), static_cast<int>(a) + 1);
    }
    actpat::Rng rng(actpat::derive_seed(seed, {0x0c1u}));
    rng.shuffle(ids);

    {
        std::ofstream out(split_dir / ("y_" + split + ".txt"));
        for (int id : ids) out << id << "\n";
    }

    const std::array<std::string, 3> axes{"x", "y", "z"};
    for (const std::string& prefix : {std::string("total_acc_"), std::string("body_gyro_")}) {
        for (std::size_t a = 0; a < 3; ++a) {
            std::ofstream out(signals / (prefix + axes[a] + "_" + split + ".txt"));
            actpat::Rng noise(actpat::derive_seed(seed, {prefix == "total_acc_" ? 0xaccu : 0x6720u, a}));
            std::ostringstream buf;
            for (std::size_t i = 0; i < ids.size(); ++i) {
                // Activity-dependent offsets so fitted models see real structure.
                const double base = 0.25 * ids[i] + (prefix == "total_acc_" ? 1.0 : 0.0) + 0.1 * double(a);
                for (int j = 0; j < 128; ++j) {
                    buf << (j == 0 ? "" : " ") << base + 0.05 * noise.gaussian();
                }
                buf << "\n";
            }
            out << buf.str();
        }
    }
}

}  // namespace testsupport
