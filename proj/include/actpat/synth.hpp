#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "actpat/types.hpp"

namespace actpat {

// Per-axis signal recipe: baseline + drift*t + amplitude*sin(2*pi*t/period)
// + Gaussian noise.
struct AxisProfile {
    double baseline = 0.0;
    double noise_std = 0.0;
    double drift_per_sample = 0.0;
    double sin_amplitude = 0.0;
    double sin_period_samples = 0.0;  // required >= 2 when amplitude > 0
};

// One labeled class of synthetic subjects.
struct ClassProfile {
    std::string name;  // subject-id prefix, must be unique across profiles
    std::map<SensorKind, std::array<AxisProfile, 3>> sensors;
    int samples_per_session = 3000;  // ~60 s at 50 Hz
    Labels labels;
};

// Deterministic labeled study: subjects_per_profile sessions per profile,
// subject ids "<profile>_s<k>". Throws ValueError on an invalid profile.
std::vector<Session> generate_study(const std::vector<ClassProfile>& profiles, int subjects_per_profile,
                                    std::uint64_t seed);

// Reassigns the given attribute's values among sessions by a seeded
// permutation (for null/permutation studies).
void shuffle_labels(std::vector<Session>& sessions, Attribute attr, std::uint64_t seed);

// Ready-made profile sets.
//
// separable_profiles: n_classes profiles whose accelerometer/gyroscope/
// magnetometer baselines are separated by separation_sigmas noise standard
// deviations, each carrying the i-th canonical value of `attr`.
std::vector<ClassProfile> separable_profiles(Attribute attr, int n_classes, double separation_sigmas,
                                             int samples_per_session = 3000);

// study_profiles: small mixed-label study shaped like the 4-attribute data
// collection (used by CLI presets); one profile per app value with rotating
// gender/age/hand assignments.
std::vector<ClassProfile> study_profiles(int samples_per_session = 3000);

// Writes manifest.csv plus one trace CSV per (session, sensor) under dir,
// in the exact formats `ingest` reads back.
void write_study(const std::filesystem::path& dir, const std::vector<Session>& sessions,
                 const std::string& provenance = {});

}  // namespace actpat
