#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "actpat/features.hpp"
#include "actpat/ingest.hpp"
#include "actpat/synth.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace actpat;
using testsupport::TempDir;

namespace {

ClassProfile basic_profile(const std::string& name, double baseline, double noise, int samples) {
    ClassProfile p;
    p.name = name;
    p.samples_per_session = samples;
    p.labels.gender = name == "a" ? Gender::Male : Gender::Female;
    for (SensorKind kind : kAllSensors) {
        for (auto& axis : p.sensors[kind]) {
            axis.baseline = baseline;
            axis.noise_std = noise;
        }
    }
    return p;
}

}  // namespace

TEST_CASE("generate_study: one session per (profile, subject), deterministic") {
    const std::vector<ClassProfile> profiles{basic_profile("a", 0.0, 1.0, 64), basic_profile("b", 5.0, 1.0, 64)};
    const auto study = generate_study(profiles, 56, 9);
    REQUIRE(study.size() == 112);
    CHECK(study[0].subject_id == "a_s0");
    CHECK(study[55].subject_id == "a_s55");
    CHECK(study[56].subject_id == "b_s0");
    CHECK(study[0].labels.gender == Gender::Male);
    CHECK(study[56].labels.gender == Gender::Female);
    for (const Session& s : study) {
        CHECK(s.traces.size() == 3);
        CHECK(s.traces.at(SensorKind::Accelerometer).length() == 64);
        CHECK(validate_session(s).empty());
    }

    const auto again = generate_study(profiles, 56, 9);
    for (std::size_t i = 0; i < study.size(); ++i) {
        CHECK(again[i].subject_id == study[i].subject_id);
        CHECK(again[i].traces.at(SensorKind::Gyroscope).y.samples ==
              study[i].traces.at(SensorKind::Gyroscope).y.samples);
    }
    const auto other = generate_study(profiles, 56, 10);
    CHECK(other[0].traces.at(SensorKind::Gyroscope).y.samples !=
          study[0].traces.at(SensorKind::Gyroscope).y.samples);
}

TEST_CASE("zero-noise profile yields constant series with zero dispersion features") {
    const auto study = generate_study({basic_profile("a", 2.5, 0.0, 32), basic_profile("b", 1.0, 0.0, 32)}, 1, 1);
    const auto& axis = study[0].traces.at(SensorKind::Magnetometer).z;
    CHECK(*std::min_element(axis.samples.begin(), axis.samples.end()) == 2.5);
    CHECK(*std::max_element(axis.samples.begin(), axis.samples.end()) == 2.5);
    const auto stats = axis_statistics(axis);
    CHECK(stats[static_cast<int>(StatKind::PopulationStd)] == 0.0);
    CHECK(stats[static_cast<int>(StatKind::SampleStd)] == 0.0);
    CHECK(stats[static_cast<int>(StatKind::Variance)] == 0.0);
}

TEST_CASE("generated axis mean converges to the profile baseline") {
    const int n = 4000;
    const auto study = generate_study({basic_profile("a", -3.0, 2.0, n), basic_profile("b", 3.0, 2.0, n)}, 3, 77);
    for (const Session& s : study) {
        const double want = s.subject_id[0] == 'a' ? -3.0 : 3.0;
        for (SensorKind kind : kAllSensors) {
            const auto& samples = s.traces.at(kind).x.samples;
            double mean = 0.0;
            for (double v : samples) mean += v;
            mean /= n;
            CHECK(std::abs(mean - want) <= 5.0 * 2.0 / std::sqrt(double(n)));
        }
    }
}

TEST_CASE("drift and sinusoid recipes shape the series") {
    ClassProfile p = basic_profile("a", 0.0, 0.0, 1000);
    p.sensors[SensorKind::Accelerometer][0].drift_per_sample = 0.01;
    p.sensors[SensorKind::Accelerometer][1].sin_amplitude = 1.0;
    p.sensors[SensorKind::Accelerometer][1].sin_period_samples = 40.0;
    const auto study = generate_study({p, basic_profile("b", 0.0, 0.0, 1000)}, 1, 4);
    const auto& drifted = study[0].traces.at(SensorKind::Accelerometer).x.samples;
    CHECK(drifted.front() == 0.0);
    CHECK(drifted.back() == doctest::Approx(0.01 * 999).epsilon(1e-12));
    // period 40 puts exact crest/trough samples at t = 10 and t = 30
    const auto& wavy = study[0].traces.at(SensorKind::Accelerometer).y.samples;
    CHECK(*std::max_element(wavy.begin(), wavy.end()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*std::min_element(wavy.begin(), wavy.end()) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("generate_study validates profiles") {
    CHECK_THROWS_AS(generate_study({}, 3, 1), ValueError);
    CHECK_THROWS_AS(generate_study({basic_profile("a", 0, 1, 32), basic_profile("b", 0, 1, 32)}, 0, 1), ValueError);
    CHECK_THROWS_AS(generate_study({basic_profile("a", 0, 1, 32), basic_profile("a", 0, 1, 32)}, 1, 1), ValueError);
    CHECK_THROWS_AS(generate_study({basic_profile("a", 0, 1, 0)}, 1, 1), ValueError);

    ClassProfile bad_wave = basic_profile("w", 0, 1, 32);
    bad_wave.sensors[SensorKind::Gyroscope][2].sin_amplitude = 1.0;
    bad_wave.sensors[SensorKind::Gyroscope][2].sin_period_samples = 1.0;
    CHECK_THROWS_AS(generate_study({bad_wave, basic_profile("b", 0, 1, 32)}, 1, 1), ValueError);

    ClassProfile unlabeled = basic_profile("u", 0, 1, 32);
    unlabeled.labels = Labels{};
    CHECK_THROWS_AS(generate_study({unlabeled, basic_profile("b", 0, 1, 32)}, 1, 1), ValueError);
}

TEST_CASE("shuffle_labels permutes one attribute and keeps the rest") {
    auto study = generate_study({basic_profile("a", 0, 1, 16), basic_profile("b", 4, 1, 16)}, 10, 5);
    for (std::size_t i = 0; i < study.size(); ++i)
        study[i].labels.app = i % 2 == 0 ? App::Facebook : App::Twitter;
    const auto before = study;

    shuffle_labels(study, Attribute::Gender, 123);
    std::multiset<std::string> want, got;
    for (std::size_t i = 0; i < study.size(); ++i) {
        want.insert(*before[i].labels.value_of(Attribute::Gender));
        got.insert(*study[i].labels.value_of(Attribute::Gender));
        CHECK(study[i].labels.app == before[i].labels.app);
        CHECK(study[i].subject_id == before[i].subject_id);
    }
    CHECK(want == got);

    bool moved = false;
    for (std::size_t i = 0; i < study.size(); ++i) moved |= study[i].labels.gender != before[i].labels.gender;
    CHECK(moved);

    auto same = before;
    shuffle_labels(same, Attribute::Gender, 123);
    for (std::size_t i = 0; i < study.size(); ++i) CHECK(same[i].labels.gender == study[i].labels.gender);

    study[0].labels.gender.reset();
    CHECK_THROWS_AS(shuffle_labels(study, Attribute::Gender, 1), ValueError);
}

TEST_CASE("separable_profiles carry canonical label values and stay in range") {
    const auto profiles = separable_profiles(Attribute::App, 4, 20.0, 100);
    REQUIRE(profiles.size() == 4);
    CHECK(*profiles[0].labels.value_of(Attribute::App) == "Facebook");
    CHECK(*profiles[3].labels.value_of(Attribute::App) == "Twitter");
    for (const auto& p : profiles) CHECK(p.samples_per_session == 100);

    CHECK_THROWS_AS(separable_profiles(Attribute::App, 5, 20.0, 100), ValueError);
    CHECK_THROWS_AS(separable_profiles(Attribute::Gender, 1, 20.0, 100), ValueError);
    CHECK(separable_profiles(Attribute::Activity, 6, 20.0, 100).size() == 6);
}

TEST_CASE("study preset covers all four attributes with at least two values each") {
    const auto profiles = study_profiles(64);
    const auto study = generate_study(profiles, 4, 2);
    for (Attribute attr : {Attribute::Gender, Attribute::AgeGroup, Attribute::Hand, Attribute::App}) {
        std::set<std::string> values;
        for (const Session& s : study) {
            REQUIRE(s.labels.value_of(attr).has_value());
            values.insert(*s.labels.value_of(attr));
        }
        CHECK(values.size() >= 2);
    }
}

TEST_CASE("write_study writes a loadable, identical study") {
    TempDir dir("roundtrip");
    const auto study = generate_study({basic_profile("a", 0, 1, 48), basic_profile("b", 3, 1, 48)}, 3, 31);
    write_study(dir.path(), study, "probe");

    const auto loaded = load_study(read_manifest(dir.path() / "manifest.csv"));
    REQUIRE(loaded.size() == study.size());
    for (std::size_t i = 0; i < study.size(); ++i) {
        CHECK(loaded[i].subject_id == study[i].subject_id);
        CHECK(loaded[i].labels == study[i].labels);
        REQUIRE(loaded[i].traces.size() == 3);
        for (SensorKind kind : kAllSensors) {
            CHECK(loaded[i].traces.at(kind).x.samples == study[i].traces.at(kind).x.samples);
            CHECK(loaded[i].traces.at(kind).z.samples == study[i].traces.at(kind).z.samples);
        }
    }
}
