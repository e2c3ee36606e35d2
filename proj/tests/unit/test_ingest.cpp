#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "actpat/ingest.hpp"
#include "actpat/rng.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace actpat;
using testsupport::TempDir;

namespace {

std::vector<std::string> file_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

}  // namespace

TEST_CASE("trace CSV round-trips exactly, with and without timestamps") {
    TempDir dir("trace");
    Rng rng(3);
    SensorTrace trace;
    trace.kind = SensorKind::Gyroscope;
    for (int i = 0; i < 100; ++i) {
        trace.x.samples.push_back(rng.gaussian());
        trace.y.samples.push_back(rng.uniform(-7, 7));
        trace.z.samples.push_back(rng.gaussian() * 1e-7);
    }

    const auto bare = dir.path() / "bare.csv";
    write_trace_csv(bare, trace);
    const SensorTrace back = parse_trace_csv(bare, SensorKind::Gyroscope);
    CHECK(back.kind == SensorKind::Gyroscope);
    REQUIRE(back.x.samples.size() == 100);
    CHECK(back.x.samples == trace.x.samples);
    CHECK(back.y.samples == trace.y.samples);
    CHECK(back.z.samples == trace.z.samples);
    CHECK_FALSE(back.x.has_timestamps());

    for (int i = 0; i < 100; ++i) {
        const double ts = 20.0 * i + 0.25;
        trace.x.timestamps_ms.push_back(ts);
        trace.y.timestamps_ms.push_back(ts);
        trace.z.timestamps_ms.push_back(ts);
    }
    const auto stamped = dir.path() / "stamped.csv";
    write_trace_csv(stamped, trace);
    const SensorTrace back2 = parse_trace_csv(stamped, SensorKind::Gyroscope);
    CHECK(back2.x.timestamps_ms == trace.x.timestamps_ms);
    CHECK(back2.x.samples == trace.x.samples);

    // second round trip is byte-identical
    const auto again = dir.path() / "again.csv";
    write_trace_csv(again, back2);
    CHECK(file_lines(again) == file_lines(stamped));
}

TEST_CASE("trace CSV rejects malformed rows with the row number") {
    TempDir dir("badtrace");
    const auto p = dir.path() / "t.csv";

    write_file(p, "timestamp_ms,x,y,z\n12,abc,0.1,0.2\n");
    CHECK_THROWS_AS(parse_trace_csv(p, SensorKind::Accelerometer), ParseError);
    try {
        parse_trace_csv(p, SensorKind::Accelerometer);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }

    write_file(p, "x,y,z\n0.1,0.2\n");
    CHECK_THROWS_AS(parse_trace_csv(p, SensorKind::Accelerometer), ParseError);

    write_file(p, "timestamp_ms,x,y,z\n10,1,1,1\n10,2,2,2\n20,3,3,3\n");
    CHECK_THROWS_AS(parse_trace_csv(p, SensorKind::Accelerometer), FormatError);

    write_file(p, "a,b,c\n1,2,3\n");
    CHECK_THROWS_AS(parse_trace_csv(p, SensorKind::Accelerometer), FormatError);

    write_file(p, "x,y,z\n");
    CHECK_THROWS_AS(parse_trace_csv(p, SensorKind::Accelerometer), FormatError);

    CHECK_THROWS_AS(parse_trace_csv(dir.path() / "absent.csv", SensorKind::Accelerometer), LoadError);
}

TEST_CASE("manifest round-trips records, labels, and sensor paths") {
    TempDir dir("manifest");

    ManifestRecord a;
    a.subject_id = "alpha";
    a.labels.gender = Gender::Female;
    a.labels.age_group = AgeGroup::Under20;
    a.labels.hand = Hand::Both;
    a.labels.app = App::Twitter;
    a.files[SensorKind::Accelerometer] = "alpha_accel.csv";
    a.files[SensorKind::Gyroscope] = "alpha_gyro.csv";
    a.files[SensorKind::Magnetometer] = "alpha_mag.csv";

    ManifestRecord b;  // partial labels, partial sensors
    b.subject_id = "beta";
    b.labels.gender = Gender::Male;
    b.files[SensorKind::Accelerometer] = "beta_accel.csv";

    const auto path = dir.path() / "manifest.csv";
    write_manifest(path, {a, b}, "probe");
    const StudyManifest manifest = read_manifest(path);
    CHECK(manifest.base_dir == dir.path());
    REQUIRE(manifest.records.size() == 2);
    CHECK(manifest.records[0].subject_id == "alpha");
    CHECK(manifest.records[0].labels == a.labels);
    CHECK(manifest.records[0].files == a.files);
    CHECK(manifest.records[1].labels == b.labels);
    CHECK(manifest.records[1].files.size() == 1);

    write_file(path, "# only comments\n\n");
    CHECK(read_manifest(path).records.empty());
    CHECK(load_study(read_manifest(path)).empty());

    write_file(path, "x,Male,,,,a.csv,b.csv\n");  // 7 fields
    CHECK_THROWS_AS(read_manifest(path), FormatError);

    write_file(path, "x,Martian,,,,a.csv,b.csv,c.csv\n");
    CHECK_THROWS_AS(read_manifest(path), FormatError);

    write_file(path, ",Male,,,,a.csv,b.csv,c.csv\n");
    CHECK_THROWS_AS(read_manifest(path), FormatError);
}

TEST_CASE("load_study resolves trace files relative to the manifest") {
    TempDir dir("study");
    SensorTrace tr;
    tr.kind = SensorKind::Accelerometer;
    tr.x.samples = {1, 2};
    tr.y.samples = {3, 4};
    tr.z.samples = {5, 6};
    write_trace_csv(dir.path() / "a.csv", tr);

    ManifestRecord rec;
    rec.subject_id = "solo";
    rec.labels.gender = Gender::Male;
    rec.files[SensorKind::Accelerometer] = "a.csv";
    const auto path = dir.path() / "manifest.csv";
    write_manifest(path, {rec});

    const auto sessions = load_study(read_manifest(path));
    REQUIRE(sessions.size() == 1);
    CHECK(sessions[0].subject_id == "solo");
    CHECK(sessions[0].traces.at(SensorKind::Accelerometer).x.samples == std::vector<double>{1, 2});

    ManifestRecord missing = rec;
    missing.subject_id = "ghost";
    missing.files[SensorKind::Gyroscope] = "nowhere.csv";
    write_manifest(path, {missing});
    try {
        load_study(read_manifest(path));
        FAIL("expected LoadError");
    } catch (const LoadError& e) {
        CHECK(std::string(e.what()).find("ghost") != std::string::npos);
    }
}

TEST_CASE("UCI loader maps windows to activity-labeled two-sensor sessions") {
    TempDir dir("uci");
    const std::map<std::string, int> counts{{"Walking", 5},  {"WalkingUpstairs", 4}, {"WalkingDownstairs", 3},
                                            {"Sitting", 3},  {"Standing", 3},        {"Laying", 2}};
    testsupport::write_uci_dir(dir.path(), counts);

    UciLayout layout;
    layout.root = dir.path();
    const auto sessions = load_uci_har(layout);
    REQUIRE(sessions.size() == 20);

    std::map<std::string, int> seen;
    for (const auto& s : sessions) {
        REQUIRE(s.labels.activity.has_value());
        seen[std::string(to_string(*s.labels.activity))] += 1;
        CHECK(s.traces.size() == 2);
        CHECK(s.traces.count(SensorKind::Accelerometer) == 1);
        CHECK(s.traces.count(SensorKind::Gyroscope) == 1);
        CHECK(s.traces.count(SensorKind::Magnetometer) == 0);
        CHECK(s.traces.at(SensorKind::Accelerometer).length() == 128);
        CHECK_FALSE(s.labels.gender.has_value());
    }
    CHECK(seen == counts);
    CHECK(sessions[0].subject_id == "test_1");
    CHECK(sessions[19].subject_id == "test_20");

    // windows follow y-file order; id 6 lines are Laying
    const auto y = file_lines(dir.path() / "test" / "y_test.txt");
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == "6") {
            CHECK(sessions[i].labels.activity == Activity::Laying);
        } else if (y[i] == "1") {
            CHECK(sessions[i].labels.activity == Activity::Walking);
        }
    }
}

TEST_CASE("UCI loader reads the train split and rejects broken layouts") {
    TempDir dir("ucitrain");
    const std::map<std::string, int> counts{{"Walking", 3}, {"Sitting", 2}};
    testsupport::write_uci_dir(dir.path(), counts, "train");

    UciLayout layout;
    layout.root = dir.path();
    layout.split = UciSplit::Train;
    CHECK(load_uci_har(layout).size() == 5);

    // body accel files were never written
    layout.accel = UciAccelSource::Body;
    try {
        load_uci_har(layout);
        FAIL("expected LoadError");
    } catch (const LoadError& e) {
        CHECK(std::string(e.what()).find("body_acc_x") != std::string::npos);
    }
    layout.accel = UciAccelSource::Total;

    // 127-value line
    const auto gx = dir.path() / "train" / "Inertial Signals" / "body_gyro_x_train.txt";
    auto lines = file_lines(gx);
    lines[0] = lines[0].substr(0, lines[0].rfind(' '));
    {
        std::ofstream out(gx);
        for (const auto& l : lines) out << l << "\n";
    }
    CHECK_THROWS_AS(load_uci_har(layout), FormatError);

    // window-count disagreement
    {
        std::ofstream out(gx);
        for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
            std::ostringstream row;
            for (int j = 0; j < 128; ++j) row << (j ? " " : "") << "0.5";
            out << row.str() << "\n";
        }
    }
    CHECK_THROWS_AS(load_uci_har(layout), FormatError);
}

TEST_CASE("UCI loader validates the label file") {
    TempDir dir("ucilabels");
    testsupport::write_uci_dir(dir.path(), {{"Walking", 2}, {"Laying", 2}});
    UciLayout layout;
    layout.root = dir.path();

    write_file(dir.path() / "test" / "y_test.txt", "1\n9\n1\n6\n");
    CHECK_THROWS_AS(load_uci_har(layout), FormatError);

    write_file(dir.path() / "test" / "y_test.txt", "1\n6\n");
    CHECK_THROWS_AS(load_uci_har(layout), FormatError);  // count mismatch

    write_file(dir.path() / "test" / "y_test.txt", "1\n6\n1\n6\n");
    CHECK(load_uci_har(layout).size() == 4);

    write_file(dir.path() / "activity_labels.txt", "1 WALKING\n6 NAPPING\n");
    CHECK_THROWS_AS(load_uci_har(layout), FormatError);

    std::filesystem::remove(dir.path() / "activity_labels.txt");
    CHECK_THROWS_AS(load_uci_har(layout), LoadError);
}
