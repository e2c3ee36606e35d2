#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace actpat {

// Error taxonomy. Parse/Format/Load map to distinct ingest failure modes;
// ValueError covers precondition violations on in-memory calls.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : Error {
    using Error::Error;
};
struct FormatError : Error {
    using Error::Error;
};
struct LoadError : Error {
    using Error::Error;
};
struct ValueError : Error {
    using Error::Error;
};

// Canonical sensor ordering fixes the feature layout; do not reorder.
enum class SensorKind { Accelerometer = 0, Gyroscope = 1, Magnetometer = 2 };

inline constexpr std::array<SensorKind, 3> kAllSensors{SensorKind::Accelerometer, SensorKind::Gyroscope,
                                                       SensorKind::Magnetometer};

std::string_view to_string(SensorKind kind);
std::optional<SensorKind> sensor_from_string(std::string_view text);

enum class AxisName { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<AxisName, 3> kAllAxes{AxisName::X, AxisName::Y, AxisName::Z};

std::string_view to_string(AxisName axis);

// Label spaces. Enumerator order is the canonical label order used for
// report rows/columns.
enum class Gender { Male, Female };
enum class AgeGroup { Under20, From20To25, From25To30, From30To35, Over35 };
enum class Hand { Left, Right, Both };
enum class App { Facebook, Instagram, Whatsapp, Twitter };
enum class Activity { Walking, WalkingUpstairs, WalkingDownstairs, Sitting, Standing, Laying };

enum class Attribute { Gender, AgeGroup, Hand, App, Activity };

std::string_view to_string(Gender v);
std::string_view to_string(AgeGroup v);
std::string_view to_string(Hand v);
std::string_view to_string(App v);
std::string_view to_string(Activity v);
std::string_view to_string(Attribute v);

std::optional<Gender> gender_from_string(std::string_view text);
std::optional<AgeGroup> age_group_from_string(std::string_view text);
std::optional<Hand> hand_from_string(std::string_view text);
std::optional<App> app_from_string(std::string_view text);
std::optional<Activity> activity_from_string(std::string_view text);
std::optional<Attribute> attribute_from_string(std::string_view text);

// Canonical value list (enum order) for one attribute.
const std::vector<std::string>& attribute_values(Attribute attr);

// Closed age bins; a boundary year belongs to the bin it lower-bounds
// (20 -> 20to25, 25 -> 25to30, 30 -> 30to35, 35 -> Over35).
AgeGroup age_group_from_years(int years);

struct Labels {
    std::optional<Gender> gender;
    std::optional<AgeGroup> age_group;
    std::optional<Hand> hand;
    std::optional<App> app;
    std::optional<Activity> activity;

    bool any() const {
        return gender.has_value() || age_group.has_value() || hand.has_value() || app.has_value() ||
               activity.has_value();
    }

    // Text form of one attribute's value, if present.
    std::optional<std::string> value_of(Attribute attr) const;
    void set(Attribute attr, std::string_view value);  // throws ValueError on unknown value

    bool operator==(const Labels&) const = default;
};

// One axis of one sensor recording. Timestamps are optional; when present
// they are strictly increasing and aligned 1:1 with samples.
struct AxisSeries {
    std::vector<double> samples;
    std::vector<double> timestamps_ms;

    bool has_timestamps() const { return !timestamps_ms.empty(); }
    std::size_t size() const { return samples.size(); }
};

struct SensorTrace {
    SensorKind kind = SensorKind::Accelerometer;
    AxisSeries x, y, z;

    std::size_t length() const { return x.samples.size(); }
    const AxisSeries& axis(AxisName a) const {
        switch (a) {
            case AxisName::X: return x;
            case AxisName::Y: return y;
            default: return z;
        }
    }
};

// A subject's complete recording for one session plus its labels. Immutable
// by convention after construction.
struct Session {
    std::string subject_id;
    std::map<SensorKind, SensorTrace> traces;
    Labels labels;
};

// Returns one human-readable violation per broken invariant; empty means the
// session satisfies every core-data invariant. Violations are data, not errors.
std::vector<std::string> validate_session(const Session& session);

}  // namespace actpat
