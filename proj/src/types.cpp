#include "actpat/types.hpp"

#include <sstream>

namespace actpat {

std::string_view to_string(SensorKind kind) {
    switch (kind) {
        case SensorKind::Accelerometer: return "accelerometer";
        case SensorKind::Gyroscope: return "gyroscope";
        case SensorKind::Magnetometer: return "magnetometer";
    }
    return "?";
}

std::optional<SensorKind> sensor_from_string(std::string_view text) {
    for (SensorKind k : kAllSensors)
        if (text == to_string(k)) return k;
    return std::nullopt;
}

std::string_view to_string(AxisName axis) {
    switch (axis) {
        case AxisName::X: return "x";
        case AxisName::Y: return "y";
        case AxisName::Z: return "z";
    }
    return "?";
}

std::string_view to_string(Gender v) {
    return v == Gender::Male ? "Male" : "Female";
}

std::string_view to_string(AgeGroup v) {
    switch (v) {
        case AgeGroup::Under20: return "Under20";
        case AgeGroup::From20To25: return "20to25";
        case AgeGroup::From25To30: return "25to30";
        case AgeGroup::From30To35: return "30to35";
        case AgeGroup::Over35: return "Over35";
    }
    return "?";
}

std::string_view to_string(Hand v) {
    switch (v) {
        case Hand::Left: return "Left";
        case Hand::Right: return "Right";
        case Hand::Both: return "Both";
    }
    return "?";
}

std::string_view to_string(App v) {
    switch (v) {
        case App::Facebook: return "Facebook";
        case App::Instagram: return "Instagram";
        case App::Whatsapp: return "Whatsapp";
        case App::Twitter: return "Twitter";
    }
    return "?";
}

std::string_view to_string(Activity v) {
    switch (v) {
        case Activity::Walking: return "Walking";
        case Activity::WalkingUpstairs: return "WalkingUpstairs";
        case Activity::WalkingDownstairs: return "WalkingDownstairs";
        case Activity::Sitting: return "Sitting";
        case Activity::Standing: return "Standing";
        case Activity::Laying: return "Laying";
    }
    return "?";
}

std::string_view to_string(Attribute v) {
    switch (v) {
        case Attribute::Gender: return "gender";
        case Attribute::AgeGroup: return "age";
        case Attribute::Hand: return "hand";
        case Attribute::App: return "app";
        case Attribute::Activity: return "activity";
    }
    return "?";
}

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view text, const std::array<Enum, N>& values) {
    for (Enum v : values)
        if (text == to_string(v)) return v;
    return std::nullopt;
}

}  // namespace

std::optional<Gender> gender_from_string(std::string_view text) {
    return lookup(text, std::array{Gender::Male, Gender::Female});
}

std::optional<AgeGroup> age_group_from_string(std::string_view text) {
    return lookup(text, std::array{AgeGroup::Under20, AgeGroup::From20To25, AgeGroup::From25To30,
                                   AgeGroup::From30To35, AgeGroup::Over35});
}

std::optional<Hand> hand_from_string(std::string_view text) {
    return lookup(text, std::array{Hand::Left, Hand::Right, Hand::Both});
}

std::optional<App> app_from_string(std::string_view text) {
    return lookup(text, std::array{App::Facebook, App::Instagram, App::Whatsapp, App::Twitter});
}

std::optional<Activity> activity_from_string(std::string_view text) {
    return lookup(text, std::array{Activity::Walking, Activity::WalkingUpstairs, Activity::WalkingDownstairs,
                                   Activity::Sitting, Activity::Standing, Activity::Laying});
}

std::optional<Attribute> attribute_from_string(std::string_view text) {
    return lookup(text, std::array{Attribute::Gender, Attribute::AgeGroup, Attribute::Hand, Attribute::App,
                                   Attribute::Activity});
}

const std::vector<std::string>& attribute_values(Attribute attr) {
    static const std::vector<std::string> gender{"Male", "Female"};
    static const std::vector<std::string> age{"Under20", "20to25", "25to30", "30to35", "Over35"};
    static const std::vector<std::string> hand{"Left", "Right", "Both"};
    static const std::vector<std::string> app{"Facebook", "Instagram", "Whatsapp", "Twitter"};
    static const std::vector<std::string> activity{"Walking",  "WalkingUpstairs", "WalkingDownstairs",
                                                   "Sitting",  "Standing",        "Laying"};
    switch (attr) {
        case Attribute::Gender: return gender;
        case Attribute::AgeGroup: return age;
        case Attribute::Hand: return hand;
        case Attribute::App: return app;
        case Attribute::Activity: return activity;
    }
    return gender;
}

AgeGroup age_group_from_years(int years) {
    if (years < 20) return AgeGroup::Under20;
    if (years < 25) return AgeGroup::From20To25;
    if (years < 30) return AgeGroup::From25To30;
    if (years < 35) return AgeGroup::From30To35;
    return AgeGroup::Over35;
}

std::optional<std::string> Labels::value_of(Attribute attr) const {
    switch (attr) {
        case Attribute::Gender:
            if (gender) return std::string(to_string(*gender));
            return std::nullopt;
        case Attribute::AgeGroup:
            if (age_group) return std::string(to_string(*age_group));
            return std::nullopt;
        case Attribute::Hand:
            if (hand) return std::string(to_string(*hand));
            return std::nullopt;
        case Attribute::App:
            if (app) return std::string(to_string(*app));
            return std::nullopt;
        case Attribute::Activity:
            if (activity) return std::string(to_string(*activity));
            return std::nullopt;
    }
    return std::nullopt;
}

void Labels::set(Attribute attr, std::string_view value) {
    const auto fail = [&]() {
        throw ValueError("unknown " + std::string(to_string(attr)) + " value: '" + std::string(value) + "'");
    };
    switch (attr) {
        case Attribute::Gender: {
            auto v = gender_from_string(value);
            if (!v) fail();
            gender = *v;
            return;
        }
        case Attribute::AgeGroup: {
            auto v = age_group_from_string(value);
            if (!v) fail();
            age_group = *v;
            return;
        }
        case Attribute::Hand: {
            auto v = hand_from_string(value);
            if (!v) fail();
            hand = *v;
            return;
        }
        case Attribute::App: {
            auto v = app_from_string(value);
            if (!v) fail();
            app = *v;
            return;
        }
        case Attribute::Activity: {
            auto v = activity_from_string(value);
            if (!v) fail();
            activity = *v;
            return;
        }
    }
}

namespace {

void check_axis(const std::string& where, const AxisSeries& series, std::size_t expected_len,
                std::vector<std::string>& out) {
    if (series.samples.size() != expected_len)
        out.push_back(where + ": axis length " + std::to_string(series.samples.size()) +
                      " differs from x-axis length " + std::to_string(expected_len));
    if (series.samples.empty()) out.push_back(where + ": empty series (length must be >= 1)");
    if (series.has_timestamps()) {
        if (series.timestamps_ms.size() != series.samples.size())
            out.push_back(where + ": timestamp count " + std::to_string(series.timestamps_ms.size()) +
                          " differs from sample count " + std::to_string(series.samples.size()));
        for (std::size_t i = 1; i < series.timestamps_ms.size(); ++i) {
            if (series.timestamps_ms[i] <= series.timestamps_ms[i - 1]) {
                out.push_back(where + ": timestamps not strictly increasing at index " + std::to_string(i));
                break;
            }
        }
    }
}

}  // namespace

std::vector<std::string> validate_session(const Session& session) {
    std::vector<std::string> violations;
    if (session.traces.empty()) violations.push_back("session " + session.subject_id + ": no sensor traces");
    if (!session.labels.any()) violations.push_back("session " + session.subject_id + ": no attribute label present");
    for (const auto& [kind, trace] : session.traces) {
        const std::string where = "session " + session.subject_id + " " + std::string(to_string(kind));
        if (trace.kind != kind) violations.push_back(where + ": trace kind does not match its map key");
        const std::size_t len = trace.x.samples.size();
        check_axis(where + " x", trace.x, len, violations);
        check_axis(where + " y", trace.y, len, violations);
        check_axis(where + " z", trace.z, len, violations);
    }
    return violations;
}

}  // namespace actpat
