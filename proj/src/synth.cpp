#include "actpat/synth.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "actpat/ingest.hpp"
#include "actpat/rng.hpp"

namespace actpat {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void validate_profile(const ClassProfile& profile) {
    if (profile.name.empty()) throw ValueError("profile: empty name");
    if (profile.samples_per_session < 1)
        throw ValueError("profile '" + profile.name + "': samples_per_session must be >= 1");
    if (profile.sensors.empty()) throw ValueError("profile '" + profile.name + "': no sensors");
    if (!profile.labels.any()) throw ValueError("profile '" + profile.name + "': no labels");
    for (const auto& [kind, axes] : profile.sensors) {
        for (const AxisProfile& axis : axes) {
            if (axis.noise_std < 0)
                throw ValueError("profile '" + profile.name + "' " + std::string(to_string(kind)) +
                                 ": noise_std must be >= 0");
            if (axis.sin_amplitude > 0 && axis.sin_period_samples < 2)
                throw ValueError("profile '" + profile.name + "' " + std::string(to_string(kind)) +
                                 ": sin_period_samples must be >= 2 when sin_amplitude > 0");
        }
    }
}

AxisSeries synth_axis(const AxisProfile& profile, int samples, Rng& rng) {
    AxisSeries series;
    series.samples.reserve(static_cast<std::size_t>(samples));
    series.timestamps_ms.reserve(static_cast<std::size_t>(samples));
    for (int t = 0; t < samples; ++t) {
        double value = profile.baseline + profile.drift_per_sample * t;
        if (profile.sin_amplitude != 0.0 && profile.sin_period_samples >= 2)
            value += profile.sin_amplitude * std::sin(kTwoPi * t / profile.sin_period_samples);
        if (profile.noise_std > 0.0) value += profile.noise_std * rng.gaussian();
        series.samples.push_back(value);
        series.timestamps_ms.push_back(20.0 * t);  // 50 Hz
    }
    return series;
}

}  // namespace

std::vector<Session> generate_study(const std::vector<ClassProfile>& profiles, int subjects_per_profile,
                                    std::uint64_t seed) {
    if (profiles.empty()) throw ValueError("generate_study: no profiles");
    if (subjects_per_profile < 1) throw ValueError("generate_study: subjects_per_profile must be >= 1");
    std::set<std::string> names;
    for (const ClassProfile& profile : profiles) {
        validate_profile(profile);
        if (!names.insert(profile.name).second)
            throw ValueError("generate_study: duplicate profile name '" + profile.name + "'");
    }

    std::vector<Session> sessions;
    sessions.reserve(profiles.size() * static_cast<std::size_t>(subjects_per_profile));
    for (std::size_t p = 0; p < profiles.size(); ++p) {
        const ClassProfile& profile = profiles[p];
        for (int s = 0; s < subjects_per_profile; ++s) {
            Rng rng(derive_seed(seed, {0x5f17u, p, static_cast<std::uint64_t>(s)}));
            Session session;
            std::ostringstream id;
            id << profile.name << "_s" << s;
            session.subject_id = id.str();
            session.labels = profile.labels;
            for (const auto& [kind, axes] : profile.sensors) {
                SensorTrace trace;
                trace.kind = kind;
                trace.x = synth_axis(axes[0], profile.samples_per_session, rng);
                trace.y = synth_axis(axes[1], profile.samples_per_session, rng);
                trace.z = synth_axis(axes[2], profile.samples_per_session, rng);
                session.traces[kind] = std::move(trace);
            }
            sessions.push_back(std::move(session));
        }
    }
    return sessions;
}

void shuffle_labels(std::vector<Session>& sessions, Attribute attr, std::uint64_t seed) {
    std::vector<std::string> values;
    values.reserve(sessions.size());
    for (const Session& s : sessions) {
        const auto value = s.labels.value_of(attr);
        if (!value) throw ValueError("shuffle_labels: session '" + s.subject_id + "' lacks the attribute");
        values.push_back(*value);
    }
    Rng rng(derive_seed(seed, {0x5affu}));
    rng.shuffle(values);
    for (std::size_t i = 0; i < sessions.size(); ++i) sessions[i].labels.set(attr, values[i]);
}

std::vector<ClassProfile> separable_profiles(Attribute attr, int n_classes, double separation_sigmas,
                                             int samples_per_session) {
    const std::vector<std::string>& values = attribute_values(attr);
    if (n_classes < 2 || n_classes > static_cast<int>(values.size()))
        throw ValueError("separable_profiles: n_classes must be in [2, " + std::to_string(values.size()) + "] for " +
                         std::string(to_string(attr)));

    std::vector<ClassProfile> profiles;
    for (int c = 0; c < n_classes; ++c) {
        ClassProfile profile;
        profile.name = "class" + std::to_string(c);
        profile.samples_per_session = samples_per_session;
        profile.labels.set(attr, values[static_cast<std::size_t>(c)]);
        const double noise = 1.0;
        for (std::size_t s = 0; s < kAllSensors.size(); ++s) {
            std::array<AxisProfile, 3> axes;
            for (std::size_t a = 0; a < 3; ++a) {
                AxisProfile& axis = axes[a];
                axis.noise_std = noise;
                // Each class claims its own subset of the nine axes (axis
                // index mod n_classes), placing class centroids in general
                // position: one-vs-rest separable, never collinear.
                const int axis_index = static_cast<int>(3 * s + a);
                axis.baseline = axis_index % n_classes == c ? separation_sigmas * noise : 0.0;
                axis.sin_amplitude = 0.25;
                axis.sin_period_samples = 40.0 + 10.0 * static_cast<double>(a);
            }
            profile.sensors[kAllSensors[s]] = axes;
        }
        profiles.push_back(std::move(profile));
    }
    return profiles;
}

std::vector<ClassProfile> study_profiles(int samples_per_session) {
    // one profile per app, rotating the other attributes; baselines differ
    // mildly so no attribute is perfectly separable
    const std::array<Gender, 4> genders{Gender::Male, Gender::Female, Gender::Male, Gender::Female};
    const std::array<AgeGroup, 4> ages{AgeGroup::From20To25, AgeGroup::From25To30, AgeGroup::From30To35,
                                       AgeGroup::Under20};
    const std::array<Hand, 4> hands{Hand::Right, Hand::Left, Hand::Both, Hand::Right};
    const std::vector<std::string>& apps = attribute_values(Attribute::App);

    std::vector<ClassProfile> profiles;
    for (std::size_t c = 0; c < apps.size(); ++c) {
        ClassProfile profile;
        profile.name = "app" + std::to_string(c);
        profile.samples_per_session = samples_per_session;
        profile.labels.app = static_cast<App>(c);
        profile.labels.gender = genders[c];
        profile.labels.age_group = ages[c];
        profile.labels.hand = hands[c];
        for (std::size_t s = 0; s < kAllSensors.size(); ++s) {
            std::array<AxisProfile, 3> axes;
            for (std::size_t a = 0; a < 3; ++a) {
                AxisProfile& axis = axes[a];
                axis.noise_std = 0.8 + 0.1 * static_cast<double>(s);
                axis.baseline = 1.5 * static_cast<double>(c) + 0.4 * static_cast<double>(a);
                axis.drift_per_sample = 1e-4 * static_cast<double>(c);
                axis.sin_amplitude = 0.3 + 0.1 * static_cast<double>(c);
                axis.sin_period_samples = 30.0 + 15.0 * static_cast<double>(a);
            }
            profile.sensors[kAllSensors[s]] = axes;
        }
        profiles.push_back(std::move(profile));
    }
    return profiles;
}

void write_study(const std::filesystem::path& dir, const std::vector<Session>& sessions,
                 const std::string& provenance) {
    std::filesystem::create_directories(dir / "traces");
    std::vector<ManifestRecord> records;
    records.reserve(sessions.size());
    for (const Session& session : sessions) {
        ManifestRecord rec;
        rec.subject_id = session.subject_id;
        rec.labels = session.labels;
        for (const auto& [kind, trace] : session.traces) {
            const std::filesystem::path rel =
                std::filesystem::path("traces") / (session.subject_id + "_" + std::string(to_string(kind)) + ".csv");
            write_trace_csv(dir / rel, trace);
            rec.files[kind] = rel;
        }
        records.push_back(std::move(rec));
    }
    write_manifest(dir / "manifest.csv", records, provenance);
}

}  // namespace actpat
