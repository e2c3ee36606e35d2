#include "actpat/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "textio.hpp"

namespace actpat {

std::string_view to_string(StatKind stat) {
    switch (stat) {
        case StatKind::Mean: return "mean";
        case StatKind::Median: return "median";
        case StatKind::Mode: return "mode";
        case StatKind::QuantileOneThird: return "q13";
        case StatKind::QuantileTwoThirds: return "q23";
        case StatKind::QuantileFull: return "q33";
        case StatKind::PopulationStd: return "popstd";
        case StatKind::SampleStd: return "samplestd";
        case StatKind::Variance: return "variance";
    }
    return "?";
}

std::string FeatureId::name() const {
    std::string out;
    out += to_string(sensor);
    out += '_';
    out += to_string(axis);
    out += '_';
    out += to_string(stat);
    return out;
}

FeatureSchema FeatureSchema::for_sensors(std::vector<SensorKind> sensors) {
    std::sort(sensors.begin(), sensors.end());
    sensors.erase(std::unique(sensors.begin(), sensors.end()), sensors.end());
    FeatureSchema schema;
    schema.ids.reserve(sensors.size() * 3 * kStatsPerAxis);
    for (SensorKind sensor : sensors)
        for (AxisName axis : kAllAxes)
            for (StatKind stat : kAllStats) schema.ids.push_back({sensor, axis, stat});
    return schema;
}

std::vector<std::string> FeatureSchema::names() const {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (const FeatureId& id : ids) out.push_back(id.name());
    return out;
}

std::vector<SensorKind> FeatureSchema::sensors() const {
    std::vector<SensorKind> out;
    for (const FeatureId& id : ids)
        if (out.empty() || out.back() != id.sensor) out.push_back(id.sensor);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

// linear interpolation between order statistics at position p*(n-1)
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// most frequent value after rounding to 4 decimals; ties go to the smallest
double mode_rounded(const std::vector<double>& samples) {
    std::map<double, int> counts;
    for (double v : samples) counts[std::round(v * 1e4) / 1e4] += 1;
    double best = counts.begin()->first;
    int best_count = counts.begin()->second;
    for (const auto& [value, count] : counts) {
        if (count > best_count) {
            best = value;
            best_count = count;
        }
    }
    return best;
}

}  // namespace

std::array<double, kStatsPerAxis> axis_statistics(const AxisSeries& series) {
    const std::vector<double>& v = series.samples;
    if (v.empty()) throw ValueError("axis_statistics: empty series");
    const auto n = static_cast<double>(v.size());

    double sum = 0.0;
    for (double s : v) sum += s;
    const double mean = sum / n;

    double ss = 0.0;
    for (double s : v) ss += (s - mean) * (s - mean);
    const double pop_var = ss / n;
    const double sample_var = v.size() >= 2 ? ss / (n - 1.0) : 0.0;

    std::vector<double> sorted(v);
    std::sort(sorted.begin(), sorted.end());

    std::array<double, kStatsPerAxis> out{};
    out[static_cast<int>(StatKind::Mean)] = mean;
    out[static_cast<int>(StatKind::Median)] = quantile_sorted(sorted, 0.5);
    out[static_cast<int>(StatKind::Mode)] = mode_rounded(v);
    out[static_cast<int>(StatKind::QuantileOneThird)] = quantile_sorted(sorted, 1.0 / 3.0);
    out[static_cast<int>(StatKind::QuantileTwoThirds)] = quantile_sorted(sorted, 2.0 / 3.0);
    out[static_cast<int>(StatKind::QuantileFull)] = sorted.back();
    out[static_cast<int>(StatKind::PopulationStd)] = std::sqrt(pop_var);
    out[static_cast<int>(StatKind::SampleStd)] = std::sqrt(sample_var);
    out[static_cast<int>(StatKind::Variance)] = sample_var;
    return out;
}

std::vector<double> featurize_session(const Session& session, const FeatureSchema& schema) {
    // one stats pass per (sensor, axis), then scatter into schema order
    std::map<std::pair<SensorKind, AxisName>, std::array<double, kStatsPerAxis>> cache;
    std::vector<double> out;
    out.reserve(schema.size());
    for (const FeatureId& id : schema.ids) {
        const auto key = std::make_pair(id.sensor, id.axis);
        auto it = cache.find(key);
        if (it == cache.end()) {
            const auto trace = session.traces.find(id.sensor);
            if (trace == session.traces.end())
                throw ValueError("featurize_session: session '" + session.subject_id + "' has no " +
                                 std::string(to_string(id.sensor)) + " trace required by the schema");
            it = cache.emplace(key, axis_statistics(trace->second.axis(id.axis))).first;
        }
        out.push_back(it->second[static_cast<int>(id.stat)]);
    }
    return out;
}

std::vector<SensorKind> common_sensors(const std::vector<Session>& sessions) {
    std::vector<SensorKind> out;
    if (sessions.empty()) return out;
    for (SensorKind kind : kAllSensors) {
        const bool everywhere = std::all_of(sessions.begin(), sessions.end(),
                                            [&](const Session& s) { return s.traces.count(kind) > 0; });
        if (everywhere) out.push_back(kind);
    }
    return out;
}

std::vector<std::string> Dataset::classes() const {
    std::set<std::string> seen(targets.begin(), targets.end());
    std::vector<std::string> out;
    for (const std::string& value : attribute_values(attribute)) {
        if (seen.erase(value)) out.push_back(value);
    }
    out.insert(out.end(), seen.begin(), seen.end());
    return out;
}

Dataset Dataset::subset(const std::vector<int>& row_indices) const {
    Dataset out;
    out.schema = schema;
    out.attribute = attribute;
    out.x.resize(static_cast<Eigen::Index>(row_indices.size()), x.cols());
    out.targets.reserve(row_indices.size());
    out.row_ids.reserve(row_indices.size());
    Eigen::Index r = 0;
    for (int i : row_indices) {
        out.x.row(r++) = x.row(i);
        out.targets.push_back(targets[static_cast<std::size_t>(i)]);
        out.row_ids.push_back(row_ids[static_cast<std::size_t>(i)]);
    }
    return out;
}

Dataset build_dataset(const std::vector<Session>& sessions, Attribute target, const FeatureSchema& schema) {
    if (sessions.empty()) throw ValueError("build_dataset: no sessions");

    std::vector<std::string> missing;
    for (const Session& s : sessions)
        if (!s.labels.value_of(target)) missing.push_back(s.subject_id);
    if (!missing.empty()) {
        std::string ids;
        for (const std::string& id : missing) {
            if (!ids.empty()) ids += ", ";
            ids += id;
        }
        throw ValueError("build_dataset: sessions missing " + std::string(to_string(target)) + " label: " + ids);
    }

    Dataset ds;
    ds.schema = schema;
    ds.attribute = target;
    ds.x.resize(static_cast<Eigen::Index>(sessions.size()), static_cast<Eigen::Index>(schema.size()));
    for (std::size_t i = 0; i < sessions.size(); ++i) {
        const std::vector<double> row = featurize_session(sessions[i], schema);
        for (std::size_t j = 0; j < row.size(); ++j) ds.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
        ds.targets.push_back(*sessions[i].labels.value_of(target));
        ds.row_ids.push_back(sessions[i].subject_id);
    }

    if (ds.classes().size() < 2)
        throw ValueError("build_dataset: need at least 2 distinct " + std::string(to_string(target)) +
                         " values, got " + std::to_string(ds.classes().size()));
    return ds;
}

void write_feature_csv(const std::filesystem::path& path, const Dataset& dataset, const std::string& provenance) {
    std::ofstream out(path);
    if (!out) throw LoadError("cannot open for writing: " + path.string());
    if (!provenance.empty()) out << "# " << provenance << "\n";
    out << "row_id,target";
    for (const std::string& name : dataset.schema.names()) out << ',' << name;
    out << '\n';
    for (Eigen::Index r = 0; r < dataset.rows(); ++r) {
        out << dataset.row_ids[static_cast<std::size_t>(r)] << ',' << dataset.targets[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < dataset.cols(); ++c) out << ',' << format_double(dataset.x(r, c));
        out << '\n';
    }
}

}  // namespace actpat
