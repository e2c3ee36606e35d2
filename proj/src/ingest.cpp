#include "actpat/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "textio.hpp"

namespace actpat {

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open file: " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

}  // namespace

SensorTrace parse_trace_csv(const std::filesystem::path& path, SensorKind kind) {
    const std::vector<std::string> lines = read_lines(path);

    std::size_t i = 0;
    while (i < lines.size() && (trim(lines[i]).empty() || trim(lines[i]).front() == '#')) ++i;
    if (i >= lines.size()) throw FormatError("empty trace file: " + path.string());

    const auto header = split(trim(lines[i]), ',');
    bool with_timestamps = false;
    if (header.size() == 4 && trim(header[0]) == "timestamp_ms" && trim(header[1]) == "x" &&
        trim(header[2]) == "y" && trim(header[3]) == "z") {
        with_timestamps = true;
    } else if (header.size() == 3 && trim(header[0]) == "x" && trim(header[1]) == "y" && trim(header[2]) == "z") {
        with_timestamps = false;
    } else {
        throw FormatError("bad trace header in " + path.string() + ": expected 'timestamp_ms,x,y,z' or 'x,y,z'");
    }
    ++i;

    SensorTrace trace;
    trace.kind = kind;
    double prev_ts = 0.0;
    bool have_prev = false;
    for (; i < lines.size(); ++i) {
        const std::string_view line = trim(lines[i]);
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        const std::size_t expected = with_timestamps ? 4 : 3;
        const std::string row = std::to_string(i + 1);
        if (cells.size() != expected)
            throw ParseError("row " + row + " of " + path.string() + ": expected " + std::to_string(expected) +
                             " values, got " + std::to_string(cells.size()));
        std::size_t c = 0;
        if (with_timestamps) {
            const auto ts = parse_double(cells[c++]);
            if (!ts) throw ParseError("row " + row + " of " + path.string() + ": non-numeric timestamp");
            if (have_prev && *ts <= prev_ts)
                throw FormatError("row " + row + " of " + path.string() + ": timestamps not strictly increasing");
            prev_ts = *ts;
            have_prev = true;
            trace.x.timestamps_ms.push_back(*ts);
            trace.y.timestamps_ms.push_back(*ts);
            trace.z.timestamps_ms.push_back(*ts);
        }
        for (AxisSeries* axis : {&trace.x, &trace.y, &trace.z}) {
            const auto value = parse_double(cells[c++]);
            if (!value) throw ParseError("row " + row + " of " + path.string() + ": non-numeric value");
            axis->samples.push_back(*value);
        }
    }
    if (trace.x.samples.empty()) throw FormatError("trace file has no data rows: " + path.string());
    return trace;
}

void write_trace_csv(const std::filesystem::path& path, const SensorTrace& trace) {
    std::ofstream out(path);
    if (!out) throw LoadError("cannot open for writing: " + path.string());
    const bool with_timestamps = trace.x.has_timestamps();
    out << (with_timestamps ? "timestamp_ms,x,y,z" : "x,y,z") << '\n';
    for (std::size_t i = 0; i < trace.x.samples.size(); ++i) {
        if (with_timestamps) out << format_double(trace.x.timestamps_ms[i]) << ',';
        out << format_double(trace.x.samples[i]) << ',' << format_double(trace.y.samples[i]) << ','
            << format_double(trace.z.samples[i]) << '\n';
    }
}

StudyManifest read_manifest(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    StudyManifest manifest;
    manifest.base_dir = path.parent_path();

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string_view line = trim(lines[i]);
        if (line.empty() || line.front() == '#') continue;
        const auto cells = split(line, ',');
        if (cells.size() != 8)
            throw FormatError("manifest line " + std::to_string(i + 1) + ": expected 8 fields, got " +
                              std::to_string(cells.size()));
        ManifestRecord rec;
        rec.subject_id = std::string(trim(cells[0]));
        if (rec.subject_id.empty()) throw FormatError("manifest line " + std::to_string(i + 1) + ": empty subject_id");
        const std::array<Attribute, 4> attrs{Attribute::Gender, Attribute::AgeGroup, Attribute::Hand, Attribute::App};
        for (std::size_t a = 0; a < attrs.size(); ++a) {
            const std::string_view value = trim(cells[1 + a]);
            if (value.empty()) continue;
            try {
                rec.labels.set(attrs[a], value);
            } catch (const ValueError& e) {
                throw FormatError("manifest line " + std::to_string(i + 1) + ": " + e.what());
            }
        }
        const std::array<SensorKind, 3> sensors{SensorKind::Accelerometer, SensorKind::Gyroscope,
                                                SensorKind::Magnetometer};
        for (std::size_t s = 0; s < sensors.size(); ++s) {
            const std::string_view file = trim(cells[5 + s]);
            if (file.empty()) continue;
            rec.files[sensors[s]] = std::filesystem::path(std::string(file));
        }
        manifest.records.push_back(std::move(rec));
    }
    return manifest;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRecord>& records,
                    const std::string& provenance) {
    std::ofstream out(path);
    if (!out) throw LoadError("cannot open for writing: " + path.string());
    if (!provenance.empty()) out << "# " << provenance << "\n";
    for (const ManifestRecord& rec : records) {
        out << rec.subject_id;
        for (Attribute attr : {Attribute::Gender, Attribute::AgeGroup, Attribute::Hand, Attribute::App}) {
            const auto value = rec.labels.value_of(attr);
            out << ',' << (value ? *value : "");
        }
        for (SensorKind kind : kAllSensors) {
            const auto it = rec.files.find(kind);
            out << ',' << (it != rec.files.end() ? it->second.generic_string() : "");
        }
        out << '\n';
    }
}

std::vector<Session> load_study(const StudyManifest& manifest) {
    std::vector<Session> sessions;
    sessions.reserve(manifest.records.size());
    for (const ManifestRecord& rec : manifest.records) {
        Session session;
        session.subject_id = rec.subject_id;
        session.labels = rec.labels;
        for (const auto& [kind, file] : rec.files) {
            const std::filesystem::path full = file.is_absolute() ? file : manifest.base_dir / file;
            if (!std::filesystem::exists(full))
                throw LoadError("record '" + rec.subject_id + "': missing trace file " + full.string());
            session.traces[kind] = parse_trace_csv(full, kind);
        }
        sessions.push_back(std::move(session));
    }
    return sessions;
}

std::string_view to_string(UciSplit split) {
    return split == UciSplit::Train ? "train" : "test";
}

namespace {

// "WALKING_UPSTAIRS" -> "walkingupstairs" so dataset names match enum names
std::string normalize_label_name(std::string_view raw) {
    std::string out;
    for (char ch : raw)
        if (ch != '_' && ch != ' ') out += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

std::vector<std::vector<double>> read_signal_file(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw LoadError("missing UCI signal file: " + path.string());
    const std::vector<std::string> lines = read_lines(path);
    std::vector<std::vector<double>> rows;
    rows.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto cells = split_whitespace(lines[i]);
        if (cells.size() != 128)
            throw FormatError("line " + std::to_string(i + 1) + " of " + path.string() + ": expected 128 values, got " +
                              std::to_string(cells.size()));
        std::vector<double> row;
        row.reserve(128);
        for (const std::string_view cell : cells) {
            const auto value = parse_double(cell);
            if (!value)
                throw ParseError("line " + std::to_string(i + 1) + " of " + path.string() + ": non-numeric value");
            row.push_back(*value);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::vector<Session> load_uci_har(const UciLayout& layout) {
    const std::string split = std::string(to_string(layout.split));
    const std::filesystem::path split_dir = layout.root / split;
    const std::filesystem::path signals = split_dir / "Inertial Signals";
    const std::string acc_prefix = layout.accel == UciAccelSource::Total ? "total_acc_" : "body_acc_";

    // id -> Activity via the dataset's own label-name file
    std::map<long, Activity> id_to_activity;
    {
        const std::filesystem::path labels_path = layout.root / "activity_labels.txt";
        if (!std::filesystem::exists(labels_path)) throw LoadError("missing file: " + labels_path.string());
        const std::vector<std::string> lines = read_lines(labels_path);
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const std::string_view line = trim(lines[i]);
            if (line.empty()) continue;
            const auto cells = split_whitespace(line);
            if (cells.size() != 2)
                throw FormatError("activity_labels.txt line " + std::to_string(i + 1) + ": expected 'id name'");
            const auto id = parse_long(cells[0]);
            if (!id) throw FormatError("activity_labels.txt line " + std::to_string(i + 1) + ": bad id");
            const std::string normalized = normalize_label_name(cells[1]);
            bool matched = false;
            for (Activity act : {Activity::Walking, Activity::WalkingUpstairs, Activity::WalkingDownstairs,
                                 Activity::Sitting, Activity::Standing, Activity::Laying}) {
                if (normalized == normalize_label_name(to_string(act))) {
                    id_to_activity[*id] = act;
                    matched = true;
                    break;
                }
            }
            if (!matched)
                throw FormatError("activity_labels.txt line " + std::to_string(i + 1) + ": unknown activity name '" +
                                  std::string(cells[1]) + "'");
        }
    }

    std::array<std::vector<std::vector<double>>, 3> acc;
    std::array<std::vector<std::vector<double>>, 3> gyro;
    const std::array<std::string, 3> axes{"x", "y", "z"};
    for (std::size_t a = 0; a < 3; ++a) {
        acc[a] = read_signal_file(signals / (acc_prefix + axes[a] + "_" + split + ".txt"));
        gyro[a] = read_signal_file(signals / ("body_gyro_" + axes[a] + "_" + split + ".txt"));
    }

    const std::size_t n = acc[0].size();
    for (std::size_t a = 0; a < 3; ++a) {
        if (acc[a].size() != n || gyro[a].size() != n)
            throw FormatError("UCI signal files disagree on window count under " + signals.string());
    }

    std::vector<long> label_ids;
    {
        const std::filesystem::path y_path = split_dir / ("y_" + split + ".txt");
        if (!std::filesystem::exists(y_path)) throw LoadError("missing file: " + y_path.string());
        const std::vector<std::string> lines = read_lines(y_path);
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const std::string_view line = trim(lines[i]);
            if (line.empty()) continue;
            const auto id = parse_long(line);
            if (!id) throw FormatError("line " + std::to_string(i + 1) + " of " + y_path.string() + ": bad label id");
            if (!id_to_activity.count(*id))
                throw FormatError("line " + std::to_string(i + 1) + " of " + y_path.string() + ": label id " +
                                  std::to_string(*id) + " not in activity_labels.txt");
            label_ids.push_back(*id);
        }
    }
    if (label_ids.size() != n)
        throw FormatError("UCI label count " + std::to_string(label_ids.size()) + " does not match window count " +
                          std::to_string(n));

    std::vector<Session> sessions;
    sessions.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Session session;
        {
            std::ostringstream id;
            id << split << '_' << i + 1;
            session.subject_id = id.str();
        }
        session.labels.activity = id_to_activity.at(label_ids[i]);
        SensorTrace acc_trace;
        acc_trace.kind = SensorKind::Accelerometer;
        acc_trace.x.samples = acc[0][i];
        acc_trace.y.samples = acc[1][i];
        acc_trace.z.samples = acc[2][i];
        SensorTrace gyro_trace;
        gyro_trace.kind = SensorKind::Gyroscope;
        gyro_trace.x.samples = gyro[0][i];
        gyro_trace.y.samples = gyro[1][i];
        gyro_trace.z.samples = gyro[2][i];
        session.traces[SensorKind::Accelerometer] = std::move(acc_trace);
        session.traces[SensorKind::Gyroscope] = std::move(gyro_trace);
        sessions.push_back(std::move(session));
    }
    return sessions;
}

}  // namespace actpat
