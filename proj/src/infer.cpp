#include "actpat/infer.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "actpat/rng.hpp"

namespace actpat {

FeatureSchema align_schema(const std::vector<SensorKind>& train_sensors,
                           const std::vector<SensorKind>& test_sensors) {
    std::vector<SensorKind> shared;
    for (SensorKind s : kAllSensors) {
        const bool in_train = std::find(train_sensors.begin(), train_sensors.end(), s) != train_sensors.end();
        const bool in_test = std::find(test_sensors.begin(), test_sensors.end(), s) != test_sensors.end();
        if (in_train && in_test) shared.push_back(s);
    }
    if (shared.empty()) throw ValueError("train and test sessions share no sensor");
    return FeatureSchema::for_sensors(shared);
}

TransferResult cross_predict(const TransferPlan& plan, std::uint64_t seed) {
    if (plan.train.empty()) throw ValueError("transfer plan has no training sessions");
    if (plan.test.empty()) throw ValueError("transfer plan has no test sessions");

    TransferResult result;
    result.schema = align_schema(common_sensors(plan.train), common_sensors(plan.test));
    const Dataset train = build_dataset(plan.train, plan.target, result.schema);
    result.model = fit(plan.spec, train, seed);

    Eigen::MatrixXd test_x(Eigen::Index(plan.test.size()), Eigen::Index(result.schema.size()));
    result.row_ids.reserve(plan.test.size());
    result.activities.reserve(plan.test.size());
    for (size_t i = 0; i < plan.test.size(); ++i) {
        const Session& s = plan.test[i];
        if (!s.labels.activity.has_value()) {
            throw ValueError("test session '" + s.subject_id + "' has no activity label");
        }
        const std::vector<double> row = featurize_session(s, result.schema);
        for (size_t j = 0; j < row.size(); ++j) test_x(Eigen::Index(i), Eigen::Index(j)) = row[j];
        result.row_ids.push_back(s.subject_id);
        result.activities.emplace_back(to_string(*s.labels.activity));
    }

    result.predicted = result.model.predict_batch(test_x);
    result.table = contingency(result.activities, result.predicted);
    result.ig = information_gain(test_x, result.schema.names(), result.predicted);
    return result;
}

std::string predictions_csv(const TransferResult& result, Attribute target,
                            const std::vector<std::string>& header_comment) {
    std::ostringstream out;
    for (const auto& line : header_comment) out << "# " << line << '\n';
    out << "row_id,activity,predicted_" << to_string(target) << '\n';
    for (size_t i = 0; i < result.row_ids.size(); ++i) {
        out << result.row_ids[i] << ',' << result.activities[i] << ',' << result.predicted[i] << '\n';
    }
    return out.str();
}

void write_predictions_csv(const TransferResult& result, Attribute target, const std::filesystem::path& path,
                           const std::vector<std::string>& header_comment) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LoadError("cannot open for writing: " + path.string());
    out << predictions_csv(result, target, header_comment);
    if (!out) throw LoadError("failed writing predictions: " + path.string());
}

}  // namespace actpat
