#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "actpat/features.hpp"

namespace actpat {

// The seven classifier configurations behind one train/predict/score contract.
struct SvmLinear {
    double c = 1.0;
};
struct GaussianNb {
    double var_smoothing = 1e-9;
};
struct Mlp {
    int hidden_units = 10;
    int max_epochs = 200;
    double learning_rate = 1e-3;
    int batch_size = 32;
};
struct Knn {
    int k = 5;
};
struct RandomForest {
    int trees = 100;
};
struct LogisticRegression {
    double c = 1.0;
};
struct DecisionTree {};

using ClassifierSpec =
    std::variant<SvmLinear, GaussianNb, Mlp, Knn, RandomForest, LogisticRegression, DecisionTree>;

// Short names: svm, nb, mlp, knn, rf, lr, dt.
std::string spec_name(const ClassifierSpec& spec);
ClassifierSpec spec_from_name(std::string_view name);  // throws ValueError on unknown name
const std::vector<std::string>& all_spec_names();

namespace detail {
class Predictor;
}

// Per-feature z-scoring parameters, learned from training rows only.
struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;  // std, with zero-variance columns mapped to 1

    static Standardizer fit(const Eigen::MatrixXd& x);
    Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
    Eigen::VectorXd transform_row(const Eigen::VectorXd& x) const;
};

// A trained, immutable predictor. Scores are per-class, aligned with
// classes(); predict is always the first argmax of score, so the two agree
// by construction.
class Model {
public:
    const ClassifierSpec& spec() const { return spec_; }
    const std::vector<std::string>& classes() const { return classes_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const Standardizer& standardizer() const { return scaler_; }

    std::string predict(std::span<const double> features) const;
    std::vector<double> score(std::span<const double> features) const;

    std::vector<std::string> predict_batch(const Eigen::MatrixXd& x) const;
    Eigen::MatrixXd score_batch(const Eigen::MatrixXd& x) const;

    // Forest introspection (tree count); 0 for other algorithms.
    int tree_count() const;

    // Structured-text serialization; round-trips exactly.
    std::string to_json() const;
    static Model from_json(const std::string& text);
    void save(const std::filesystem::path& path) const;
    static Model load(const std::filesystem::path& path);

private:
    friend Model fit(const ClassifierSpec&, const Dataset&, std::uint64_t);
    friend Model model_from_json_impl(const std::string&);

    ClassifierSpec spec_;
    std::vector<std::string> classes_;
    std::vector<std::string> feature_names_;
    Standardizer scaler_;
    std::shared_ptr<const detail::Predictor> impl_;
};

// Trains `spec` on the dataset. Deterministic given (spec, dataset, seed).
// Features are z-scored internally with parameters from this dataset only.
// Throws ValueError on a single-class dataset, non-finite features, or
// k > n for KNN.
Model fit(const ClassifierSpec& spec, const Dataset& dataset, std::uint64_t seed);

// MLP internals exposed for gradient verification: a flat parameter vector
// <-> (W1, b1, W2, b2) network with one rectifier hidden layer and softmax
// cross-entropy loss.
struct MlpProblem {
    int inputs = 0;
    int hidden = 0;
    int outputs = 0;

    Eigen::Index parameter_count() const;
    Eigen::VectorXd init_parameters(std::uint64_t seed) const;
    // mean cross-entropy over the batch
    double loss(const Eigen::VectorXd& params, const Eigen::MatrixXd& x, const std::vector<int>& y) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& params, const Eigen::MatrixXd& x, const std::vector<int>& y) const;
    Eigen::MatrixXd softmax_scores(const Eigen::VectorXd& params, const Eigen::MatrixXd& x) const;
};

}  // namespace actpat
