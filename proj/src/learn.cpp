#include "actpat/learn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "actpat/rng.hpp"
#include "learn_impl.hpp"
#include "textio.hpp"

namespace actpat {

namespace {

constexpr const char* kSpecNames[] = {"svm", "nb", "mlp", "knn", "rf", "lr", "dt"};

}  // namespace

std::string spec_name(const ClassifierSpec& spec) {
    return kSpecNames[spec.index()];
}

ClassifierSpec spec_from_name(std::string_view name) {
    if (name == "svm") return SvmLinear{};
    if (name == "nb") return GaussianNb{};
    if (name == "mlp") return Mlp{};
    if (name == "knn") return Knn{};
    if (name == "rf") return RandomForest{};
    if (name == "lr") return LogisticRegression{};
    if (name == "dt") return DecisionTree{};
    throw ValueError("unknown classifier name: " + std::string(name));
}

const std::vector<std::string>& all_spec_names() {
    static const std::vector<std::string> names{std::begin(kSpecNames), std::end(kSpecNames)};
    return names;
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& x) {
    if (x.rows() == 0) throw ValueError("cannot standardize an empty matrix");
    Standardizer s;
    s.mean = x.colwise().mean();
    Eigen::MatrixXd centered = x.rowwise() - s.mean.transpose();
    s.scale = (centered.array().square().colwise().sum() / double(x.rows())).sqrt();
    for (Eigen::Index j = 0; j < s.scale.size(); ++j) {
        if (s.scale[j] == 0.0) s.scale[j] = 1.0;
    }
    return s;
}

Eigen::MatrixXd Standardizer::transform(const Eigen::MatrixXd& x) const {
    if (x.cols() != mean.size()) throw ValueError("standardizer dimension mismatch");
    return (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

Eigen::VectorXd Standardizer::transform_row(const Eigen::VectorXd& x) const {
    if (x.size() != mean.size()) throw ValueError("standardizer dimension mismatch");
    return ((x - mean).array() / scale.array()).matrix();
}

// --- gaussian naive bayes -------------------------------------------------

namespace detail {

class NbPredictor final : public Predictor {
public:
    Eigen::VectorXd log_prior;
    Eigen::MatrixXd mean;  // classes x features
    Eigen::MatrixXd var;   // smoothed

    Eigen::VectorXd score(const Eigen::VectorXd& x) const override {
        const Eigen::Index k = log_prior.size();
        Eigen::VectorXd logp(k);
        for (Eigen::Index c = 0; c < k; ++c) {
            double acc = log_prior[c];
            for (Eigen::Index j = 0; j < x.size(); ++j) {
                const double d = x[j] - mean(c, j);
                acc += -0.5 * std::log(2.0 * M_PI * var(c, j)) - d * d / (2.0 * var(c, j));
            }
            logp[c] = acc;
        }
        const double m = logp.maxCoeff();
        Eigen::VectorXd p = (logp.array() - m).exp();
        return p / p.sum();
    }

    const char* kind() const override { return "nb"; }

    json params_json() const override;
};

class KnnPredictor final : public Predictor {
public:
    Eigen::MatrixXd train_x;
    std::vector<int> train_y;
    int k = 5;
    int n_classes = 0;

    Eigen::VectorXd score(const Eigen::VectorXd& x) const override {
        const int n = int(train_x.rows());
        std::vector<std::pair<double, int>> order(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            order[size_t(i)] = {(train_x.row(i).transpose() - x).squaredNorm(), i};
        }
        // Equal distances resolve to the lower training-row index.
        std::sort(order.begin(), order.end());
        Eigen::VectorXd votes = Eigen::VectorXd::Zero(n_classes);
        std::vector<int> first_rank(size_t(n_classes), k);
        for (int r = 0; r < k; ++r) {
            const int cls = train_y[size_t(order[size_t(r)].second)];
            votes[cls] += 1.0;
            if (first_rank[size_t(cls)] == k) first_rank[size_t(cls)] = r;
        }
        // A sub-vote nudge keeps argmax(score) consistent with the vote tie
        // rule (tied classes resolve to the one owning the nearest neighbor).
        Eigen::VectorXd s = votes / double(k);
        for (int c = 0; c < n_classes; ++c) {
            s[c] += 1e-9 * double(k - first_rank[size_t(c)]) / double(k) / double(k);
        }
        return s / s.sum();
    }

    const char* kind() const override { return "knn"; }

    json params_json() const override;
};

class TreePredictor final : public Predictor {
public:
    std::vector<TreeNode> nodes;

    Eigen::VectorXd score(const Eigen::VectorXd& x) const override { return tree_leaf_dist(nodes, x); }
    const char* kind() const override { return "dt"; }
    json params_json() const override;
    int tree_count() const override { return 1; }
};

class ForestPredictor final : public Predictor {
public:
    std::vector<std::vector<TreeNode>> trees;
    int n_classes = 0;

    Eigen::VectorXd score(const Eigen::VectorXd& x) const override {
        Eigen::VectorXd votes = Eigen::VectorXd::Zero(n_classes);
        for (const auto& t : trees) votes[tree_vote(t, x)] += 1.0;
        return votes / double(trees.size());
    }

    const char* kind() const override { return "rf"; }
    json params_json() const override;
    int tree_count() const override { return int(trees.size()); }
};

// One-vs-rest stack of linear decision functions over bias-augmented input.
class LinearPredictor final : public Predictor {
public:
    Eigen::MatrixXd w;  // classes x (features + 1)
    bool sigmoid = false;

    Eigen::VectorXd score(const Eigen::VectorXd& x) const override {
        Eigen::VectorXd xa(x.size() + 1);
        xa.head(x.size()) = x;
        xa[x.size()] = 1.0;
        Eigen::VectorXd z = w * xa;
        if (!sigmoid) return z;
        Eigen::VectorXd p(z.size());
        for (Eigen::Index c = 0; c < z.size(); ++c) p[c] = 1.0 / (1.0 + std::exp(-z[c]));
        return p / p.sum();
    }

    const char* kind() const override { return sigmoid ? "lr" : "svm"; }
    json params_json() const override;
};

class MlpPredictor final : public Predictor {
public:
    MlpProblem problem;
    Eigen::VectorXd params;

    Eigen::VectorXd score(const Eigen::VectorXd& x) const override {
        Eigen::MatrixXd xm = x.transpose();
        return problem.softmax_scores(params, xm).row(0).transpose();
    }

    const char* kind() const override { return "mlp"; }
    json params_json() const override;
};

// --- JSON helpers ---------------------------------------------------------

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto r = Eigen::Index(j.size());
    if (r == 0) return Eigen::MatrixXd(0, 0);
    const auto c = Eigen::Index(j.at(0).size());
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        const json& row = j.at(size_t(i));
        if (Eigen::Index(row.size()) != c) throw FormatError("ragged matrix in model file");
        for (Eigen::Index k = 0; k < c; ++k) m(i, k) = row.at(size_t(k)).get<double>();
    }
    return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(Eigen::Index(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j.at(size_t(i)).get<double>();
    return v;
}

json tree_to_json(const std::vector<TreeNode>& nodes) {
    json arr = json::array();
    for (const auto& n : nodes) {
        json jn;
        jn["feature"] = n.feature;
        jn["threshold"] = n.threshold;
        jn["left"] = n.left;
        jn["right"] = n.right;
        jn["dist"] = vector_to_json(n.dist);
        arr.push_back(std::move(jn));
    }
    return arr;
}

std::vector<TreeNode> tree_from_json(const json& j) {
    std::vector<TreeNode> nodes;
    nodes.reserve(j.size());
    for (const json& jn : j) {
        TreeNode n;
        n.feature = jn.at("feature").get<int>();
        n.threshold = jn.at("threshold").get<double>();
        n.left = jn.at("left").get<int>();
        n.right = jn.at("right").get<int>();
        n.dist = vector_from_json(jn.at("dist"));
        nodes.push_back(std::move(n));
    }
    return nodes;
}

json NbPredictor::params_json() const {
    json j;
    j["log_prior"] = vector_to_json(log_prior);
    j["mean"] = matrix_to_json(mean);
    j["var"] = matrix_to_json(var);
    return j;
}

json KnnPredictor::params_json() const {
    json j;
    j["k"] = k;
    j["n_classes"] = n_classes;
    j["train_x"] = matrix_to_json(train_x);
    j["train_y"] = train_y;
    return j;
}

json TreePredictor::params_json() const {
    json j;
    j["nodes"] = tree_to_json(nodes);
    return j;
}

json ForestPredictor::params_json() const {
    json j;
    j["n_classes"] = n_classes;
    json arr = json::array();
    for (const auto& t : trees) arr.push_back(tree_to_json(t));
    j["trees"] = std::move(arr);
    return j;
}

json LinearPredictor::params_json() const {
    json j;
    j["sigmoid"] = sigmoid;
    j["w"] = matrix_to_json(w);
    return j;
}

json MlpPredictor::params_json() const {
    json j;
    j["inputs"] = problem.inputs;
    j["hidden"] = problem.hidden;
    j["outputs"] = problem.outputs;
    j["params"] = vector_to_json(params);
    return j;
}

std::shared_ptr<const Predictor> predictor_from_json(const std::string& kind, const json& params) {
    if (kind == "nb") {
        auto p = std::make_shared<NbPredictor>();
        p->log_prior = vector_from_json(params.at("log_prior"));
        p->mean = matrix_from_json(params.at("mean"));
        p->var = matrix_from_json(params.at("var"));
        return p;
    }
    if (kind == "knn") {
        auto p = std::make_shared<KnnPredictor>();
        p->k = params.at("k").get<int>();
        p->n_classes = params.at("n_classes").get<int>();
        p->train_x = matrix_from_json(params.at("train_x"));
        p->train_y = params.at("train_y").get<std::vector<int>>();
        return p;
    }
    if (kind == "dt") {
        auto p = std::make_shared<TreePredictor>();
        p->nodes = tree_from_json(params.at("nodes"));
        return p;
    }
    if (kind == "rf") {
        auto p = std::make_shared<ForestPredictor>();
        p->n_classes = params.at("n_classes").get<int>();
        for (const json& t : params.at("trees")) p->trees.push_back(tree_from_json(t));
        return p;
    }
    if (kind == "svm" || kind == "lr") {
        auto p = std::make_shared<LinearPredictor>();
        p->sigmoid = params.at("sigmoid").get<bool>();
        p->w = matrix_from_json(params.at("w"));
        return p;
    }
    if (kind == "mlp") {
        auto p = std::make_shared<MlpPredictor>();
        p->problem.inputs = params.at("inputs").get<int>();
        p->problem.hidden = params.at("hidden").get<int>();
        p->problem.outputs = params.at("outputs").get<int>();
        p->params = vector_from_json(params.at("params"));
        return p;
    }
    throw FormatError("unknown model kind in file: " + kind);
}

// --- fitting --------------------------------------------------------------

std::shared_ptr<const Predictor> fit_nb(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
                                        double smoothing) {
    auto p = std::make_shared<NbPredictor>();
    const Eigen::Index d = x.cols();
    p->log_prior.resize(n_classes);
    p->mean = Eigen::MatrixXd::Zero(n_classes, d);
    p->var = Eigen::MatrixXd::Zero(n_classes, d);

    Eigen::VectorXd global_mean = x.colwise().mean();
    const double max_global_var =
        ((x.rowwise() - global_mean.transpose()).array().square().colwise().sum() / double(x.rows())).maxCoeff();
    const double eps = smoothing * std::max(max_global_var, 1e-30);

    std::vector<int> counts(size_t(n_classes), 0);
    for (int c : y) counts[size_t(c)]++;
    for (Eigen::Index i = 0; i < x.rows(); ++i) p->mean.row(y[size_t(i)]) += x.row(i);
    for (int c = 0; c < n_classes; ++c) p->mean.row(c) /= double(counts[size_t(c)]);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        Eigen::ArrayXd d2 = (x.row(i) - p->mean.row(y[size_t(i)])).array().square();
        p->var.row(y[size_t(i)]) += d2.matrix();
    }
    for (int c = 0; c < n_classes; ++c) {
        p->var.row(c) /= double(counts[size_t(c)]);
        p->log_prior[c] = std::log(double(counts[size_t(c)]) / double(x.rows()));
    }
    p->var.array() += eps;
    return p;
}

std::shared_ptr<const Predictor> fit_linear_ovr(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
                                                double c, bool logistic, std::uint64_t seed) {
    Eigen::MatrixXd xa(x.rows(), x.cols() + 1);
    xa.leftCols(x.cols()) = x;
    xa.col(x.cols()).setOnes();
    auto p = std::make_shared<LinearPredictor>();
    p->sigmoid = logistic;
    p->w.resize(n_classes, xa.cols());
    for (int cls = 0; cls < n_classes; ++cls) {
        std::vector<double> ypm(y.size());
        for (size_t i = 0; i < y.size(); ++i) ypm[i] = y[i] == cls ? 1.0 : -1.0;
        if (logistic) {
            p->w.row(cls) = solve_logistic(xa, ypm, c).transpose();
        } else {
            p->w.row(cls) = solve_linear_svc(xa, ypm, c, derive_seed(seed, {0x5c1au, std::uint64_t(cls)})).transpose();
        }
    }
    return p;
}

std::shared_ptr<const Predictor> fit_forest(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
                                            int n_trees, std::uint64_t seed) {
    auto p = std::make_shared<ForestPredictor>();
    p->n_classes = n_classes;
    p->trees.reserve(size_t(n_trees));
    const int n = int(x.rows());
    const int mtry = std::max(1, int(std::floor(std::sqrt(double(x.cols())))));
    for (int t = 0; t < n_trees; ++t) {
        Rng rng(derive_seed(seed, {0xf02e57u, std::uint64_t(t)}));
        std::vector<int> rows(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) rows[size_t(i)] = int(rng.uniform_int(std::uint64_t(n)));
        p->trees.push_back(build_tree(x, y, n_classes, std::move(rows), mtry, &rng));
    }
    return p;
}

std::shared_ptr<const Predictor> fit_mlp(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
                                         const Mlp& spec, std::uint64_t seed) {
    auto p = std::make_shared<MlpPredictor>();
    p->problem = MlpProblem{int(x.cols()), spec.hidden_units, n_classes};
    p->params = p->problem.init_parameters(derive_seed(seed, {0x3117u}));

    const int n = int(x.rows());
    Rng shuffle_rng(derive_seed(seed, {0xba7c4u}));
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[size_t(i)] = i;

    for (int epoch = 0; epoch < spec.max_epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        for (int start = 0; start < n; start += spec.batch_size) {
            const int stop = std::min(n, start + spec.batch_size);
            Eigen::MatrixXd bx(stop - start, x.cols());
            std::vector<int> by(static_cast<size_t>(stop - start));
            for (int i = start; i < stop; ++i) {
                bx.row(i - start) = x.row(order[size_t(i)]);
                by[size_t(i - start)] = y[size_t(order[size_t(i)])];
            }
            Eigen::VectorXd g = p->problem.gradient(p->params, bx, by);
            p->params -= spec.learning_rate * g;
        }
    }
    return p;
}

std::shared_ptr<const Predictor> fit_predictor(const ClassifierSpec& spec, const Eigen::MatrixXd& x,
                                               const std::vector<int>& y, int n_classes, std::uint64_t seed) {
    return std::visit(
        [&](const auto& s) -> std::shared_ptr<const Predictor> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SvmLinear>) {
                return fit_linear_ovr(x, y, n_classes, s.c, false, seed);
            } else if constexpr (std::is_same_v<T, GaussianNb>) {
                return fit_nb(x, y, n_classes, s.var_smoothing);
            } else if constexpr (std::is_same_v<T, Mlp>) {
                return fit_mlp(x, y, n_classes, s, seed);
            } else if constexpr (std::is_same_v<T, Knn>) {
                if (s.k < 1) throw ValueError("knn requires k >= 1");
                if (s.k > int(x.rows()))
                    throw ValueError("knn requires k <= training rows (" + std::to_string(s.k) + " > " +
                                     std::to_string(x.rows()) + ")");
                auto p = std::make_shared<KnnPredictor>();
                p->k = s.k;
                p->n_classes = n_classes;
                p->train_x = x;
                p->train_y = y;
                return p;
            } else if constexpr (std::is_same_v<T, RandomForest>) {
                if (s.trees < 1) throw ValueError("random forest requires at least one tree");
                return fit_forest(x, y, n_classes, s.trees, seed);
            } else if constexpr (std::is_same_v<T, LogisticRegression>) {
                return fit_linear_ovr(x, y, n_classes, s.c, true, seed);
            } else {
                static_assert(std::is_same_v<T, DecisionTree>);
                std::vector<int> rows(y.size());
                for (size_t i = 0; i < y.size(); ++i) rows[i] = int(i);
                auto p = std::make_shared<TreePredictor>();
                p->nodes = build_tree(x, y, n_classes, std::move(rows), 0, nullptr);
                return p;
            }
        },
        spec);
}

}  // namespace detail

// --- Model ----------------------------------------------------------------

std::vector<double> Model::score(std::span<const double> features) const {
    if (!impl_) throw ValueError("model is empty");
    Eigen::VectorXd x(Eigen::Index(features.size()));
    for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = features[size_t(j)];
    const Eigen::VectorXd s = impl_->score(scaler_.transform_row(x));
    return {s.data(), s.data() + s.size()};
}

std::string Model::predict(std::span<const double> features) const {
    const std::vector<double> s = score(features);
    const auto best = std::max_element(s.begin(), s.end());  // first argmax
    return classes_[size_t(best - s.begin())];
}

Eigen::MatrixXd Model::score_batch(const Eigen::MatrixXd& x) const {
    if (!impl_) throw ValueError("model is empty");
    Eigen::MatrixXd xs = scaler_.transform(x);
    Eigen::MatrixXd out(x.rows(), Eigen::Index(classes_.size()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) out.row(i) = impl_->score(xs.row(i).transpose()).transpose();
    return out;
}

std::vector<std::string> Model::predict_batch(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd s = score_batch(x);
    std::vector<std::string> out;
    out.reserve(size_t(x.rows()));
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        Eigen::Index best = 0;
        s.row(i).maxCoeff(&best);
        out.push_back(classes_[size_t(best)]);
    }
    return out;
}

int Model::tree_count() const {
    return impl_ ? impl_->tree_count() : 0;
}

std::string Model::to_json() const {
    if (!impl_) throw ValueError("model is empty");
    detail::json j;
    j["format"] = "actpat-model";
    j["version"] = 1;
    j["algo"] = spec_name(spec_);
    j["kind"] = impl_->kind();
    j["classes"] = classes_;
    j["feature_names"] = feature_names_;
    j["scaler_mean"] = detail::vector_to_json(scaler_.mean);
    j["scaler_scale"] = detail::vector_to_json(scaler_.scale);
    j["params"] = impl_->params_json();
    return j.dump(2);
}

Model model_from_json_impl(const std::string& text) {
    detail::json j;
    try {
        j = detail::json::parse(text);
    } catch (const std::exception& e) {
        throw FormatError(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("format", "") != "actpat-model") {
        throw FormatError("model file is missing the actpat-model header");
    }
    Model m;
    try {
        m.spec_ = spec_from_name(j.at("algo").get<std::string>());
        m.classes_ = j.at("classes").get<std::vector<std::string>>();
        m.feature_names_ = j.at("feature_names").get<std::vector<std::string>>();
        m.scaler_.mean = detail::vector_from_json(j.at("scaler_mean"));
        m.scaler_.scale = detail::vector_from_json(j.at("scaler_scale"));
        m.impl_ = detail::predictor_from_json(j.at("kind").get<std::string>(), j.at("params"));
    } catch (const detail::json::exception& e) {
        throw FormatError(std::string("model file is malformed: ") + e.what());
    }
    if (m.classes_.size() < 2) throw FormatError("model file lists fewer than two classes");
    if (m.scaler_.mean.size() != m.scaler_.scale.size()) {
        throw FormatError("model file scaler mean and scale disagree");
    }
    // Feature names are optional metadata; when present they must describe every column.
    if (!m.feature_names_.empty() &&
        Eigen::Index(m.feature_names_.size()) != m.scaler_.mean.size()) {
        throw FormatError("model file scaler does not match its feature list");
    }
    return m;
}

Model Model::from_json(const std::string& text) {
    return model_from_json_impl(text);
}

void Model::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LoadError("cannot open for writing: " + path.string());
    out << to_json() << '\n';
    if (!out) throw LoadError("failed writing model file: " + path.string());
}

Model Model::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open model file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

Model fit(const ClassifierSpec& spec, const Dataset& data, std::uint64_t seed) {
    if (data.x.rows() == 0) throw ValueError("cannot fit on an empty dataset");
    if (Eigen::Index(data.targets.size()) != data.x.rows()) {
        throw ValueError("dataset target count does not match its feature rows");
    }
    if (!data.x.allFinite()) throw ValueError("dataset contains non-finite feature values");

    Model m;
    m.spec_ = spec;
    m.classes_ = data.classes();
    if (m.classes_.size() < 2) throw ValueError("training data must contain at least two classes");
    m.feature_names_ = data.schema.names();

    std::vector<int> y(data.targets.size());
    for (size_t i = 0; i < data.targets.size(); ++i) {
        const auto it = std::find(m.classes_.begin(), m.classes_.end(), data.targets[i]);
        y[i] = int(it - m.classes_.begin());
    }

    m.scaler_ = Standardizer::fit(data.x);
    const Eigen::MatrixXd xs = m.scaler_.transform(data.x);
    m.impl_ = detail::fit_predictor(spec, xs, y, int(m.classes_.size()), seed);
    return m;
}

}  // namespace actpat
