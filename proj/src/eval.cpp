#include "actpat/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "actpat/rng.hpp"
#include "textio.hpp"

namespace actpat {

std::vector<int> FoldPlan::train_rows(int fold) const {
    if (fold < 0 || fold >= k) throw ValueError("fold index out of range");
    std::vector<int> out;
    for (int f = 0; f < k; ++f) {
        if (f == fold) continue;
        out.insert(out.end(), test_rows[size_t(f)].begin(), test_rows[size_t(f)].end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

FoldPlan stratified_folds(const std::vector<std::string>& targets, int k, std::uint64_t seed) {
    const int n = int(targets.size());
    if (k < 2) throw ValueError("stratified folds require k >= 2");
    if (k > n) throw ValueError("stratified folds require k <= number of rows (" + std::to_string(k) + " > " +
                                std::to_string(n) + ")");

    // Group rows per class in first-appearance class order, then shuffle each
    // group and deal round-robin with a rotating fold offset so remainders
    // spread across folds instead of piling onto fold 0.
    std::vector<std::string> class_order;
    std::map<std::string, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) {
        auto [it, inserted] = groups.try_emplace(targets[size_t(i)]);
        if (inserted) class_order.push_back(targets[size_t(i)]);
        it->second.push_back(i);
    }

    FoldPlan plan;
    plan.k = k;
    plan.test_rows.assign(size_t(k), {});
    for (size_t c = 0; c < class_order.size(); ++c) {
        auto& rows = groups[class_order[c]];
        Rng rng(derive_seed(seed, {0xf01d5u, std::uint64_t(c)}));
        rng.shuffle(rows);
        const int offset = int(c) % k;
        for (size_t i = 0; i < rows.size(); ++i) {
            plan.test_rows[size_t((int(i) + offset) % k)].push_back(rows[i]);
        }
    }
    for (auto& fold : plan.test_rows) std::sort(fold.begin(), fold.end());
    return plan;
}

const std::array<std::string, 7>& Metrics::names() {
    static const std::array<std::string, 7> n{"accuracy",   "precision_weighted", "recall_weighted",
                                              "f1_weighted", "f1_macro",           "f1_micro",
                                              "roc_auc_ovr"};
    return n;
}

std::array<double, 7> Metrics::values() const {
    return {accuracy, precision_weighted, recall_weighted, f1_weighted, f1_macro, f1_micro, roc_auc_ovr};
}

namespace {

// Average 1-based ranks with midranks for ties, over `values`.
std::vector<double> midranks(const std::vector<double>& values) {
    const size_t n = values.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[size_t(a)] < values[size_t(b)]; });
    std::vector<double> ranks(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[size_t(order[j + 1])] == values[size_t(order[i])]) ++j;
        const double avg = (double(i) + double(j)) / 2.0 + 1.0;
        for (size_t t = i; t <= j; ++t) ranks[size_t(order[t])] = avg;
        i = j + 1;
    }
    return ranks;
}

double rank_auc(const std::vector<double>& scores, const std::vector<bool>& positive) {
    const std::vector<double> ranks = midranks(scores);
    double pos_rank_sum = 0.0;
    double n_pos = 0.0;
    for (size_t i = 0; i < scores.size(); ++i) {
        if (positive[i]) {
            pos_rank_sum += ranks[i];
            n_pos += 1.0;
        }
    }
    const double n_neg = double(scores.size()) - n_pos;
    return (pos_rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

Metrics mean_metrics(const std::vector<Metrics>& items) {
    Metrics m;
    std::array<double, 7> acc{};
    for (const auto& it : items) {
        const auto v = it.values();
        for (size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
    }
    const double n = double(items.size());
    m.accuracy = acc[0] / n;
    m.precision_weighted = acc[1] / n;
    m.recall_weighted = acc[2] / n;
    m.f1_weighted = acc[3] / n;
    m.f1_macro = acc[4] / n;
    m.f1_micro = acc[5] / n;
    m.roc_auc_ovr = acc[6] / n;
    return m;
}

}  // namespace

Metrics compute_metrics(const std::vector<std::string>& truth, const std::vector<std::string>& predicted,
                        const Eigen::MatrixXd& scores, const std::vector<std::string>& class_list) {
    const size_t n = truth.size();
    if (n == 0) throw ValueError("metrics require at least one prediction");
    if (predicted.size() != n) throw ValueError("truth and prediction lengths differ");
    if (scores.rows() != Eigen::Index(n) || scores.cols() != Eigen::Index(class_list.size())) {
        throw ValueError("score matrix shape does not match predictions and class list");
    }

    std::map<std::string, int> index;
    for (size_t c = 0; c < class_list.size(); ++c) index[class_list[c]] = int(c);
    auto class_of = [&](const std::string& label, const char* what) {
        const auto it = index.find(label);
        if (it == index.end()) throw ValueError(std::string(what) + " label not in class list: " + label);
        return it->second;
    };

    const size_t kc = class_list.size();
    std::vector<double> tp(kc, 0.0), fp(kc, 0.0), fn(kc, 0.0), support(kc, 0.0);
    double correct = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const int t = class_of(truth[i], "truth");
        const int p = class_of(predicted[i], "predicted");
        support[size_t(t)] += 1.0;
        if (t == p) {
            correct += 1.0;
            tp[size_t(t)] += 1.0;
        } else {
            fn[size_t(t)] += 1.0;
            fp[size_t(p)] += 1.0;
        }
    }

    Metrics m;
    m.accuracy = correct / double(n);
    double f1_macro_sum = 0.0;
    for (size_t c = 0; c < kc; ++c) {
        const double prec = tp[c] + fp[c] > 0.0 ? tp[c] / (tp[c] + fp[c]) : 0.0;
        const double rec = tp[c] + fn[c] > 0.0 ? tp[c] / (tp[c] + fn[c]) : 0.0;
        const double f1 = prec + rec > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
        const double w = support[c] / double(n);
        m.precision_weighted += w * prec;
        m.recall_weighted += w * rec;
        m.f1_weighted += w * f1;
        f1_macro_sum += f1;
    }
    m.f1_macro = f1_macro_sum / double(kc);
    m.f1_micro = m.accuracy;  // single-label identity

    double auc_sum = 0.0;
    int auc_classes = 0;
    std::vector<double> col(n);
    std::vector<bool> positive(n);
    for (size_t c = 0; c < kc; ++c) {
        if (support[c] == 0.0 || support[c] == double(n)) continue;
        for (size_t i = 0; i < n; ++i) {
            col[i] = scores(Eigen::Index(i), Eigen::Index(c));
            positive[i] = size_t(index[truth[i]]) == c;
        }
        auc_sum += rank_auc(col, positive);
        ++auc_classes;
    }
    m.roc_auc_ovr = auc_classes > 0 ? auc_sum / double(auc_classes) : std::numeric_limits<double>::quiet_NaN();
    return m;
}

std::uint64_t cv_split_seed(std::uint64_t master, int run) {
    return derive_seed(master, {0xcf5b11u, std::uint64_t(run)});
}

std::uint64_t cv_fit_seed(std::uint64_t master, int run, int fold) {
    return derive_seed(master, {0xcff17u, std::uint64_t(run), std::uint64_t(fold)});
}

CvReport cross_validate(const ClassifierSpec& spec, const Dataset& dataset, int k, int runs, std::uint64_t seed,
                        const CvObserver& observer) {
    if (runs < 1) throw ValueError("cross-validation requires at least one run");
    const std::vector<std::string> classes = dataset.classes();
    if (classes.size() < 2) throw ValueError("cross-validation requires at least two classes");
    for (const auto& cls : classes) {
        const auto count = std::count(dataset.targets.begin(), dataset.targets.end(), cls);
        if (count < k) {
            throw ValueError("class '" + cls + "' has " + std::to_string(count) + " rows, fewer than k=" +
                             std::to_string(k));
        }
    }

    CvReport report;
    report.algo = spec_name(spec);
    report.attribute = dataset.attribute;
    report.folds = k;
    report.runs = runs;
    report.seed = seed;
    report.fold_metrics.resize(size_t(runs));

    using clock = std::chrono::steady_clock;
    int fits = 0;
    for (int run = 0; run < runs; ++run) {
        const FoldPlan plan = stratified_folds(dataset.targets, k, cv_split_seed(seed, run));
        auto& run_rows = report.fold_metrics[size_t(run)];
        run_rows.reserve(size_t(k));
        for (int fold = 0; fold < k; ++fold) {
            const std::vector<int> train_idx = plan.train_rows(fold);
            const std::vector<int>& test_idx = plan.test_rows[size_t(fold)];
            const Dataset train = dataset.subset(train_idx);

            const auto t0 = clock::now();
            const Model model = fit(spec, train, cv_fit_seed(seed, run, fold));
            const auto t1 = clock::now();
            report.fit_seconds_total += std::chrono::duration<double>(t1 - t0).count();
            ++fits;

            Eigen::MatrixXd test_x(Eigen::Index(test_idx.size()), dataset.x.cols());
            std::vector<std::string> test_truth;
            test_truth.reserve(test_idx.size());
            for (size_t i = 0; i < test_idx.size(); ++i) {
                test_x.row(Eigen::Index(i)) = dataset.x.row(test_idx[i]);
                test_truth.push_back(dataset.targets[size_t(test_idx[i])]);
            }
            const std::vector<std::string> pred = model.predict_batch(test_x);
            const Eigen::MatrixXd model_scores = model.score_batch(test_x);

            // The fold's model may know fewer classes than the dataset; its
            // score columns map into the full class list, absent classes
            // scoring a constant 0.
            Eigen::MatrixXd full_scores = Eigen::MatrixXd::Zero(model_scores.rows(), Eigen::Index(classes.size()));
            for (size_t mc = 0; mc < model.classes().size(); ++mc) {
                const auto it = std::find(classes.begin(), classes.end(), model.classes()[mc]);
                full_scores.col(it - classes.begin()) = model_scores.col(Eigen::Index(mc));
            }

            run_rows.push_back(compute_metrics(test_truth, pred, full_scores, classes));
            if (observer) observer(run, fold, model, test_idx);
        }
        report.run_means.push_back(mean_metrics(run_rows));
    }
    report.grand_mean = mean_metrics(report.run_means);
    report.fit_seconds_mean = report.fit_seconds_total / double(fits);
    return report;
}

std::string cv_table_csv(const std::vector<CvReport>& reports, const std::vector<std::string>& header_comment) {
    std::ostringstream out;
    for (const auto& line : header_comment) out << "# " << line << '\n';
    out << "algo";
    for (const auto& name : Metrics::names()) out << ',' << name;
    out << ",train_runtime_sec\n";
    for (const auto& r : reports) {
        out << r.algo;
        for (double v : r.grand_mean.values()) out << ',' << format_double(v);
        out << ',' << format_double(r.fit_seconds_mean) << '\n';
    }
    return out.str();
}

void write_cv_table_csv(const std::vector<CvReport>& reports, const std::filesystem::path& path,
                        const std::vector<std::string>& header_comment) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LoadError("cannot open for writing: " + path.string());
    out << cv_table_csv(reports, header_comment);
    if (!out) throw LoadError("failed writing report: " + path.string());
}

}  // namespace actpat
