#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "actpat/learn.hpp"

namespace actpat {

// Disjoint test-fold index sets covering a dataset; per-fold class counts
// stay within one of the proportional share.
struct FoldPlan {
    int k = 0;
    std::vector<std::vector<int>> test_rows;  // ascending within each fold

    std::vector<int> train_rows(int fold) const;  // complement, ascending
};

// Deterministic stratified split. Throws ValueError when k < 2 or k > n.
FoldPlan stratified_folds(const std::vector<std::string>& targets, int k, std::uint64_t seed);

// The seven-metric report row.
struct Metrics {
    double accuracy = 0.0;
    double precision_weighted = 0.0;
    double recall_weighted = 0.0;
    double f1_weighted = 0.0;
    double f1_macro = 0.0;
    double f1_micro = 0.0;
    double roc_auc_ovr = 0.0;

    static const std::array<std::string, 7>& names();
    std::array<double, 7> values() const;
};

// Scores rows align with `class_list` columns. Weighted averages use truth
// support; macro averages run over the full class list with zero-support
// classes contributing 0; AUC skips classes absent from (or filling all of)
// the truth and averages the rest unweighted with ties counted 1/2.
// Throws ValueError when a prediction or truth label is outside class_list,
// or when lengths disagree or are empty.
Metrics compute_metrics(const std::vector<std::string>& truth, const std::vector<std::string>& predicted,
                        const Eigen::MatrixXd& scores, const std::vector<std::string>& class_list);

struct CvReport {
    std::string algo;
    Attribute attribute = Attribute::Gender;
    int folds = 0;
    int runs = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<Metrics>> fold_metrics;  // [run][fold]
    std::vector<Metrics> run_means;
    Metrics grand_mean;
    double fit_seconds_total = 0.0;
    double fit_seconds_mean = 0.0;  // per fit
};

// Called after each fold's model is fitted and scored.
using CvObserver =
    std::function<void(int run, int fold, const Model& model, const std::vector<int>& test_rows)>;

// Seed derivation used inside cross_validate, exposed so callers can
// reproduce any individual fold fit exactly.
std::uint64_t cv_split_seed(std::uint64_t master, int run);
std::uint64_t cv_fit_seed(std::uint64_t master, int run, int fold);

// Repeated stratified k-fold cross-validation; every fit sees only its
// training rows (standardization included). Deterministic apart from the
// fit_seconds fields. Throws ValueError when any class has fewer than k
// members (named in the message).
CvReport cross_validate(const ClassifierSpec& spec, const Dataset& dataset, int k = 5, int runs = 5,
                        std::uint64_t seed = 42, const CvObserver& observer = {});

// One table row per report: algo, the seven grand-mean metrics, mean fit
// runtime. `header_comment` lines are emitted with a leading '#'.
std::string cv_table_csv(const std::vector<CvReport>& reports, const std::vector<std::string>& header_comment = {});
void write_cv_table_csv(const std::vector<CvReport>& reports, const std::filesystem::path& path,
                        const std::vector<std::string>& header_comment = {});

}  // namespace actpat
