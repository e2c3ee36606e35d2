#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "actpat/features.hpp"

namespace actpat {

// Shannon entropy in bits over label counts; 0 log 0 = 0. Throws ValueError
// on negative counts or an all-zero vector.
double entropy_bits(std::span<const double> counts);

// Fayyad-Irani entropy minimization with the MDL stopping rule. Labels are
// class indices. Returns accepted cut points ascending; fewer than two
// distinct values yield an empty list. Throws ValueError on length mismatch
// or fewer than two rows.
std::vector<double> mdl_discretize(std::span<const double> values, std::span<const int> labels);

struct IgEntry {
    std::string feature;
    double ig_bits = 0.0;
    std::vector<double> cuts;
};

// Feature ranking, descending by IG with ties broken by feature name.
struct IgReport {
    double class_entropy_bits = 0.0;
    std::vector<IgEntry> entries;
};

// IG(class, feature) = H(class) - H(class | MDL bins of feature); a feature
// with no accepted cuts scores 0. Tolerates a single-class label vector
// (everything scores 0).
IgReport information_gain(const Eigen::MatrixXd& x, const std::vector<std::string>& feature_names,
                          const std::vector<std::string>& labels);
IgReport information_gain(const Dataset& dataset);

std::string ig_csv(const IgReport& report, const std::vector<std::string>& header_comment = {});
void write_ig_csv(const IgReport& report, const std::filesystem::path& path,
                  const std::vector<std::string>& header_comment = {});

struct ContingencyTable {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    Eigen::MatrixXi counts;  // rows x cols
    std::vector<long> row_totals;
    std::vector<long> col_totals;
    long grand_total = 0;
};

// Cross-tabulation of co-occurring label pairs. Observed labels only; each
// side is ordered canonically when all its labels belong to one known label
// family (activities or an attribute), lexicographically otherwise.
ContingencyTable contingency(const std::vector<std::string>& row_side, const std::vector<std::string>& col_side);

// Header = predicted labels, one row per external label, final Total
// row/column.
std::string contingency_csv(const ContingencyTable& table, const std::vector<std::string>& header_comment = {});
void write_contingency_csv(const ContingencyTable& table, const std::filesystem::path& path,
                           const std::vector<std::string>& header_comment = {});

}  // namespace actpat
