#include "actpat/insight.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "actpat/types.hpp"
#include "textio.hpp"

namespace actpat {

double entropy_bits(std::span<const double> counts) {
    double total = 0.0;
    for (double c : counts) {
        if (c < 0.0) throw ValueError("entropy counts must be non-negative");
        total += c;
    }
    if (total <= 0.0) throw ValueError("entropy requires at least one positive count");
    double h = 0.0;
    for (double c : counts) {
        if (c > 0.0) {
            const double p = c / total;
            h -= p * std::log2(p);
        }
    }
    return h;
}

namespace {

struct SortedColumn {
    std::vector<double> values;  // ascending
    std::vector<int> labels;     // aligned
};

double entropy_of_range(const std::vector<int>& labels, size_t lo, size_t hi, int n_classes,
                        std::vector<double>& scratch) {
    scratch.assign(size_t(n_classes), 0.0);
    for (size_t i = lo; i < hi; ++i) scratch[size_t(labels[i])] += 1.0;
    return entropy_bits(scratch);
}

int distinct_classes(const std::vector<int>& labels, size_t lo, size_t hi, int n_classes,
                     std::vector<double>& scratch) {
    scratch.assign(size_t(n_classes), 0.0);
    for (size_t i = lo; i < hi; ++i) scratch[size_t(labels[i])] += 1.0;
    return int(std::count_if(scratch.begin(), scratch.end(), [](double c) { return c > 0.0; }));
}

// Recursive entropy-minimizing binary splits over [lo, hi), accepting a cut
// only when its gain clears the MDL criterion.
void mdl_recurse(const SortedColumn& col, size_t lo, size_t hi, int n_classes, std::vector<double>& cuts) {
    const double n = double(hi - lo);
    if (n < 2.0) return;

    std::vector<double> left(size_t(n_classes), 0.0), right(size_t(n_classes), 0.0), scratch;
    for (size_t i = lo; i < hi; ++i) right[size_t(col.labels[i])] += 1.0;
    const double parent_h = entropy_bits(right);

    double best_cond = std::numeric_limits<double>::infinity();
    size_t best_i = 0;  // split after index best_i
    double best_h1 = 0.0, best_h2 = 0.0;
    for (size_t i = lo; i + 1 < hi; ++i) {
        left[size_t(col.labels[i])] += 1.0;
        right[size_t(col.labels[i])] -= 1.0;
        if (col.values[i + 1] <= col.values[i]) continue;
        const double n1 = double(i - lo + 1);
        const double n2 = n - n1;
        const double h1 = entropy_bits(left);
        const double h2 = entropy_bits(right);
        const double cond = (n1 * h1 + n2 * h2) / n;
        if (cond < best_cond - 1e-12) {
            best_cond = cond;
            best_i = i;
            best_h1 = h1;
            best_h2 = h2;
        }
    }
    if (!std::isfinite(best_cond)) return;  // no distinct adjacent values

    const double gain = parent_h - best_cond;
    const int k = distinct_classes(col.labels, lo, hi, n_classes, scratch);
    const int k1 = distinct_classes(col.labels, lo, best_i + 1, n_classes, scratch);
    const int k2 = distinct_classes(col.labels, best_i + 1, hi, n_classes, scratch);
    // MDL acceptance: gain > (log2(n-1) + delta)/n,
    // delta = log2(3^k - 2) - (k H - k1 H1 - k2 H2).
    const double delta = std::log2(std::exp(double(k) * std::log(3.0)) - 2.0) -
                         (double(k) * parent_h - double(k1) * best_h1 - double(k2) * best_h2);
    if (gain <= (std::log2(n - 1.0) + delta) / n) return;

    cuts.push_back(col.values[best_i] + (col.values[best_i + 1] - col.values[best_i]) / 2.0);
    mdl_recurse(col, lo, best_i + 1, n_classes, cuts);
    mdl_recurse(col, best_i + 1, hi, n_classes, cuts);
}

}  // namespace

std::vector<double> mdl_discretize(std::span<const double> values, std::span<const int> labels) {
    if (values.size() != labels.size()) throw ValueError("values and labels must have equal length");
    if (values.size() < 2) throw ValueError("discretization requires at least two rows");

    SortedColumn col;
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[size_t(a)] < values[size_t(b)]; });
    col.values.reserve(values.size());
    col.labels.reserve(values.size());
    int n_classes = 0;
    for (int i : order) {
        col.values.push_back(values[size_t(i)]);
        col.labels.push_back(labels[size_t(i)]);
        n_classes = std::max(n_classes, labels[size_t(i)] + 1);
    }

    std::vector<double> cuts;
    mdl_recurse(col, 0, col.values.size(), n_classes, cuts);
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

IgReport information_gain(const Eigen::MatrixXd& x, const std::vector<std::string>& feature_names,
                          const std::vector<std::string>& labels) {
    if (Eigen::Index(labels.size()) != x.rows()) throw ValueError("label count does not match feature rows");
    if (x.rows() < 2) throw ValueError("information gain requires at least two rows");
    if (Eigen::Index(feature_names.size()) != x.cols()) {
        throw ValueError("feature name count does not match feature columns");
    }

    // Class ids in first-appearance order; only counts matter.
    std::map<std::string, int> class_id;
    std::vector<int> y(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) {
        y[i] = int(class_id.try_emplace(labels[i], int(class_id.size())).first->second);
    }
    const int n_classes = int(class_id.size());

    std::vector<double> class_counts(size_t(n_classes), 0.0);
    for (int c : y) class_counts[size_t(c)] += 1.0;
    IgReport report;
    report.class_entropy_bits = entropy_bits(class_counts);

    std::vector<double> column(size_t(x.rows()));
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        for (Eigen::Index i = 0; i < x.rows(); ++i) column[size_t(i)] = x(i, j);
        IgEntry entry;
        entry.feature = feature_names[size_t(j)];
        entry.cuts = mdl_discretize(column, y);
        if (!entry.cuts.empty()) {
            const size_t bins = entry.cuts.size() + 1;
            std::vector<std::vector<double>> bin_counts(bins, std::vector<double>(size_t(n_classes), 0.0));
            for (size_t i = 0; i < column.size(); ++i) {
                const auto b = size_t(std::upper_bound(entry.cuts.begin(), entry.cuts.end(), column[i]) -
                                      entry.cuts.begin());
                bin_counts[b][size_t(y[i])] += 1.0;
            }
            double cond = 0.0;
            for (const auto& bc : bin_counts) {
                const double nb = std::accumulate(bc.begin(), bc.end(), 0.0);
                if (nb > 0.0) cond += nb / double(column.size()) * entropy_bits(bc);
            }
            entry.ig_bits = std::max(0.0, report.class_entropy_bits - cond);
        }
        report.entries.push_back(std::move(entry));
    }

    std::stable_sort(report.entries.begin(), report.entries.end(), [](const IgEntry& a, const IgEntry& b) {
        if (a.ig_bits != b.ig_bits) return a.ig_bits > b.ig_bits;
        return a.feature < b.feature;
    });
    return report;
}

IgReport information_gain(const Dataset& dataset) {
    return information_gain(dataset.x, dataset.schema.names(), dataset.targets);
}

std::string ig_csv(const IgReport& report, const std::vector<std::string>& header_comment) {
    std::ostringstream out;
    for (const auto& line : header_comment) out << "# " << line << '\n';
    out << "feature,ig_bits,cuts\n";
    for (const auto& e : report.entries) {
        out << e.feature << ',' << format_double(e.ig_bits) << ',';
        for (size_t i = 0; i < e.cuts.size(); ++i) {
            if (i > 0) out << ';';
            out << format_double(e.cuts[i]);
        }
        out << '\n';
    }
    return out.str();
}

void write_ig_csv(const IgReport& report, const std::filesystem::path& path,
                  const std::vector<std::string>& header_comment) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LoadError("cannot open for writing: " + path.string());
    out << ig_csv(report, header_comment);
    if (!out) throw LoadError("failed writing report: " + path.string());
}

namespace {

// Orders observed labels canonically when they all belong to one known label
// family, lexicographically otherwise.
std::vector<std::string> canonical_label_order(std::vector<std::string> observed) {
    std::sort(observed.begin(), observed.end());
    observed.erase(std::unique(observed.begin(), observed.end()), observed.end());

    static constexpr std::array<Attribute, 5> kFamilies{Attribute::Activity, Attribute::Gender,
                                                        Attribute::AgeGroup, Attribute::Hand, Attribute::App};
    for (Attribute fam : kFamilies) {
        const std::vector<std::string>& family = attribute_values(fam);
        const bool all_in = std::all_of(observed.begin(), observed.end(), [&](const std::string& l) {
            return std::find(family.begin(), family.end(), l) != family.end();
        });
        if (all_in) {
            std::vector<std::string> ordered;
            for (const auto& l : family) {
                if (std::find(observed.begin(), observed.end(), l) != observed.end()) ordered.push_back(l);
            }
            return ordered;
        }
    }
    return observed;
}

}  // namespace

ContingencyTable contingency(const std::vector<std::string>& row_side, const std::vector<std::string>& col_side) {
    if (row_side.size() != col_side.size()) throw ValueError("contingency inputs must have equal length");
    if (row_side.empty()) throw ValueError("contingency requires at least one pair");

    ContingencyTable t;
    t.row_labels = canonical_label_order(row_side);
    t.col_labels = canonical_label_order(col_side);
    std::map<std::string, int> ri, ci;
    for (size_t i = 0; i < t.row_labels.size(); ++i) ri[t.row_labels[i]] = int(i);
    for (size_t i = 0; i < t.col_labels.size(); ++i) ci[t.col_labels[i]] = int(i);

    t.counts = Eigen::MatrixXi::Zero(Eigen::Index(t.row_labels.size()), Eigen::Index(t.col_labels.size()));
    for (size_t i = 0; i < row_side.size(); ++i) {
        t.counts(ri[row_side[i]], ci[col_side[i]]) += 1;
    }
    t.row_totals.resize(t.row_labels.size());
    t.col_totals.resize(t.col_labels.size());
    for (Eigen::Index r = 0; r < t.counts.rows(); ++r) t.row_totals[size_t(r)] = t.counts.row(r).sum();
    for (Eigen::Index c = 0; c < t.counts.cols(); ++c) t.col_totals[size_t(c)] = t.counts.col(c).sum();
    t.grand_total = long(row_side.size());
    return t;
}

std::string contingency_csv(const ContingencyTable& table, const std::vector<std::string>& header_comment) {
    std::ostringstream out;
    for (const auto& line : header_comment) out << "# " << line << '\n';
    for (const auto& c : table.col_labels) out << ',' << c;
    out << ",Total\n";
    for (size_t r = 0; r < table.row_labels.size(); ++r) {
        out << table.row_labels[r];
        for (Eigen::Index c = 0; c < table.counts.cols(); ++c) out << ',' << table.counts(Eigen::Index(r), c);
        out << ',' << table.row_totals[r] << '\n';
    }
    out << "Total";
    for (long c : table.col_totals) out << ',' << c;
    out << ',' << table.grand_total << '\n';
    return out.str();
}

void write_contingency_csv(const ContingencyTable& table, const std::filesystem::path& path,
                           const std::vector<std::string>& header_comment) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LoadError("cannot open for writing: " + path.string());
    out << contingency_csv(table, header_comment);
    if (!out) throw LoadError("failed writing table: " + path.string());
}

}  // namespace actpat
