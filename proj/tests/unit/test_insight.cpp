#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "actpat/insight.hpp"
#include "actpat/rng.hpp"
#include "doctest.h"

using namespace actpat;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> feature_labels(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("f" + std::to_string(i));
    return names;
}

}  // namespace

TEST_CASE("entropy oracle values") {
    CHECK(entropy_bits(std::vector<double>{5, 5}) == doctest::Approx(1.0).epsilon(1e-12));
    const double want = -(9.0 / 14.0) * std::log2(9.0 / 14.0) - (5.0 / 14.0) * std::log2(5.0 / 14.0);
    CHECK(entropy_bits(std::vector<double>{9, 5}) == doctest::Approx(want).epsilon(1e-12));
    CHECK(entropy_bits(std::vector<double>{7, 0}) == 0.0);
    CHECK(entropy_bits(std::vector<double>{1, 1, 1, 1}) == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(entropy_bits(std::vector<double>{1, -1}), ValueError);
    CHECK_THROWS_AS(entropy_bits(std::vector<double>{0, 0}), ValueError);
    CHECK_THROWS_AS(entropy_bits(std::vector<double>{}), ValueError);
}

TEST_CASE("mdl: clean two-cluster feature earns exactly one midpoint cut") {
    const std::vector<double> values{1, 2, 3, 10, 11, 12};
    const std::vector<int> labels{0, 0, 0, 1, 1, 1};
    const auto cuts = mdl_discretize(values, labels);
    REQUIRE(cuts.size() == 1);
    CHECK(cuts[0] > 3.0);
    CHECK(cuts[0] < 10.0);
    CHECK(cuts[0] == doctest::Approx(6.5).epsilon(1e-12));

    // order-free: shuffled input, same cut
    const std::vector<double> shuffled_v{12, 1, 10, 3, 2, 11};
    const std::vector<int> shuffled_l{1, 0, 1, 0, 0, 1};
    CHECK(mdl_discretize(shuffled_v, shuffled_l) == cuts);
}

TEST_CASE("mdl recurses into both sides on an A-B-A arrangement") {
    std::vector<double> values;
    std::vector<int> labels;
    for (int i = 0; i < 90; ++i) {
        values.push_back(double(i));
        labels.push_back(i >= 30 && i < 60 ? 1 : 0);
    }
    const auto cuts = mdl_discretize(values, labels);
    REQUIRE(cuts.size() == 2);
    CHECK(cuts[0] == doctest::Approx(29.5).epsilon(1e-12));
    CHECK(cuts[1] == doctest::Approx(59.5).epsilon(1e-12));
}

TEST_CASE("mdl rejects cuts on label-independent or constant features") {
    Rng rng(606);
    const int n = 200;
    std::vector<double> values(n);
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
        values[std::size_t(i)] = rng.uniform(-4, 4);
        labels[std::size_t(i)] = int(rng.uniform_int(2));
    }
    CHECK(mdl_discretize(values, labels).empty());

    const std::vector<double> constant(n, 3.25);
    CHECK(mdl_discretize(constant, labels).empty());
}

TEST_CASE("mdl validates inputs") {
    CHECK_THROWS_AS(mdl_discretize(std::vector<double>{1, 2}, std::vector<int>{0}), ValueError);
    CHECK_THROWS_AS(mdl_discretize(std::vector<double>{1}, std::vector<int>{0}), ValueError);
    CHECK(mdl_discretize(std::vector<double>{1, 2}, std::vector<int>{0, 0}).empty());
}

TEST_CASE("information gain: class-encoding feature recovers the full class entropy") {
    const int n = 120;
    Rng rng(7);
    Eigen::MatrixXd x(n, 3);
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) {
        const int c = i % 3;
        labels.push_back(std::string(1, char('A' + c)));
        x(i, 0) = double(c);              // encodes the class
        x(i, 1) = 1.5;                    // constant
        x(i, 2) = rng.gaussian();         // noise
    }
    const IgReport report = information_gain(x, {"encode", "flat", "noise"}, labels);
    const double h = entropy_bits(std::vector<double>{40, 40, 40});
    CHECK(report.class_entropy_bits == doctest::Approx(h).epsilon(1e-12));

    REQUIRE(report.entries.size() == 3);
    CHECK(report.entries[0].feature == "encode");
    CHECK(report.entries[0].ig_bits == doctest::Approx(h).epsilon(1e-9));
    CHECK(report.entries[0].cuts.size() == 2);
    for (const auto& e : report.entries) {
        CHECK(e.ig_bits >= 0.0);
        CHECK(e.ig_bits <= h + 1e-12);
        if (e.feature != "encode") {
            CHECK(e.ig_bits == 0.0);
            CHECK(e.cuts.empty());
        }
    }
    CHECK(std::is_sorted(report.entries.begin(), report.entries.end(),
                         [](const IgEntry& a, const IgEntry& b) { return a.ig_bits > b.ig_bits; }));
}

TEST_CASE("information gain is invariant under strictly monotone feature transforms") {
    Rng rng(99);
    const int n = 150;
    Eigen::MatrixXd x(n, 2);
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) {
        const int c = int(rng.uniform_int(2));
        labels.push_back(c == 0 ? "A" : "B");
        x(i, 0) = (c == 0 ? -1.0 : 1.0) + rng.gaussian() * 0.6;
        x(i, 1) = rng.gaussian();
    }
    Eigen::MatrixXd cubed = x;
    cubed.col(0) = x.col(0).array().cube();
    cubed.col(1) = x.col(1).array().exp();

    const IgReport a = information_gain(x, feature_labels(2), labels);
    const IgReport b = information_gain(cubed, feature_labels(2), labels);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].feature == b.entries[i].feature);
        CHECK(a.entries[i].ig_bits == doctest::Approx(b.entries[i].ig_bits).epsilon(1e-12));
        CHECK(a.entries[i].cuts.size() == b.entries[i].cuts.size());
    }
}

TEST_CASE("information gain tolerates a single-class label vector") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(10, 2);
    const IgReport report = information_gain(x, feature_labels(2), std::vector<std::string>(10, "only"));
    CHECK(report.class_entropy_bits == 0.0);
    for (const auto& e : report.entries) CHECK(e.ig_bits == 0.0);
}

TEST_CASE("information gain breaks IG ties by feature name") {
    Eigen::MatrixXd x(8, 2);
    std::vector<std::string> labels;
    for (int i = 0; i < 8; ++i) {
        const int c = i < 4 ? 0 : 1;
        labels.push_back(c == 0 ? "A" : "B");
        x(i, 0) = double(c * 10 + i);
        x(i, 1) = double(c * 10 + i);
    }
    const IgReport report = information_gain(x, {"zeta", "alpha"}, labels);
    REQUIRE(report.entries.size() == 2);
    CHECK(report.entries[0].ig_bits == report.entries[1].ig_bits);
    CHECK(report.entries[0].feature == "alpha");
    CHECK(report.entries[1].feature == "zeta");
}

TEST_CASE("ig csv lists feature, bits, and semicolon-joined cuts") {
    IgReport report;
    report.class_entropy_bits = 1.0;
    report.entries.push_back({"top", 0.75, {1.5, 2.5}});
    report.entries.push_back({"rest", 0.0, {}});
    const auto lines = split_lines(ig_csv(report, {"probe"}));
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "# probe");
    CHECK(lines[1] == "feature,ig_bits,cuts");
    CHECK(lines[2] == "top,0.75,1.5;2.5");
    CHECK(lines[3] == "rest,0,");
}

TEST_CASE("contingency cross-tabulates with consistent margins") {
    const std::vector<std::string> rows{"x", "x", "y", "y", "y", "z"};
    const std::vector<std::string> cols{"p", "q", "p", "p", "q", "q"};
    const ContingencyTable t = contingency(rows, cols);
    REQUIRE(t.row_labels == std::vector<std::string>{"x", "y", "z"});
    REQUIRE(t.col_labels == std::vector<std::string>{"p", "q"});
    CHECK(t.counts(0, 0) == 1);
    CHECK(t.counts(0, 1) == 1);
    CHECK(t.counts(1, 0) == 2);
    CHECK(t.counts(1, 1) == 1);
    CHECK(t.counts(2, 0) == 0);
    CHECK(t.counts(2, 1) == 1);
    CHECK(t.row_totals == std::vector<long>{2, 3, 1});
    CHECK(t.col_totals == std::vector<long>{3, 3});
    CHECK(t.grand_total == 6);

    long rows_sum = std::accumulate(t.row_totals.begin(), t.row_totals.end(), 0L);
    CHECK(rows_sum == t.grand_total);
    CHECK(t.counts.sum() == t.grand_total);
}

TEST_CASE("contingency orders known label families canonically") {
    const std::vector<std::string> acts{"Laying", "Walking", "Sitting", "Walking", "Laying"};
    const std::vector<std::string> genders{"Female", "Male", "Female", "Male", "Female"};
    const ContingencyTable t = contingency(acts, genders);
    CHECK(t.row_labels == std::vector<std::string>{"Walking", "Sitting", "Laying"});
    CHECK(t.col_labels == std::vector<std::string>{"Male", "Female"});

    const ContingencyTable lex = contingency({"beta", "alpha", "beta"}, {"2", "1", "1"});
    CHECK(lex.row_labels == std::vector<std::string>{"alpha", "beta"});
    CHECK(lex.col_labels == std::vector<std::string>{"1", "2"});
}

TEST_CASE("contingency handles degenerate shapes") {
    // one predicted class: single nonzero column
    const ContingencyTable t = contingency({"Walking", "Sitting", "Walking"}, {"Left", "Left", "Left"});
    REQUIRE(t.col_labels.size() == 1);
    CHECK(t.col_totals[0] == t.grand_total);

    // identical sides: diagonal only
    const std::vector<std::string> same{"A", "B", "A", "C"};
    const ContingencyTable d = contingency(same, same);
    for (Eigen::Index r = 0; r < d.counts.rows(); ++r)
        for (Eigen::Index c = 0; c < d.counts.cols(); ++c)
            if (r != c) CHECK(d.counts(r, c) == 0);

    CHECK_THROWS_AS(contingency({}, {}), ValueError);
    CHECK_THROWS_AS(contingency({"a"}, {"b", "c"}), ValueError);
}

TEST_CASE("contingency csv carries a Total row and column") {
    const ContingencyTable t = contingency({"Walking", "Sitting", "Walking"}, {"Left", "Right", "Left"});
    const auto lines = split_lines(contingency_csv(t));
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == ",Left,Right,Total");
    CHECK(lines[1] == "Walking,2,0,2");
    CHECK(lines[2] == "Sitting,0,1,1");
    CHECK(lines[3] == "Total,2,1,3");
}
