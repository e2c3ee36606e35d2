#include <algorithm>
#include <cmath>
#include <numeric>

#include "learn_impl.hpp"

namespace actpat::detail {

namespace {

double gini(const std::vector<double>& counts, double total) {
    if (total <= 0.0) return 0.0;
    double acc = 0.0;
    for (double c : counts) acc += (c / total) * (c / total);
    return 1.0 - acc;
}

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double impurity = std::numeric_limits<double>::infinity();
};

// Best weighted-Gini split over the given candidate features. Scanning
// features in ascending order with strict improvement keeps tie-breaks at
// the lowest feature index and smallest threshold.
SplitChoice best_split(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
                       const std::vector<int>& rows, const std::vector<int>& features) {
    SplitChoice best;
    const double m = double(rows.size());
    std::vector<std::pair<double, int>> vals(rows.size());
    std::vector<double> left(static_cast<size_t>(n_classes));
    std::vector<double> right(static_cast<size_t>(n_classes));
    for (int f : features) {
        for (size_t i = 0; i < rows.size(); ++i) vals[i] = {x(rows[i], f), y[size_t(rows[i])]};
        std::sort(vals.begin(), vals.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (vals.front().first == vals.back().first) continue;
        std::fill(left.begin(), left.end(), 0.0);
        std::fill(right.begin(), right.end(), 0.0);
        for (const auto& v : vals) right[size_t(v.second)] += 1.0;
        for (size_t i = 0; i + 1 < vals.size(); ++i) {
            left[size_t(vals[i].second)] += 1.0;
            right[size_t(vals[i].second)] -= 1.0;
            if (vals[i + 1].first <= vals[i].first) continue;
            const double nl = double(i + 1);
            const double nr = m - nl;
            const double imp = (nl * gini(left, nl) + nr * gini(right, nr)) / m;
            if (imp < best.impurity - 1e-12) {
                best.found = true;
                best.feature = f;
                best.threshold = vals[i].first + (vals[i + 1].first - vals[i].first) / 2.0;
                best.impurity = imp;
            }
        }
    }
    return best;
}

struct Builder {
    const Eigen::MatrixXd& x;
    const std::vector<int>& y;
    int n_classes;
    int features_per_split;
    Rng* rng;
    std::vector<TreeNode> nodes;

    int grow(std::vector<int> rows) {
        std::vector<double> counts(size_t(n_classes), 0.0);
        for (int r : rows) counts[size_t(y[size_t(r)])] += 1.0;
        const bool pure = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) <= 1;

        SplitChoice split;
        if (!pure) {
            if (features_per_split > 0 && rng != nullptr) {
                split = best_split(x, y, n_classes, rows, sample_features());
                // The sampled features may all be constant on this node even
                // though others are not; fall back to a full scan so impure
                // separable nodes always split.
                if (!split.found) split = best_split(x, y, n_classes, rows, all_features());
            } else {
                split = best_split(x, y, n_classes, rows, all_features());
            }
        }

        if (!split.found) {
            TreeNode leaf;
            const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
            leaf.dist.resize(n_classes);
            for (int c = 0; c < n_classes; ++c) leaf.dist[c] = counts[size_t(c)] / total;
            nodes.push_back(std::move(leaf));
            return int(nodes.size()) - 1;
        }

        std::vector<int> left_rows, right_rows;
        for (int r : rows) {
            (x(r, split.feature) <= split.threshold ? left_rows : right_rows).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        const int self = int(nodes.size());
        nodes.emplace_back();
        nodes[size_t(self)].feature = split.feature;
        nodes[size_t(self)].threshold = split.threshold;
        const int left = grow(std::move(left_rows));
        nodes[size_t(self)].left = left;
        const int right = grow(std::move(right_rows));
        nodes[size_t(self)].right = right;
        return self;
    }

    std::vector<int> all_features() const {
        std::vector<int> f(size_t(x.cols()));
        std::iota(f.begin(), f.end(), 0);
        return f;
    }

    // Ascending sample of `features_per_split` distinct feature indices.
    std::vector<int> sample_features() {
        std::vector<int> pool = all_features();
        const int take = std::min<int>(features_per_split, int(pool.size()));
        for (int i = 0; i < take; ++i) {
            const auto j = i + int(rng->uniform_int(std::uint64_t(pool.size() - size_t(i))));
            std::swap(pool[size_t(i)], pool[size_t(j)]);
        }
        pool.resize(size_t(take));
        std::sort(pool.begin(), pool.end());
        return pool;
    }
};

}  // namespace

std::vector<TreeNode> build_tree(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
                                 std::vector<int> rows, int features_per_split, Rng* rng) {
    Builder b{x, y, n_classes, features_per_split, rng, {}};
    b.grow(std::move(rows));
    return std::move(b.nodes);
}

static int descend(const std::vector<TreeNode>& nodes, const Eigen::VectorXd& x) {
    int i = 0;
    while (nodes[size_t(i)].feature >= 0) {
        i = x[nodes[size_t(i)].feature] <= nodes[size_t(i)].threshold ? nodes[size_t(i)].left
                                                                      : nodes[size_t(i)].right;
    }
    return i;
}

const Eigen::VectorXd& tree_leaf_dist(const std::vector<TreeNode>& nodes, const Eigen::VectorXd& x) {
    return nodes[size_t(descend(nodes, x))].dist;
}

int tree_vote(const std::vector<TreeNode>& nodes, const Eigen::VectorXd& x) {
    const Eigen::VectorXd& d = tree_leaf_dist(nodes, x);
    Eigen::Index best = 0;
    d.maxCoeff(&best);
    return int(best);
}

}  // namespace actpat::detail
