#pragma once

// Internal predictor implementations behind the Model facade.

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include <nlohmann/json.hpp>

#include "actpat/learn.hpp"
#include "actpat/rng.hpp"

namespace actpat::detail {

using json = nlohmann::ordered_json;

class Predictor {
public:
    virtual ~Predictor() = default;

    // Per-class scores for one standardized feature vector.
    virtual Eigen::VectorXd score(const Eigen::VectorXd& x) const = 0;
    virtual const char* kind() const = 0;
    virtual json params_json() const = 0;
    virtual int tree_count() const { return 0; }
};

std::shared_ptr<const Predictor> fit_predictor(const ClassifierSpec& spec, const Eigen::MatrixXd& x,
                                               const std::vector<int>& y, int n_classes, std::uint64_t seed);
std::shared_ptr<const Predictor> predictor_from_json(const std::string& kind, const json& params);

// --- shared CART machinery (decision tree + random forest) ---------------

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    Eigen::VectorXd dist;  // leaf class distribution (sums to 1)
};

// Grows an unlimited-depth Gini CART over `rows`. features_per_split == 0
// scans all features; otherwise that many are sampled per node from `rng`
// (falling back to a full scan when the sample admits no split). Tie-breaks:
// lowest feature index, then smallest threshold; leaf majority ties go to the
// lowest class index.
std::vector<TreeNode> build_tree(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
                                 std::vector<int> rows, int features_per_split, Rng* rng);

int tree_vote(const std::vector<TreeNode>& nodes, const Eigen::VectorXd& x);
const Eigen::VectorXd& tree_leaf_dist(const std::vector<TreeNode>& nodes, const Eigen::VectorXd& x);

// --- linear solvers -------------------------------------------------------

// L2-regularized L1-loss SVM dual coordinate descent on bias-augmented rows.
// Returns the weight vector (last component is the bias).
Eigen::VectorXd solve_linear_svc(const Eigen::MatrixXd& x_aug, const std::vector<double>& y_pm, double c,
                                 std::uint64_t seed);

// L2-regularized logistic regression by Newton's method with backtracking;
// converges to gradient norm <= tol.
Eigen::VectorXd solve_logistic(const Eigen::MatrixXd& x_aug, const std::vector<double>& y_pm, double c,
                               double tol = 1e-4);

}  // namespace actpat::detail
