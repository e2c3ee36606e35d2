#include <algorithm>
#include <cmath>

#include "learn_impl.hpp"

namespace actpat::detail {

// Dual coordinate descent for min_w 0.5 w.w + C sum max(0, 1 - y w.x),
// following the standard shrinking-free recipe: project each dual variable
// onto [0, C] along its coordinate, visiting rows in a seeded random order
// per epoch, until the maximal projected gradient falls below tolerance.
Eigen::VectorXd solve_linear_svc(const Eigen::MatrixXd& x_aug, const std::vector<double>& y_pm, double c,
                                 std::uint64_t seed) {
    const int n = int(x_aug.rows());
    const Eigen::Index d = x_aug.cols();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd qii(n);
    for (int i = 0; i < n; ++i) qii[i] = x_aug.row(i).squaredNorm();  // >= 1 with the bias column

    Rng rng(seed);
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[size_t(i)] = i;

    const double tol = 1e-4;
    const int max_epochs = 1000;
    for (int epoch = 0; epoch < max_epochs; ++epoch) {
        rng.shuffle(order);
        double max_pg = 0.0;
        for (int i : order) {
            const double g = y_pm[size_t(i)] * x_aug.row(i).dot(w) - 1.0;
            double pg = g;
            if (alpha[i] <= 0.0) {
                pg = std::min(g, 0.0);
            } else if (alpha[i] >= c) {
                pg = std::max(g, 0.0);
            }
            max_pg = std::max(max_pg, std::abs(pg));
            if (std::abs(pg) > 1e-12) {
                const double old = alpha[i];
                alpha[i] = std::clamp(old - g / qii[i], 0.0, c);
                if (alpha[i] != old) w += (alpha[i] - old) * y_pm[size_t(i)] * x_aug.row(i).transpose();
            }
        }
        if (max_pg < tol) break;
    }
    return w;
}

namespace {

// log(1 + exp(-t)) without overflow for very negative t.
double log1p_exp_neg(double t) {
    if (t < 0.0) return -t + std::log1p(std::exp(t));
    return std::log1p(std::exp(-t));
}

double lr_objective(const Eigen::MatrixXd& x_aug, const std::vector<double>& y_pm, double c,
                    const Eigen::VectorXd& w) {
    double loss = 0.5 * w.squaredNorm();
    const Eigen::VectorXd z = x_aug * w;
    for (Eigen::Index i = 0; i < z.size(); ++i) loss += c * log1p_exp_neg(y_pm[size_t(i)] * z[i]);
    return loss;
}

}  // namespace

// Newton iterations with Armijo backtracking for the regularized logistic
// loss 0.5 w.w + C sum log(1 + exp(-y w.x)).
Eigen::VectorXd solve_logistic(const Eigen::MatrixXd& x_aug, const std::vector<double>& y_pm, double c,
                               double tol) {
    const Eigen::Index n = x_aug.rows();
    const Eigen::Index d = x_aug.cols();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);

    for (int iter = 0; iter < 100; ++iter) {
        const Eigen::VectorXd z = x_aug * w;
        Eigen::VectorXd sigma(n);   // P(correct label)
        Eigen::VectorXd dvals(n);   // sigma (1 - sigma)
        for (Eigen::Index i = 0; i < n; ++i) {
            const double s = 1.0 / (1.0 + std::exp(-y_pm[size_t(i)] * z[i]));
            sigma[i] = s;
            dvals[i] = std::max(s * (1.0 - s), 1e-12);
        }
        Eigen::VectorXd grad = w;
        for (Eigen::Index i = 0; i < n; ++i) {
            grad -= c * (1.0 - sigma[i]) * y_pm[size_t(i)] * x_aug.row(i).transpose();
        }
        if (grad.norm() <= tol) break;

        Eigen::MatrixXd h = Eigen::MatrixXd::Identity(d, d);
        h += c * x_aug.transpose() * dvals.asDiagonal() * x_aug;
        const Eigen::VectorXd step = h.llt().solve(-grad);

        const double f0 = lr_objective(x_aug, y_pm, c, w);
        const double slope = grad.dot(step);
        double t = 1.0;
        while (t > 1e-10 && lr_objective(x_aug, y_pm, c, w + t * step) > f0 + 1e-4 * t * slope) {
            t /= 2.0;
        }
        w += t * step;
    }
    return w;
}

}  // namespace actpat::detail
