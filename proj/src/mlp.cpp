#include <cmath>

#include "actpat/learn.hpp"
#include "actpat/rng.hpp"
#include "actpat/types.hpp"

namespace actpat {

namespace {

// Flat layout: W1 (hidden x inputs), b1, W2 (outputs x hidden), b2, each
// block in Eigen column-major storage order.
struct Views {
    Eigen::Map<const Eigen::MatrixXd> w1;
    Eigen::Map<const Eigen::VectorXd> b1;
    Eigen::Map<const Eigen::MatrixXd> w2;
    Eigen::Map<const Eigen::VectorXd> b2;
};

Views map_params(const MlpProblem& p, const Eigen::VectorXd& params) {
    const double* base = params.data();
    const Eigen::Index n1 = Eigen::Index(p.hidden) * p.inputs;
    const Eigen::Index n2 = Eigen::Index(p.outputs) * p.hidden;
    return Views{
        {base, p.hidden, p.inputs},
        {base + n1, p.hidden},
        {base + n1 + p.hidden, p.outputs, p.hidden},
        {base + n1 + p.hidden + n2, p.outputs},
    };
}

struct Forward {
    Eigen::MatrixXd z1;  // batch x hidden, pre-activation
    Eigen::MatrixXd a1;  // rectified
    Eigen::MatrixXd z2;  // batch x outputs, logits
};

Forward forward_pass(const MlpProblem& p, const Eigen::VectorXd& params, const Eigen::MatrixXd& x) {
    const Views v = map_params(p, params);
    Forward f;
    f.z1 = (x * v.w1.transpose()).rowwise() + v.b1.transpose();
    f.a1 = f.z1.cwiseMax(0.0);
    f.z2 = (f.a1 * v.w2.transpose()).rowwise() + v.b2.transpose();
    return f;
}

}  // namespace

Eigen::Index MlpProblem::parameter_count() const {
    return Eigen::Index(hidden) * inputs + hidden + Eigen::Index(outputs) * hidden + outputs;
}

Eigen::VectorXd MlpProblem::init_parameters(std::uint64_t seed) const {
    if (inputs < 1 || hidden < 1 || outputs < 2) throw ValueError("mlp shape must have inputs,hidden >= 1 and outputs >= 2");
    Rng rng(seed);
    Eigen::VectorXd params = Eigen::VectorXd::Zero(parameter_count());
    const Eigen::Index n1 = Eigen::Index(hidden) * inputs;
    const Eigen::Index n2 = Eigen::Index(outputs) * hidden;
    const double s1 = 1.0 / std::sqrt(double(inputs));
    const double s2 = 1.0 / std::sqrt(double(hidden));
    for (Eigen::Index i = 0; i < n1; ++i) params[i] = rng.uniform(-0.5, 0.5) * s1;
    const Eigen::Index w2_at = n1 + hidden;
    for (Eigen::Index i = 0; i < n2; ++i) params[w2_at + i] = rng.uniform(-0.5, 0.5) * s2;
    return params;  // biases stay zero
}

Eigen::MatrixXd MlpProblem::softmax_scores(const Eigen::VectorXd& params, const Eigen::MatrixXd& x) const {
    const Forward f = forward_pass(*this, params, x);
    Eigen::MatrixXd p(f.z2.rows(), f.z2.cols());
    for (Eigen::Index i = 0; i < f.z2.rows(); ++i) {
        const double m = f.z2.row(i).maxCoeff();
        Eigen::ArrayXd e = (f.z2.row(i).array() - m).exp();
        p.row(i) = (e / e.sum()).matrix();
    }
    return p;
}

double MlpProblem::loss(const Eigen::VectorXd& params, const Eigen::MatrixXd& x, const std::vector<int>& y) const {
    const Forward f = forward_pass(*this, params, x);
    double total = 0.0;
    for (Eigen::Index i = 0; i < f.z2.rows(); ++i) {
        const double m = f.z2.row(i).maxCoeff();
        const double lse = m + std::log((f.z2.row(i).array() - m).exp().sum());
        total += lse - f.z2(i, y[size_t(i)]);
    }
    return total / double(f.z2.rows());
}

Eigen::VectorXd MlpProblem::gradient(const Eigen::VectorXd& params, const Eigen::MatrixXd& x,
                                     const std::vector<int>& y) const {
    const Views v = map_params(*this, params);
    const Forward f = forward_pass(*this, params, x);
    const Eigen::Index b = x.rows();

    Eigen::MatrixXd dz2(b, outputs);
    for (Eigen::Index i = 0; i < b; ++i) {
        const double m = f.z2.row(i).maxCoeff();
        Eigen::ArrayXd e = (f.z2.row(i).array() - m).exp();
        dz2.row(i) = (e / e.sum()).matrix();
        dz2(i, y[size_t(i)]) -= 1.0;
    }
    dz2 /= double(b);

    const Eigen::MatrixXd gw2 = dz2.transpose() * f.a1;
    const Eigen::VectorXd gb2 = dz2.colwise().sum();
    Eigen::MatrixXd dz1 = dz2 * v.w2;
    // Rectifier gate: gradient flows only where the pre-activation was positive.
    dz1 = (f.z1.array() > 0.0).select(dz1, 0.0);
    const Eigen::MatrixXd gw1 = dz1.transpose() * x;
    const Eigen::VectorXd gb1 = dz1.colwise().sum();

    Eigen::VectorXd g(parameter_count());
    const Eigen::Index n1 = Eigen::Index(hidden) * inputs;
    const Eigen::Index n2 = Eigen::Index(outputs) * hidden;
    Eigen::Map<Eigen::MatrixXd>(g.data(), hidden, inputs) = gw1;
    Eigen::Map<Eigen::VectorXd>(g.data() + n1, hidden) = gb1;
    Eigen::Map<Eigen::MatrixXd>(g.data() + n1 + hidden, outputs, hidden) = gw2;
    Eigen::Map<Eigen::VectorXd>(g.data() + n1 + hidden + n2, outputs) = gb2;
    return g;
}

}  // namespace actpat
