#include "actpat/embed.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "actpat/learn.hpp"
#include "actpat/rng.hpp"
#include "textio.hpp"

namespace actpat {

namespace {

// Conditional affinities for one point: Gaussian kernel over squared
// distances, bandwidth tuned by binary search so the row entropy matches
// log(perplexity). Natural-log entropy, as in the reference implementation.
void fill_row_affinities(const Eigen::VectorXd& sq_dists, Eigen::Index self, double perplexity,
                         Eigen::VectorXd& out) {
    const double target = std::log(perplexity);
    double beta = 1.0;
    double beta_min = -std::numeric_limits<double>::infinity();
    double beta_max = std::numeric_limits<double>::infinity();

    const Eigen::Index n = sq_dists.size();
    double sum_p = 0.0;
    for (int step = 0; step < 50; ++step) {
        sum_p = 0.0;
        double sum_dp = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == self) {
                out[j] = 0.0;
                continue;
            }
            out[j] = std::exp(-beta * sq_dists[j]);
            sum_p += out[j];
            sum_dp += sq_dists[j] * out[j];
        }
        const double entropy = std::log(sum_p) + beta * sum_dp / sum_p;
        const double diff = entropy - target;
        if (std::abs(diff) < 1e-5) break;
        if (diff > 0.0) {
            beta_min = beta;
            beta = std::isinf(beta_max) ? beta * 2.0 : (beta + beta_max) / 2.0;
        } else {
            beta_max = beta;
            beta = std::isinf(beta_min) ? beta / 2.0 : (beta + beta_min) / 2.0;
        }
    }
    out /= sum_p;
}

}  // namespace

Embedding tsne(const Eigen::MatrixXd& x, const TsneParams& params, const std::vector<std::string>& row_ids) {
    const Eigen::Index n = x.rows();
    if (n < 4) throw ValueError("t-SNE requires at least four rows");
    if (!(params.perplexity > 1.0)) throw ValueError("perplexity must exceed 1");
    if (params.perplexity >= double(n)) throw ValueError("perplexity must be smaller than the number of rows");
    if (params.iterations < 250) throw ValueError("t-SNE requires at least 250 iterations");
    if (!x.allFinite()) throw ValueError("t-SNE input contains non-finite values");
    if (!row_ids.empty() && Eigen::Index(row_ids.size()) != n) {
        throw ValueError("row id count does not match input rows");
    }

    const Eigen::MatrixXd xs = Standardizer::fit(x).transform(x);

    // Pairwise squared distances, then symmetrized affinities.
    const Eigen::VectorXd norms = xs.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = (-2.0 * xs * xs.transpose());
    d2.colwise() += norms;
    d2.rowwise() += norms.transpose();
    d2 = d2.cwiseMax(0.0);

    Eigen::MatrixXd p(n, n);
    Eigen::VectorXd row(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        fill_row_affinities(d2.row(i).transpose(), i, params.perplexity, row);
        p.row(i) = row.transpose();
    }
    p = ((p + p.transpose()) / (2.0 * double(n))).eval();
    p = p.cwiseMax(1e-12);
    p.diagonal().setZero();
    p *= params.exaggeration;

    Embedding emb;
    emb.row_ids = row_ids;
    Rng rng(params.seed);
    emb.y.resize(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index d = 0; d < 2; ++d) emb.y(i, d) = rng.gaussian() * 1e-4;
    }

    Eigen::MatrixXd velocity = Eigen::MatrixXd::Zero(n, 2);
    Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(n, 2);
    Eigen::MatrixXd num(n, n), grad(n, 2);
    emb.kl_history.reserve(size_t(params.iterations));

    for (int iter = 0; iter < params.iterations; ++iter) {
        if (iter == params.exaggeration_iters) p /= params.exaggeration;
        const double momentum = iter < params.momentum_switch_iter ? params.momentum_initial : params.momentum_final;

        // Student-t affinities in the embedding.
        const Eigen::VectorXd ynorm = emb.y.rowwise().squaredNorm();
        num = (-2.0 * emb.y * emb.y.transpose());
        num.colwise() += ynorm;
        num.rowwise() += ynorm.transpose();
        num = (1.0 + num.array()).inverse().matrix();
        num.diagonal().setZero();
        const double sum_num = std::max(num.sum(), std::numeric_limits<double>::min());

        // Gradient: 4 sum_j (p_ij - q_ij) (1 + |y_i - y_j|^2)^-1 (y_i - y_j).
        const Eigen::MatrixXd pq_num = (p - num / sum_num).cwiseProduct(num);
        grad = 4.0 * (Eigen::MatrixXd(pq_num.rowwise().sum().asDiagonal()) * emb.y - pq_num * emb.y);

        const auto sgn = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index d = 0; d < 2; ++d) {
                const bool flipped = sgn(grad(i, d)) != sgn(velocity(i, d));
                gains(i, d) = flipped ? gains(i, d) + 0.2 : gains(i, d) * 0.8;
                if (gains(i, d) < 0.01) gains(i, d) = 0.01;
                velocity(i, d) = momentum * velocity(i, d) - params.learning_rate * gains(i, d) * grad(i, d);
            }
        }
        emb.y += velocity;
        emb.y.rowwise() -= emb.y.colwise().mean();

        double kl = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i == j) continue;
                const double pij = p(i, j);
                const double qij = std::max(num(i, j) / sum_num, 1e-12);
                if (pij > 0.0) kl += pij * std::log(pij / qij);
            }
        }
        emb.kl_history.push_back(kl);
    }
    emb.kl_final = emb.kl_history.back();
    if (!emb.y.allFinite()) throw ValueError("t-SNE diverged to non-finite coordinates");
    return emb;
}

std::string embedding_csv(const Embedding& embedding, const std::vector<std::string>& labels,
                          const std::vector<std::string>& header_comment) {
    if (Eigen::Index(labels.size()) != embedding.y.rows()) {
        throw ValueError("label count does not match embedding rows");
    }
    std::ostringstream out;
    for (const auto& line : header_comment) out << "# " << line << '\n';
    out << "row_id,x,y,predicted_label\n";
    for (Eigen::Index i = 0; i < embedding.y.rows(); ++i) {
        const std::string id = embedding.row_ids.empty() ? "row" + std::to_string(i) : embedding.row_ids[size_t(i)];
        out << id << ',' << format_double(embedding.y(i, 0)) << ',' << format_double(embedding.y(i, 1)) << ','
            << labels[size_t(i)] << '\n';
    }
    return out.str();
}

void write_embedding_csv(const Embedding& embedding, const std::vector<std::string>& labels,
                         const std::filesystem::path& path, const std::vector<std::string>& header_comment) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LoadError("cannot open for writing: " + path.string());
    out << embedding_csv(embedding, labels, header_comment);
    if (!out) throw LoadError("failed writing embedding: " + path.string());
}

}  // namespace actpat
