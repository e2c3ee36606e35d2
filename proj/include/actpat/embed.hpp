#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "actpat/types.hpp"

namespace actpat {

struct TsneParams {
    double perplexity = 30.0;
    int iterations = 1000;
    double learning_rate = 200.0;
    double exaggeration = 12.0;
    int exaggeration_iters = 250;
    double momentum_initial = 0.5;
    double momentum_final = 0.8;
    int momentum_switch_iter = 250;
    std::uint64_t seed = 42;
};

struct Embedding {
    Eigen::MatrixXd y;  // n x 2, finite
    std::vector<std::string> row_ids;
    std::vector<double> kl_history;  // one entry per gradient iteration
    double kl_final = 0.0;
};

// Exact O(n^2) t-SNE to two dimensions. Columns are z-scored first (the
// `learn` policy); per-point Gaussian bandwidths are found by binary search
// to the target perplexity (entropy tolerance 1e-5, at most 50 steps);
// descent follows the reference schedule (early exaggeration, momentum
// switch, adaptive gains, recentring each step). Deterministic given
// params.seed. Throws ValueError when n < 4, perplexity >= n,
// perplexity <= 1, iterations < 250, or any input value is non-finite.
Embedding tsne(const Eigen::MatrixXd& x, const TsneParams& params = {},
               const std::vector<std::string>& row_ids = {});

// CSV: row_id,x,y,predicted_label. Labels must align with embedding rows.
std::string embedding_csv(const Embedding& embedding, const std::vector<std::string>& labels,
                          const std::vector<std::string>& header_comment = {});
void write_embedding_csv(const Embedding& embedding, const std::vector<std::string>& labels,
                         const std::filesystem::path& path, const std::vector<std::string>& header_comment = {});

}  // namespace actpat
