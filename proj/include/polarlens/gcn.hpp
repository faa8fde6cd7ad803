#pragma once

#include "polarlens/common.hpp"
#include "polarlens/graph.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace polarlens {

// ─── Node features ────────────────────────────────────────────

using FeatureMap = std::map<std::string, std::vector<double>>;

/// Signed feature hashing of lowercase unigram counts into `dim` buckets
/// (FNV-1a 64), L2-normalized. Empty text gives the zero vector.
std::vector<double> hash_features(std::string_view text, std::size_t dim = 256);

/// `dim` must be a power of two. Users present in `external` take that
/// vector instead; every external vector must have length `dim`.
FeatureMap extract_features(const std::map<std::string, std::string>& text_by_user, std::size_t dim = 256,
                            const FeatureMap& external = {});

/// JSON Lines {"user_id": ..., "vector": [...]}.
FeatureMap read_embeddings(std::istream& in);

/// Rows follow `users`; users without features get zero rows.
Eigen::MatrixXd feature_matrix(std::span<const std::string> users, const FeatureMap& features, std::size_t dim);

// ─── Graph convolution ────────────────────────────────────────

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// D^-1/2 (A + I) D^-1/2 over the undirected simple graph induced on
/// `users` (an edge if any interaction exists in either direction).
SparseMatrix normalize_adjacency(const InteractionGraph& graph, std::span<const std::string> users);

struct GcnModel {
    Eigen::MatrixXd w1;  // F x H
    Eigen::VectorXd b1;  // H
    Eigen::MatrixXd w2;  // H x 2
    Eigen::VectorXd b2;  // 2

    std::size_t feature_dim() const { return static_cast<std::size_t>(w1.rows()); }
    std::size_t hidden_dim() const { return static_cast<std::size_t>(w1.cols()); }
    std::size_t parameter_count() const;

    /// Throws NumericError on shape mismatch or non-finite entries.
    void validate() const;

    /// Glorot-uniform weights, zero biases.
    static GcnModel initialize(std::size_t feature_dim, std::size_t hidden_dim, std::uint64_t rng_seed);
};

/// Row-wise softmax(Â relu(Â X W1 + b1) W2 + b2); column 0 = pro, 1 = anti.
Eigen::MatrixXd gcn_forward(const SparseMatrix& a_hat, const Eigen::MatrixXd& features, const GcnModel& model);

struct LabeledNode {
    std::size_t index = 0;
    int label = 0;  // 0 = pro, 1 = anti
};

/// Mean cross-entropy over `labeled` plus 0.5 * weight_decay * (|W1|^2 + |W2|^2).
/// When `gradient` is non-null it receives the exact backpropagated gradient.
double gcn_loss(const SparseMatrix& a_hat, const Eigen::MatrixXd& features, const GcnModel& model,
                std::span<const LabeledNode> labeled, double weight_decay, GcnModel* gradient = nullptr);

struct GcnTrainOptions {
    std::size_t hidden = 64;
    double learning_rate = 0.01;
    double weight_decay = 5e-4;
    std::size_t epochs = 200;
    std::uint64_t rng_seed = 42;
    double validation_fraction = 0.2;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct EpochLoss {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double validation_loss = 0.0;
};

struct GcnTrainResult {
    GcnModel model;  // parameters at the best validation loss
    std::vector<EpochLoss> trace;
    std::size_t best_epoch = 0;
    std::vector<LabeledNode> train;
    std::vector<LabeledNode> validation;
};

/// Full-batch Adam on the seed cross-entropy. Seeds are split per class by
/// a shuffle seeded with rng_seed; every class keeps at least one training
/// seed. Throws InvalidArgument when a class has no seeds and NumericError
/// (naming the epoch) when the loss stops being finite.
GcnTrainResult gcn_train(const SparseMatrix& a_hat, const Eigen::MatrixXd& features,
                         std::span<const LabeledNode> seeds, const GcnTrainOptions& options = {});

/// JSON checkpoint: {"format": "polarlens-gcn", "version": 1, "tensors": [
///   {"name", "rows", "cols", "data" (row-major)} ...]}.
void write_model(std::ostream& out, const GcnModel& model);
GcnModel read_model(std::istream& in);

} // namespace polarlens
