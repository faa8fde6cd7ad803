#include "polarlens/gcn.hpp"

#include "polarlens/sentiment.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fmt/format.h>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <unordered_map>

namespace polarlens {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

bool power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace

std::vector<double> hash_features(std::string_view text, std::size_t dim) {
    if (!power_of_two(dim)) throw InvalidArgument(fmt::format("feature dimension {} is not a power of two", dim));
    std::vector<double> v(dim, 0.0);
    for (auto token : tokenize(text)) {
        std::transform(token.begin(), token.end(), token.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        const std::uint64_t h = fnv1a(token);
        const double sign = (h >> 32) & 1U ? -1.0 : 1.0;
        v[h & (dim - 1)] += sign;
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (double& x : v) x /= norm;
    }
    return v;
}

FeatureMap extract_features(const std::map<std::string, std::string>& text_by_user, std::size_t dim,
                            const FeatureMap& external) {
    if (!power_of_two(dim)) throw InvalidArgument(fmt::format("feature dimension {} is not a power of two", dim));
    for (const auto& [user, vec] : external)
        if (vec.size() != dim)
            throw InvalidArgument(fmt::format("embedding for '{}' has length {}, expected {}", user,
                                              vec.size(), dim));
    FeatureMap out;
    for (const auto& [user, text] : text_by_user) {
        auto ext = external.find(user);
        out[user] = ext != external.end() ? ext->second : hash_features(text, dim);
    }
    return out;
}

FeatureMap read_embeddings(std::istream& in) {
    FeatureMap out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto j = nlohmann::json::parse(line);
            out[j.at("user_id").get<std::string>()] = j.at("vector").get<std::vector<double>>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(fmt::format("embeddings line {}: {}", line_no, e.what()));
        }
    }
    return out;
}

Eigen::MatrixXd feature_matrix(std::span<const std::string> users, const FeatureMap& features, std::size_t dim) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(users.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < users.size(); ++i) {
        auto it = features.find(users[i]);
        if (it == features.end()) continue;
        if (it->second.size() != dim)
            throw InvalidArgument(fmt::format("features for '{}' have length {}, expected {}", users[i],
                                              it->second.size(), dim));
        for (std::size_t j = 0; j < dim; ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = it->second[j];
    }
    return x;
}

SparseMatrix normalize_adjacency(const InteractionGraph& graph, std::span<const std::string> users) {
    if (users.empty()) throw InvalidArgument("adjacency needs at least one user");
    std::unordered_map<std::string, Eigen::Index> index;
    for (std::size_t i = 0; i < users.size(); ++i) index.emplace(users[i], static_cast<Eigen::Index>(i));

    std::set<std::pair<Eigen::Index, Eigen::Index>> links;
    for (const auto& e : graph.edges()) {
        if (e.self_loop()) continue;
        auto a = index.find(e.author_id);
        auto b = index.find(e.target_id);
        if (a == index.end() || b == index.end()) continue;
        links.emplace(std::min(a->second, b->second), std::max(a->second, b->second));
    }

    const auto n = static_cast<Eigen::Index>(users.size());
    Eigen::VectorXd degree = Eigen::VectorXd::Ones(n);  // self-loop
    for (const auto& [a, b] : links) {
        degree[a] += 1.0;
        degree[b] += 1.0;
    }
    Eigen::VectorXd inv_sqrt = degree.cwiseSqrt().cwiseInverse();

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * links.size() + users.size());
    for (Eigen::Index i = 0; i < n; ++i) triplets.emplace_back(i, i, inv_sqrt[i] * inv_sqrt[i]);
    for (const auto& [a, b] : links) {
        const double w = inv_sqrt[a] * inv_sqrt[b];
        triplets.emplace_back(a, b, w);
        triplets.emplace_back(b, a, w);
    }
    SparseMatrix a_hat(n, n);
    a_hat.setFromTriplets(triplets.begin(), triplets.end());
    return a_hat;
}

std::size_t GcnModel::parameter_count() const {
    return static_cast<std::size_t>(w1.size() + b1.size() + w2.size() + b2.size());
}

void GcnModel::validate() const {
    if (b1.size() != w1.cols() || w2.rows() != w1.cols() || w2.cols() != 2 || b2.size() != 2)
        throw NumericError("GCN parameter shapes are inconsistent");
    if (!w1.allFinite() || !b1.allFinite() || !w2.allFinite() || !b2.allFinite())
        throw NumericError("GCN parameters contain non-finite values");
}

GcnModel GcnModel::initialize(std::size_t feature_dim, std::size_t hidden_dim, std::uint64_t rng_seed) {
    std::mt19937_64 rng(rng_seed);
    auto glorot = [&rng](Eigen::Index rows, Eigen::Index cols) {
        const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
        std::uniform_real_distribution<double> dist(-limit, limit);
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
        return m;
    };
    GcnModel model;
    const auto f = static_cast<Eigen::Index>(feature_dim);
    const auto h = static_cast<Eigen::Index>(hidden_dim);
    model.w1 = glorot(f, h);
    model.b1 = Eigen::VectorXd::Zero(h);
    model.w2 = glorot(h, 2);
    model.b2 = Eigen::VectorXd::Zero(2);
    return model;
}

namespace {

struct ForwardCache {
    Eigen::MatrixXd ax;      // Â X
    Eigen::MatrixXd hidden;  // Â X W1 + b1 (pre-activation)
    Eigen::MatrixXd ar;      // Â relu(hidden)
    Eigen::MatrixXd logits;
};

void check_shapes(const SparseMatrix& a_hat, const Eigen::MatrixXd& x, const GcnModel& model) {
    model.validate();
    if (a_hat.rows() != a_hat.cols() || a_hat.rows() != x.rows())
        throw InvalidArgument("adjacency and feature matrix disagree on the node count");
    if (x.cols() != model.w1.rows())
        throw InvalidArgument(fmt::format("feature dimension {} does not match model input {}", x.cols(),
                                          model.w1.rows()));
    if (!x.allFinite()) throw NumericError("feature matrix contains non-finite values");
}

ForwardCache forward(const SparseMatrix& a_hat, const Eigen::MatrixXd& ax, const GcnModel& model) {
    ForwardCache c;
    c.ax = ax;
    c.hidden = ax * model.w1;
    c.hidden.rowwise() += model.b1.transpose();
    c.ar = a_hat * c.hidden.cwiseMax(0.0);
    c.logits = c.ar * model.w2;
    c.logits.rowwise() += model.b2.transpose();
    return c;
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& z) {
    Eigen::MatrixXd p(z.rows(), z.cols());
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        const double m = z.row(i).maxCoeff();
        Eigen::RowVectorXd e = (z.row(i).array() - m).exp();
        p.row(i) = e / e.sum();
    }
    return p;
}

double log_sum_exp(const Eigen::RowVectorXd& row) {
    const double m = row.maxCoeff();
    return m + std::log((row.array() - m).exp().sum());
}

double loss_from_cache(const ForwardCache& c, const GcnModel& model, std::span<const LabeledNode> labeled,
                       double weight_decay, GcnModel* gradient, const SparseMatrix& a_hat) {
    if (labeled.empty()) throw InvalidArgument("loss needs at least one labeled node");
    const double m = static_cast<double>(labeled.size());
    double loss = 0.0;
    for (const auto& l : labeled) {
        const auto i = static_cast<Eigen::Index>(l.index);
        loss += log_sum_exp(c.logits.row(i)) - c.logits(i, l.label);
    }
    loss /= m;
    loss += 0.5 * weight_decay * (model.w1.squaredNorm() + model.w2.squaredNorm());

    if (gradient) {
        Eigen::MatrixXd d_logits = Eigen::MatrixXd::Zero(c.logits.rows(), c.logits.cols());
        for (const auto& l : labeled) {
            const auto i = static_cast<Eigen::Index>(l.index);
            const double lse = log_sum_exp(c.logits.row(i));
            for (Eigen::Index k = 0; k < c.logits.cols(); ++k) d_logits(i, k) += std::exp(c.logits(i, k) - lse) / m;
            d_logits(i, l.label) -= 1.0 / m;
        }
        gradient->w2 = c.ar.transpose() * d_logits + weight_decay * model.w2;
        gradient->b2 = d_logits.colwise().sum().transpose();
        Eigen::MatrixXd d_relu = a_hat.transpose() * (d_logits * model.w2.transpose());
        Eigen::MatrixXd d_hidden = d_relu.cwiseProduct((c.hidden.array() > 0.0).cast<double>().matrix());
        gradient->w1 = c.ax.transpose() * d_hidden + weight_decay * model.w1;
        gradient->b1 = d_hidden.colwise().sum().transpose();
    }
    return loss;
}

} // namespace

Eigen::MatrixXd gcn_forward(const SparseMatrix& a_hat, const Eigen::MatrixXd& features, const GcnModel& model) {
    check_shapes(a_hat, features, model);
    Eigen::MatrixXd ax = a_hat * features;
    Eigen::MatrixXd p = softmax_rows(forward(a_hat, ax, model).logits);
    if (!p.allFinite()) throw NumericError("GCN forward pass produced non-finite probabilities");
    return p;
}

double gcn_loss(const SparseMatrix& a_hat, const Eigen::MatrixXd& features, const GcnModel& model,
                std::span<const LabeledNode> labeled, double weight_decay, GcnModel* gradient) {
    check_shapes(a_hat, features, model);
    Eigen::MatrixXd ax = a_hat * features;
    return loss_from_cache(forward(a_hat, ax, model), model, labeled, weight_decay, gradient, a_hat);
}

GcnTrainResult gcn_train(const SparseMatrix& a_hat, const Eigen::MatrixXd& features,
                         std::span<const LabeledNode> seeds, const GcnTrainOptions& options) {
    std::vector<LabeledNode> by_class[2];
    for (const auto& s : seeds) {
        if (s.label != 0 && s.label != 1) throw InvalidArgument("seed labels must be 0 (pro) or 1 (anti)");
        if (s.index >= static_cast<std::size_t>(features.rows()))
            throw InvalidArgument(fmt::format("seed index {} out of range", s.index));
        by_class[s.label].push_back(s);
    }
    if (by_class[0].empty() || by_class[1].empty())
        throw InvalidArgument("GCN training needs at least one seed per class");
    if (options.hidden == 0 || options.epochs == 0) throw InvalidArgument("hidden size and epochs must be positive");

    GcnTrainResult result;
    std::mt19937_64 split_rng(options.rng_seed);
    for (auto& cls : by_class) {
        std::sort(cls.begin(), cls.end(), [](const LabeledNode& a, const LabeledNode& b) { return a.index < b.index; });
        std::shuffle(cls.begin(), cls.end(), split_rng);
        auto n_val = static_cast<std::size_t>(std::floor(options.validation_fraction * static_cast<double>(cls.size())));
        n_val = std::min(n_val, cls.size() - 1);
        result.validation.insert(result.validation.end(), cls.begin(), cls.begin() + static_cast<std::ptrdiff_t>(n_val));
        result.train.insert(result.train.end(), cls.begin() + static_cast<std::ptrdiff_t>(n_val), cls.end());
    }

    GcnModel model = GcnModel::initialize(static_cast<std::size_t>(features.cols()), options.hidden,
                                          options.rng_seed ^ 0x9e3779b97f4a7c15ULL);
    check_shapes(a_hat, features, model);
    const Eigen::MatrixXd ax = a_hat * features;

    GcnModel m1{Eigen::MatrixXd::Zero(model.w1.rows(), model.w1.cols()), Eigen::VectorXd::Zero(model.b1.size()),
                Eigen::MatrixXd::Zero(model.w2.rows(), model.w2.cols()), Eigen::VectorXd::Zero(model.b2.size())};
    GcnModel m2 = m1;
    GcnModel grad = m1;

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
        ForwardCache cache = forward(a_hat, ax, model);
        const double train_loss = loss_from_cache(cache, model, result.train, options.weight_decay, &grad, a_hat);
        const double val_loss = result.validation.empty()
                                    ? train_loss
                                    : loss_from_cache(cache, model, result.validation, 0.0, nullptr, a_hat);
        if (!std::isfinite(train_loss) || !std::isfinite(val_loss))
            throw NumericError(fmt::format("GCN training diverged at epoch {}", epoch));
        result.trace.push_back({epoch, train_loss, val_loss});
        if (val_loss < best) {
            best = val_loss;
            result.model = model;
            result.best_epoch = epoch;
        }

        const double c1 = 1.0 - std::pow(options.beta1, static_cast<double>(epoch));
        const double c2 = 1.0 - std::pow(options.beta2, static_cast<double>(epoch));
        auto step = [&](auto& param, auto& first, auto& second, const auto& g) {
            first = options.beta1 * first + (1.0 - options.beta1) * g;
            second = options.beta2 * second + (1.0 - options.beta2) * g.cwiseProduct(g);
            param -= (options.learning_rate * (first / c1).array() /
                      ((second / c2).array().sqrt() + options.epsilon)).matrix();
        };
        step(model.w1, m1.w1, m2.w1, grad.w1);
        step(model.b1, m1.b1, m2.b1, grad.b1);
        step(model.w2, m1.w2, m2.w2, grad.w2);
        step(model.b2, m1.b2, m2.b2, grad.b2);
    }
    return result;
}

namespace {

nlohmann::json tensor_json(const char* name, const Eigen::MatrixXd& m) {
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    return {{"name", name}, {"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd tensor_from_json(const nlohmann::json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size())
        throw ParseError(fmt::format("tensor '{}' has inconsistent shape", j.at("name").get<std::string>()));
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j2 = 0; j2 < cols; ++j2) m(i, j2) = data[static_cast<std::size_t>(i * cols + j2)];
    return m;
}

} // namespace

void write_model(std::ostream& out, const GcnModel& model) {
    nlohmann::json j = nlohmann::json::object();
    j["format"] = "polarlens-gcn";
    j["version"] = 1;
    j["tensors"] = {tensor_json("w1", model.w1), tensor_json("b1", model.b1), tensor_json("w2", model.w2),
                    tensor_json("b2", model.b2)};
    out << j.dump(1) << '\n';
}

GcnModel read_model(std::istream& in) {
    GcnModel model;
    try {
        auto j = nlohmann::json::parse(in);
        if (j.at("format") != "polarlens-gcn" || j.at("version") != 1)
            throw ParseError("unsupported model checkpoint format");
        std::map<std::string, Eigen::MatrixXd> tensors;
        for (const auto& t : j.at("tensors")) tensors[t.at("name").get<std::string>()] = tensor_from_json(t);
        model.w1 = tensors.at("w1");
        model.b1 = tensors.at("b1").col(0);
        model.w2 = tensors.at("w2");
        model.b2 = tensors.at("b2").col(0);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(fmt::format("model checkpoint: {}", e.what()));
    } catch (const std::out_of_range&) {
        throw ParseError("model checkpoint is missing a tensor");
    }
    model.validate();
    return model;
}

} // namespace polarlens
