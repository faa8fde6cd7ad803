#include "polarlens/gcn.hpp"

#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

using namespace polarlens;

namespace {

InteractionEdge edge(const std::string& a, const std::string& b) {
    return {a, b, InteractionKind::reply, a + b, "c", *parse_timestamp("2022-05-24T00:00:00Z"), 0.0};
}

std::vector<std::string> ids(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back("n" + std::to_string(i));
    return out;
}

// Every parameter as a flat list of references so finite differences can
// perturb them one at a time.
std::vector<double*> parameters(GcnModel& m) {
    std::vector<double*> out;
    for (auto* mat : {&m.w1, &m.w2})
        for (Eigen::Index i = 0; i < mat->size(); ++i) out.push_back(mat->data() + i);
    for (auto* vec : {&m.b1, &m.b2})
        for (Eigen::Index i = 0; i < vec->size(); ++i) out.push_back(vec->data() + i);
    return out;
}

} // namespace

TEST_CASE("hash_features") {
    auto empty = hash_features("");
    CHECK(empty.size() == 256);
    CHECK(std::all_of(empty.begin(), empty.end(), [](double x) { return x == 0.0; }));

    CHECK(hash_features("gun control now") == hash_features("gun control now"));
    CHECK(hash_features("Gun") == hash_features("gun"));

    auto one = hash_features("token");
    CHECK(std::count_if(one.begin(), one.end(), [](double x) { return x != 0.0; }) == 1);
    double norm = 0;
    for (double x : one) norm += x * x;
    CHECK(norm == doctest::Approx(1.0));

    auto text = hash_features("a b c a a d e f g", 64);
    norm = 0;
    for (double x : text) norm += x * x;
    CHECK(norm == doctest::Approx(1.0));
    CHECK_THROWS_AS(hash_features("x", 100), InvalidArgument);
}

TEST_CASE("extract_features and embeddings") {
    std::map<std::string, std::string> texts = {{"a", "hello world"}, {"b", ""}};
    FeatureMap external = {{"b", std::vector<double>(8, 0.5)}};
    auto f = extract_features(texts, 8, external);
    CHECK(f.at("a") == hash_features("hello world", 8));
    CHECK(f.at("b") == std::vector<double>(8, 0.5));
    CHECK_THROWS_AS(extract_features(texts, 16, external), InvalidArgument);

    std::istringstream in("{\"user_id\":\"a\",\"vector\":[1,2]}\n");
    auto e = read_embeddings(in);
    CHECK(e.at("a") == std::vector<double>{1, 2});
    std::istringstream bad("{\"user_id\":\"a\"}\n");
    CHECK_THROWS_AS(read_embeddings(bad), ParseError);

    std::vector<std::string> users = {"a", "zz"};
    auto x = feature_matrix(users, f, 8);
    CHECK(x.rows() == 2);
    CHECK(x.row(1).isZero());
}

TEST_CASE("normalize_adjacency") {
    InteractionGraph lone({"a"}, {});
    std::vector<std::string> one = {"a"};
    auto a1 = Eigen::MatrixXd(normalize_adjacency(lone, one));
    CHECK(a1(0, 0) == 1.0);

    InteractionGraph pair({}, {edge("a", "b"), edge("a", "b"), edge("b", "a")});
    std::vector<std::string> two = {"a", "b"};
    auto a2 = Eigen::MatrixXd(normalize_adjacency(pair, two));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(a2(i, j) == doctest::Approx(0.5).epsilon(1e-15));

    InteractionGraph chain({}, {edge("n0", "n1"), edge("n1", "n2"), edge("n2", "n2"), edge("n0", "outsider")});
    auto users = ids(3);
    auto a3 = Eigen::MatrixXd(normalize_adjacency(chain, users));
    CHECK(a3.isApprox(a3.transpose()));
    for (int i = 0; i < 3; ++i) CHECK(a3.row(i).sum() > 0.0);
    // Symmetric normalization bounds the spectrum, not the row sums.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a3);
    CHECK(eig.eigenvalues().maxCoeff() <= 1.0 + 1e-12);
    CHECK(a3(1, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(a3(0, 1) == doctest::Approx(1.0 / std::sqrt(6.0)));
    CHECK(a3(0, 2) == 0.0);
}

TEST_CASE("gcn_forward") {
    auto model = GcnModel::initialize(4, 3, 1);
    InteractionGraph g({}, {edge("n0", "n1"), edge("n1", "n2")});
    auto users = ids(3);
    auto a = normalize_adjacency(g, users);
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(3, 4);

    auto flat = model;
    flat.w2.setZero();
    flat.b2.setZero();
    auto z = gcn_forward(a, x, flat);
    for (int i = 0; i < 3; ++i) {
        CHECK(z(i, 0) == 0.5);
        CHECK(z(i, 1) == 0.5);
    }

    std::vector<std::string> single = {"s"};
    InteractionGraph lone({"s"}, {});
    auto zero = GcnModel::initialize(4, 3, 2);
    zero.b2 << 1.0, 0.0;
    auto z1 = gcn_forward(normalize_adjacency(lone, single), Eigen::MatrixXd::Zero(1, 4), zero);
    CHECK(z1(0, 0) == doctest::Approx(0.7311).epsilon(1e-4));
    CHECK(z1(0, 1) == doctest::Approx(0.2689).epsilon(1e-4));

    auto zr = gcn_forward(a, x, model);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(zr.row(i).sum() - 1.0) <= 1e-12);

    CHECK_THROWS_AS(gcn_forward(a, Eigen::MatrixXd::Zero(3, 5), model), InvalidArgument);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(3, 4);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(gcn_forward(a, bad, model), NumericError);
}

TEST_CASE("gcn_loss gradient matches central differences") {
    InteractionGraph g({}, {edge("n0", "n1"), edge("n1", "n2"), edge("n2", "n3"), edge("n3", "n4"),
                            edge("n4", "n5"), edge("n0", "n2")});
    auto users = ids(6);
    auto a = normalize_adjacency(g, users);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd x(6, 4);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
    auto model = GcnModel::initialize(4, 3, 23);
    for (Eigen::Index i = 0; i < model.b1.size(); ++i) model.b1[i] = 0.1 * normal(rng);
    for (Eigen::Index i = 0; i < model.b2.size(); ++i) model.b2[i] = 0.1 * normal(rng);
    std::vector<LabeledNode> labeled = {{0, 0}, {2, 1}, {3, 0}, {5, 1}};

    GcnModel grad;
    gcn_loss(a, x, model, labeled, 5e-4, &grad);
    auto analytic = parameters(grad);
    auto probe = model;
    auto params = parameters(probe);
    REQUIRE(analytic.size() == model.parameter_count());

    const double eps = 1e-5;
    double worst = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double keep = *params[i];
        *params[i] = keep + eps;
        const double up = gcn_loss(a, x, probe, labeled, 5e-4);
        *params[i] = keep - eps;
        const double down = gcn_loss(a, x, probe, labeled, 5e-4);
        *params[i] = keep;
        const double numeric = (up - down) / (2 * eps);
        const double scale = std::max({std::abs(numeric), std::abs(*analytic[i]), 1e-6});
        worst = std::max(worst, std::abs(numeric - *analytic[i]) / scale);
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("gcn_train: homophilous two-block graph") {
    const int n = 500;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    std::normal_distribution<double> noise(0, 1);
    std::vector<int> cls(n);
    for (int i = 0; i < n; ++i) cls[i] = i % 2;
    std::vector<InteractionEdge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (u(rng) < (cls[i] == cls[j] ? 0.05 : 0.005))
                edges.push_back(edge("n" + std::to_string(i), "n" + std::to_string(j)));
    auto users = ids(n);
    InteractionGraph g(std::set<std::string>(users.begin(), users.end()), edges);
    auto a = normalize_adjacency(g, users);
    Eigen::MatrixXd x(n, 16);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < 16; ++k) x(i, k) = noise(rng) + (k < 2 ? (cls[i] ? 0.5 : -0.5) : 0.0);

    std::vector<LabeledNode> seeds;
    for (int i = 0; i < 40; ++i) seeds.push_back({static_cast<std::size_t>(i), cls[i]});

    GcnTrainOptions options;
    options.hidden = 16;
    auto result = gcn_train(a, x, seeds, options);
    CHECK(result.trace.size() == options.epochs);
    CHECK(result.train.size() == 32);
    CHECK(result.validation.size() == 8);
    auto z = gcn_forward(a, x, result.model);
    int correct = 0;
    for (int i = 40; i < n; ++i) correct += (z(i, 1) > 0.5 ? 1 : 0) == cls[i];
    CHECK(static_cast<double>(correct) / (n - 40) >= 0.9);

    auto again = gcn_train(a, x, seeds, options);
    REQUIRE(again.trace.size() == result.trace.size());
    for (std::size_t i = 0; i < again.trace.size(); ++i) {
        CHECK(again.trace[i].train_loss == result.trace[i].train_loss);
        CHECK(again.trace[i].validation_loss == result.trace[i].validation_loss);
    }

    std::vector<LabeledNode> one_class = {{0, 0}, {2, 0}};
    CHECK_THROWS_AS(gcn_train(a, x, one_class, options), InvalidArgument);
}

TEST_CASE("model checkpoints round-trip exactly") {
    auto model = GcnModel::initialize(8, 4, 5);
    model.b1.setConstant(0.125);
    std::ostringstream out;
    write_model(out, model);
    std::istringstream in(out.str());
    auto back = read_model(in);
    CHECK(back.w1 == model.w1);
    CHECK(back.b1 == model.b1);
    CHECK(back.w2 == model.w2);
    CHECK(back.b2 == model.b2);
    CHECK(model.parameter_count() == 8 * 4 + 4 + 4 * 2 + 2);

    std::istringstream bad(R"({"format":"other","version":1,"tensors":[]})");
    CHECK_THROWS_AS(read_model(bad), ParseError);
}
