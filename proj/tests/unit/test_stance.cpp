#include "polarlens/stance.hpp"

#include "doctest.h"

#include <cstdint>
#include <numeric>
#include <random>
#include <sstream>

using namespace polarlens;

namespace {

Tweet tagged(const std::string& id, const std::string& author, std::vector<std::string> tags) {
    Tweet t;
    t.id = id;
    t.author_id = author;
    t.conversation_id = id;
    t.hashtags = std::move(tags);
    return t;
}

// Independent scorer: exact rational precision and recall per class.
struct Ratio {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Ratio(std::int64_t n = 0, std::int64_t d = 1) : num(n), den(d) {
        const std::int64_t g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    friend Ratio operator+(Ratio a, Ratio b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
    friend Ratio operator*(Ratio a, Ratio b) { return {a.num * b.num, a.den * b.den}; }
    friend Ratio operator/(Ratio a, Ratio b) { return {a.num * b.den, a.den * b.num}; }
    friend bool operator==(Ratio a, Ratio b) { return a.num == b.num && a.den == b.den; }
    friend bool operator>(Ratio a, Ratio b) { return a.num * b.den > b.num * a.den; }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

Ratio reference_f1(const std::vector<LabeledProbability>& labeled, double t1, double t2) {
    Ratio score;
    for (Stance cls : {Stance::pro, Stance::anti}) {
        std::int64_t predicted = 0, actual = 0, hit = 0;
        for (const auto& l : labeled) {
            const Stance p = l.p_anti <= t1 ? Stance::pro : l.p_anti >= t2 ? Stance::anti : Stance::undecided;
            predicted += p == cls;
            actual += l.reference == cls;
            hit += p == cls && l.reference == cls;
        }
        const Ratio precision = predicted ? Ratio(hit, predicted) : Ratio();
        const Ratio recall = actual ? Ratio(hit, actual) : Ratio();
        if ((precision + recall).num > 0) score = score + Ratio(2) * precision * recall / (precision + recall);
    }
    return score / Ratio(2);
}

} // namespace

TEST_CASE("build_bipartite: usage counts") {
    std::vector<Tweet> tweets = {tagged("1", "u", {"climatehoax"}), tagged("2", "u", {"climatehoax", "x"}),
                                 tagged("3", "v", {"x", "y"}), tagged("4", "v", {"y"}), tagged("5", "w", {})};
    auto g = build_bipartite(tweets, {{"climatehoax", 1.0}, {"missing", 0.0}});
    CHECK(g.weight("u", "climatehoax") == 2.0);
    CHECK(g.weight("u", "x") == 1.0);
    CHECK(g.weight("v", "x") == 1.0);
    CHECK(g.weight("v", "y") == 2.0);
    CHECK(g.weight("u", "y") == 0.0);
    CHECK(g.user_index("w") == static_cast<std::size_t>(-1));
    CHECK(g.users == std::vector<std::string>{"u", "v"});
    REQUIRE(g.warnings.size() == 1);
    CHECK(g.hashtag_index("missing") != static_cast<std::size_t>(-1));

    auto uses = seed_usage(g);
    CHECK(uses.at("u") == 2.0);
    CHECK(uses.at("v") == 0.0);

    auto empty = build_bipartite({}, {});
    CHECK(empty.users.empty());
    CHECK(empty.edges.empty());
}

TEST_CASE("propagate: clamped average") {
    std::vector<Tweet> tweets = {tagged("1", "u", {"s0"})};
    auto r = propagate(build_bipartite(tweets, {{"s0", 0.0}}));
    CHECK(r.p_anti.at("u") == 0.0);
    CHECK(r.converged);
    CHECK(r.iterations <= 2);
}

TEST_CASE("propagate: weighted mean") {
    std::vector<Tweet> tweets = {tagged("1", "u", {"s0"}), tagged("2", "u", {"s0"}), tagged("3", "u", {"s1"})};
    auto r = propagate(build_bipartite(tweets, {{"s0", 0.0}, {"s1", 1.0}}));
    CHECK(r.p_anti.at("u") == 1.0 / 3.0);
}

TEST_CASE("propagate: linear fixed point") {
    std::vector<Tweet> tweets = {tagged("1", "u1", {"s0", "x"}), tagged("2", "u2", {"x"})};
    auto r = propagate(build_bipartite(tweets, {{"s0", 0.0}}));
    CHECK(r.converged);
    CHECK(r.iterations <= 100);
    CHECK(std::abs(r.p_anti.at("u1")) < 1e-6);
    CHECK(std::abs(r.p_anti.at("u2")) < 1e-6);
    CHECK(std::abs(r.hashtag_values.at("x")) < 1e-6);
}

TEST_CASE("propagate: bounds, single-valued seeds, errors") {
    std::mt19937_64 rng(3);
    std::vector<Tweet> tweets;
    for (int i = 0; i < 300; ++i) {
        std::vector<std::string> tags;
        for (int k = 0; k < 3; ++k) tags.push_back("h" + std::to_string(rng() % 15));
        tweets.push_back(tagged(std::to_string(i), "u" + std::to_string(rng() % 40), normalize_hashtags(tags)));
    }
    auto mixed = propagate(build_bipartite(tweets, {{"h0", 0.0}, {"h1", 1.0}}), {1.0, 1e-9, 5000});
    for (const auto& [_, p] : mixed.p_anti) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
    auto uniform = propagate(build_bipartite(tweets, {{"h0", 1.0}, {"h1", 1.0}}), {1.0, 1e-10, 20000});
    CHECK(uniform.converged);
    for (const auto& [_, p] : uniform.p_anti) CHECK(p == doctest::Approx(1.0).epsilon(1e-6));

    auto damped = propagate(build_bipartite(tweets, {{"h0", 0.0}, {"h1", 1.0}}), {0.5, 1e-9, 20000});
    CHECK(damped.converged);
    for (const auto& [u, p] : damped.p_anti) CHECK(p == doctest::Approx(mixed.p_anti.at(u)).epsilon(1e-5));

    CHECK_THROWS_AS(propagate(build_bipartite(tweets, {})), InvalidArgument);
    CHECK_THROWS_AS(propagate(build_bipartite(tweets, {{"h0", 0.0}}), {0.0, 1e-6, 10}), InvalidArgument);
}

TEST_CASE("select_seed_users") {
    std::map<std::string, double> p = {{"a", 0.0}, {"b", 0.5}, {"c", 0.8}, {"d", 0.9}, {"e", 0.25}};
    std::unordered_map<std::string, double> uses = {{"a", 5}, {"b", 5}, {"c", 2}, {"d", 3}, {"e", 3}};
    auto seeds = select_seed_users(p, uses);
    REQUIRE(seeds.size() == 3);
    CHECK(seeds[0].user_id == "a");
    CHECK(seeds[0].label == Stance::pro);
    CHECK(seeds[0].source == StanceSource::seed);
    CHECK(seeds[1].user_id == "d");
    CHECK(seeds[1].label == Stance::anti);
    CHECK(seeds[2].user_id == "e");
    CHECK(select_seed_users({}, {}).empty());
}

TEST_CASE("threshold semantics are inclusive toward decided classes") {
    const ThresholdPair band{0.40, 0.60};
    CHECK(classify_stance(0.40, band) == Stance::pro);
    CHECK(classify_stance(0.60, band) == Stance::anti);
    CHECK(classify_stance(0.50, band) == Stance::undecided);
    CHECK(classify_stance(0.4000001, band) == Stance::undecided);

    auto assigned = assign_stances({{"x", 0.1}, {"y", 0.9}, {"z", 0.5}}, band);
    REQUIRE(assigned.size() == 3);
    CHECK(assigned[0].label == Stance::pro);
    CHECK(assigned[1].label == Stance::anti);
    CHECK(assigned[2].label == Stance::undecided);
    CHECK(assigned[2].source == StanceSource::gnn);

    CHECK_THROWS_AS(assign_stances({}, {0.6, 0.7}), InvalidArgument);
    CHECK_THROWS_AS(assign_stances({}, {0.0, 0.6}), InvalidArgument);
    CHECK_THROWS_AS(assign_stances({}, {0.4, 1.0}), InvalidArgument);
}

TEST_CASE("calibrate_thresholds: worked fixtures") {
    SUBCASE("operating point is recovered when it is the unique optimum") {
        std::vector<LabeledProbability> labeled;
        for (double p : {0.1, 0.2, 0.3, 0.4, 0.4, 0.58}) labeled.push_back({p, Stance::pro});
        for (double p : {0.6, 0.6, 0.7, 0.8, 0.9, 0.42}) labeled.push_back({p, Stance::anti});
        auto c = calibrate_thresholds(labeled);
        CHECK(c.thresholds.t1 == 0.40);
        CHECK(c.thresholds.t2 == 0.60);
        CHECK(c.macro_f1 == doctest::Approx(10.0 / 11.0));
    }
    SUBCASE("perfect separation keeps the widest perfect band") {
        std::vector<LabeledProbability> labeled = {{0.1, Stance::pro}, {0.9, Stance::anti}};
        auto c = calibrate_thresholds(labeled);
        CHECK(c.macro_f1 == 1.0);
        CHECK(c.thresholds.t1 == 0.10);
        CHECK(c.thresholds.t2 == 0.90);
    }
    SUBCASE("indistinguishable probabilities") {
        std::vector<LabeledProbability> labeled = {{0.5, Stance::pro}, {0.5, Stance::anti}};
        auto c = calibrate_thresholds(labeled);
        CHECK(c.macro_f1 == doctest::Approx(1.0 / 3.0));
        CHECK(c.thresholds.t1 == 0.05);
        CHECK(c.thresholds.t2 == 0.50);
    }
    CHECK_THROWS_AS(calibrate_thresholds(std::vector<LabeledProbability>{}), InvalidArgument);
    CHECK_THROWS_AS(calibrate_thresholds(std::vector<LabeledProbability>{{0.2, Stance::pro}}), InvalidArgument);
    CHECK_THROWS_AS(calibrate_thresholds(std::vector<LabeledProbability>{{0.2, Stance::undecided}}), InvalidArgument);
}

TEST_CASE("calibrate_thresholds agrees with an exhaustive reference scorer") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<LabeledProbability> labeled;
        const int n = 2 + static_cast<int>(rng() % 40);
        for (int i = 0; i < n; ++i) {
            const Stance s = i == 0 ? Stance::pro : i == 1 ? Stance::anti : (rng() % 2 ? Stance::pro : Stance::anti);
            // Mix grid-aligned values (exercising the inclusive bounds) with arbitrary ones.
            const double p = rng() % 3 == 0 ? static_cast<double>(rng() % 21) / 20 : std::uniform_real_distribution<>(0, 1)(rng);
            labeled.push_back({p, s});
        }
        Ratio best(-1);
        int bk1 = 0, bk2 = 0;
        for (int k1 = 1; k1 <= 10; ++k1) {
            for (int k2 = 10; k2 <= 19; ++k2) {
                const Ratio f = reference_f1(labeled, k1 / 20.0, k2 / 20.0);
                CHECK(f.value() == macro_f1(labeled, {k1 / 20.0, k2 / 20.0}));
                const bool better =
                    f > best || (f == best && (k2 - k1 > bk2 - bk1 || (k2 - k1 == bk2 - bk1 && k1 < bk1)));
                if (better) {
                    best = f;
                    bk1 = k1;
                    bk2 = k2;
                }
            }
        }
        auto c = calibrate_thresholds(labeled);
        CHECK(c.thresholds.t1 == bk1 / 20.0);
        CHECK(c.thresholds.t2 == bk2 / 20.0);
        CHECK(c.macro_f1 == best.value());
    }
}

TEST_CASE("threshold grids") {
    auto lower = threshold_grid_lower();
    auto upper = threshold_grid_upper();
    REQUIRE(lower.size() == 10);
    REQUIRE(upper.size() == 10);
    CHECK(lower.front() == 0.05);
    CHECK(lower.back() == 0.5);
    CHECK(upper.front() == 0.5);
    CHECK(upper.back() == 0.95);
    CHECK(threshold_grid_lower(0.1).size() == 5);
    CHECK_THROWS_AS(threshold_grid_lower(0.3), InvalidArgument);
    CHECK_THROWS_AS(threshold_grid_upper(0.0), InvalidArgument);
}

TEST_CASE("stance and label files") {
    std::vector<StanceAssignment> rows = {{"u1", 0.1, Stance::pro, StanceSource::seed},
                                          {"u2", 0.55, Stance::undecided, StanceSource::gnn}};
    std::ostringstream out;
    write_stances_csv(out, rows);
    CHECK(out.str().rfind(std::string(kStanceCsvHeader) + "\n", 0) == 0);
    std::istringstream in(out.str());
    auto back = read_stances_csv(in);
    REQUIRE(back.size() == 2);
    CHECK(back[0].source == StanceSource::seed);
    CHECK(back[1].p_anti == 0.55);

    std::istringstream labels("user_id,true_stance\nu1,pro\nu2,undecided\n");
    auto map = read_label_csv(labels, "true_stance");
    CHECK(map.at("u2") == Stance::undecided);
    std::istringstream bad("user_id,true_stance\nu1,maybe\n");
    CHECK_THROWS_AS(read_label_csv(bad, "true_stance"), ParseError);

    std::istringstream seeds("hashtag,side\n#GunControl,pro\nnra,anti\n");
    auto s = read_seed_hashtags(seeds);
    CHECK(s.at("guncontrol") == 0.0);
    CHECK(s.at("nra") == 1.0);
    std::istringstream bad_side("hashtag,side\nx,undecided\n");
    CHECK_THROWS_AS(read_seed_hashtags(bad_side), ParseError);
}
