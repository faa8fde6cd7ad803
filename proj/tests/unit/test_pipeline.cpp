#include "polarlens/pipeline.hpp"

#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace polarlens;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    fs::path dir = fs::path(POLARLENS_SCRATCH) / name;
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

SynthConfig small_synth() {
    SynthConfig s;
    s.n_users = 300;
    s.seed_users_per_side = 10;
    return s;
}

} // namespace

TEST_CASE("config reads flat keys and rejects unknown ones") {
    auto c = PipelineConfig::from_json(nlohmann::json::parse(
        R"({"out": "x", "tau": 0.1, "min_tweets": 5, "weight_mode": "sentiment_mass",
            "removal_mode": "nodes", "scope": "daily", "t1": 0.3, "t2": 0.7, "max_iter": 50})"));
    CHECK(c.out == "x");
    CHECK(c.tau == 0.1);
    CHECK(c.filter.min_tweets == 5);
    CHECK(c.weight_mode == WeightMode::sentiment_mass);
    CHECK(c.removal_mode == RemovalMode::nodes);
    CHECK(c.scope == Scope::daily);
    REQUIRE(c.thresholds);
    CHECK(c.thresholds->t1 == 0.3);
    CHECK(c.propagation.max_iter == 50);

    auto again = PipelineConfig::from_json(c.to_json());
    CHECK(again.to_json() == c.to_json());

    CHECK_THROWS_AS(PipelineConfig::from_json(nlohmann::json::parse(R"({"n_users": 5})")), InvalidArgument);
    CHECK_THROWS_AS(PipelineConfig::from_json(nlohmann::json::parse(R"({"t1": 0.3})")), InvalidArgument);
    CHECK_THROWS_AS(PipelineConfig::from_json(nlohmann::json::parse(R"({"scope": "weekly"})")), InvalidArgument);
    CHECK_THROWS_AS(PipelineConfig::from_json(nlohmann::json::parse("[1]")), InvalidArgument);
    CHECK_THROWS_AS(PipelineConfig::from_json(nlohmann::json::parse(R"({"synth": {"bogus": 1}})")), InvalidArgument);
}

TEST_CASE("validate reports missing inputs and bad values") {
    PipelineConfig c;
    c.out = scratch("validate").string();
    CHECK_THROWS_AS(c.validate(true, false), MissingInput);
    c.corpus = "/nonexistent/tweets.jsonl";
    CHECK_THROWS_AS(c.validate(true, false), MissingInput);
    c.corpus.clear();
    c.tau = -1;
    CHECK_THROWS_AS(c.validate(false, false), InvalidArgument);
    c.tau = 0.05;
    CHECK_NOTHROW(c.validate(false, false));
    CHECK(fs::is_directory(c.out));
}

TEST_CASE("stages that need earlier artifacts say so") {
    PipelineConfig c;
    c.out = scratch("ordering").string();
    CHECK_THROWS_AS(run_report(c), MissingInput);
    CHECK_THROWS_AS(run_polarize(c), MissingInput);
}

TEST_CASE("synthetic pipeline produces every artifact") {
    PipelineConfig c;
    c.out = scratch("pipeline").string();
    c.synth = small_synth();
    c.scope = Scope::daily;
    run_pipeline(c);
    for (const char* name : {artifacts::tweets, artifacts::conversations, artifacts::influencers, artifacts::sentiment,
                             artifacts::graph, artifacts::stances, artifacts::model, artifacts::loss_trace,
                             artifacts::calibration, artifacts::timeline, artifacts::polarization,
                             artifacts::counterfactual, artifacts::details, artifacts::influencer_summary,
                             artifacts::stance_summary, artifacts::report, artifacts::timeline_svg})
        CHECK_MESSAGE(fs::exists(fs::path(c.out) / name), name);

    const auto report = slurp(fs::path(c.out) / artifacts::report);
    CHECK(report.find("| Conversation | Influencer | Stance | Day | Direction |") != std::string::npos);
    const auto trace = slurp(fs::path(c.out) / artifacts::loss_trace);
    CHECK(trace.rfind("epoch,train_loss,validation_loss\n", 0) == 0);
}

TEST_CASE("markdown report renders scores to three decimals") {
    CounterfactualResult r;
    r.conversation_id = "c1";
    r.influencer_id = "u9";
    r.influencer_stance = Stance::anti;
    r.direction = {Stance::anti, Stance::pro};
    r.day = *parse_date("2022-05-26");
    r.score_without = 0.079;
    r.score_with = 0.229;
    r.delta = 0.15;
    r.classification = Classification::increase;
    CounterfactualResult u = r;
    u.conversation_id = "c2";
    u.score_with.reset();
    u.delta.reset();
    u.classification = Classification::undefined;

    std::vector<CounterfactualResult> rs = {r, u};
    auto inf = summarize_influencer(rs);
    auto grp = summarize_stance_group(rs);
    auto md = render_report_markdown(rs, inf, grp);
    CHECK(md.find("| c1 | u9 | anti | 2022-05-26 | anti->pro | 0.079 | 0.229 | 0.150 | increase |") != std::string::npos);
    CHECK(md.find("| c2 | u9 | anti | 2022-05-26 | anti->pro | 0.079 | undefined | undefined | undefined |") !=
          std::string::npos);
}

TEST_CASE("timeline svg breaks lines at undefined days") {
    std::vector<PolarizationScore> tl;
    const Direction pa{Stance::pro, Stance::anti};
    for (int i = 0; i < 4; ++i) {
        PolarizationScore s;
        s.direction = pa;
        s.day = *parse_date("2022-05-24") + std::chrono::days(i);
        if (i != 2) s.value = 0.1 * i;
        tl.push_back(s);
    }
    auto svg = render_timeline_svg(tl);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    std::size_t polylines = 0;
    for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++polylines;
    CHECK(polylines == 2);
}

TEST_CASE("read_followers groups rows by influencer") {
    std::istringstream in("influencer_id,follower_id\na,x\na,y\nb,z\n");
    auto f = read_followers(in);
    CHECK(f.size() == 2);
    CHECK(f["a"] == std::vector<std::string>{"x", "y"});
    std::istringstream bad("who,what\na,b\n");
    CHECK_THROWS(read_followers(bad));
}
