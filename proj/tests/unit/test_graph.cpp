#include "polarlens/graph.hpp"

#include "doctest.h"

#include <sstream>

using namespace polarlens;

namespace {

Tweet tweet(const std::string& id, const std::string& author, const std::string& conv, const std::string& at,
            std::vector<Reference> refs = {}) {
    Tweet t;
    t.id = id;
    t.author_id = author;
    t.conversation_id = conv;
    t.created_at = *parse_timestamp(at);
    t.references = std::move(refs);
    return t;
}

InteractionEdge edge(const std::string& a, const std::string& b, const std::string& conv, const std::string& at,
                     const std::string& id, double s = -0.5) {
    return {a, b, InteractionKind::reply, id, conv, *parse_timestamp(at), s};
}

Reference reply_to(const std::string& id) { return {ReferenceKind::replied_to, id}; }

} // namespace

TEST_CASE("build_graph: reply edge points from author to target author") {
    std::vector<Tweet> tweets = {tweet("t1", "u1", "t1", "2022-05-24T10:00:00Z"),
                                 tweet("t2", "u2", "t1", "2022-05-24T10:05:00Z", {reply_to("t1")})};
    auto convs = assemble_conversations(tweets);
    GraphBuildSummary summary;
    auto g = build_graph(convs, tweets, {{"t2", -0.4}}, {}, &summary);
    REQUIRE(g.edges().size() == 1);
    CHECK(g.edges()[0].author_id == "u2");
    CHECK(g.edges()[0].target_id == "u1");
    CHECK(g.edges()[0].kind == InteractionKind::reply);
    CHECK(g.edges()[0].sentiment == -0.4);
    CHECK(summary.missing_sentiment == 1);
    CHECK(g.nodes().size() == 2);
}

TEST_CASE("build_graph: no references gives isolated authors") {
    std::vector<Tweet> tweets = {tweet("a", "u1", "a", "2022-05-24T10:00:00Z"),
                                 tweet("b", "u2", "b", "2022-05-24T10:00:00Z")};
    auto g = build_graph(assemble_conversations(tweets), tweets, {});
    CHECK(g.edges().empty());
    CHECK(g.nodes() == std::set<std::string>{"u1", "u2"});
}

TEST_CASE("build_graph: conversations index their edges") {
    std::vector<Tweet> tweets;
    for (std::string c : {"c1", "c2"}) {
        tweets.push_back(tweet(c, "root_" + c, c, "2022-05-24T10:00:00Z"));
        for (int i = 0; i < 3; ++i)
            tweets.push_back(tweet(c + "_r" + std::to_string(i), "u" + std::to_string(i), c, "2022-05-24T11:00:00Z",
                                   {reply_to(c)}));
    }
    auto g = build_graph(assemble_conversations(tweets), tweets, {});
    CHECK(g.edges().size() == 6);
    CHECK(g.conversation_index().size() == 2);
    CHECK(g.edges_in_conversation("c1").size() == 3);
    CHECK(g.edges_in_conversation("c2").size() == 3);
}

TEST_CASE("build_graph: quotes, retweets, unresolved references, unlisted conversations") {
    std::vector<Tweet> tweets = {
        tweet("t1", "u1", "t1", "2022-05-24T10:00:00Z"),
        tweet("t2", "u2", "t1", "2022-05-24T10:01:00Z", {{ReferenceKind::quoted, "t1"}}),
        tweet("t3", "u3", "t1", "2022-05-24T10:02:00Z", {{ReferenceKind::retweeted, "t1"}}),
        tweet("t4", "u4", "t1", "2022-05-24T10:03:00Z", {reply_to("gone")}),
        tweet("x1", "u9", "x1", "2022-05-24T10:03:00Z", {reply_to("t1")}),
    };
    auto convs = assemble_conversations(tweets);
    std::vector<Conversation> only_t1 = {convs[0]};
    REQUIRE(only_t1[0].conversation_id == "t1");

    GraphBuildSummary with_quotes;
    auto g = build_graph(only_t1, tweets, {}, {true}, &with_quotes);
    CHECK(g.edges().size() == 2);
    CHECK(with_quotes.unresolved_references == 1);
    CHECK_FALSE(g.has_node("u9"));

    GraphBuildSummary without_quotes;
    auto g2 = build_graph(only_t1, tweets, {}, {false}, &without_quotes);
    REQUIRE(g2.edges().size() == 1);
    CHECK(g2.edges()[0].kind == InteractionKind::retweet);
    CHECK(without_quotes.excluded_quotes == 1);
}

TEST_CASE("daily_slice: half-open UTC day") {
    InteractionGraph g({}, {edge("a", "b", "c", "2022-05-24T00:00:00Z", "1"),
                            edge("a", "b", "c", "2022-05-24T23:59:59Z", "2"),
                            edge("b", "c", "c", "2022-05-25T00:00:00Z", "3")});
    auto day = *parse_date("2022-05-24");
    auto s = daily_slice(g, day);
    CHECK(s.edges().size() == 2);
    CHECK(s.nodes() == std::set<std::string>{"a", "b"});

    InteractionGraph one_day({}, {edge("a", "b", "c", "2022-05-24T01:00:00Z", "1"),
                                  edge("b", "a", "c", "2022-05-24T02:00:00Z", "2")});
    auto whole = daily_slice(one_day, day);
    CHECK(whole.edges().size() == one_day.edges().size());
    CHECK(whole.nodes() == one_day.nodes());

    std::size_t total = 0;
    for (auto d : g.days()) total += daily_slice(g, d).edges().size();
    CHECK(total == g.edges().size());
}

TEST_CASE("influencer_subgraph") {
    SUBCASE("isolated influencer") {
        InteractionGraph g({"inf", "x"}, {edge("x", "y", "c", "2022-05-24T01:00:00Z", "1")});
        auto s = influencer_subgraph(g, "inf");
        CHECK(s.nodes() == std::set<std::string>{"inf"});
        CHECK(s.edges().empty());
    }
    SUBCASE("star") {
        std::vector<InteractionEdge> edges;
        for (int i = 0; i < 5; ++i)
            edges.push_back(edge("u" + std::to_string(i), "inf", "c", "2022-05-24T01:00:00Z", std::to_string(i)));
        InteractionGraph g({}, edges);
        auto s = influencer_subgraph(g, "inf");
        CHECK(s.nodes().size() == 6);
        CHECK(s.edges().size() == 5);
    }
    SUBCASE("chain closure") {
        InteractionGraph g({}, {edge("u3", "u2", "c", "2022-05-24T01:00:00Z", "1"),
                                edge("u2", "inf", "c", "2022-05-24T01:00:00Z", "2"),
                                edge("u4", "u3", "c", "2022-05-24T01:00:00Z", "3")});
        auto s = influencer_subgraph(g, "inf");
        CHECK(s.nodes() == std::set<std::string>{"inf", "u2", "u3"});
        CHECK(s.edges().size() == 2);
    }
    SUBCASE("follower audience") {
        InteractionGraph g({}, {edge("f1", "z", "c", "2022-05-24T01:00:00Z", "1"),
                                edge("u2", "inf", "c", "2022-05-24T01:00:00Z", "2")});
        auto s = influencer_subgraph(g, "inf", std::vector<std::string>{"f1", "not_in_graph"});
        CHECK(s.nodes() == std::set<std::string>{"inf", "f1", "z"});
        CHECK(s.edges().size() == 1);
    }
    InteractionGraph empty;
    CHECK_THROWS_AS(influencer_subgraph(empty, "nobody"), NotFound);
}

TEST_CASE("remove_conversation") {
    std::vector<InteractionEdge> edges;
    for (int i = 0; i < 20; ++i) {
        const std::string conv = i < 7 ? "target" : "other";
        edges.push_back(edge("u" + std::to_string(i % 6), "u" + std::to_string((i + 1) % 6), conv,
                             "2022-05-24T01:00:00Z", std::to_string(100 + i)));
    }
    InteractionGraph g({}, edges);

    bool found = false;
    auto without = remove_conversation(g, "target", RemovalMode::edges, &found);
    CHECK(found);
    CHECK(without.edges().size() == 13);
    CHECK(g.edges().size() == 20);
    for (const auto& e : without.edges()) CHECK(e.conversation_id == "other");

    auto same = remove_conversation(g, "absent", RemovalMode::edges, &found);
    CHECK_FALSE(found);
    CHECK(same.edges().size() == g.edges().size());
    CHECK(same.nodes() == g.nodes());

    SUBCASE("edge removal drops only newly isolated nodes") {
        InteractionGraph h({"loner"}, {edge("a", "b", "c1", "2022-05-24T01:00:00Z", "1"),
                                       edge("b", "d", "c2", "2022-05-24T01:00:00Z", "2")});
        auto r = remove_conversation(h, "c1", RemovalMode::edges);
        CHECK(r.nodes() == std::set<std::string>{"b", "d", "loner"});
    }
    SUBCASE("node removal takes outside edges with it") {
        InteractionGraph h({}, {edge("a", "b", "c1", "2022-05-24T01:00:00Z", "1"),
                                edge("a", "z", "c2", "2022-05-24T01:00:00Z", "2"),
                                edge("y", "z", "c2", "2022-05-24T01:00:00Z", "3")},
                           {{"c1", {"a", "p"}}, {"c2", {"a", "y"}}});
        auto r = remove_conversation(h, "c1", RemovalMode::nodes);
        REQUIRE(r.edges().size() == 1);
        CHECK(r.edges()[0].author_id == "y");
        CHECK_FALSE(r.has_node("p"));
        CHECK_FALSE(r.has_node("a"));
        CHECK(r.has_node("b"));
    }
}

TEST_CASE("graph CSV round-trip and canonical order") {
    InteractionGraph g({}, {edge("b", "a", "c", "2022-05-24T02:00:00Z", "2", 0.25),
                            edge("a, \"x\"", "b", "c", "2022-05-24T01:00:00Z", "1", -1.0 / 3.0)});
    CHECK(g.edges()[0].tweet_id == "1");
    std::ostringstream out;
    write_graph_csv(out, g);
    CHECK(out.str().rfind(std::string(kGraphCsvHeader) + "\n", 0) == 0);
    std::istringstream in(out.str());
    auto back = read_graph_csv(in);
    REQUIRE(back.edges().size() == 2);
    CHECK(back.edges()[0].author_id == "a, \"x\"");
    CHECK(back.edges()[0].sentiment == -1.0 / 3.0);
    CHECK(back.edges()[1].timestamp == g.edges()[1].timestamp);
    std::ostringstream again;
    write_graph_csv(again, back);
    CHECK(again.str() == out.str());
}

TEST_CASE("removal mode tokens") {
    CHECK(parse_removal_mode("edges") == RemovalMode::edges);
    CHECK(parse_removal_mode("nodes") == RemovalMode::nodes);
    CHECK_FALSE(parse_removal_mode("users"));
    CHECK(to_string(RemovalMode::nodes) == "nodes");
}
