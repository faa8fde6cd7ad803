#include "polarlens/graph.hpp"

#include "polarlens/csv.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <istream>
#include <ostream>

namespace polarlens {

std::string_view to_string(InteractionKind kind) {
    switch (kind) {
    case InteractionKind::reply: return "reply";
    case InteractionKind::retweet: return "retweet";
    case InteractionKind::quote: return "quote";
    }
    return "reply";
}

std::string_view to_string(RemovalMode mode) {
    return mode == RemovalMode::edges ? "edges" : "nodes";
}

std::optional<RemovalMode> parse_removal_mode(std::string_view text) {
    if (text == "edges") return RemovalMode::edges;
    if (text == "nodes") return RemovalMode::nodes;
    return std::nullopt;
}

bool canonical_less(const InteractionEdge& a, const InteractionEdge& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    if (a.tweet_id != b.tweet_id) return a.tweet_id < b.tweet_id;
    return a.target_id < b.target_id;
}

InteractionGraph::InteractionGraph(std::set<std::string> nodes, std::vector<InteractionEdge> edges,
                                   Participants participants)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), participants_(std::move(participants)) {
    std::stable_sort(edges_.begin(), edges_.end(), canonical_less);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        if (e.author_id.empty() || e.target_id.empty())
            throw InvalidArgument(fmt::format("edge for tweet '{}' has an empty endpoint", e.tweet_id));
        nodes_.insert(e.author_id);
        nodes_.insert(e.target_id);
        by_author_[e.author_id].push_back(i);
        by_conversation_[e.conversation_id].push_back(i);
        by_day_[day_of(e.timestamp)].push_back(i);
    }
}

bool InteractionGraph::has_conversation(const std::string& conversation_id) const {
    return by_conversation_.count(conversation_id) > 0 || participants_.count(conversation_id) > 0;
}

namespace {

template <typename Key>
std::span<const std::size_t> lookup(const std::map<Key, std::vector<std::size_t>>& index, const Key& key) {
    auto it = index.find(key);
    if (it == index.end()) return {};
    return it->second;
}

InteractionGraph from_edge_subset(const InteractionGraph& graph, std::set<std::string> nodes,
                                  const std::vector<std::size_t>& keep) {
    std::vector<InteractionEdge> edges;
    edges.reserve(keep.size());
    for (std::size_t i : keep) edges.push_back(graph.edges()[i]);
    return InteractionGraph(std::move(nodes), std::move(edges), graph.participants());
}

} // namespace

std::span<const std::size_t> InteractionGraph::edges_by_author(const std::string& author) const {
    return lookup(by_author_, author);
}

std::span<const std::size_t> InteractionGraph::edges_in_conversation(const std::string& conversation_id) const {
    return lookup(by_conversation_, conversation_id);
}

std::span<const std::size_t> InteractionGraph::edges_on_day(Date day) const {
    return lookup(by_day_, day);
}

std::vector<Date> InteractionGraph::days() const {
    std::vector<Date> out;
    out.reserve(by_day_.size());
    for (const auto& [d, _] : by_day_) out.push_back(d);
    return out;
}

InteractionGraph build_graph(std::span<const Conversation> conversations, std::span<const Tweet> tweets,
                             const std::unordered_map<std::string, double>& sentiment,
                             GraphBuildOptions options, GraphBuildSummary* summary) {
    GraphBuildSummary local;
    std::set<std::string> wanted;
    for (const auto& c : conversations) wanted.insert(c.conversation_id);

    std::unordered_map<std::string, const Tweet*> by_id;
    by_id.reserve(tweets.size());
    for (const auto& t : tweets) by_id.emplace(t.id, &t);

    std::set<std::string> nodes;
    std::vector<InteractionEdge> edges;
    InteractionGraph::Participants participants;
    for (const auto& t : tweets) {
        if (!wanted.count(t.conversation_id)) continue;
        nodes.insert(t.author_id);
        participants[t.conversation_id].insert(t.author_id);

        double score = 0.0;
        if (auto s = sentiment.find(t.id); s != sentiment.end()) {
            score = s->second;
        } else {
            ++local.missing_sentiment;
        }

        for (const auto& ref : t.references) {
            auto target = by_id.find(ref.target_tweet_id);
            if (target == by_id.end()) {
                ++local.unresolved_references;
                continue;
            }
            InteractionKind kind = InteractionKind::reply;
            if (ref.kind == ReferenceKind::retweeted) kind = InteractionKind::retweet;
            if (ref.kind == ReferenceKind::quoted) {
                if (!options.include_quotes) {
                    ++local.excluded_quotes;
                    continue;
                }
                kind = InteractionKind::quote;
            }
            edges.push_back({t.author_id, target->second->author_id, kind, t.id, t.conversation_id,
                             t.created_at, score});
        }
    }
    local.edges = edges.size();
    if (summary) *summary = local;
    return InteractionGraph(std::move(nodes), std::move(edges), std::move(participants));
}

InteractionGraph daily_slice(const InteractionGraph& graph, Date day) {
    auto idx = graph.edges_on_day(day);
    std::vector<std::size_t> keep(idx.begin(), idx.end());
    return from_edge_subset(graph, {}, keep);
}

std::set<std::string> interaction_neighbors(const InteractionGraph& graph, const std::string& user_id) {
    std::set<std::string> out;
    for (const auto& e : graph.edges()) {
        if (e.self_loop()) continue;
        if (e.author_id == user_id) out.insert(e.target_id);
        if (e.target_id == user_id) out.insert(e.author_id);
    }
    return out;
}

InteractionGraph influencer_subgraph(const InteractionGraph& graph, const std::string& influencer_id,
                                     const std::optional<std::vector<std::string>>& audience) {
    if (!graph.has_node(influencer_id))
        throw NotFound(fmt::format("influencer '{}' is not in the graph", influencer_id));

    std::set<std::string> members;
    if (audience) {
        for (const auto& u : *audience)
            if (graph.has_node(u)) members.insert(u);
    } else {
        members = interaction_neighbors(graph, influencer_id);
    }

    std::set<std::string> keep_nodes = members;
    keep_nodes.insert(influencer_id);
    for (const auto& e : graph.edges()) {
        if (members.count(e.author_id)) keep_nodes.insert(e.target_id);
        if (members.count(e.target_id)) keep_nodes.insert(e.author_id);
    }

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < graph.edges().size(); ++i) {
        const auto& e = graph.edges()[i];
        if (keep_nodes.count(e.author_id) && keep_nodes.count(e.target_id)) keep.push_back(i);
    }
    return from_edge_subset(graph, std::move(keep_nodes), keep);
}

InteractionGraph remove_conversation(const InteractionGraph& graph, const std::string& conversation_id,
                                     RemovalMode mode, bool* found) {
    const bool present = graph.has_conversation(conversation_id);
    if (found) *found = present;
    if (!present) return graph;

    const auto edges = graph.edges();
    std::vector<std::size_t> keep;
    std::set<std::string> nodes;

    if (mode == RemovalMode::edges) {
        std::set<std::string> touched;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (edges[i].conversation_id == conversation_id) {
                touched.insert(edges[i].author_id);
                touched.insert(edges[i].target_id);
            } else {
                keep.push_back(i);
            }
        }
        std::set<std::string> still_connected;
        for (std::size_t i : keep) {
            still_connected.insert(edges[i].author_id);
            still_connected.insert(edges[i].target_id);
        }
        for (const auto& n : graph.nodes())
            if (!touched.count(n) || still_connected.count(n)) nodes.insert(n);
    } else {
        std::set<std::string> removed;
        if (auto it = graph.participants().find(conversation_id); it != graph.participants().end())
            removed = it->second;
        for (auto i : graph.edges_in_conversation(conversation_id)) removed.insert(edges[i].author_id);
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (!removed.count(edges[i].author_id) && !removed.count(edges[i].target_id)) keep.push_back(i);
        for (const auto& n : graph.nodes())
            if (!removed.count(n)) nodes.insert(n);
    }
    return from_edge_subset(graph, std::move(nodes), keep);
}

void write_graph_csv(std::ostream& out, const InteractionGraph& graph) {
    out << kGraphCsvHeader << '\n';
    for (const auto& e : graph.edges())
        csv::write_row(out, {e.author_id, e.target_id, std::string(to_string(e.kind)), e.tweet_id,
                             e.conversation_id, format_timestamp(e.timestamp), format_double(e.sentiment)});
}

InteractionGraph read_graph_csv(std::istream& in) {
    auto rows = csv::read_table(in, csv::split_line(kGraphCsvHeader));
    std::vector<InteractionEdge> edges;
    InteractionGraph::Participants participants;
    edges.reserve(rows.size());
    for (const auto& row : rows) {
        InteractionEdge e;
        e.author_id = row[0];
        e.target_id = row[1];
        if (row[2] == "reply") e.kind = InteractionKind::reply;
        else if (row[2] == "retweet") e.kind = InteractionKind::retweet;
        else if (row[2] == "quote") e.kind = InteractionKind::quote;
        else throw ParseError(fmt::format("unknown interaction kind '{}'", row[2]));
        e.tweet_id = row[3];
        e.conversation_id = row[4];
        auto ts = parse_timestamp(row[5]);
        if (!ts) throw ParseError(fmt::format("invalid timestamp '{}'", row[5]));
        e.timestamp = *ts;
        try {
            e.sentiment = std::stod(row[6]);
        } catch (const std::logic_error&) {
            throw ParseError(fmt::format("invalid sentiment '{}'", row[6]));
        }
        participants[e.conversation_id].insert(e.author_id);
        edges.push_back(std::move(e));
    }
    return InteractionGraph({}, std::move(edges), std::move(participants));
}

} // namespace polarlens
