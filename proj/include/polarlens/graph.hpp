#pragma once

#include "polarlens/common.hpp"
#include "polarlens/corpus.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace polarlens {

enum class InteractionKind { reply, retweet, quote };

std::string_view to_string(InteractionKind kind);

struct InteractionEdge {
    std::string author_id;
    std::string target_id;
    InteractionKind kind = InteractionKind::reply;
    std::string tweet_id;
    std::string conversation_id;
    Timestamp timestamp{};
    double sentiment = 0.0;

    bool self_loop() const { return author_id == target_id; }
};

/// Canonical edge order: (timestamp, tweet_id, target_id).
bool canonical_less(const InteractionEdge& a, const InteractionEdge& b);

/// Immutable user-user interaction multigraph. Edges are stored in
/// canonical order; indexes hold positions into that vector.
class InteractionGraph {
public:
    using Participants = std::map<std::string, std::set<std::string>>;

    InteractionGraph() = default;

    /// Endpoints missing from `nodes` are added. `participants` maps a
    /// conversation id to the authors of its tweets (used by node removal).
    InteractionGraph(std::set<std::string> nodes, std::vector<InteractionEdge> edges,
                     Participants participants = {});

    const std::set<std::string>& nodes() const { return nodes_; }
    std::span<const InteractionEdge> edges() const { return edges_; }
    const Participants& participants() const { return participants_; }

    bool has_node(const std::string& id) const { return nodes_.count(id) > 0; }
    bool has_conversation(const std::string& conversation_id) const;

    std::span<const std::size_t> edges_by_author(const std::string& author) const;
    std::span<const std::size_t> edges_in_conversation(const std::string& conversation_id) const;
    std::span<const std::size_t> edges_on_day(Date day) const;

    const std::map<std::string, std::vector<std::size_t>>& author_index() const { return by_author_; }
    const std::map<std::string, std::vector<std::size_t>>& conversation_index() const { return by_conversation_; }
    const std::map<Date, std::vector<std::size_t>>& day_index() const { return by_day_; }

    std::vector<Date> days() const;

private:
    std::set<std::string> nodes_;
    std::vector<InteractionEdge> edges_;
    Participants participants_;
    std::map<std::string, std::vector<std::size_t>> by_author_;
    std::map<std::string, std::vector<std::size_t>> by_conversation_;
    std::map<Date, std::vector<std::size_t>> by_day_;
};

struct GraphBuildOptions {
    bool include_quotes = true;
};

struct GraphBuildSummary {
    std::size_t edges = 0;
    std::size_t unresolved_references = 0;
    std::size_t excluded_quotes = 0;
    std::size_t missing_sentiment = 0;
};

/// One edge per (tweet, reference) whose target tweet is present. Only
/// tweets belonging to `conversations` are considered. Tweets without a
/// sentiment entry get 0.0 and are counted.
InteractionGraph build_graph(std::span<const Conversation> conversations, std::span<const Tweet> tweets,
                             const std::unordered_map<std::string, double>& sentiment,
                             GraphBuildOptions options = {}, GraphBuildSummary* summary = nullptr);

/// Edges in [day 00:00:00, next day 00:00:00) UTC; nodes = their endpoints.
InteractionGraph daily_slice(const InteractionGraph& graph, Date day);

/// Audience defaults to every user with an edge to or from the influencer.
/// Keeps audience + influencer + all neighbours of the audience, and every
/// edge among them. Throws NotFound if the influencer is not a node.
InteractionGraph influencer_subgraph(const InteractionGraph& graph, const std::string& influencer_id,
                                     const std::optional<std::vector<std::string>>& audience = std::nullopt);

/// Users adjacent (either direction) to the influencer, self excluded.
std::set<std::string> interaction_neighbors(const InteractionGraph& graph, const std::string& user_id);

enum class RemovalMode { edges, nodes };

std::string_view to_string(RemovalMode mode);
std::optional<RemovalMode> parse_removal_mode(std::string_view text);

/// edges: drop the conversation's edges, then nodes left isolated by that.
/// nodes: drop every author of the conversation with all incident edges.
/// An unknown conversation id returns a copy of the input (`found` = false).
InteractionGraph remove_conversation(const InteractionGraph& graph, const std::string& conversation_id,
                                     RemovalMode mode, bool* found = nullptr);

inline constexpr const char* kGraphCsvHeader =
    "author_id,target_id,kind,tweet_id,conversation_id,timestamp,sentiment";

void write_graph_csv(std::ostream& out, const InteractionGraph& graph);
InteractionGraph read_graph_csv(std::istream& in);

} // namespace polarlens
