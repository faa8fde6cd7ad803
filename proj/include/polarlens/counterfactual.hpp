#pragma once

#include "polarlens/common.hpp"
#include "polarlens/corpus.hpp"
#include "polarlens/graph.hpp"
#include "polarlens/polarization.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polarlens {

enum class Scope { subgraph, daily };

std::string_view to_string(Scope s);
std::optional<Scope> parse_scope(std::string_view text);

enum class Classification { increase, decrease, no_change, undefined };

std::string_view to_string(Classification c);
std::optional<Classification> parse_classification(std::string_view text);

struct DeltaOutcome {
    std::optional<double> delta;
    Classification classification = Classification::undefined;
};

/// delta = with - without; undefined when either side is undefined.
DeltaOutcome compare_scores(std::optional<double> with, std::optional<double> without);

struct CounterfactualResult {
    std::string conversation_id;
    std::string influencer_id;
    Stance influencer_stance = Stance::undecided;
    Direction direction;
    Date day{};
    std::optional<double> score_with;
    std::optional<double> score_without;
    std::optional<double> delta;
    Classification classification = Classification::undefined;
    bool undecided_influencer = false;  // computed anyway, flagged
};

/// Follower lists keyed by influencer id; used as the subgraph audience.
using FollowerMap = std::map<std::string, std::vector<std::string>>;

struct CounterfactualConfig {
    EiOptions ei;
    Scope scope = Scope::subgraph;
    RemovalMode removal = RemovalMode::edges;
};

/// Polarization of the base graph (influencer subgraph, or the day of the
/// conversation's root) with and without the conversation.
CounterfactualResult conversation_effect(const InteractionGraph& graph, const StanceMap& stances,
                                         const Conversation& conversation, const std::string& influencer_id,
                                         Direction direction, const CounterfactualConfig& config,
                                         const FollowerMap* followers = nullptr);

struct BatchError {
    std::string conversation_id;
    std::string message;
};

struct BatchResult {
    std::vector<CounterfactualResult> results;
    std::vector<BatchError> errors;
};

/// One result per (conversation, direction), ordered by influencer rank,
/// conversation id and the given direction order. Conversations whose
/// initiator is not among `influencers` are reported as errors.
BatchResult batch_effects(const InteractionGraph& graph, const StanceMap& stances,
                          std::span<const Conversation> conversations,
                          std::span<const InfluencerRecord> influencers, std::span<const Direction> directions,
                          const CounterfactualConfig& config, const FollowerMap* followers = nullptr);

// ─── Summaries ────────────────────────────────────────────────

struct DirectionTally {
    Direction direction;
    std::size_t n = 0;
    std::size_t increase = 0;
    std::size_t decrease = 0;
    std::size_t other = 0;  // no_change or undefined

    double percent_increase() const;
    double percent_decrease() const;
    double percent_other() const;
    /// Most frequent outcome (ties: decrease, increase, other).
    Classification majority() const;
    double majority_percent() const;
};

struct InfluencerImpactSummary {
    std::string influencer_id;
    Stance stance = Stance::undecided;
    std::size_t n_conversations = 0;
    std::vector<DirectionTally> directions;
};

/// Grouped by influencer in order of first appearance; influencers with no
/// results do not appear.
std::vector<InfluencerImpactSummary> summarize_influencer(std::span<const CounterfactualResult> results);

struct StanceGroupSummary {
    Stance stance = Stance::undecided;
    std::size_t n_conversations = 0;
    std::vector<DirectionTally> directions;
};

/// Grouped by initiator stance (pro, anti, undecided order).
std::vector<StanceGroupSummary> summarize_stance_group(std::span<const CounterfactualResult> results);

/// Influencer-table rendering: two decimals, except a full 100 reads "100.0".
std::string format_influencer_percent(double percent);
/// Stance-group rendering: always two decimals.
std::string format_group_percent(double percent);

/// "NN.NN% - increase|decrease|no change".
std::string render_influencer_cell(const DirectionTally& tally);
std::string render_group_cell(const DirectionTally& tally);

inline constexpr const char* kResultsCsvHeader =
    "conversation_id,influencer_id,stance,direction,day,score_with,score_without,delta,classification";

void write_results_csv(std::ostream& out, std::span<const CounterfactualResult> results);
std::vector<CounterfactualResult> read_results_csv(std::istream& in);

inline constexpr const char* kInfluencerSummaryCsvHeader =
    "influencer_id,stance,n_conversations,direction,percent_increase,percent_decrease,percent_no_change_or_undefined,"
    "summary";
inline constexpr const char* kStanceSummaryCsvHeader = "stance,n_conversations,direction,summary";

void write_influencer_summary_csv(std::ostream& out, std::span<const InfluencerImpactSummary> rows);
void write_stance_summary_csv(std::ostream& out, std::span<const StanceGroupSummary> rows);

// Per-conversation context for the detail tables: sizes, stance split of
// the audience inside the conversation and active on that day.
struct ConversationDetail {
    std::string conversation_id;
    std::string influencer_id;
    Stance stance = Stance::undecided;
    Date day{};
    std::size_t n_tweets = 0;
    std::size_t audience_in_conversation_anti = 0;
    std::size_t audience_in_conversation_pro = 0;
    std::size_t audience_active_day_anti = 0;
    std::size_t audience_active_day_pro = 0;
    bool audience_from_followers = false;
};

ConversationDetail conversation_detail(const InteractionGraph& graph, const StanceMap& stances,
                                       const Conversation& conversation, const FollowerMap* followers = nullptr);

inline constexpr const char* kDetailCsvHeader =
    "conversation_id,influencer_id,stance,day,n_tweets,audience_in_conversation_anti,audience_in_conversation_pro,"
    "audience_active_day_anti,audience_active_day_pro,audience_source";

void write_details_csv(std::ostream& out, std::span<const ConversationDetail> details);

} // namespace polarlens
