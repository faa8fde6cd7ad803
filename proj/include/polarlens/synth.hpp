#pragma once

#include "polarlens/common.hpp"
#include "polarlens/corpus.hpp"
#include "polarlens/graph.hpp"
#include "polarlens/polarization.hpp"
#include "polarlens/stance.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace polarlens {

// ─── Independent oracles ──────────────────────────────────────
// Naive re-derivations used to cross-check the graph/polarization/
// counterfactual code paths. They share no code with those modules.

struct OracleEdge {
    std::string author_id;
    std::string target_id;
    std::string conversation_id;
    Date day{};
    double sentiment = 0.0;
};

/// Single pass over the edge list. nullopt when nothing qualifies.
std::optional<double> oracle_ei(const std::vector<OracleEdge>& edges, const std::map<std::string, Stance>& stances,
                                Direction direction, WeightMode mode, double tau = 0.05);

struct OracleDelta {
    std::optional<double> with;
    std::optional<double> without;
    std::optional<double> delta;
};

/// Recomputes both scores from scratch. `day` restricts the edge list first.
/// Node removal drops every edge touching an author of the conversation's
/// edges or a member of `extra_participants`.
OracleDelta oracle_delta(const std::vector<OracleEdge>& edges, const std::map<std::string, Stance>& stances,
                         const std::string& conversation_id, Direction direction, WeightMode mode, double tau,
                         RemovalMode removal = RemovalMode::edges, std::optional<Date> day = std::nullopt,
                         const std::set<std::string>& extra_participants = {});

// ─── Generator ────────────────────────────────────────────────

struct PlantedSpec {
    int day = 0;  // offset from start_date
    Stance initiator_stance = Stance::pro;
    std::size_t size = 30;        // replies
    double cross_fraction = 0.5;  // share of repliers from the opposite group
    double sentiment_bias = -0.5; // mean reply sentiment
};

struct SynthConfig {
    std::uint64_t rng_seed = 7;
    std::size_t n_users = 1000;
    double frac_pro = 0.5;
    double frac_undecided = 0.1;
    int days = 7;
    std::string start_date = "2022-05-24";
    std::size_t posts_per_user = 2;
    double p_in = 0.05;
    double p_out = 0.005;
    double mu_in = 0.3;
    double mu_out = -0.4;
    double sigma = 0.2;
    std::size_t seed_users_per_side = 20;
    std::size_t seed_posts = 4;
    double influencer_attention = 4.0;  // background reply rate multiplier toward influencers
    double side_hashtag_rate = 0.3;
    double neutral_hashtag_rate = 0.3;
    double side_token_fidelity = 0.8;  // chance a stance token comes from the user's own side
    std::size_t n_influencers = 5;
    double labeled_fraction = 0.1;
    std::vector<PlantedSpec> planted = default_planted();

    static std::vector<PlantedSpec> default_planted();

    /// Throws InvalidArgument describing the first violated constraint.
    void validate() const;
};

SynthConfig synth_config_from_json(const nlohmann::json& j);
nlohmann::json synth_config_to_json(const SynthConfig& config);

struct ExpectedEffect {
    Direction direction;
    WeightMode mode = WeightMode::count_negative;
    OracleDelta values;
};

struct PlantedConversation {
    std::string conversation_id;
    std::string initiator_id;
    Date day{};
    PlantedSpec spec;
    std::vector<ExpectedEffect> expected;  // daily scope, edge removal, ground-truth stances
};

struct SynthStats {
    // Ordered pairs of decided users, excluding pairs aimed at an influencer.
    std::size_t within_pairs = 0;
    std::size_t within_interactions = 0;
    std::size_t cross_pairs = 0;
    std::size_t cross_interactions = 0;
};

struct SynthCorpus {
    std::vector<Tweet> tweets;  // sorted by (created_at, id)
    std::map<std::string, Stance> ground_truth;
    std::map<std::string, Stance> labeled_sample;
    SeedHashtags seed_hashtags;
    std::vector<std::string> influencers;
    std::vector<PlantedConversation> manifest;
    std::vector<OracleEdge> edges;
    SynthStats stats;
    double tau = 0.05;
};

/// Deterministic for a given config. Stances are assigned by exact quota.
SynthCorpus generate_corpus(const SynthConfig& config);

nlohmann::json manifest_to_json(const std::vector<PlantedConversation>& manifest);
std::vector<PlantedConversation> manifest_from_json(const nlohmann::json& j);

/// Writes tweets.jsonl, ground_truth.csv, labeled_users.csv,
/// seed_hashtags.csv and manifest.json into `dir`.
void write_synth_corpus(const SynthCorpus& corpus, const std::string& dir);

} // namespace polarlens
