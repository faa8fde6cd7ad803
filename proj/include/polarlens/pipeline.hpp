#pragma once

#include "polarlens/common.hpp"
#include "polarlens/corpus.hpp"
#include "polarlens/counterfactual.hpp"
#include "polarlens/gcn.hpp"
#include "polarlens/polarization.hpp"
#include "polarlens/stance.hpp"
#include "polarlens/synth.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polarlens {

/// A referenced input file does not exist (CLI exit status 2).
class MissingInput : public Error {
public:
    using Error::Error;
};

struct PipelineConfig {
    // inputs; empty = not supplied
    std::string corpus;
    std::string lexicon;
    std::string boosters;
    std::string negators;
    std::string seed_hashtags;
    std::string labels;
    std::string external_scores;
    std::string embeddings;
    std::string followers;
    std::string out = "polarlens_out";

    std::uint64_t seed = 42;
    bool strict = false;
    EngagementThresholds filter;
    std::size_t top_k = 10;
    double tau = 0.05;
    bool include_quotes = true;

    PropagationOptions propagation{1.0, 1e-6, 1000};  // real hashtag graphs mix slowly
    SeedSelection seed_selection;
    GcnTrainOptions gcn;
    std::size_t feature_dim = 256;
    double grid_step = 0.05;
    std::optional<ThresholdPair> thresholds;  // manual override skips calibration

    WeightMode weight_mode = WeightMode::count_negative;
    RemovalMode removal_mode = RemovalMode::edges;
    Scope scope = Scope::subgraph;

    std::optional<SynthConfig> synth;

    /// Flat keys as documented in the README; unknown keys are rejected.
    static PipelineConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    /// Checks referenced inputs exist (MissingInput) and values are sane
    /// (InvalidArgument). `need_*` name the inputs a stage requires.
    void validate(bool need_corpus, bool need_seed_hashtags) const;
};

/// Output file names inside PipelineConfig::out.
namespace artifacts {
inline constexpr const char* tweets = "tweets.jsonl";
inline constexpr const char* ground_truth = "ground_truth.csv";
inline constexpr const char* labeled_users = "labeled_users.csv";
inline constexpr const char* seed_hashtags = "seed_hashtags.csv";
inline constexpr const char* manifest = "manifest.json";
inline constexpr const char* conversations = "conversations.jsonl";
inline constexpr const char* conversations_filtered = "conversations_filtered.jsonl";
inline constexpr const char* influencers = "influencers.csv";
inline constexpr const char* ingest_report = "ingest_report.json";
inline constexpr const char* sentiment = "sentiment.jsonl";
inline constexpr const char* sentiment_report = "sentiment_report.json";
inline constexpr const char* graph = "graph.csv";
inline constexpr const char* stances = "stances.csv";
inline constexpr const char* model = "gcn_model.json";
inline constexpr const char* loss_trace = "loss_trace.csv";
inline constexpr const char* calibration = "calibration.json";
inline constexpr const char* timeline = "timeline.csv";
inline constexpr const char* polarization = "polarization.json";
inline constexpr const char* counterfactual = "counterfactual.csv";
inline constexpr const char* details = "conversation_details.csv";
inline constexpr const char* counterfactual_errors = "counterfactual_errors.json";
inline constexpr const char* influencer_summary = "influencer_summary.csv";
inline constexpr const char* stance_summary = "stance_summary.csv";
inline constexpr const char* report = "report.md";
inline constexpr const char* timeline_svg = "timeline.svg";
} // namespace artifacts

// Each stage reads its inputs (config paths and earlier artifacts in the
// output directory) and writes its own artifacts.
void run_synth(PipelineConfig& config);
void run_ingest(const PipelineConfig& config);
void run_sentiment(const PipelineConfig& config);
void run_stance(const PipelineConfig& config);
void run_polarize(const PipelineConfig& config);
void run_counterfactual(const PipelineConfig& config);
void run_report(const PipelineConfig& config);

/// All stages in order. With no corpus configured, a synthetic corpus is
/// generated into the output directory first and used as input.
void run_pipeline(PipelineConfig config);

/// Markdown report and SVG timeline renderers (used by run_report).
std::string render_report_markdown(std::span<const CounterfactualResult> results,
                                   std::span<const InfluencerImpactSummary> influencers,
                                   std::span<const StanceGroupSummary> groups);
std::string render_timeline_svg(std::span<const PolarizationScore> timeline);

/// CSV "influencer_id,follower_id".
FollowerMap read_followers(std::istream& in);

} // namespace polarlens
