#pragma once

#include "polarlens/common.hpp"

#include <cstdint>
#include <iosfwd>
#include "json.hpp"
#include <set>
#include <span>
#include <string>
#include <vector>

namespace polarlens {

enum class ReferenceKind { replied_to, retweeted, quoted };

std::string_view to_string(ReferenceKind kind);

struct Reference {
    ReferenceKind kind = ReferenceKind::replied_to;
    std::string target_tweet_id;
};

struct Tweet {
    std::string id;
    std::string author_id;
    std::string conversation_id;
    Timestamp created_at{};
    std::string text;
    std::vector<Reference> references;
    std::int64_t like_count = 0;
    std::int64_t reply_count = 0;
    std::int64_t retweet_count = 0;
    std::int64_t quote_count = 0;
    std::vector<std::string> hashtags;  // lowercase, no '#', unique
};

/// Lowercases, strips a leading '#', drops empties and duplicates
/// (first occurrence order is kept).
std::vector<std::string> normalize_hashtags(const std::vector<std::string>& raw);

/// Throws ParseError with a field-specific message on schema violations.
Tweet tweet_from_json(const nlohmann::json& record);
nlohmann::json tweet_to_json(const Tweet& tweet);

struct ParseReport {
    std::size_t lines = 0;
    std::size_t parsed = 0;
    std::size_t skipped_malformed = 0;
    std::size_t skipped_duplicate = 0;
    std::vector<std::string> messages;  // one per skipped line, "line N: reason"

    std::size_t skipped() const { return skipped_malformed + skipped_duplicate; }
};

struct ParseOptions {
    bool strict = false;  // abort on the first malformed line
};

/// Reads JSON Lines tweet records. Blank lines are ignored; malformed
/// lines and duplicate ids are skipped and counted in `report`.
std::vector<Tweet> parse_corpus(std::istream& in, ParseReport& report, ParseOptions options = {});

void write_corpus(std::ostream& out, std::span<const Tweet> tweets);

// ─── Conversations ────────────────────────────────────────────

struct Conversation {
    std::string conversation_id;
    std::string root_tweet_id;
    std::vector<std::string> tweet_ids;  // by (created_at, id)
    std::set<std::string> participant_ids;
    std::string initiator_id;
    Timestamp root_created_at{};
};

/// One conversation per distinct conversation_id, sorted by id. The root
/// is the tweet whose id equals the conversation id, else the earliest.
std::vector<Conversation> assemble_conversations(std::span<const Tweet> tweets);

struct EngagementThresholds {
    std::size_t min_tweets = 20;
    std::size_t min_users = 10;
};

std::vector<Conversation> filter_conversations(std::span<const Conversation> conversations,
                                               EngagementThresholds thresholds = {});

/// JSON Lines {conversation_id, root_tweet_id, n_tweets, n_users, initiator_id}.
void write_conversation_index(std::ostream& out, std::span<const Conversation> conversations);

// ─── Influencers ──────────────────────────────────────────────

struct InfluencerRecord {
    std::string user_id;
    std::int64_t tweet_count = 0;
    std::int64_t total_likes = 0;
    std::int64_t total_retweets = 0;
    std::int64_t total_replies = 0;
    std::int64_t rank = 0;  // 1-based
};

/// Top-k authors by total likes; ties by retweets, replies (descending),
/// then user id (ascending).
std::vector<InfluencerRecord> rank_influencers(std::span<const Tweet> tweets, std::size_t k);

inline constexpr const char* kInfluencerCsvHeader =
    "rank,user_id,tweet_count,total_likes,total_retweets,total_replies";
void write_influencers(std::ostream& out, std::span<const InfluencerRecord> records);
std::vector<InfluencerRecord> read_influencers(std::istream& in);

} // namespace polarlens
