#include "polarlens/corpus.hpp"

#include "polarlens/csv.hpp"

#include <algorithm>
#include <cctype>
#include <fmt/format.h>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_set>

namespace polarlens {

using nlohmann::json;

std::string_view to_string(ReferenceKind kind) {
    switch (kind) {
    case ReferenceKind::replied_to: return "replied_to";
    case ReferenceKind::retweeted: return "retweeted";
    case ReferenceKind::quoted: return "quoted";
    }
    return "replied_to";
}

namespace {

ReferenceKind parse_reference_kind(const std::string& s) {
    if (s == "replied_to") return ReferenceKind::replied_to;
    if (s == "retweeted") return ReferenceKind::retweeted;
    if (s == "quoted") return ReferenceKind::quoted;
    throw ParseError(fmt::format("unknown reference kind '{}'", s));
}

const json& require(const json& record, const char* field) {
    auto it = record.find(field);
    if (it == record.end()) throw ParseError(fmt::format("missing field '{}'", field));
    return *it;
}

std::string require_string(const json& record, const char* field) {
    const json& v = require(record, field);
    if (!v.is_string()) throw ParseError(fmt::format("field '{}' must be a string", field));
    return v.get<std::string>();
}

std::int64_t require_count(const json& record, const char* field) {
    const json& v = require(record, field);
    if (!v.is_number_integer()) throw ParseError(fmt::format("field '{}' must be an integer", field));
    auto n = v.get<std::int64_t>();
    if (n < 0) throw ParseError(fmt::format("field '{}' must be non-negative", field));
    return n;
}

} // namespace

std::vector<std::string> normalize_hashtags(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& tag : raw) {
        std::string t = tag;
        if (!t.empty() && t.front() == '#') t.erase(0, 1);
        std::transform(t.begin(), t.end(), t.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (t.empty() || !seen.insert(t).second) continue;
        out.push_back(std::move(t));
    }
    return out;
}

Tweet tweet_from_json(const json& record) {
    if (!record.is_object()) throw ParseError("record is not a JSON object");
    Tweet t;
    t.id = require_string(record, "id");
    if (t.id.empty()) throw ParseError("field 'id' is empty");
    t.author_id = require_string(record, "author_id");
    if (t.author_id.empty()) throw ParseError("field 'author_id' is empty");
    t.conversation_id = require_string(record, "conversation_id");
    if (t.conversation_id.empty()) throw ParseError("field 'conversation_id' is empty");
    auto created = require_string(record, "created_at");
    auto ts = parse_timestamp(created);
    if (!ts) throw ParseError(fmt::format("invalid created_at '{}'", created));
    t.created_at = *ts;
    t.text = require_string(record, "text");

    const json& refs = require(record, "references");
    if (!refs.is_array()) throw ParseError("field 'references' must be an array");
    for (const auto& r : refs) {
        if (!r.is_object()) throw ParseError("reference must be an object");
        Reference ref;
        ref.kind = parse_reference_kind(require_string(r, "kind"));
        ref.target_tweet_id = require_string(r, "target_tweet_id");
        if (ref.target_tweet_id.empty()) throw ParseError("reference target_tweet_id is empty");
        t.references.push_back(std::move(ref));
    }

    t.like_count = require_count(record, "like_count");
    t.reply_count = require_count(record, "reply_count");
    t.retweet_count = require_count(record, "retweet_count");
    t.quote_count = require_count(record, "quote_count");

    const json& tags = require(record, "hashtags");
    if (!tags.is_array()) throw ParseError("field 'hashtags' must be an array");
    std::vector<std::string> raw;
    for (const auto& h : tags) {
        if (!h.is_string()) throw ParseError("hashtags must be strings");
        raw.push_back(h.get<std::string>());
    }
    t.hashtags = normalize_hashtags(raw);
    return t;
}

json tweet_to_json(const Tweet& t) {
    json refs = json::array();
    for (const auto& r : t.references)
        refs.push_back({{"kind", to_string(r.kind)}, {"target_tweet_id", r.target_tweet_id}});
    // Field order is fixed so serialized corpora are byte-stable.
    json out = json::object();
    out["id"] = t.id;
    out["author_id"] = t.author_id;
    out["conversation_id"] = t.conversation_id;
    out["created_at"] = format_timestamp(t.created_at);
    out["text"] = t.text;
    out["references"] = std::move(refs);
    out["like_count"] = t.like_count;
    out["reply_count"] = t.reply_count;
    out["retweet_count"] = t.retweet_count;
    out["quote_count"] = t.quote_count;
    out["hashtags"] = t.hashtags;
    return out;
}

std::vector<Tweet> parse_corpus(std::istream& in, ParseReport& report, ParseOptions options) {
    std::vector<Tweet> tweets;
    std::unordered_set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++report.lines;
        Tweet tweet;
        try {
            tweet = tweet_from_json(json::parse(line));
        } catch (const std::exception& e) {
            auto msg = fmt::format("line {}: {}", line_no, e.what());
            if (options.strict) throw ParseError(msg);
            report.messages.push_back(std::move(msg));
            ++report.skipped_malformed;
            continue;
        }
        if (!ids.insert(tweet.id).second) {
            report.messages.push_back(fmt::format("line {}: duplicate id '{}'", line_no, tweet.id));
            ++report.skipped_duplicate;
            continue;
        }
        tweets.push_back(std::move(tweet));
        ++report.parsed;
    }
    return tweets;
}

void write_corpus(std::ostream& out, std::span<const Tweet> tweets) {
    for (const auto& t : tweets) out << tweet_to_json(t).dump() << '\n';
}

std::vector<Conversation> assemble_conversations(std::span<const Tweet> tweets) {
    std::map<std::string, std::vector<const Tweet*>> groups;
    for (const auto& t : tweets) groups[t.conversation_id].push_back(&t);

    std::vector<Conversation> out;
    out.reserve(groups.size());
    for (auto& [cid, members] : groups) {
        std::sort(members.begin(), members.end(), [](const Tweet* a, const Tweet* b) {
            if (a->created_at != b->created_at) return a->created_at < b->created_at;
            return a->id < b->id;
        });
        Conversation c;
        c.conversation_id = cid;
        const Tweet* root = members.front();
        for (const Tweet* t : members) {
            if (t->id == cid) root = t;
            c.tweet_ids.push_back(t->id);
            c.participant_ids.insert(t->author_id);
        }
        c.root_tweet_id = root->id;
        c.initiator_id = root->author_id;
        c.root_created_at = root->created_at;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Conversation> filter_conversations(std::span<const Conversation> conversations,
                                               EngagementThresholds thresholds) {
    if (thresholds.min_tweets < 1 || thresholds.min_users < 1)
        throw InvalidArgument("engagement thresholds must be at least 1");
    std::vector<Conversation> kept;
    for (const auto& c : conversations) {
        if (c.tweet_ids.size() >= thresholds.min_tweets &&
            c.participant_ids.size() >= thresholds.min_users)
            kept.push_back(c);
    }
    return kept;
}

void write_conversation_index(std::ostream& out, std::span<const Conversation> conversations) {
    for (const auto& c : conversations) {
        json row = json::object();
        row["conversation_id"] = c.conversation_id;
        row["root_tweet_id"] = c.root_tweet_id;
        row["n_tweets"] = c.tweet_ids.size();
        row["n_users"] = c.participant_ids.size();
        row["initiator_id"] = c.initiator_id;
        out << row.dump() << '\n';
    }
}

std::vector<InfluencerRecord> rank_influencers(std::span<const Tweet> tweets, std::size_t k) {
    if (k < 1) throw InvalidArgument("k must be at least 1");
    std::map<std::string, InfluencerRecord> totals;
    for (const auto& t : tweets) {
        auto& r = totals[t.author_id];
        r.user_id = t.author_id;
        r.tweet_count += 1;
        r.total_likes += t.like_count;
        r.total_retweets += t.retweet_count;
        r.total_replies += t.reply_count;
    }
    std::vector<InfluencerRecord> ranked;
    ranked.reserve(totals.size());
    for (auto& [id, r] : totals) ranked.push_back(std::move(r));
    std::sort(ranked.begin(), ranked.end(), [](const InfluencerRecord& a, const InfluencerRecord& b) {
        if (a.total_likes != b.total_likes) return a.total_likes > b.total_likes;
        if (a.total_retweets != b.total_retweets) return a.total_retweets > b.total_retweets;
        if (a.total_replies != b.total_replies) return a.total_replies > b.total_replies;
        return a.user_id < b.user_id;
    });
    if (ranked.size() > k) ranked.resize(k);
    for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = static_cast<std::int64_t>(i + 1);
    return ranked;
}

void write_influencers(std::ostream& out, std::span<const InfluencerRecord> records) {
    out << kInfluencerCsvHeader << '\n';
    for (const auto& r : records)
        csv::write_row(out, {std::to_string(r.rank), r.user_id, std::to_string(r.tweet_count),
                             std::to_string(r.total_likes), std::to_string(r.total_retweets),
                             std::to_string(r.total_replies)});
}

std::vector<InfluencerRecord> read_influencers(std::istream& in) {
    auto rows = csv::read_table(in, csv::split_line(kInfluencerCsvHeader));
    std::vector<InfluencerRecord> out;
    for (const auto& row : rows) {
        InfluencerRecord r;
        try {
            r.rank = std::stoll(row[0]);
            r.user_id = row[1];
            r.tweet_count = std::stoll(row[2]);
            r.total_likes = std::stoll(row[3]);
            r.total_retweets = std::stoll(row[4]);
            r.total_replies = std::stoll(row[5]);
        } catch (const std::logic_error&) {
            throw ParseError(fmt::format("malformed influencer row for '{}'", row[1]));
        }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace polarlens
