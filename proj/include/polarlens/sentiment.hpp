#pragma once

#include "polarlens/common.hpp"
#include "polarlens/corpus.hpp"

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace polarlens {

// Rule-based valence scoring. Contributions of lexicon hits are summed and
// squashed with S / sqrt(S^2 + alpha), so scores stay inside (-1, 1).
struct ScoringConstants {
    double negation_factor = -0.74;
    std::size_t window = 3;       // preceding tokens inspected for negators/boosters
    double caps_factor = 1.15;
    double alpha = 15.0;
};

struct Lexicon {
    std::unordered_map<std::string, double> valence;   // raw, in [-4, 4]
    std::unordered_map<std::string, double> boosters;  // increments
    std::unordered_set<std::string> negators;

    /// Small general-purpose English lexicon shipped with the library.
    static Lexicon builtin();

    /// "term<TAB>valence" lines. Terms are lowercased; out-of-range values
    /// and duplicate terms raise ParseError.
    static Lexicon load(std::istream& valences);
    void load_boosters(std::istream& in);
    void load_negators(std::istream& in);
};

/// Splits on whitespace and punctuation. Apostrophes inside a word are kept,
/// bytes >= 0x80 count as word characters. Case is preserved.
std::vector<std::string> tokenize(std::string_view text);

double score_text(std::string_view text, const Lexicon& lexicon, const ScoringConstants& k = {});

enum class Valence { negative, neutral, positive };

std::string_view to_string(Valence v);

/// negative iff score < -tau, positive iff score > tau.
Valence classify_valence(double score, double tau = 0.05);

struct SentimentRecord {
    std::string tweet_id;
    std::map<std::string, double> per_model;
    double combined = 0.0;

    void recompute();
};

inline constexpr const char* kLexiconModel = "lexicon";

std::vector<SentimentRecord> score_corpus(std::span<const Tweet> tweets, const Lexicon& lexicon);

struct ExternalScore {
    std::string tweet_id;
    std::string model;
    double score = 0.0;
};

struct MergeReport {
    std::size_t merged = 0;
    std::size_t unknown_tweets = 0;
    std::size_t range_errors = 0;
    std::vector<std::string> messages;
};

/// Throws RangeError when the score lies outside [-1, 1].
void validate_external_score(const ExternalScore& score);

/// JSON Lines {tweet_id, model, score}. Malformed lines raise ParseError.
std::vector<ExternalScore> read_external_scores(std::istream& in);

/// Unions per-model maps and recomputes the combined mean. Out-of-range
/// records are rejected, unknown tweet ids skipped; both are reported.
std::vector<SentimentRecord> merge_external_scores(std::vector<SentimentRecord> sentiments,
                                                   std::span<const ExternalScore> external,
                                                   MergeReport& report);

void write_sentiments(std::ostream& out, std::span<const SentimentRecord> records);
std::vector<SentimentRecord> read_sentiments(std::istream& in);

/// tweet_id -> combined score.
std::unordered_map<std::string, double> combined_scores(std::span<const SentimentRecord> records);

} // namespace polarlens
