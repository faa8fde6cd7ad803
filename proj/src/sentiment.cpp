#include "polarlens/sentiment.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fmt/format.h>
#include <istream>
#include <ostream>
#include <sstream>

namespace polarlens {

namespace {

struct Entry {
    const char* term;
    double value;
};

// Valences on the usual -4..+4 crowd-rating scale.
constexpr Entry kBuiltinValences[] = {
    {"good", 1.9},       {"great", 3.1},      {"excellent", 2.7}, {"love", 3.2},
    {"like", 1.5},       {"happy", 2.7},      {"hope", 1.9},      {"agree", 1.5},
    {"thanks", 1.9},     {"thank", 1.5},      {"nice", 1.8},      {"best", 3.2},
    {"better", 1.9},     {"support", 1.7},    {"safe", 1.9},      {"safety", 1.8},
    {"win", 2.8},        {"respect", 2.1},    {"proud", 2.1},     {"brave", 2.4},
    {"wonderful", 2.7},  {"amazing", 2.8},    {"welcome", 2.0},   {"fair", 1.3},
    {"honest", 2.3},     {"helpful", 1.8},    {"right", 1.0},     {"truth", 1.3},
    {"bad", -2.5},       {"terrible", -2.1},  {"awful", -2.0},    {"hate", -2.7},
    {"worst", -3.1},     {"stupid", -2.4},    {"idiot", -2.3},    {"idiots", -2.2},
    {"liar", -2.6},      {"liars", -2.4},     {"lie", -1.6},      {"lies", -1.8},
    {"wrong", -2.1},     {"disgusting", -2.4},{"pathetic", -2.6}, {"shame", -2.1},
    {"fake", -2.1},      {"crazy", -1.4},     {"dangerous", -2.1},{"evil", -3.4},
    {"fear", -2.2},      {"angry", -2.3},     {"sad", -2.1},      {"kill", -3.7},
    {"killed", -3.5},    {"death", -2.9},     {"dead", -3.3},     {"violence", -3.1},
    {"fraud", -2.8},     {"corrupt", -3.0},   {"ridiculous", -1.5},{"clown", -0.7},
    {"hoax", -1.3},      {"scam", -2.6},      {"destroy", -2.6},  {"threat", -2.4},
    {"ignorant", -2.0},  {"dumb", -2.3},      {"hypocrite", -2.3},{"hypocrites", -2.1},
    {"nonsense", -1.7},  {"garbage", -2.1},   {"failure", -2.3},  {"disaster", -3.1},
};

constexpr Entry kBuiltinBoosters[] = {
    {"very", 0.293},     {"really", 0.293},   {"extremely", 0.293}, {"so", 0.293},
    {"totally", 0.293},  {"absolutely", 0.293},{"completely", 0.293},{"incredibly", 0.293},
    {"most", 0.293},     {"utterly", 0.293},  {"slightly", -0.293}, {"somewhat", -0.293},
    {"barely", -0.293},  {"kinda", -0.293},   {"hardly", -0.293},
};

constexpr const char* kBuiltinNegators[] = {
    "not",    "no",     "never",   "none",  "nobody", "nothing", "neither", "nor",
    "cannot", "cant",   "can't",   "dont",  "don't",  "doesnt",  "doesn't", "isnt",
    "isn't",  "wasnt",  "wasn't",  "arent", "aren't", "wont",    "won't",   "without",
};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool word_char(unsigned char c) { return std::isalnum(c) || c == '\'' || c >= 0x80; }

bool has_lower(std::string_view s) {
    return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::islower(c); });
}

bool has_upper(std::string_view s) {
    return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isupper(c); });
}

/// term<TAB>number lines, blank lines and '#' comments skipped.
void read_term_values(std::istream& in, std::unordered_map<std::string, double>& out,
                      double lo, double hi, const char* what) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(fmt::format("{} line {}: expected term<TAB>value", what, line_no));
        std::string term = lower(line.substr(0, tab));
        double value = 0.0;
        try {
            const std::string text = line.substr(tab + 1);
            std::size_t used = 0;
            value = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::logic_error&) {
            throw ParseError(fmt::format("{} line {}: bad value", what, line_no));
        }
        if (term.empty()) throw ParseError(fmt::format("{} line {}: empty term", what, line_no));
        if (!(value >= lo && value <= hi))
            throw ParseError(fmt::format("{} line {}: value {} outside [{}, {}]", what, line_no,
                                         value, lo, hi));
        if (!out.emplace(term, value).second)
            throw ParseError(fmt::format("{} line {}: duplicate term '{}'", what, line_no, term));
    }
}

} // namespace

Lexicon Lexicon::builtin() {
    Lexicon lex;
    for (const auto& e : kBuiltinValences) lex.valence.emplace(e.term, e.value);
    for (const auto& e : kBuiltinBoosters) lex.boosters.emplace(e.term, e.value);
    for (const char* n : kBuiltinNegators) lex.negators.emplace(n);
    return lex;
}

Lexicon Lexicon::load(std::istream& valences) {
    Lexicon lex;
    read_term_values(valences, lex.valence, -4.0, 4.0, "lexicon");
    return lex;
}

void Lexicon::load_boosters(std::istream& in) {
    boosters.clear();
    read_term_values(in, boosters, -4.0, 4.0, "boosters");
}

void Lexicon::load_negators(std::istream& in) {
    negators.clear();
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        negators.insert(lower(line));
    }
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !word_char(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && word_char(static_cast<unsigned char>(text[i]))) ++i;
        std::string_view tok = text.substr(start, i - start);
        while (!tok.empty() && tok.front() == '\'') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == '\'') tok.remove_suffix(1);
        if (!tok.empty()) tokens.emplace_back(tok);
    }
    return tokens;
}

double score_text(std::string_view text, const Lexicon& lexicon, const ScoringConstants& k) {
    const auto tokens = tokenize(text);
    if (tokens.empty()) return 0.0;

    std::vector<std::string> lowered;
    lowered.reserve(tokens.size());
    for (const auto& t : tokens) lowered.push_back(lower(t));

    // Shouting only counts when it stands out from the rest of the text.
    const bool text_all_caps = !has_lower(text) && has_upper(text);

    double sum = 0.0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        auto hit = lexicon.valence.find(lowered[i]);
        if (hit == lexicon.valence.end()) continue;
        double contribution = hit->second;
        const std::size_t from = i >= k.window ? i - k.window : 0;

        bool negated = false;
        for (std::size_t j = from; j < i; ++j)
            if (lexicon.negators.count(lowered[j])) negated = true;
        if (negated) contribution *= k.negation_factor;

        for (std::size_t j = from; j < i; ++j) {
            auto b = lexicon.boosters.find(lowered[j]);
            if (b == lexicon.boosters.end()) continue;
            contribution += contribution >= 0.0 ? b->second : -b->second;
        }

        if (!text_all_caps && has_upper(tokens[i]) && !has_lower(tokens[i]))
            contribution *= k.caps_factor;
        sum += contribution;
    }
    return sum / std::sqrt(sum * sum + k.alpha);
}

std::string_view to_string(Valence v) {
    switch (v) {
    case Valence::negative: return "negative";
    case Valence::neutral: return "neutral";
    case Valence::positive: return "positive";
    }
    return "neutral";
}

Valence classify_valence(double score, double tau) {
    if (score < -tau) return Valence::negative;
    if (score > tau) return Valence::positive;
    return Valence::neutral;
}

void SentimentRecord::recompute() {
    if (per_model.empty()) throw InvalidArgument(fmt::format("tweet '{}' has no model scores", tweet_id));
    double sum = 0.0;
    for (const auto& [model, s] : per_model) sum += s;
    combined = sum / static_cast<double>(per_model.size());
}

std::vector<SentimentRecord> score_corpus(std::span<const Tweet> tweets, const Lexicon& lexicon) {
    std::vector<SentimentRecord> out;
    out.reserve(tweets.size());
    for (const auto& t : tweets) {
        SentimentRecord r;
        r.tweet_id = t.id;
        r.per_model[kLexiconModel] = score_text(t.text, lexicon);
        r.recompute();
        out.push_back(std::move(r));
    }
    return out;
}

void validate_external_score(const ExternalScore& s) {
    if (!(s.score >= -1.0 && s.score <= 1.0))
        throw RangeError(fmt::format("score {} for tweet '{}' model '{}' outside [-1, 1]", s.score,
                                     s.tweet_id, s.model));
}

std::vector<ExternalScore> read_external_scores(std::istream& in) {
    std::vector<ExternalScore> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto j = nlohmann::json::parse(line);
            out.push_back({j.at("tweet_id").get<std::string>(), j.at("model").get<std::string>(),
                           j.at("score").get<double>()});
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(fmt::format("external scores line {}: {}", line_no, e.what()));
        }
    }
    return out;
}

std::vector<SentimentRecord> merge_external_scores(std::vector<SentimentRecord> sentiments,
                                                   std::span<const ExternalScore> external,
                                                   MergeReport& report) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < sentiments.size(); ++i) index.emplace(sentiments[i].tweet_id, i);

    for (const auto& s : external) {
        try {
            validate_external_score(s);
        } catch (const RangeError& e) {
            ++report.range_errors;
            report.messages.emplace_back(e.what());
            continue;
        }
        auto it = index.find(s.tweet_id);
        if (it == index.end()) {
            ++report.unknown_tweets;
            report.messages.push_back(fmt::format("unknown tweet id '{}' in external scores", s.tweet_id));
            continue;
        }
        sentiments[it->second].per_model[s.model] = s.score;
        ++report.merged;
    }
    for (auto& r : sentiments) r.recompute();
    return sentiments;
}

void write_sentiments(std::ostream& out, std::span<const SentimentRecord> records) {
    for (const auto& r : records) {
        nlohmann::json j = nlohmann::json::object();
        j["tweet_id"] = r.tweet_id;
        j["per_model"] = r.per_model;
        j["combined"] = r.combined;
        out << j.dump() << '\n';
    }
}

std::vector<SentimentRecord> read_sentiments(std::istream& in) {
    std::vector<SentimentRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto j = nlohmann::json::parse(line);
            SentimentRecord r;
            r.tweet_id = j.at("tweet_id").get<std::string>();
            r.per_model = j.at("per_model").get<std::map<std::string, double>>();
            r.combined = j.at("combined").get<double>();
            out.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(fmt::format("sentiment line {}: {}", line_no, e.what()));
        }
    }
    return out;
}

std::unordered_map<std::string, double> combined_scores(std::span<const SentimentRecord> records) {
    std::unordered_map<std::string, double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.emplace(r.tweet_id, r.combined);
    return out;
}

} // namespace polarlens
