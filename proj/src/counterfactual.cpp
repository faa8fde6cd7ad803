#include "polarlens/counterfactual.hpp"

#include "polarlens/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>

namespace polarlens {

std::string_view to_string(Scope s) { return s == Scope::subgraph ? "subgraph" : "daily"; }

std::optional<Scope> parse_scope(std::string_view text) {
    if (text == "subgraph") return Scope::subgraph;
    if (text == "daily") return Scope::daily;
    return std::nullopt;
}

std::string_view to_string(Classification c) {
    switch (c) {
    case Classification::increase: return "increase";
    case Classification::decrease: return "decrease";
    case Classification::no_change: return "no_change";
    case Classification::undefined: return "undefined";
    }
    return "undefined";
}

std::optional<Classification> parse_classification(std::string_view text) {
    if (text == "increase") return Classification::increase;
    if (text == "decrease") return Classification::decrease;
    if (text == "no_change") return Classification::no_change;
    if (text == "undefined") return Classification::undefined;
    return std::nullopt;
}

DeltaOutcome compare_scores(std::optional<double> with, std::optional<double> without) {
    DeltaOutcome out;
    if (!with || !without) return out;
    out.delta = *with - *without;
    if (*out.delta > 0.0) out.classification = Classification::increase;
    else if (*out.delta < 0.0) out.classification = Classification::decrease;
    else out.classification = Classification::no_change;
    return out;
}

namespace {

Stance stance_or_undecided(const StanceMap& stances, const std::string& user) {
    auto it = stances.find(user);
    return it == stances.end() ? Stance::undecided : it->second;
}

std::optional<std::vector<std::string>> audience_for(const FollowerMap* followers, const std::string& influencer) {
    if (!followers) return std::nullopt;
    auto it = followers->find(influencer);
    if (it == followers->end()) return std::nullopt;
    return it->second;
}

} // namespace

CounterfactualResult conversation_effect(const InteractionGraph& graph, const StanceMap& stances,
                                         const Conversation& conversation, const std::string& influencer_id,
                                         Direction direction, const CounterfactualConfig& config,
                                         const FollowerMap* followers) {
    if (!graph.has_conversation(conversation.conversation_id))
        throw NotFound(fmt::format("conversation '{}' is not in the graph", conversation.conversation_id));
    if (conversation.initiator_id != influencer_id)
        throw InvalidArgument(fmt::format("conversation '{}' was initiated by '{}', not '{}'",
                                          conversation.conversation_id, conversation.initiator_id, influencer_id));

    CounterfactualResult r;
    r.conversation_id = conversation.conversation_id;
    r.influencer_id = influencer_id;
    r.influencer_stance = stance_or_undecided(stances, influencer_id);
    r.undecided_influencer = r.influencer_stance == Stance::undecided;
    r.direction = direction;
    r.day = day_of(conversation.root_created_at);

    const InteractionGraph base = config.scope == Scope::subgraph
                                      ? influencer_subgraph(graph, influencer_id, audience_for(followers, influencer_id))
                                      : daily_slice(graph, r.day);
    const InteractionGraph without = remove_conversation(base, conversation.conversation_id, config.removal);

    r.score_with = ei_index(base, stances, direction, config.ei).value;
    r.score_without = ei_index(without, stances, direction, config.ei).value;
    auto outcome = compare_scores(r.score_with, r.score_without);
    r.delta = outcome.delta;
    r.classification = outcome.classification;
    return r;
}

BatchResult batch_effects(const InteractionGraph& graph, const StanceMap& stances,
                          std::span<const Conversation> conversations,
                          std::span<const InfluencerRecord> influencers, std::span<const Direction> directions,
                          const CounterfactualConfig& config, const FollowerMap* followers) {
    std::unordered_map<std::string, std::int64_t> rank;
    for (const auto& inf : influencers) rank.emplace(inf.user_id, inf.rank);

    std::vector<const Conversation*> work;
    BatchResult out;
    for (const auto& c : conversations) {
        if (!rank.count(c.initiator_id)) {
            out.errors.push_back({c.conversation_id,
                                  fmt::format("initiator '{}' is not a ranked influencer", c.initiator_id)});
            continue;
        }
        work.push_back(&c);
    }
    std::sort(work.begin(), work.end(), [&](const Conversation* a, const Conversation* b) {
        const auto ra = rank.at(a->initiator_id), rb = rank.at(b->initiator_id);
        if (ra != rb) return ra < rb;
        return a->conversation_id < b->conversation_id;
    });

    for (const Conversation* c : work) {
        for (const auto& d : directions) {
            try {
                out.results.push_back(conversation_effect(graph, stances, *c, c->initiator_id, d, config, followers));
            } catch (const Error& e) {
                out.errors.push_back({c->conversation_id, e.what()});
            }
        }
    }
    return out;
}

// ─── Summaries ────────────────────────────────────────────────

namespace {

double percent(std::size_t count, std::size_t n) {
    return n == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(n);
}

void tally(std::vector<DirectionTally>& tallies, const CounterfactualResult& r) {
    auto it = std::find_if(tallies.begin(), tallies.end(),
                           [&](const DirectionTally& t) { return t.direction == r.direction; });
    if (it == tallies.end()) {
        tallies.push_back({r.direction});
        it = std::prev(tallies.end());
    }
    ++it->n;
    if (r.classification == Classification::increase) ++it->increase;
    else if (r.classification == Classification::decrease) ++it->decrease;
    else ++it->other;
}

std::string_view majority_label(Classification c) {
    switch (c) {
    case Classification::increase: return "increase";
    case Classification::decrease: return "decrease";
    default: return "no change";
    }
}

} // namespace

double DirectionTally::percent_increase() const { return percent(increase, n); }
double DirectionTally::percent_decrease() const { return percent(decrease, n); }
double DirectionTally::percent_other() const { return percent(other, n); }

Classification DirectionTally::majority() const {
    if (decrease >= increase && decrease >= other) return Classification::decrease;
    if (increase >= other) return Classification::increase;
    return Classification::no_change;
}

double DirectionTally::majority_percent() const {
    switch (majority()) {
    case Classification::increase: return percent_increase();
    case Classification::decrease: return percent_decrease();
    default: return percent_other();
    }
}

std::vector<InfluencerImpactSummary> summarize_influencer(std::span<const CounterfactualResult> results) {
    std::vector<InfluencerImpactSummary> out;
    std::map<std::string, std::set<std::string>> conversations;
    for (const auto& r : results) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const InfluencerImpactSummary& s) { return s.influencer_id == r.influencer_id; });
        if (it == out.end()) {
            InfluencerImpactSummary fresh;
            fresh.influencer_id = r.influencer_id;
            fresh.stance = r.influencer_stance;
            out.push_back(std::move(fresh));
            it = std::prev(out.end());
        }
        conversations[r.influencer_id].insert(r.conversation_id);
        tally(it->directions, r);
    }
    for (auto& s : out) s.n_conversations = conversations[s.influencer_id].size();
    return out;
}

std::vector<StanceGroupSummary> summarize_stance_group(std::span<const CounterfactualResult> results) {
    std::vector<StanceGroupSummary> out;
    for (Stance s : {Stance::pro, Stance::anti, Stance::undecided}) {
        StanceGroupSummary g;
        g.stance = s;
        std::set<std::string> ids;
        for (const auto& r : results) {
            if (r.influencer_stance != s) continue;
            ids.insert(r.conversation_id);
            tally(g.directions, r);
        }
        g.n_conversations = ids.size();
        if (g.n_conversations > 0) out.push_back(std::move(g));
    }
    return out;
}

std::string format_influencer_percent(double p) {
    const double rounded = std::round(p * 100.0) / 100.0;
    if (rounded >= 100.0) return "100.0";
    return fmt::format("{:.2f}", rounded);
}

std::string format_group_percent(double p) { return fmt::format("{:.2f}", p); }

std::string render_influencer_cell(const DirectionTally& t) {
    return fmt::format("{}% - {}", format_influencer_percent(t.majority_percent()), majority_label(t.majority()));
}

std::string render_group_cell(const DirectionTally& t) {
    return fmt::format("{}% - {}", format_group_percent(t.majority_percent()), majority_label(t.majority()));
}

// ─── CSV ──────────────────────────────────────────────────────

namespace {

std::string optional_double(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

std::optional<double> parse_optional_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    try {
        return std::stod(s);
    } catch (const std::logic_error&) {
        throw ParseError(fmt::format("invalid number '{}'", s));
    }
}

} // namespace

void write_results_csv(std::ostream& out, std::span<const CounterfactualResult> results) {
    out << kResultsCsvHeader << '\n';
    for (const auto& r : results)
        csv::write_row(out, {r.conversation_id, r.influencer_id, std::string(to_string(r.influencer_stance)),
                             to_string(r.direction), format_date(r.day), optional_double(r.score_with),
                             optional_double(r.score_without), optional_double(r.delta),
                             std::string(to_string(r.classification))});
}

std::vector<CounterfactualResult> read_results_csv(std::istream& in) {
    std::vector<CounterfactualResult> out;
    for (const auto& row : csv::read_table(in, csv::split_line(kResultsCsvHeader))) {
        CounterfactualResult r;
        r.conversation_id = row[0];
        r.influencer_id = row[1];
        auto stance = parse_stance(row[2]);
        auto dir = parse_direction(row[3]);
        auto day = parse_date(row[4]);
        auto cls = parse_classification(row[8]);
        if (!stance || !dir || !day || !cls)
            throw ParseError(fmt::format("malformed counterfactual row for conversation '{}'", row[0]));
        r.influencer_stance = *stance;
        r.undecided_influencer = *stance == Stance::undecided;
        r.direction = *dir;
        r.day = *day;
        r.score_with = parse_optional_double(row[5]);
        r.score_without = parse_optional_double(row[6]);
        r.delta = parse_optional_double(row[7]);
        r.classification = *cls;
        out.push_back(std::move(r));
    }
    return out;
}

void write_influencer_summary_csv(std::ostream& out, std::span<const InfluencerImpactSummary> rows) {
    out << kInfluencerSummaryCsvHeader << '\n';
    for (const auto& s : rows)
        for (const auto& t : s.directions)
            csv::write_row(out, {s.influencer_id, std::string(to_string(s.stance)), std::to_string(s.n_conversations),
                                 to_string(t.direction), format_group_percent(t.percent_increase()),
                                 format_group_percent(t.percent_decrease()), format_group_percent(t.percent_other()),
                                 render_influencer_cell(t)});
}

void write_stance_summary_csv(std::ostream& out, std::span<const StanceGroupSummary> rows) {
    out << kStanceSummaryCsvHeader << '\n';
    for (const auto& g : rows)
        for (const auto& t : g.directions)
            csv::write_row(out, {std::string(to_string(g.stance)), std::to_string(g.n_conversations),
                                 to_string(t.direction), render_group_cell(t)});
}

ConversationDetail conversation_detail(const InteractionGraph& graph, const StanceMap& stances,
                                       const Conversation& conversation, const FollowerMap* followers) {
    ConversationDetail d;
    d.conversation_id = conversation.conversation_id;
    d.influencer_id = conversation.initiator_id;
    d.stance = stance_or_undecided(stances, conversation.initiator_id);
    d.day = day_of(conversation.root_created_at);
    d.n_tweets = conversation.tweet_ids.size();

    std::set<std::string> audience;
    if (auto listed = audience_for(followers, conversation.initiator_id)) {
        audience.insert(listed->begin(), listed->end());
        d.audience_from_followers = true;
    } else {
        audience = interaction_neighbors(graph, conversation.initiator_id);
    }

    auto count = [&](const std::string& user, std::size_t& anti, std::size_t& pro) {
        const Stance s = stance_or_undecided(stances, user);
        if (s == Stance::anti) ++anti;
        if (s == Stance::pro) ++pro;
    };
    for (const auto& user : conversation.participant_ids)
        if (user != conversation.initiator_id && audience.count(user))
            count(user, d.audience_in_conversation_anti, d.audience_in_conversation_pro);

    std::set<std::string> active;
    for (auto i : graph.edges_on_day(d.day)) {
        const auto& e = graph.edges()[i];
        active.insert(e.author_id);
        active.insert(e.target_id);
    }
    for (const auto& user : audience)
        if (active.count(user)) count(user, d.audience_active_day_anti, d.audience_active_day_pro);
    return d;
}

void write_details_csv(std::ostream& out, std::span<const ConversationDetail> details) {
    out << kDetailCsvHeader << '\n';
    for (const auto& d : details)
        csv::write_row(out, {d.conversation_id, d.influencer_id, std::string(to_string(d.stance)), format_date(d.day),
                             std::to_string(d.n_tweets), std::to_string(d.audience_in_conversation_anti),
                             std::to_string(d.audience_in_conversation_pro),
                             std::to_string(d.audience_active_day_anti), std::to_string(d.audience_active_day_pro),
                             d.audience_from_followers ? "followers" : "neighbors"});
}

} // namespace polarlens
