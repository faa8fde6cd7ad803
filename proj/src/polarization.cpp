#include "polarlens/polarization.hpp"

#include "polarlens/csv.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <istream>
#include <ostream>

namespace polarlens {

std::string_view to_string(WeightMode mode) {
    switch (mode) {
    case WeightMode::count_all: return "count_all";
    case WeightMode::count_negative: return "count_negative";
    case WeightMode::sentiment_mass: return "sentiment_mass";
    }
    return "count_negative";
}

std::optional<WeightMode> parse_weight_mode(std::string_view text) {
    if (text == "count_all") return WeightMode::count_all;
    if (text == "count_negative") return WeightMode::count_negative;
    if (text == "sentiment_mass") return WeightMode::sentiment_mass;
    return std::nullopt;
}

double interaction_weight(double sentiment, const EiOptions& options) {
    switch (options.mode) {
    case WeightMode::count_all: return 1.0;
    case WeightMode::count_negative: return sentiment < -options.tau ? 1.0 : 0.0;
    case WeightMode::sentiment_mass: return std::max(0.0, -sentiment);
    }
    return 0.0;
}

namespace {

void check_direction(Direction d) {
    if (d.source == Stance::undecided || d.target == Stance::undecided)
        throw InvalidArgument(fmt::format("direction '{}' references the undecided group", to_string(d)));
    if (d.source == d.target)
        throw InvalidArgument(fmt::format("direction '{}' must join two different groups", to_string(d)));
}

std::optional<Stance> stance_of(const StanceMap& stances, const std::string& user) {
    auto it = stances.find(user);
    if (it == stances.end()) return std::nullopt;
    return it->second;
}

} // namespace

PolarizationScore ei_index(const InteractionGraph& graph, const StanceMap& stances, Direction direction,
                           const EiOptions& options) {
    check_direction(direction);
    PolarizationScore score;
    score.direction = direction;
    score.mode = options.mode;

    // The author index is ordered by user id and each list by canonical
    // edge order, so the summation order only depends on source-group edges.
    for (const auto& [author, positions] : graph.author_index()) {
        if (stance_of(stances, author) != direction.source) continue;
        for (std::size_t i : positions) {
            const auto& e = graph.edges()[i];
            if (e.self_loop()) continue;
            auto target = stance_of(stances, e.target_id);
            if (target == direction.target) {
                score.ext_weight += interaction_weight(e.sentiment, options);
            } else if (target == direction.source) {
                score.int_weight += interaction_weight(e.sentiment, options);
            }
        }
    }
    const double total = score.ext_weight + score.int_weight;
    if (total > 0.0) score.value = (score.ext_weight - score.int_weight) / total;
    return score;
}

std::pair<PolarizationScore, PolarizationScore> both_directions(const InteractionGraph& graph,
                                                                const StanceMap& stances, Direction a_to_b,
                                                                const EiOptions& options) {
    Direction b_to_a{a_to_b.target, a_to_b.source};
    return {ei_index(graph, stances, a_to_b, options), ei_index(graph, stances, b_to_a, options)};
}

std::vector<PolarizationScore> daily_timeline(const InteractionGraph& graph, const StanceMap& stances,
                                              Direction direction, const EiOptions& options, Date first,
                                              Date last) {
    if (last < first)
        throw InvalidArgument(fmt::format("date range {}..{} is reversed", format_date(first), format_date(last)));
    check_direction(direction);
    std::vector<PolarizationScore> out;
    for (Date d = first; d <= last; d += std::chrono::days{1}) {
        auto score = ei_index(daily_slice(graph, d), stances, direction, options);
        score.day = d;
        out.push_back(std::move(score));
    }
    return out;
}

void write_timeline_csv(std::ostream& out, std::span<const PolarizationScore> scores) {
    out << kTimelineCsvHeader << '\n';
    for (const auto& s : scores) {
        csv::write_row(out, {s.day ? format_date(*s.day) : std::string{}, to_string(s.direction),
                             s.value ? format_double(*s.value) : std::string{},
                             format_double(s.ext_weight), format_double(s.int_weight),
                             s.defined() ? "true" : "false"});
    }
}

std::vector<PolarizationScore> read_timeline_csv(std::istream& in) {
    auto rows = csv::read_table(in, csv::split_line(kTimelineCsvHeader));
    std::vector<PolarizationScore> out;
    for (const auto& row : rows) {
        PolarizationScore s;
        if (!row[0].empty()) {
            s.day = parse_date(row[0]);
            if (!s.day) throw ParseError(fmt::format("invalid date '{}'", row[0]));
        }
        auto dir = parse_direction(row[1]);
        if (!dir) throw ParseError(fmt::format("invalid direction '{}'", row[1]));
        s.direction = *dir;
        try {
            if (row[5] == "true") s.value = std::stod(row[2]);
            else if (row[5] != "false") throw ParseError(fmt::format("invalid defined flag '{}'", row[5]));
            s.ext_weight = std::stod(row[3]);
            s.int_weight = std::stod(row[4]);
        } catch (const std::logic_error&) {
            throw ParseError(fmt::format("malformed timeline row for {}", row[0]));
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace polarlens
