#pragma once

#include "polarlens/common.hpp"
#include "polarlens/graph.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace polarlens {

using StanceMap = std::unordered_map<std::string, Stance>;

// How a single interaction contributes to the E/I tallies:
//   count_all       1 per edge
//   count_negative  1 if the edge's sentiment < -tau, else 0
//   sentiment_mass  max(0, -sentiment)
enum class WeightMode { count_all, count_negative, sentiment_mass };

std::string_view to_string(WeightMode mode);
std::optional<WeightMode> parse_weight_mode(std::string_view text);

struct EiOptions {
    WeightMode mode = WeightMode::count_negative;
    double tau = 0.05;
};

double interaction_weight(double sentiment, const EiOptions& options);

struct PolarizationScore {
    Direction direction;
    std::optional<double> value;  // nullopt when ext + int == 0
    double ext_weight = 0.0;
    double int_weight = 0.0;
    std::optional<Date> day;
    WeightMode mode = WeightMode::count_negative;

    bool defined() const { return value.has_value(); }
};

/// Directional E/I index (E - I) / (E + I) over the non-self-loop edges
/// authored by the source group: E counts edges into the target group, I
/// edges into the source group. Users absent from `stances` or undecided
/// contribute nothing.
PolarizationScore ei_index(const InteractionGraph& graph, const StanceMap& stances, Direction direction,
                           const EiOptions& options = {});

std::pair<PolarizationScore, PolarizationScore> both_directions(const InteractionGraph& graph,
                                                                const StanceMap& stances, Direction a_to_b,
                                                                const EiOptions& options = {});

/// One score per calendar day in [first, last]; days without qualifying
/// interactions are undefined, never interpolated.
std::vector<PolarizationScore> daily_timeline(const InteractionGraph& graph, const StanceMap& stances,
                                              Direction direction, const EiOptions& options, Date first,
                                              Date last);

inline constexpr const char* kTimelineCsvHeader = "date,direction,value,ext_weight,int_weight,defined";

void write_timeline_csv(std::ostream& out, std::span<const PolarizationScore> scores);
std::vector<PolarizationScore> read_timeline_csv(std::istream& in);

} // namespace polarlens
