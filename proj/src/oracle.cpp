#include "polarlens/synth.hpp"

namespace polarlens {

std::optional<double> oracle_ei(const std::vector<OracleEdge>& edges, const std::map<std::string, Stance>& stances,
                                Direction direction, WeightMode mode, double tau) {
    if (direction.source == direction.target || direction.source == Stance::undecided ||
        direction.target == Stance::undecided)
        throw InvalidArgument("oracle direction must join pro and anti");

    double external = 0.0;
    double internal = 0.0;
    for (const OracleEdge& e : edges) {
        if (e.author_id == e.target_id) continue;
        auto a = stances.find(e.author_id);
        auto t = stances.find(e.target_id);
        if (a == stances.end() || t == stances.end()) continue;
        if (a->second != direction.source) continue;

        double w = 0.0;
        if (mode == WeightMode::count_all) w = 1.0;
        if (mode == WeightMode::count_negative && e.sentiment < -tau) w = 1.0;
        if (mode == WeightMode::sentiment_mass && e.sentiment < 0.0) w = -e.sentiment;

        if (t->second == direction.target) external += w;
        if (t->second == direction.source) internal += w;
    }
    if (external + internal == 0.0) return std::nullopt;
    return (external - internal) / (external + internal);
}

OracleDelta oracle_delta(const std::vector<OracleEdge>& edges, const std::map<std::string, Stance>& stances,
                         const std::string& conversation_id, Direction direction, WeightMode mode, double tau,
                         RemovalMode removal, std::optional<Date> day,
                         const std::set<std::string>& extra_participants) {
    std::vector<OracleEdge> base;
    for (const auto& e : edges)
        if (!day || e.day == *day) base.push_back(e);

    std::set<std::string> involved = extra_participants;
    for (const auto& e : edges)
        if (e.conversation_id == conversation_id) involved.insert(e.author_id);

    std::vector<OracleEdge> edited;
    for (const auto& e : base) {
        if (removal == RemovalMode::edges && e.conversation_id == conversation_id) continue;
        if (removal == RemovalMode::nodes && (involved.count(e.author_id) || involved.count(e.target_id))) continue;
        edited.push_back(e);
    }

    OracleDelta out;
    out.with = oracle_ei(base, stances, direction, mode, tau);
    out.without = oracle_ei(edited, stances, direction, mode, tau);
    if (out.with && out.without) out.delta = *out.with - *out.without;
    return out;
}

} // namespace polarlens
