#include "polarlens/stance.hpp"

#include "polarlens/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fmt/format.h>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>

namespace polarlens {

SeedHashtags read_seed_hashtags(std::istream& in) {
    SeedHashtags seeds;
    for (const auto& row : csv::read_table(in, {"hashtag", "side"})) {
        auto tags = normalize_hashtags({row[0]});
        if (tags.empty()) throw ParseError("empty seed hashtag");
        double value = 0.0;
        if (row[1] == "pro") value = 0.0;
        else if (row[1] == "anti") value = 1.0;
        else throw ParseError(fmt::format("seed hashtag '{}' has unknown side '{}'", row[0], row[1]));
        if (!seeds.emplace(tags.front(), value).second)
            throw ParseError(fmt::format("seed hashtag '{}' listed twice", tags.front()));
    }
    return seeds;
}

void write_seed_hashtags(std::ostream& out, const SeedHashtags& seeds) {
    out << "hashtag,side\n";
    for (const auto& [tag, value] : seeds) csv::write_row(out, {tag, value < 0.5 ? "pro" : "anti"});
}

namespace {

std::size_t find_sorted(const std::vector<std::string>& v, const std::string& key) {
    auto it = std::lower_bound(v.begin(), v.end(), key);
    if (it == v.end() || *it != key) return std::numeric_limits<std::size_t>::max();
    return static_cast<std::size_t>(it - v.begin());
}

} // namespace

std::size_t BipartiteGraph::user_index(const std::string& id) const { return find_sorted(users, id); }

std::size_t BipartiteGraph::hashtag_index(const std::string& tag) const { return find_sorted(hashtags, tag); }

double BipartiteGraph::weight(const std::string& user, const std::string& hashtag) const {
    auto u = user_index(user);
    auto h = hashtag_index(hashtag);
    for (const auto& e : edges)
        if (e.user == u && e.hashtag == h) return e.weight;
    return 0.0;
}

BipartiteGraph build_bipartite(std::span<const Tweet> tweets, const SeedHashtags& seeds) {
    std::map<std::pair<std::string, std::string>, double> counts;
    std::set<std::string> users, tags;
    for (const auto& t : tweets) {
        for (const auto& h : t.hashtags) {
            counts[{t.author_id, h}] += 1.0;
            users.insert(t.author_id);
            tags.insert(h);
        }
    }

    BipartiteGraph g;
    g.seeds = seeds;
    for (const auto& [tag, value] : seeds) {
        if (!tags.count(tag)) {
            g.warnings.push_back(fmt::format("seed hashtag '{}' does not occur in the corpus", tag));
            tags.insert(tag);
        }
    }
    g.users.assign(users.begin(), users.end());
    g.hashtags.assign(tags.begin(), tags.end());
    g.edges.reserve(counts.size());
    for (const auto& [key, w] : counts)
        g.edges.push_back({g.user_index(key.first), g.hashtag_index(key.second), w});
    return g;
}

std::unordered_map<std::string, double> seed_usage(const BipartiteGraph& graph) {
    std::unordered_map<std::string, double> uses;
    for (const auto& u : graph.users) uses[u] = 0.0;
    for (const auto& e : graph.edges)
        if (graph.seeds.count(graph.hashtags[e.hashtag])) uses[graph.users[e.user]] += e.weight;
    return uses;
}

PropagationResult propagate(const BipartiteGraph& graph, const PropagationOptions& options) {
    if (graph.seeds.empty()) throw InvalidArgument("label propagation needs at least one seed hashtag");
    if (!(options.damping > 0.0 && options.damping <= 1.0))
        throw InvalidArgument("damping must lie in (0, 1]");

    const std::size_t n_users = graph.users.size();
    const std::size_t n_tags = graph.hashtags.size();
    std::vector<double> p(n_users, 0.5), v(n_tags, 0.5);
    std::vector<bool> clamped(n_tags, false);
    for (const auto& [tag, value] : graph.seeds) {
        auto h = graph.hashtag_index(tag);
        v[h] = value;
        clamped[h] = true;
    }

    std::vector<double> num_u(n_users), den_u(n_users), num_h(n_tags), den_h(n_tags);
    PropagationResult result;
    double previous_change = std::numeric_limits<double>::infinity();

    for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
        double change = 0.0;

        std::fill(num_u.begin(), num_u.end(), 0.0);
        std::fill(den_u.begin(), den_u.end(), 0.0);
        for (const auto& e : graph.edges) {
            num_u[e.user] += e.weight * v[e.hashtag];
            den_u[e.user] += e.weight;
        }
        for (std::size_t u = 0; u < n_users; ++u) {
            if (den_u[u] <= 0.0) continue;
            double next = (1.0 - options.damping) * p[u] + options.damping * (num_u[u] / den_u[u]);
            change = std::max(change, std::abs(next - p[u]));
            p[u] = next;
        }

        std::fill(num_h.begin(), num_h.end(), 0.0);
        std::fill(den_h.begin(), den_h.end(), 0.0);
        for (const auto& e : graph.edges) {
            num_h[e.hashtag] += e.weight * p[e.user];
            den_h[e.hashtag] += e.weight;
        }
        for (std::size_t h = 0; h < n_tags; ++h) {
            if (clamped[h] || den_h[h] <= 0.0) continue;
            double next = (1.0 - options.damping) * v[h] + options.damping * (num_h[h] / den_h[h]);
            change = std::max(change, std::abs(next - v[h]));
            v[h] = next;
        }

        result.iterations = iter;
        bool done = change < options.tol;
        if (done && change > 0.0 && previous_change > change) {
            const double rho = change / previous_change;
            done = change * rho / (1.0 - rho) < options.tol;
        }
        previous_change = change;
        if (done) {
            result.converged = true;
            break;
        }
    }

    for (std::size_t u = 0; u < n_users; ++u) result.p_anti[graph.users[u]] = p[u];
    for (std::size_t h = 0; h < n_tags; ++h) result.hashtag_values[graph.hashtags[h]] = v[h];
    return result;
}

std::string_view to_string(StanceSource s) { return s == StanceSource::seed ? "seed" : "gnn"; }

std::vector<StanceAssignment> select_seed_users(const std::map<std::string, double>& p_anti,
                                                const std::unordered_map<std::string, double>& uses,
                                                const SeedSelection& selection) {
    std::vector<StanceAssignment> out;
    for (const auto& [user, p] : p_anti) {
        auto it = uses.find(user);
        if (it == uses.end() || it->second < selection.min_uses) continue;
        if (p <= selection.lo) out.push_back({user, p, Stance::pro, StanceSource::seed});
        else if (p >= selection.hi) out.push_back({user, p, Stance::anti, StanceSource::seed});
    }
    return out;
}

void ThresholdPair::validate() const {
    if (!(t1 > 0.0 && t1 <= 0.5 && t2 >= 0.5 && t2 < 1.0))
        throw InvalidArgument(fmt::format("thresholds ({}, {}) violate 0 < t1 <= 0.5 <= t2 < 1", t1, t2));
}

Stance classify_stance(double p_anti, const ThresholdPair& thresholds) {
    if (p_anti <= thresholds.t1) return Stance::pro;
    if (p_anti >= thresholds.t2) return Stance::anti;
    return Stance::undecided;
}

std::vector<StanceAssignment> assign_stances(const std::map<std::string, double>& p_anti,
                                             const ThresholdPair& thresholds, StanceSource source) {
    thresholds.validate();
    std::vector<StanceAssignment> out;
    out.reserve(p_anti.size());
    for (const auto& [user, p] : p_anti) out.push_back({user, p, classify_stance(p, thresholds), source});
    return out;
}

namespace {

int grid_denominator(double step) {
    if (!(step > 0.0 && step <= 0.5)) throw InvalidArgument("grid step must lie in (0, 0.5]");
    const double inv = 1.0 / step;
    const int denom = static_cast<int>(std::lround(inv));
    if (std::abs(inv - denom) > 1e-9 || denom % 2 != 0)
        throw InvalidArgument(fmt::format("grid step {} must divide 0.5 evenly", step));
    return denom;
}

} // namespace

std::vector<double> threshold_grid_lower(double step) {
    const int denom = grid_denominator(step);
    std::vector<double> out;
    for (int k = 1; k <= denom / 2; ++k) out.push_back(static_cast<double>(k) / denom);
    return out;
}

std::vector<double> threshold_grid_upper(double step) {
    const int denom = grid_denominator(step);
    std::vector<double> out;
    for (int k = denom / 2; k < denom; ++k) out.push_back(static_cast<double>(k) / denom);
    return out;
}

namespace {

__extension__ using Wide = __int128;

// Macro F1 as one exact fraction: per-class F1 is 2tp / (2tp + fp + fn), so
// the mean is (tp_pro * d_anti + tp_anti * d_pro) / (d_pro * d_anti).
struct ExactF1 {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    int compare(const ExactF1& o) const {
        const Wide l = static_cast<Wide>(num) * o.den, r = static_cast<Wide>(o.num) * den;
        return (l > r) - (l < r);
    }
};

ExactF1 exact_macro_f1(std::span<const LabeledProbability> labeled, const ThresholdPair& thresholds) {
    std::int64_t tp_pro = 0, fp_pro = 0, fn_pro = 0, tp_anti = 0, fp_anti = 0, fn_anti = 0;
    for (const auto& l : labeled) {
        const Stance predicted = classify_stance(l.p_anti, thresholds);
        if (l.reference == Stance::pro) {
            if (predicted == Stance::pro) ++tp_pro;
            else ++fn_pro;
            if (predicted == Stance::anti) ++fp_anti;
        } else {
            if (predicted == Stance::anti) ++tp_anti;
            else ++fn_anti;
            if (predicted == Stance::pro) ++fp_pro;
        }
    }
    // An empty class (denominator 0) scores 0, written as 0 / 1.
    const std::int64_t d_pro = std::max<std::int64_t>(2 * tp_pro + fp_pro + fn_pro, 1);
    const std::int64_t d_anti = std::max<std::int64_t>(2 * tp_anti + fp_anti + fn_anti, 1);
    ExactF1 f{tp_pro * d_anti + tp_anti * d_pro, d_pro * d_anti};
    const std::int64_t g = std::gcd(f.num, f.den);
    if (g > 1) {
        f.num /= g;
        f.den /= g;
    }
    return f;
}

} // namespace

double macro_f1(std::span<const LabeledProbability> labeled, const ThresholdPair& thresholds) {
    return exact_macro_f1(labeled, thresholds).value();
}

Calibration calibrate_thresholds(std::span<const LabeledProbability> labeled, double step) {
    bool has_pro = false, has_anti = false;
    for (const auto& l : labeled) {
        if (l.reference == Stance::undecided) throw InvalidArgument("reference labels must be pro or anti");
        has_pro |= l.reference == Stance::pro;
        has_anti |= l.reference == Stance::anti;
    }
    if (!has_pro || !has_anti) throw InvalidArgument("threshold calibration needs at least one pro and one anti label");

    // Grid points are k / denom; comparing integer indices keeps ties exact.
    const int denom = grid_denominator(step);
    Calibration best;
    ExactF1 best_f1;
    int best_k1 = 0, best_k2 = 0;
    bool have = false;
    for (int k1 = 1; k1 <= denom / 2; ++k1) {
        for (int k2 = denom / 2; k2 < denom; ++k2) {
            const ThresholdPair pair{static_cast<double>(k1) / denom, static_cast<double>(k2) / denom};
            const ExactF1 f1 = exact_macro_f1(labeled, pair);
            const int order = have ? f1.compare(best_f1) : 1;
            bool better = order > 0;
            if (order == 0) {
                const int width = k2 - k1, best_width = best_k2 - best_k1;
                better = width > best_width || (width == best_width && k1 < best_k1);
            }
            if (better) {
                best = {pair, f1.value()};
                best_f1 = f1;
                best_k1 = k1;
                best_k2 = k2;
                have = true;
            }
        }
    }
    return best;
}

void write_stances_csv(std::ostream& out, std::span<const StanceAssignment> stances) {
    out << kStanceCsvHeader << '\n';
    for (const auto& s : stances)
        csv::write_row(out, {s.user_id, format_double(s.p_anti), std::string(to_string(s.label)),
                             std::string(to_string(s.source))});
}

std::vector<StanceAssignment> read_stances_csv(std::istream& in) {
    std::vector<StanceAssignment> out;
    for (const auto& row : csv::read_table(in, csv::split_line(kStanceCsvHeader))) {
        StanceAssignment s;
        s.user_id = row[0];
        try {
            s.p_anti = std::stod(row[1]);
        } catch (const std::logic_error&) {
            throw ParseError(fmt::format("invalid probability '{}'", row[1]));
        }
        auto label = parse_stance(row[2]);
        if (!label) throw ParseError(fmt::format("invalid stance label '{}'", row[2]));
        s.label = *label;
        if (row[3] == "seed") s.source = StanceSource::seed;
        else if (row[3] == "gnn") s.source = StanceSource::gnn;
        else throw ParseError(fmt::format("invalid stance source '{}'", row[3]));
        out.push_back(std::move(s));
    }
    return out;
}

std::map<std::string, Stance> read_label_csv(std::istream& in, const std::string& column) {
    std::map<std::string, Stance> out;
    for (const auto& row : csv::read_table(in, {"user_id", column})) {
        auto s = parse_stance(row[1]);
        if (!s) throw ParseError(fmt::format("invalid stance '{}' for user '{}'", row[1], row[0]));
        out[row[0]] = *s;
    }
    return out;
}

void write_label_csv(std::ostream& out, const std::map<std::string, Stance>& labels, const std::string& column) {
    out << "user_id," << column << '\n';
    for (const auto& [user, s] : labels) csv::write_row(out, {user, std::string(to_string(s))});
}

} // namespace polarlens
