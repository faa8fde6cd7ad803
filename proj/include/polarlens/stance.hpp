#pragma once

#include "polarlens/common.hpp"
#include "polarlens/corpus.hpp"

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace polarlens {

// ─── User-hashtag bipartite graph ─────────────────────────────

/// Clamped value of a seed hashtag: 0 = pro side, 1 = anti side.
using SeedHashtags = std::map<std::string, double>;

/// CSV "hashtag,side" with side in {pro, anti}.
SeedHashtags read_seed_hashtags(std::istream& in);
void write_seed_hashtags(std::ostream& out, const SeedHashtags& seeds);

struct BipartiteEdge {
    std::size_t user = 0;
    std::size_t hashtag = 0;
    double weight = 0.0;  // usage count >= 1
};

struct BipartiteGraph {
    std::vector<std::string> users;     // sorted
    std::vector<std::string> hashtags;  // sorted
    std::vector<BipartiteEdge> edges;   // sorted by (user, hashtag)
    SeedHashtags seeds;
    std::vector<std::string> warnings;

    std::size_t user_index(const std::string& id) const;  // npos if absent
    std::size_t hashtag_index(const std::string& tag) const;
    double weight(const std::string& user, const std::string& hashtag) const;
};

/// weight(u, h) = number of u's tweets carrying h. Seed hashtags missing
/// from the corpus are kept as isolated clamped nodes (with a warning).
BipartiteGraph build_bipartite(std::span<const Tweet> tweets, const SeedHashtags& seeds);

/// Total uses of seed hashtags per user.
std::unordered_map<std::string, double> seed_usage(const BipartiteGraph& graph);

struct PropagationOptions {
    double damping = 1.0;  // 1 = plain alternating weighted means
    double tol = 1e-6;
    std::size_t max_iter = 100;
};

struct PropagationResult {
    std::map<std::string, double> p_anti;          // per user
    std::map<std::string, double> hashtag_values;  // per hashtag
    std::size_t iterations = 0;
    bool converged = false;
};

/// Reciprocal label propagation: alternate user := weighted mean of its
/// hashtags, then free hashtag := weighted mean of its users, seeds clamped.
/// Stops once the largest change is below tol and the geometric error
/// estimate change * rho / (1 - rho) is below tol as well.
PropagationResult propagate(const BipartiteGraph& graph, const PropagationOptions& options = {});

// ─── Assignments and thresholds ───────────────────────────────

enum class StanceSource { seed, gnn };

std::string_view to_string(StanceSource s);

struct StanceAssignment {
    std::string user_id;
    double p_anti = 0.5;
    Stance label = Stance::undecided;
    StanceSource source = StanceSource::gnn;
};

struct SeedSelection {
    double min_uses = 3;
    double lo = 0.25;
    double hi = 0.75;
};

/// Users with at least min_uses seed-hashtag uses and p <= lo (pro) or
/// p >= hi (anti); sorted by user id.
std::vector<StanceAssignment> select_seed_users(const std::map<std::string, double>& p_anti,
                                                const std::unordered_map<std::string, double>& uses,
                                                const SeedSelection& selection = {});

struct ThresholdPair {
    double t1 = 0.40;  // p <= t1 -> pro
    double t2 = 0.60;  // p >= t2 -> anti

    /// 0 < t1 <= 0.5 <= t2 < 1; throws InvalidArgument otherwise.
    void validate() const;
};

/// Inclusive toward the decided classes.
Stance classify_stance(double p_anti, const ThresholdPair& thresholds);

std::vector<StanceAssignment> assign_stances(const std::map<std::string, double>& p_anti,
                                             const ThresholdPair& thresholds,
                                             StanceSource source = StanceSource::gnn);

struct LabeledProbability {
    double p_anti = 0.5;
    Stance reference = Stance::pro;  // pro or anti
};

struct Calibration {
    ThresholdPair thresholds;
    double macro_f1 = 0.0;
};

/// Grid values k * step for t1 in (0, 0.5] and t2 in [0.5, 1); step must
/// divide 0.5 evenly.
std::vector<double> threshold_grid_lower(double step = 0.05);
std::vector<double> threshold_grid_upper(double step = 0.05);

/// Macro-F1 over {pro, anti}; undecided predictions count against recall.
double macro_f1(std::span<const LabeledProbability> labeled, const ThresholdPair& thresholds);

/// Exhaustive grid search maximizing macro-F1. Ties: wider band first,
/// then smaller t1.
Calibration calibrate_thresholds(std::span<const LabeledProbability> labeled, double step = 0.05);

inline constexpr const char* kStanceCsvHeader = "user_id,p_anti,label,source";

void write_stances_csv(std::ostream& out, std::span<const StanceAssignment> stances);
std::vector<StanceAssignment> read_stances_csv(std::istream& in);

/// CSV "user_id,stance" (reference labels / ground truth). Header must be
/// "user_id,<column>" where column is given.
std::map<std::string, Stance> read_label_csv(std::istream& in, const std::string& column);
void write_label_csv(std::ostream& out, const std::map<std::string, Stance>& labels, const std::string& column);

} // namespace polarlens
