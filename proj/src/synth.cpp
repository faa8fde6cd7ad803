#include "polarlens/synth.hpp"

#include "polarlens/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <random>
#include <unordered_map>

namespace polarlens {

std::vector<PlantedSpec> SynthConfig::default_planted() {
    return {
        {1, Stance::pro, 40, 0.7, -0.6},  {2, Stance::anti, 40, 0.7, -0.6}, {3, Stance::pro, 30, 0.3, -0.5},
        {4, Stance::anti, 30, 0.5, -0.6}, {5, Stance::pro, 25, 0.8, -0.7},  {6, Stance::anti, 25, 0.2, -0.5},
    };
}

void SynthConfig::validate() const {
    auto probability = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(fmt::format("{} must lie in [0, 1]", name));
    };
    if (n_users < 4) throw InvalidArgument("n_users must be at least 4");
    if (!(frac_pro > 0.0 && frac_pro < 1.0)) throw InvalidArgument("frac_pro must lie in (0, 1)");
    if (!(frac_undecided >= 0.0 && frac_undecided < 1.0)) throw InvalidArgument("frac_undecided must lie in [0, 1)");
    if (!(frac_pro + frac_undecided < 1.0)) throw InvalidArgument("frac_pro + frac_undecided must be below 1");
    probability(p_in, "p_in");
    probability(p_out, "p_out");
    probability(side_hashtag_rate, "side_hashtag_rate");
    probability(neutral_hashtag_rate, "neutral_hashtag_rate");
    probability(side_token_fidelity, "side_token_fidelity");
    probability(labeled_fraction, "labeled_fraction");
    if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be non-negative");
    if (days < 1) throw InvalidArgument("days must be at least 1");
    if (!parse_date(start_date)) throw InvalidArgument(fmt::format("invalid start_date '{}'", start_date));
    if (posts_per_user < 1) throw InvalidArgument("posts_per_user must be at least 1");
    if (!(influencer_attention >= 1.0)) throw InvalidArgument("influencer_attention must be at least 1");
    for (const auto& p : planted) {
        if (p.size < 1) throw InvalidArgument("planted conversation size must be at least 1");
        if (p.day < 0 || p.day >= days) throw InvalidArgument("planted conversation day outside the generated range");
        if (p.initiator_stance == Stance::undecided) throw InvalidArgument("planted initiator must be pro or anti");
        probability(p.cross_fraction, "cross_fraction");
        if (!(p.sentiment_bias >= -1.0 && p.sentiment_bias <= 1.0))
            throw InvalidArgument("sentiment_bias must lie in [-1, 1]");
    }
    if (!planted.empty() && n_influencers < 2)
        throw InvalidArgument("planted conversations need at least one influencer per stance (n_influencers >= 2)");
}

namespace {

PlantedSpec planted_from_json(const nlohmann::json& j) {
    PlantedSpec p;
    p.day = j.at("day").get<int>();
    auto s = parse_stance(j.at("initiator_stance").get<std::string>());
    if (!s) throw InvalidArgument("planted initiator_stance must be pro or anti");
    p.initiator_stance = *s;
    p.size = j.at("size").get<std::size_t>();
    p.cross_fraction = j.at("cross_fraction").get<double>();
    p.sentiment_bias = j.at("sentiment_bias").get<double>();
    return p;
}

nlohmann::json planted_to_json(const PlantedSpec& p) {
    nlohmann::json j = nlohmann::json::object();
    j["day"] = p.day;
    j["initiator_stance"] = to_string(p.initiator_stance);
    j["size"] = p.size;
    j["cross_fraction"] = p.cross_fraction;
    j["sentiment_bias"] = p.sentiment_bias;
    return j;
}

} // namespace

SynthConfig synth_config_from_json(const nlohmann::json& j) {
    SynthConfig c;
    if (!j.is_object()) throw InvalidArgument("synth config must be a JSON object");
    const nlohmann::json known = synth_config_to_json(c);
    for (const auto& [key, _] : j.items())
        if (!known.contains(key)) throw InvalidArgument(fmt::format("unknown synth config key '{}'", key));
    try {
        auto get = [&j](const char* key, auto& field) {
            if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
        };
        get("rng_seed", c.rng_seed);
        get("n_users", c.n_users);
        get("frac_pro", c.frac_pro);
        get("frac_undecided", c.frac_undecided);
        get("days", c.days);
        get("start_date", c.start_date);
        get("posts_per_user", c.posts_per_user);
        get("p_in", c.p_in);
        get("p_out", c.p_out);
        get("mu_in", c.mu_in);
        get("mu_out", c.mu_out);
        get("sigma", c.sigma);
        get("seed_users_per_side", c.seed_users_per_side);
        get("seed_posts", c.seed_posts);
        get("influencer_attention", c.influencer_attention);
        get("side_hashtag_rate", c.side_hashtag_rate);
        get("neutral_hashtag_rate", c.neutral_hashtag_rate);
        get("side_token_fidelity", c.side_token_fidelity);
        get("n_influencers", c.n_influencers);
        get("labeled_fraction", c.labeled_fraction);
        if (j.contains("planted")) {
            c.planted.clear();
            for (const auto& p : j.at("planted")) c.planted.push_back(planted_from_json(p));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(fmt::format("synth config: {}", e.what()));
    }
    return c;
}

nlohmann::json synth_config_to_json(const SynthConfig& c) {
    nlohmann::json j = nlohmann::json::object();
    j["rng_seed"] = c.rng_seed;
    j["n_users"] = c.n_users;
    j["frac_pro"] = c.frac_pro;
    j["frac_undecided"] = c.frac_undecided;
    j["days"] = c.days;
    j["start_date"] = c.start_date;
    j["posts_per_user"] = c.posts_per_user;
    j["p_in"] = c.p_in;
    j["p_out"] = c.p_out;
    j["mu_in"] = c.mu_in;
    j["mu_out"] = c.mu_out;
    j["sigma"] = c.sigma;
    j["seed_users_per_side"] = c.seed_users_per_side;
    j["seed_posts"] = c.seed_posts;
    j["influencer_attention"] = c.influencer_attention;
    j["side_hashtag_rate"] = c.side_hashtag_rate;
    j["neutral_hashtag_rate"] = c.neutral_hashtag_rate;
    j["side_token_fidelity"] = c.side_token_fidelity;
    j["n_influencers"] = c.n_influencers;
    j["labeled_fraction"] = c.labeled_fraction;
    j["planted"] = nlohmann::json::array();
    for (const auto& p : c.planted) j["planted"].push_back(planted_to_json(p));
    return j;
}

// ─── Generation ───────────────────────────────────────────────

namespace {

// Seed hashtags are the first two of each side pool.
const std::vector<std::string> kProTags = {"guncontrolnow", "endgunviolence", "gunreform", "momsdemand"};
const std::vector<std::string> kAntiTags = {"2a", "shallnotbeinfringed", "gunrights", "nra"};
const std::vector<std::string> kNeutralTags = {"news", "politics", "usa"};

const std::vector<std::string> kProTokens = {"reform", "background", "checks", "regulation", "ban", "children",
                                             "schools", "legislation"};
const std::vector<std::string> kAntiTokens = {"freedom", "liberty", "constitution", "selfdefense", "ownership",
                                              "carry", "amendment", "hunting"};
const std::vector<std::string> kFiller = {"the", "this", "about", "today", "people", "we", "they", "talk",
                                          "debate", "vote"};
const std::vector<std::string> kPositiveWords = {"good", "great", "love", "agree", "thanks", "nice", "respect", "hope"};
const std::vector<std::string> kNegativeWords = {"bad", "hate", "stupid", "liar", "pathetic", "disgusting",
                                                 "wrong", "shame", "idiot", "garbage"};

class Generator {
public:
    explicit Generator(const SynthConfig& c) : c_(c), rng_(c.rng_seed), lexicon_(Lexicon::builtin()) {}

    SynthCorpus run();

private:
    struct Post {
        std::size_t tweet;
        std::size_t author;
    };

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    template <typename T>
    const T& pick(const std::vector<T>& v) { return v[pick(v.size())]; }
    double gaussian(double mu) {
        if (c_.sigma == 0.0) return std::clamp(mu, -1.0, 1.0);
        return std::clamp(std::normal_distribution<double>(mu, c_.sigma)(rng_), -1.0, 1.0);
    }

    std::string compose_text(std::size_t author, double target_sentiment, const std::string& mention);
    std::size_t add_tweet(std::size_t author, Timestamp at, const std::string& text,
                          std::optional<std::size_t> reply_to, std::vector<std::string> hashtags);
    double mean_for(std::size_t a, std::size_t b) const;

    const SynthConfig& c_;
    std::mt19937_64 rng_;
    Lexicon lexicon_;

    std::vector<std::string> user_ids_;
    std::vector<Stance> stance_;
    std::vector<std::vector<std::size_t>> posts_by_user_;
    std::vector<Tweet> tweets_;
    std::vector<double> sentiment_;
    SynthCorpus out_;
};

std::string Generator::compose_text(std::size_t author, double target, const std::string& mention) {
    std::vector<std::string> words;
    if (!mention.empty()) words.push_back("@" + mention);
    words.push_back(pick(kFiller));

    const Stance s = stance_[author];
    for (int i = 0; i < 2; ++i) {
        if (s == Stance::undecided) {
            words.push_back(uniform() < 0.5 ? pick(kProTokens) : pick(kAntiTokens));
        } else {
            const bool own = uniform() < c_.side_token_fidelity;
            const bool pro = (s == Stance::pro) == own;
            words.push_back(pro ? pick(kProTokens) : pick(kAntiTokens));
        }
    }

    // Pick valence words until the raw sum is close to the one whose
    // squashed score equals the target.
    const double t = std::clamp(target, -0.95, 0.95);
    const double wanted = t * std::sqrt(15.0) / std::sqrt(1.0 - t * t);
    double sum = 0.0;
    for (int i = 0; i < 6 && std::abs(wanted - sum) > 0.9; ++i) {
        const auto& pool = wanted > sum ? kPositiveWords : kNegativeWords;
        const auto& w = pick(pool);
        const double v = lexicon_.valence.at(w);
        if (std::abs(wanted - (sum + v)) >= std::abs(wanted - sum)) break;
        sum += v;
        words.push_back(w);
    }
    words.push_back(pick(kFiller));

    std::string text;
    for (const auto& w : words) {
        if (!text.empty()) text.push_back(' ');
        text += w;
    }
    return text;
}

std::size_t Generator::add_tweet(std::size_t author, Timestamp at, const std::string& text,
                                 std::optional<std::size_t> reply_to, std::vector<std::string> hashtags) {
    Tweet t;
    t.id = fmt::format("t{:07d}", tweets_.size() + 1);
    t.author_id = user_ids_[author];
    t.created_at = at;
    t.text = text;
    t.conversation_id = reply_to ? tweets_[*reply_to].conversation_id : t.id;
    if (reply_to) t.references.push_back({ReferenceKind::replied_to, tweets_[*reply_to].id});
    t.like_count = static_cast<std::int64_t>(pick(21));
    t.retweet_count = static_cast<std::int64_t>(pick(6));
    t.hashtags = normalize_hashtags(hashtags);
    tweets_.push_back(std::move(t));
    sentiment_.push_back(score_text(text, lexicon_));
    if (reply_to) {
        tweets_[*reply_to].reply_count += 1;
        const auto& child = tweets_.back();
        const auto& parent = tweets_[*reply_to];
        out_.edges.push_back({child.author_id, parent.author_id, child.conversation_id, day_of(child.created_at),
                              sentiment_.back()});
    }
    return tweets_.size() - 1;
}

double Generator::mean_for(std::size_t a, std::size_t b) const {
    if (stance_[a] == Stance::undecided || stance_[b] == Stance::undecided) return 0.0;
    return stance_[a] == stance_[b] ? c_.mu_in : c_.mu_out;
}

SynthCorpus Generator::run() {
    const std::size_t n = c_.n_users;
    const Date start = *parse_date(c_.start_date);
    out_.tau = 0.05;

    // Exact quotas, assigned over a seeded permutation.
    const auto n_pro = static_cast<std::size_t>(std::llround(c_.frac_pro * static_cast<double>(n)));
    const auto n_undecided = static_cast<std::size_t>(std::llround(c_.frac_undecided * static_cast<double>(n)));
    if (n_pro + n_undecided >= n) throw InvalidArgument("quotas leave no anti users");
    for (std::size_t i = 0; i < n; ++i) user_ids_.push_back(fmt::format("u{:04d}", i));
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng_);
    stance_.assign(n, Stance::anti);
    for (std::size_t i = 0; i < n_pro; ++i) stance_[perm[i]] = Stance::pro;
    for (std::size_t i = n_pro; i < n_pro + n_undecided; ++i) stance_[perm[i]] = Stance::undecided;
    for (std::size_t u = 0; u < n; ++u) out_.ground_truth[user_ids_[u]] = stance_[u];

    std::vector<std::size_t> pro_users, anti_users;
    for (std::size_t u = 0; u < n; ++u) {
        if (stance_[u] == Stance::pro) pro_users.push_back(u);
        if (stance_[u] == Stance::anti) anti_users.push_back(u);
    }

    // Influencers alternate pro/anti; seed-hashtag activists come next.
    std::vector<std::size_t> influencers;
    std::size_t next_pro = 0, next_anti = 0;
    for (std::size_t i = 0; i < c_.n_influencers; ++i) {
        auto& pool = i % 2 == 0 ? pro_users : anti_users;
        auto& next = i % 2 == 0 ? next_pro : next_anti;
        if (next >= pool.size()) throw InvalidArgument("not enough users for the requested influencers");
        influencers.push_back(pool[next++]);
    }
    std::vector<std::size_t> activists;
    for (std::size_t i = 0; i < c_.seed_users_per_side; ++i) {
        if (next_pro >= pro_users.size() || next_anti >= anti_users.size())
            throw InvalidArgument("not enough users for the requested seed activists");
        activists.push_back(pro_users[next_pro++]);
        activists.push_back(anti_users[next_anti++]);
    }
    std::vector<bool> is_influencer(n, false);
    for (auto i : influencers) {
        out_.influencers.push_back(user_ids_[i]);
        is_influencer[i] = true;
    }

    for (const auto& tag : {kProTags[0], kProTags[1]}) out_.seed_hashtags[tag] = 0.0;
    for (const auto& tag : {kAntiTags[0], kAntiTags[1]}) out_.seed_hashtags[tag] = 1.0;

    auto random_time = [&](int day_offset) {
        return Timestamp{start + std::chrono::days{day_offset}} + std::chrono::seconds{pick(86400)};
    };
    auto side_pool = [](Stance s) -> const std::vector<std::string>& {
        return s == Stance::pro ? kProTags : kAntiTags;
    };

    // Original posts.
    posts_by_user_.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t k = 0; k < c_.posts_per_user; ++k) {
            std::vector<std::string> tags;
            if (stance_[u] != Stance::undecided && uniform() < c_.side_hashtag_rate) {
                const auto& pool = side_pool(stance_[u]);
                tags.push_back(pool[2 + pick(pool.size() - 2)]);
            } else if (stance_[u] == Stance::undecided && uniform() < c_.side_hashtag_rate) {
                const auto& pool = uniform() < 0.5 ? kProTags : kAntiTags;
                tags.push_back(pool[2 + pick(pool.size() - 2)]);
            }
            if (uniform() < c_.neutral_hashtag_rate) tags.push_back(pick(kNeutralTags));
            std::string text = compose_text(u, gaussian(0.1), "");
            for (const auto& tag : tags) text += " #" + tag;
            const int day = static_cast<int>(pick(static_cast<std::size_t>(c_.days)));
            posts_by_user_[u].push_back(add_tweet(u, random_time(day), text, std::nullopt, tags));
        }
    }
    for (auto u : activists) {
        for (std::size_t k = 0; k < c_.seed_posts; ++k) {
            const std::string& tag = side_pool(stance_[u])[pick(2)];
            std::string text = compose_text(u, gaussian(0.1), "") + " #" + tag;
            const int day = static_cast<int>(pick(static_cast<std::size_t>(c_.days)));
            posts_by_user_[u].push_back(add_tweet(u, random_time(day), text, std::nullopt, {tag}));
        }
    }
    for (auto u : influencers)
        for (auto t : posts_by_user_[u]) tweets_[t].like_count = 50000 + static_cast<std::int64_t>(pick(50000));

    // Background interactions: one Bernoulli draw per ordered user pair.
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (u == v) continue;
            const bool decided = stance_[u] != Stance::undecided && stance_[v] != Stance::undecided;
            const bool within = decided && stance_[u] == stance_[v];
            double p = !decided ? 0.5 * (c_.p_in + c_.p_out) : within ? c_.p_in : c_.p_out;
            if (is_influencer[v]) p = std::min(1.0, p * c_.influencer_attention);
            const bool hit = uniform() < p;
            // Stats cover plain pairs only, so they stay binomial in p_in / p_out.
            if (decided && !is_influencer[v]) {
                if (within) {
                    ++out_.stats.within_pairs;
                    out_.stats.within_interactions += hit;
                } else {
                    ++out_.stats.cross_pairs;
                    out_.stats.cross_interactions += hit;
                }
            }
            if (!hit) continue;
            const std::size_t parent = pick(posts_by_user_[v]);
            const auto at = tweets_[parent].created_at + std::chrono::seconds{60 + pick(3600)};
            add_tweet(u, at, compose_text(u, gaussian(mean_for(u, v)), user_ids_[v]), parent, {});
        }
    }

    // Planted influencer conversations.
    std::vector<std::size_t> cursor(2, 0);
    for (const auto& spec : c_.planted) {
        std::vector<std::size_t> candidates;
        for (auto i : influencers)
            if (stance_[i] == spec.initiator_stance) candidates.push_back(i);
        auto& cur = cursor[spec.initiator_stance == Stance::pro ? 0 : 1];
        const std::size_t initiator = candidates[cur++ % candidates.size()];

        const Stance opposite = spec.initiator_stance == Stance::pro ? Stance::anti : Stance::pro;
        auto same_pool = spec.initiator_stance == Stance::pro ? pro_users : anti_users;
        auto other_pool = opposite == Stance::pro ? pro_users : anti_users;
        same_pool.erase(std::remove(same_pool.begin(), same_pool.end(), initiator), same_pool.end());
        const auto n_cross = static_cast<std::size_t>(std::llround(spec.cross_fraction * static_cast<double>(spec.size)));
        const std::size_t n_same = spec.size - n_cross;
        if (n_cross > other_pool.size() || n_same > same_pool.size())
            throw InvalidArgument("planted conversation is larger than the available participants");
        std::shuffle(same_pool.begin(), same_pool.end(), rng_);
        std::shuffle(other_pool.begin(), other_pool.end(), rng_);
        std::vector<std::size_t> participants(other_pool.begin(), other_pool.begin() + static_cast<std::ptrdiff_t>(n_cross));
        participants.insert(participants.end(), same_pool.begin(), same_pool.begin() + static_cast<std::ptrdiff_t>(n_same));

        const Date day = start + std::chrono::days{spec.day};
        const Timestamp root_at = Timestamp{day} + std::chrono::hours{10} + std::chrono::seconds{pick(7200)};
        const std::size_t root = add_tweet(initiator, root_at, compose_text(initiator, 0.0, ""), std::nullopt, {});
        tweets_[root].like_count = 100000 + static_cast<std::int64_t>(pick(50000));
        for (auto p : participants) {
            const auto at = root_at + std::chrono::seconds{60 + pick(3 * 3600)};
            add_tweet(p, at, compose_text(p, gaussian(spec.sentiment_bias), user_ids_[initiator]), root, {});
        }

        PlantedConversation planted;
        planted.conversation_id = tweets_[root].id;
        planted.initiator_id = user_ids_[initiator];
        planted.day = day;
        planted.spec = spec;
        out_.manifest.push_back(std::move(planted));
    }

    for (auto& planted : out_.manifest) {
        for (Direction d : {Direction{Stance::pro, Stance::anti}, Direction{Stance::anti, Stance::pro}}) {
            for (WeightMode m : {WeightMode::count_all, WeightMode::count_negative, WeightMode::sentiment_mass}) {
                planted.expected.push_back({d, m,
                                            oracle_delta(out_.edges, out_.ground_truth, planted.conversation_id, d, m,
                                                         out_.tau, RemovalMode::edges, planted.day)});
            }
        }
    }

    // Reference labels standing in for a manually annotated subset.
    std::vector<std::size_t> decided;
    for (std::size_t u = 0; u < n; ++u)
        if (stance_[u] != Stance::undecided) decided.push_back(u);
    std::shuffle(decided.begin(), decided.end(), rng_);
    const auto n_labeled = static_cast<std::size_t>(std::llround(c_.labeled_fraction * static_cast<double>(decided.size())));
    for (std::size_t i = 0; i < n_labeled; ++i) out_.labeled_sample[user_ids_[decided[i]]] = stance_[decided[i]];

    out_.tweets = tweets_;
    std::sort(out_.tweets.begin(), out_.tweets.end(), [](const Tweet& a, const Tweet& b) {
        if (a.created_at != b.created_at) return a.created_at < b.created_at;
        return a.id < b.id;
    });
    return std::move(out_);
}

} // namespace

SynthCorpus generate_corpus(const SynthConfig& config) {
    config.validate();
    return Generator(config).run();
}

nlohmann::json manifest_to_json(const std::vector<PlantedConversation>& manifest) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : manifest) {
        nlohmann::json j = nlohmann::json::object();
        j["conversation_id"] = p.conversation_id;
        j["initiator_id"] = p.initiator_id;
        j["date"] = format_date(p.day);
        j["spec"] = planted_to_json(p.spec);
        j["scope"] = "daily";
        j["removal_mode"] = "edges";
        j["expected"] = nlohmann::json::array();
        for (const auto& e : p.expected) {
            nlohmann::json x = nlohmann::json::object();
            x["direction"] = to_string(e.direction);
            x["weight_mode"] = to_string(e.mode);
            x["with"] = opt(e.values.with);
            x["without"] = opt(e.values.without);
            x["delta"] = opt(e.values.delta);
            j["expected"].push_back(std::move(x));
        }
        out.push_back(std::move(j));
    }
    return out;
}

std::vector<PlantedConversation> manifest_from_json(const nlohmann::json& j) {
    auto opt = [](const nlohmann::json& v) -> std::optional<double> {
        if (v.is_null()) return std::nullopt;
        return v.get<double>();
    };
    std::vector<PlantedConversation> out;
    try {
        for (const auto& item : j) {
            PlantedConversation p;
            p.conversation_id = item.at("conversation_id").get<std::string>();
            p.initiator_id = item.at("initiator_id").get<std::string>();
            auto day = parse_date(item.at("date").get<std::string>());
            if (!day) throw ParseError("manifest entry has an invalid date");
            p.day = *day;
            p.spec = planted_from_json(item.at("spec"));
            for (const auto& x : item.at("expected")) {
                ExpectedEffect e;
                auto d = parse_direction(x.at("direction").get<std::string>());
                auto m = parse_weight_mode(x.at("weight_mode").get<std::string>());
                if (!d || !m) throw ParseError("manifest entry has an invalid direction or weight mode");
                e.direction = *d;
                e.mode = *m;
                e.values = {opt(x.at("with")), opt(x.at("without")), opt(x.at("delta"))};
                p.expected.push_back(e);
            }
            out.push_back(std::move(p));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(fmt::format("manifest: {}", e.what()));
    }
    return out;
}

void write_synth_corpus(const SynthCorpus& corpus, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto open = [&dir](const char* name) {
        std::ofstream f(fs::path(dir) / name, std::ios::binary);
        if (!f) throw Error(fmt::format("cannot write {}/{}", dir, name));
        return f;
    };
    {
        auto f = open("tweets.jsonl");
        write_corpus(f, corpus.tweets);
    }
    {
        auto f = open("ground_truth.csv");
        write_label_csv(f, corpus.ground_truth, "true_stance");
    }
    {
        auto f = open("labeled_users.csv");
        write_label_csv(f, corpus.labeled_sample, "stance");
    }
    {
        auto f = open("seed_hashtags.csv");
        write_seed_hashtags(f, corpus.seed_hashtags);
    }
    {
        auto f = open("manifest.json");
        f << manifest_to_json(corpus.manifest).dump(2) << '\n';
    }
}

} // namespace polarlens
