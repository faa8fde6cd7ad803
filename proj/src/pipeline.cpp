#include "polarlens/pipeline.hpp"

#include "polarlens/csv.hpp"
#include "polarlens/graph.hpp"
#include "polarlens/sentiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <set>
#include <spdlog/spdlog.h>
#include <sstream>

namespace polarlens {

namespace fs = std::filesystem;
using nlohmann::json;

// ─── Config ───────────────────────────────────────────────────

namespace {

const std::set<std::string> kConfigKeys = {
    "corpus", "lexicon", "boosters", "negators", "seed_hashtags", "labels", "external_scores", "embeddings",
    "followers", "out", "seed", "strict", "min_tweets", "min_users", "top_k", "tau", "include_quotes",
    "damping", "propagation_tol", "max_iter", "seed_min_uses", "seed_lo", "seed_hi", "hidden", "learning_rate",
    "weight_decay", "epochs", "feature_dim", "grid_step", "t1", "t2", "weight_mode", "removal_mode", "scope",
    "synth"};

} // namespace

PipelineConfig PipelineConfig::from_json(const json& j) {
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!kConfigKeys.count(key)) throw InvalidArgument(fmt::format("unknown config key '{}'", key));

    PipelineConfig c;
    try {
        auto get = [&j](const char* key, auto& field) {
            if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
        };
        get("corpus", c.corpus);
        get("lexicon", c.lexicon);
        get("boosters", c.boosters);
        get("negators", c.negators);
        get("seed_hashtags", c.seed_hashtags);
        get("labels", c.labels);
        get("external_scores", c.external_scores);
        get("embeddings", c.embeddings);
        get("followers", c.followers);
        get("out", c.out);
        get("seed", c.seed);
        get("strict", c.strict);
        get("min_tweets", c.filter.min_tweets);
        get("min_users", c.filter.min_users);
        get("top_k", c.top_k);
        get("tau", c.tau);
        get("include_quotes", c.include_quotes);
        get("damping", c.propagation.damping);
        get("propagation_tol", c.propagation.tol);
        get("max_iter", c.propagation.max_iter);
        get("seed_min_uses", c.seed_selection.min_uses);
        get("seed_lo", c.seed_selection.lo);
        get("seed_hi", c.seed_selection.hi);
        get("hidden", c.gcn.hidden);
        get("learning_rate", c.gcn.learning_rate);
        get("weight_decay", c.gcn.weight_decay);
        get("epochs", c.gcn.epochs);
        get("feature_dim", c.feature_dim);
        get("grid_step", c.grid_step);
        if (j.contains("t1") || j.contains("t2")) {
            if (!j.contains("t1") || !j.contains("t2"))
                throw InvalidArgument("manual thresholds need both t1 and t2");
            c.thresholds = ThresholdPair{j.at("t1").get<double>(), j.at("t2").get<double>()};
        }
        if (j.contains("weight_mode")) {
            auto m = parse_weight_mode(j.at("weight_mode").get<std::string>());
            if (!m) throw InvalidArgument("weight_mode must be count_all, count_negative or sentiment_mass");
            c.weight_mode = *m;
        }
        if (j.contains("removal_mode")) {
            auto m = parse_removal_mode(j.at("removal_mode").get<std::string>());
            if (!m) throw InvalidArgument("removal_mode must be edges or nodes");
            c.removal_mode = *m;
        }
        if (j.contains("scope")) {
            auto s = parse_scope(j.at("scope").get<std::string>());
            if (!s) throw InvalidArgument("scope must be subgraph or daily");
            c.scope = *s;
        }
        if (j.contains("synth")) c.synth = synth_config_from_json(j.at("synth"));
    } catch (const json::exception& e) {
        throw InvalidArgument(fmt::format("config: {}", e.what()));
    }
    return c;
}

json PipelineConfig::to_json() const {
    json j = json::object();
    j["corpus"] = corpus;
    j["lexicon"] = lexicon;
    j["boosters"] = boosters;
    j["negators"] = negators;
    j["seed_hashtags"] = seed_hashtags;
    j["labels"] = labels;
    j["external_scores"] = external_scores;
    j["embeddings"] = embeddings;
    j["followers"] = followers;
    j["out"] = out;
    j["seed"] = seed;
    j["strict"] = strict;
    j["min_tweets"] = filter.min_tweets;
    j["min_users"] = filter.min_users;
    j["top_k"] = top_k;
    j["tau"] = tau;
    j["include_quotes"] = include_quotes;
    j["damping"] = propagation.damping;
    j["propagation_tol"] = propagation.tol;
    j["max_iter"] = propagation.max_iter;
    j["seed_min_uses"] = seed_selection.min_uses;
    j["seed_lo"] = seed_selection.lo;
    j["seed_hi"] = seed_selection.hi;
    j["hidden"] = gcn.hidden;
    j["learning_rate"] = gcn.learning_rate;
    j["weight_decay"] = gcn.weight_decay;
    j["epochs"] = gcn.epochs;
    j["feature_dim"] = feature_dim;
    j["grid_step"] = grid_step;
    if (thresholds) {
        j["t1"] = thresholds->t1;
        j["t2"] = thresholds->t2;
    }
    j["weight_mode"] = to_string(weight_mode);
    j["removal_mode"] = to_string(removal_mode);
    j["scope"] = to_string(scope);
    if (synth) j["synth"] = synth_config_to_json(*synth);
    return j;
}

void PipelineConfig::validate(bool need_corpus, bool need_seed_hashtags) const {
    auto check = [](const std::string& path, const char* what) {
        if (!path.empty() && !fs::exists(path))
            throw MissingInput(fmt::format("{} file '{}' does not exist", what, path));
    };
    if (need_corpus && corpus.empty()) throw MissingInput("no corpus given (--corpus)");
    if (need_seed_hashtags && seed_hashtags.empty()) throw MissingInput("no seed hashtag file given (--seed-hashtags)");
    check(corpus, "corpus");
    check(lexicon, "lexicon");
    check(boosters, "boosters");
    check(negators, "negators");
    check(seed_hashtags, "seed hashtag");
    check(labels, "labels");
    check(external_scores, "external scores");
    check(embeddings, "embeddings");
    check(followers, "followers");

    if (filter.min_tweets < 1 || filter.min_users < 1) throw InvalidArgument("min_tweets and min_users must be >= 1");
    if (top_k < 1) throw InvalidArgument("top_k must be >= 1");
    if (!(tau >= 0.0)) throw InvalidArgument("tau must be non-negative");
    if (thresholds) thresholds->validate();
    if (out.empty()) throw InvalidArgument("output directory is empty");
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out))
        throw InvalidArgument(fmt::format("output directory '{}' is not writable", out));
}

// ─── I/O helpers ──────────────────────────────────────────────

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw MissingInput(fmt::format("cannot open '{}'", path));
    return f;
}

std::string artifact(const PipelineConfig& c, const char* name) { return (fs::path(c.out) / name).string(); }

std::ifstream open_artifact(const PipelineConfig& c, const char* name, const char* stage) {
    const auto path = artifact(c, name);
    if (!fs::exists(path))
        throw MissingInput(fmt::format("'{}' not found; run the {} stage first", path, stage));
    return open_in(path);
}

template <typename Writer>
void write_artifact(const PipelineConfig& c, const char* name, Writer&& writer) {
    const auto path = artifact(c, name);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(fmt::format("cannot write '{}'", path));
    writer(f);
    if (!f) throw Error(fmt::format("error while writing '{}'", path));
}

std::vector<Tweet> load_corpus(const PipelineConfig& c, ParseReport* report_out = nullptr) {
    auto in = open_in(c.corpus);
    ParseReport report;
    auto tweets = parse_corpus(in, report, {c.strict});
    if (report.skipped() > 0)
        spdlog::warn("corpus: skipped {} malformed and {} duplicate lines", report.skipped_malformed,
                     report.skipped_duplicate);
    if (report_out) *report_out = report;
    return tweets;
}

Lexicon load_lexicon(const PipelineConfig& c) {
    Lexicon lex = Lexicon::builtin();
    if (!c.lexicon.empty()) {
        auto builtin = lex;
        auto in = open_in(c.lexicon);
        lex = Lexicon::load(in);
        lex.boosters = builtin.boosters;
        lex.negators = builtin.negators;
    }
    if (!c.boosters.empty()) {
        auto in = open_in(c.boosters);
        lex.load_boosters(in);
    }
    if (!c.negators.empty()) {
        auto in = open_in(c.negators);
        lex.load_negators(in);
    }
    return lex;
}

InteractionGraph load_graph_from_corpus(const PipelineConfig& c, const std::vector<Tweet>& tweets,
                                        std::vector<Conversation>* conversations_out = nullptr) {
    auto in = open_artifact(c, artifacts::sentiment, "sentiment");
    auto sentiments = read_sentiments(in);
    auto conversations = assemble_conversations(tweets);
    GraphBuildSummary summary;
    auto graph = build_graph(conversations, tweets, combined_scores(sentiments), {c.include_quotes}, &summary);
    if (summary.unresolved_references > 0)
        spdlog::info("graph: {} references point outside the corpus and were dropped", summary.unresolved_references);
    if (summary.missing_sentiment > 0)
        spdlog::warn("graph: {} tweets have no sentiment record (scored 0)", summary.missing_sentiment);
    if (conversations_out) *conversations_out = std::move(conversations);
    return graph;
}

StanceMap load_stance_map(const PipelineConfig& c) {
    auto in = open_artifact(c, artifacts::stances, "stance");
    StanceMap out;
    for (const auto& s : read_stances_csv(in)) out[s.user_id] = s.label;
    return out;
}

std::string fixed3(const std::optional<double>& v) { return v ? fmt::format("{:.3f}", *v) : "undefined"; }

} // namespace

FollowerMap read_followers(std::istream& in) {
    FollowerMap out;
    for (const auto& row : csv::read_table(in, {"influencer_id", "follower_id"})) out[row[0]].push_back(row[1]);
    return out;
}

// ─── Stages ───────────────────────────────────────────────────

void run_synth(PipelineConfig& c) {
    c.validate(false, false);
    SynthConfig sc = c.synth.value_or(SynthConfig{});
    if (!c.synth) sc.rng_seed = c.seed;
    spdlog::info("synth: generating {} users over {} days (seed {})", sc.n_users, sc.days, sc.rng_seed);
    auto corpus = generate_corpus(sc);
    write_synth_corpus(corpus, c.out);
    spdlog::info("synth: wrote {} tweets, {} planted conversations", corpus.tweets.size(), corpus.manifest.size());
}

void run_ingest(const PipelineConfig& c) {
    c.validate(true, false);
    ParseReport report;
    auto tweets = load_corpus(c, &report);
    auto conversations = assemble_conversations(tweets);
    auto filtered = filter_conversations(conversations, c.filter);
    auto influencers = rank_influencers(tweets, c.top_k);

    write_artifact(c, artifacts::conversations, [&](std::ostream& o) { write_conversation_index(o, conversations); });
    write_artifact(c, artifacts::conversations_filtered, [&](std::ostream& o) { write_conversation_index(o, filtered); });
    write_artifact(c, artifacts::influencers, [&](std::ostream& o) { write_influencers(o, influencers); });
    write_artifact(c, artifacts::ingest_report, [&](std::ostream& o) {
        json j = json::object();
        j["lines"] = report.lines;
        j["tweets"] = report.parsed;
        j["skipped_malformed"] = report.skipped_malformed;
        j["skipped_duplicate"] = report.skipped_duplicate;
        j["messages"] = report.messages;
        j["conversations"] = conversations.size();
        j["conversations_kept"] = filtered.size();
        j["min_tweets"] = c.filter.min_tweets;
        j["min_users"] = c.filter.min_users;
        o << j.dump(2) << '\n';
    });
    spdlog::info("ingest: {} tweets, {} conversations, {} pass the engagement filter", tweets.size(),
                 conversations.size(), filtered.size());
}

void run_sentiment(const PipelineConfig& c) {
    c.validate(true, false);
    auto tweets = load_corpus(c);
    auto lexicon = load_lexicon(c);
    auto records = score_corpus(tweets, lexicon);
    MergeReport merge;
    if (!c.external_scores.empty()) {
        auto in = open_in(c.external_scores);
        auto external = read_external_scores(in);
        records = merge_external_scores(std::move(records), external, merge);
        for (const auto& m : merge.messages) spdlog::warn("sentiment: {}", m);
    }
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& r : records) ++counts[static_cast<int>(classify_valence(r.combined, c.tau))];

    write_artifact(c, artifacts::sentiment, [&](std::ostream& o) { write_sentiments(o, records); });
    write_artifact(c, artifacts::sentiment_report, [&](std::ostream& o) {
        json j = json::object();
        j["tweets"] = records.size();
        j["negative"] = counts[0];
        j["neutral"] = counts[1];
        j["positive"] = counts[2];
        j["tau"] = c.tau;
        j["external_merged"] = merge.merged;
        j["external_unknown_tweets"] = merge.unknown_tweets;
        j["external_range_errors"] = merge.range_errors;
        o << j.dump(2) << '\n';
    });
    spdlog::info("sentiment: scored {} tweets ({} negative)", records.size(), counts[0]);
}

void run_stance(const PipelineConfig& c) {
    c.validate(true, true);
    auto tweets = load_corpus(c);
    auto graph = load_graph_from_corpus(c, tweets);

    SeedHashtags seeds;
    {
        auto in = open_in(c.seed_hashtags);
        seeds = read_seed_hashtags(in);
    }
    auto bipartite = build_bipartite(tweets, seeds);
    for (const auto& w : bipartite.warnings) spdlog::warn("stance: {}", w);
    auto propagation = propagate(bipartite, c.propagation);
    if (!propagation.converged)
        spdlog::warn("stance: label propagation stopped after {} iterations without converging", propagation.iterations);
    auto seed_users = select_seed_users(propagation.p_anti, seed_usage(bipartite), c.seed_selection);

    const std::vector<std::string> users(graph.nodes().begin(), graph.nodes().end());
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < users.size(); ++i) index[users[i]] = i;

    std::map<std::string, std::string> text_by_user;
    for (const auto& u : users) text_by_user[u];
    for (const auto& t : tweets) {
        auto it = text_by_user.find(t.author_id);
        if (it == text_by_user.end()) continue;
        if (!it->second.empty()) it->second.push_back(' ');
        it->second += t.text;
    }
    FeatureMap external;
    if (!c.embeddings.empty()) {
        auto in = open_in(c.embeddings);
        external = read_embeddings(in);
    }
    auto features = extract_features(text_by_user, c.feature_dim, external);
    const auto x = feature_matrix(users, features, c.feature_dim);
    const auto a_hat = normalize_adjacency(graph, users);

    std::vector<LabeledNode> train;
    std::set<std::string> seed_ids;
    for (const auto& s : seed_users) {
        auto it = index.find(s.user_id);
        if (it == index.end()) continue;
        train.push_back({it->second, s.label == Stance::anti ? 1 : 0});
        seed_ids.insert(s.user_id);
    }
    spdlog::info("stance: {} seed users from {} hashtag users; training on {} graph users", train.size(),
                 bipartite.users.size(), users.size());

    GcnTrainOptions options = c.gcn;
    options.rng_seed = c.seed;
    auto trained = gcn_train(a_hat, x, train, options);
    const auto probs = gcn_forward(a_hat, x, trained.model);

    std::map<std::string, double> p_anti;
    for (std::size_t i = 0; i < users.size(); ++i) p_anti[users[i]] = probs(static_cast<Eigen::Index>(i), 1);

    // Reference labels: hashtag seeds, overridden by an explicit label file.
    std::map<std::string, Stance> reference;
    for (const auto& s : seed_users) reference[s.user_id] = s.label;
    if (!c.labels.empty()) {
        auto in = open_in(c.labels);
        for (const auto& [u, s] : read_label_csv(in, "stance"))
            if (s != Stance::undecided) reference[u] = s;
    }

    json calibration_json = json::object();
    ThresholdPair thresholds;
    if (c.thresholds) {
        thresholds = *c.thresholds;
        calibration_json["source"] = "manual";
    } else {
        std::vector<LabeledProbability> labeled;
        for (const auto& [u, s] : reference) {
            auto it = p_anti.find(u);
            if (it != p_anti.end()) labeled.push_back({it->second, s});
        }
        auto calibration = calibrate_thresholds(labeled, c.grid_step);
        thresholds = calibration.thresholds;
        calibration_json["source"] = "grid_search";
        calibration_json["macro_f1"] = calibration.macro_f1;
        calibration_json["reference_users"] = labeled.size();
    }
    calibration_json["t1"] = thresholds.t1;
    calibration_json["t2"] = thresholds.t2;
    calibration_json["seed_users"] = train.size();
    calibration_json["propagation_iterations"] = propagation.iterations;
    calibration_json["propagation_converged"] = propagation.converged;
    calibration_json["best_epoch"] = trained.best_epoch;

    auto assignments = assign_stances(p_anti, thresholds);
    for (auto& a : assignments)
        if (seed_ids.count(a.user_id)) a.source = StanceSource::seed;

    write_artifact(c, artifacts::graph, [&](std::ostream& o) { write_graph_csv(o, graph); });
    write_artifact(c, artifacts::stances, [&](std::ostream& o) { write_stances_csv(o, assignments); });
    write_artifact(c, artifacts::model, [&](std::ostream& o) { write_model(o, trained.model); });
    write_artifact(c, artifacts::loss_trace, [&](std::ostream& o) {
        o << "epoch,train_loss,validation_loss\n";
        for (const auto& e : trained.trace)
            o << e.epoch << ',' << format_double(e.train_loss) << ',' << format_double(e.validation_loss) << '\n';
    });
    write_artifact(c, artifacts::calibration, [&](std::ostream& o) { o << calibration_json.dump(2) << '\n'; });
    spdlog::info("stance: thresholds ({}, {})", thresholds.t1, thresholds.t2);
}

void run_polarize(const PipelineConfig& c) {
    c.validate(false, false);
    InteractionGraph graph;
    {
        auto in = open_artifact(c, artifacts::graph, "stance");
        graph = read_graph_csv(in);
    }
    const auto stances = load_stance_map(c);
    const EiOptions options{c.weight_mode, c.tau};
    const Direction pro_anti{Stance::pro, Stance::anti};
    const Direction anti_pro{Stance::anti, Stance::pro};

    std::vector<PolarizationScore> timeline;
    const auto days = graph.days();
    if (!days.empty()) {
        auto a = daily_timeline(graph, stances, pro_anti, options, days.front(), days.back());
        auto b = daily_timeline(graph, stances, anti_pro, options, days.front(), days.back());
        for (std::size_t i = 0; i < a.size(); ++i) {
            timeline.push_back(a[i]);
            timeline.push_back(b[i]);
        }
    }
    auto [whole_ab, whole_ba] = both_directions(graph, stances, pro_anti, options);

    write_artifact(c, artifacts::timeline, [&](std::ostream& o) { write_timeline_csv(o, timeline); });
    write_artifact(c, artifacts::polarization, [&](std::ostream& o) {
        json j = json::object();
        j["weight_mode"] = to_string(c.weight_mode);
        j["tau"] = c.tau;
        j["scores"] = json::array();
        for (const auto* s : {&whole_ab, &whole_ba}) {
            json row = json::object();
            row["direction"] = to_string(s->direction);
            row["value"] = s->value ? json(*s->value) : json(nullptr);
            row["ext_weight"] = s->ext_weight;
            row["int_weight"] = s->int_weight;
            j["scores"].push_back(std::move(row));
        }
        o << j.dump(2) << '\n';
    });
    spdlog::info("polarize: {} timeline rows", timeline.size());
}

void run_counterfactual(const PipelineConfig& c) {
    c.validate(true, false);
    auto tweets = load_corpus(c);
    std::vector<Conversation> conversations;
    auto graph = load_graph_from_corpus(c, tweets, &conversations);
    const auto stances = load_stance_map(c);
    std::vector<InfluencerRecord> influencers;
    {
        auto in = open_artifact(c, artifacts::influencers, "ingest");
        influencers = read_influencers(in);
    }
    FollowerMap followers;
    if (!c.followers.empty()) {
        auto in = open_in(c.followers);
        followers = read_followers(in);
    }
    const FollowerMap* follower_ptr = c.followers.empty() ? nullptr : &followers;

    std::set<std::string> ranked;
    for (const auto& r : influencers) ranked.insert(r.user_id);
    std::vector<Conversation> work;
    for (auto& conv : filter_conversations(conversations, c.filter))
        if (ranked.count(conv.initiator_id)) work.push_back(std::move(conv));

    CounterfactualConfig config{{c.weight_mode, c.tau}, c.scope, c.removal_mode};
    const std::vector<Direction> directions = {{Stance::pro, Stance::anti}, {Stance::anti, Stance::pro}};
    auto batch = batch_effects(graph, stances, work, influencers, directions, config, follower_ptr);

    std::vector<ConversationDetail> details;
    std::set<std::string> seen;
    for (const auto& r : batch.results) {
        if (!seen.insert(r.conversation_id).second) continue;
        auto it = std::find_if(work.begin(), work.end(),
                               [&](const Conversation& w) { return w.conversation_id == r.conversation_id; });
        details.push_back(conversation_detail(graph, stances, *it, follower_ptr));
    }

    write_artifact(c, artifacts::counterfactual, [&](std::ostream& o) { write_results_csv(o, batch.results); });
    write_artifact(c, artifacts::details, [&](std::ostream& o) { write_details_csv(o, details); });
    write_artifact(c, artifacts::counterfactual_errors, [&](std::ostream& o) {
        json j = json::array();
        for (const auto& e : batch.errors) j.push_back({{"conversation_id", e.conversation_id}, {"message", e.message}});
        o << j.dump(2) << '\n';
    });
    std::size_t flagged = 0;
    for (const auto& r : batch.results) flagged += r.undecided_influencer;
    if (flagged) spdlog::warn("counterfactual: {} results come from influencers with an undecided stance", flagged);
    spdlog::info("counterfactual: {} conversations, {} results, {} errors", work.size(), batch.results.size(),
                 batch.errors.size());
}

// ─── Report ───────────────────────────────────────────────────

std::string render_report_markdown(std::span<const CounterfactualResult> results,
                                   std::span<const InfluencerImpactSummary> influencers,
                                   std::span<const StanceGroupSummary> groups) {
    const std::vector<Direction> order = {{Stance::pro, Stance::anti}, {Stance::anti, Stance::pro}};
    auto cell = [](const std::vector<DirectionTally>& tallies, Direction d, bool group) -> std::string {
        for (const auto& t : tallies)
            if (t.direction == d) return group ? render_group_cell(t) : render_influencer_cell(t);
        return "-";
    };

    std::ostringstream md;
    md << "# Influencer conversation effects\n\n";
    md << "## Impact by influencer\n\n";
    md << "| Influencer | Stance | Conversations | Change (pro->anti) | Change (anti->pro) |\n";
    md << "|---|---|---:|---:|---:|\n";
    for (const auto& s : influencers)
        md << fmt::format("| {} | {} | {} | {} | {} |\n", s.influencer_id, to_string(s.stance), s.n_conversations,
                          cell(s.directions, order[0], false), cell(s.directions, order[1], false));

    md << "\n## Impact by initiator stance\n\n";
    md << "| Stance | Conversations | Change (pro->anti) | Change (anti->pro) |\n";
    md << "|---|---:|---:|---:|\n";
    for (const auto& g : groups)
        md << fmt::format("| {} | {} | {} | {} |\n", to_string(g.stance), g.n_conversations,
                          cell(g.directions, order[0], true), cell(g.directions, order[1], true));

    md << "\n## Single-conversation effects\n\n";
    md << "| Conversation | Influencer | Stance | Day | Direction | Score without | Score with | Delta | Change |\n";
    md << "|---|---|---|---|---|---:|---:|---:|---|\n";
    for (const auto& r : results)
        md << fmt::format("| {} | {} | {} | {} | {} | {} | {} | {} | {} |\n", r.conversation_id, r.influencer_id,
                          to_string(r.influencer_stance), format_date(r.day), to_string(r.direction),
                          fixed3(r.score_without), fixed3(r.score_with), fixed3(r.delta),
                          to_string(r.classification));
    return md.str();
}

std::string render_timeline_svg(std::span<const PolarizationScore> timeline) {
    constexpr double width = 720, height = 360, left = 60, right = 150, top = 30, bottom = 50;
    std::vector<Date> days;
    for (const auto& s : timeline)
        if (s.day && std::find(days.begin(), days.end(), *s.day) == days.end()) days.push_back(*s.day);
    std::sort(days.begin(), days.end());

    const double plot_w = width - left - right, plot_h = height - top - bottom;
    auto x_of = [&](Date d) {
        if (days.size() < 2) return left + plot_w / 2;
        const auto i = static_cast<double>(std::find(days.begin(), days.end(), d) - days.begin());
        return left + plot_w * i / static_cast<double>(days.size() - 1);
    };
    auto y_of = [&](double v) { return top + plot_h * (1.0 - (v + 1.0) / 2.0); };

    std::ostringstream svg;
    svg << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
                       "font-family=\"sans-serif\" font-size=\"11\">\n",
                       width, height);
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << fmt::format("<text x=\"{}\" y=\"18\" font-size=\"13\">Daily E/I polarization</text>\n", left);
    for (double v : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        svg << fmt::format("<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"#ddd\"/>\n", left, y_of(v),
                           left + plot_w, y_of(v));
        svg << fmt::format("<text x=\"{}\" y=\"{:.2f}\" text-anchor=\"end\">{:.1f}</text>\n", left - 6, y_of(v) + 4, v);
    }
    for (const auto& d : days)
        svg << fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x_of(d),
                           height - bottom + 16, format_date(d).substr(5));

    const std::vector<std::pair<Direction, const char*>> series = {{{Stance::pro, Stance::anti}, "#1f77b4"},
                                                                   {{Stance::anti, Stance::pro}, "#d62728"}};
    double legend_y = top + 10;
    for (const auto& [dir, color] : series) {
        // Undefined days break the line instead of being bridged.
        std::vector<std::vector<std::pair<double, double>>> runs(1);
        for (const auto& d : days) {
            auto it = std::find_if(timeline.begin(), timeline.end(),
                                   [&](const PolarizationScore& s) { return s.direction == dir && s.day == d; });
            if (it == timeline.end() || !it->value) {
                if (!runs.back().empty()) runs.emplace_back();
                continue;
            }
            runs.back().emplace_back(x_of(d), y_of(*it->value));
        }
        for (const auto& run : runs) {
            if (run.empty()) continue;
            std::string points;
            for (const auto& [x, y] : run) points += fmt::format("{:.2f},{:.2f} ", x, y);
            points.pop_back();
            svg << fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", color, points);
            for (const auto& [x, y] : run)
                svg << fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", x, y, color);
        }
        svg << fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                           width - right + 15, legend_y, width - right + 35, legend_y, color);
        svg << fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", width - right + 40, legend_y + 4, to_string(dir));
        legend_y += 18;
    }
    svg << "</svg>\n";
    return svg.str();
}

void run_report(const PipelineConfig& c) {
    c.validate(false, false);
    std::vector<CounterfactualResult> results;
    {
        auto in = open_artifact(c, artifacts::counterfactual, "counterfactual");
        results = read_results_csv(in);
    }
    auto influencers = summarize_influencer(results);
    auto groups = summarize_stance_group(results);

    write_artifact(c, artifacts::influencer_summary, [&](std::ostream& o) { write_influencer_summary_csv(o, influencers); });
    write_artifact(c, artifacts::stance_summary, [&](std::ostream& o) { write_stance_summary_csv(o, groups); });
    write_artifact(c, artifacts::report, [&](std::ostream& o) { o << render_report_markdown(results, influencers, groups); });

    if (fs::exists(artifact(c, artifacts::timeline))) {
        auto in = open_in(artifact(c, artifacts::timeline));
        auto timeline = read_timeline_csv(in);
        write_artifact(c, artifacts::timeline_svg, [&](std::ostream& o) { o << render_timeline_svg(timeline); });
    }
    spdlog::info("report: {} influencers, {} stance groups", influencers.size(), groups.size());
}

void run_pipeline(PipelineConfig config) {
    if (config.corpus.empty()) {
        run_synth(config);
        config.corpus = artifact(config, artifacts::tweets);
        if (config.seed_hashtags.empty()) config.seed_hashtags = artifact(config, artifacts::seed_hashtags);
        if (config.labels.empty()) config.labels = artifact(config, artifacts::labeled_users);
    }
    run_ingest(config);
    run_sentiment(config);
    run_stance(config);
    run_polarize(config);
    run_counterfactual(config);
    run_report(config);
}

} // namespace polarlens
