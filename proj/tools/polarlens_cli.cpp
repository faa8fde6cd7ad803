#include "polarlens/pipeline.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

namespace {

using namespace polarlens;

constexpr int kExitMissingInput = 2;
constexpr int kExitValidation = 3;
constexpr int kExitInternal = 4;

const std::vector<std::pair<std::string, std::string>> kCommands = {
    {"synth", "generate a synthetic corpus with ground truth"},
    {"ingest", "parse a corpus, assemble conversations, rank influencers"},
    {"sentiment", "score every tweet"},
    {"stance", "propagate seed hashtags, train the GCN, assign stances"},
    {"polarize", "compute E/I polarization scores and the daily timeline"},
    {"counterfactual", "measure single-conversation effects of influencers"},
    {"report", "aggregate effects into summary tables and charts"},
    {"pipeline", "run every stage in order"},
};

std::string usage() {
    std::string s = "usage: polarlens <command> [options]\n\ncommands:\n";
    for (const auto& [name, help] : kCommands) s += fmt::format("  {:<15} {}\n", name, help);
    s += "\nrun 'polarlens <command> --help' for command options\n";
    return s;
}

void configure_logging() {
    auto logger = spdlog::stderr_logger_st("polarlens");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("POLARLENS_LOG")) {
        auto level = spdlog::level::from_str(env);
        if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
    }
}

int fail(int code, const std::string& kind, const std::string& message) {
    nlohmann::json j = {{"error", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << j.dump() << '\n';
    return code;
}

struct Flags {
    std::string config;
    std::optional<std::string> out, corpus, lexicon, boosters, negators, seed_hashtags, labels, external_scores,
        embeddings, followers, weight_mode, removal_mode, scope;
    std::optional<std::uint64_t> seed;
    std::optional<int> min_tweets, min_users;
    std::optional<std::size_t> top_k, n_users;
    std::optional<double> tau, t1, t2;
    bool strict = false;
    std::vector<std::string> set;
};

void add_flags(CLI::App& app, Flags& f) {
    app.add_option("--config", f.config, "JSON configuration file");
    app.add_option("--out", f.out, "output directory");
    app.add_option("--corpus", f.corpus, "tweets in JSON Lines format");
    app.add_option("--lexicon", f.lexicon, "valence lexicon (token<TAB>score)");
    app.add_option("--boosters", f.boosters, "booster word list");
    app.add_option("--negators", f.negators, "negator word list");
    app.add_option("--seed-hashtags", f.seed_hashtags, "CSV hashtag,side");
    app.add_option("--labels", f.labels, "CSV user_id,stance for threshold calibration");
    app.add_option("--external-scores", f.external_scores, "JSONL external sentiment scores");
    app.add_option("--embeddings", f.embeddings, "JSONL user embeddings");
    app.add_option("--followers", f.followers, "CSV influencer_id,follower_id");
    app.add_option("--seed", f.seed, "random seed");
    app.add_option("--weight-mode", f.weight_mode, "count_all | count_negative | sentiment_mass");
    app.add_option("--removal-mode", f.removal_mode, "edges | nodes");
    app.add_option("--scope", f.scope, "subgraph | daily");
    app.add_option("--min-tweets", f.min_tweets, "engagement filter: minimum tweets per conversation");
    app.add_option("--min-users", f.min_users, "engagement filter: minimum participants per conversation");
    app.add_option("--top-k", f.top_k, "number of influencers");
    app.add_option("--tau", f.tau, "sentiment neutrality band");
    app.add_option("--t1", f.t1, "manual lower stance threshold");
    app.add_option("--t2", f.t2, "manual upper stance threshold");
    app.add_option("--n-users", f.n_users, "synth: number of users");
    app.add_flag("--strict", f.strict, "fail on the first malformed corpus line");
    app.add_option("--set", f.set, "override any config key, KEY=VALUE (value parsed as JSON when possible)");
}

PipelineConfig resolve(const Flags& f) {
    PipelineConfig c;
    nlohmann::json config_json = nlohmann::json::object();
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw MissingInput(fmt::format("cannot open config '{}'", f.config));
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw InvalidArgument(fmt::format("config '{}': {}", f.config, e.what()));
        }
        if (!j.is_object()) throw InvalidArgument(fmt::format("config '{}' must hold a JSON object", f.config));
        config_json = std::move(j);
    }
    for (const auto& kv : f.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw InvalidArgument(fmt::format("--set expects KEY=VALUE, got '{}'", kv));
        const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
        auto parsed = nlohmann::json::parse(value, nullptr, false);
        config_json[key] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
    }
    if (!config_json.empty()) c = PipelineConfig::from_json(config_json);
    auto set = [](const auto& flag, auto& field) {
        if (flag) field = *flag;
    };
    set(f.out, c.out);
    set(f.corpus, c.corpus);
    set(f.lexicon, c.lexicon);
    set(f.boosters, c.boosters);
    set(f.negators, c.negators);
    set(f.seed_hashtags, c.seed_hashtags);
    set(f.labels, c.labels);
    set(f.external_scores, c.external_scores);
    set(f.embeddings, c.embeddings);
    set(f.followers, c.followers);
    set(f.seed, c.seed);
    set(f.min_tweets, c.filter.min_tweets);
    set(f.min_users, c.filter.min_users);
    set(f.top_k, c.top_k);
    set(f.tau, c.tau);
    if (f.strict) c.strict = true;
    if (f.weight_mode) {
        auto m = parse_weight_mode(*f.weight_mode);
        if (!m) throw InvalidArgument("--weight-mode must be count_all, count_negative or sentiment_mass");
        c.weight_mode = *m;
    }
    if (f.removal_mode) {
        auto m = parse_removal_mode(*f.removal_mode);
        if (!m) throw InvalidArgument("--removal-mode must be edges or nodes");
        c.removal_mode = *m;
    }
    if (f.scope) {
        auto s = parse_scope(*f.scope);
        if (!s) throw InvalidArgument("--scope must be subgraph or daily");
        c.scope = *s;
    }
    if (f.t1 || f.t2) {
        if (!f.t1 || !f.t2) throw InvalidArgument("--t1 and --t2 must be given together");
        c.thresholds = ThresholdPair{*f.t1, *f.t2};
    }
    if (f.n_users) {
        if (!c.synth) {
            c.synth = SynthConfig{};
            c.synth->rng_seed = c.seed;
        }
        c.synth->n_users = *f.n_users;
    }
    if (f.seed && c.synth) c.synth->rng_seed = *f.seed;
    return c;
}

int dispatch(const std::string& command, PipelineConfig& c) {
    if (command == "synth") run_synth(c);
    else if (command == "ingest") run_ingest(c);
    else if (command == "sentiment") run_sentiment(c);
    else if (command == "stance") run_stance(c);
    else if (command == "polarize") run_polarize(c);
    else if (command == "counterfactual") run_counterfactual(c);
    else if (command == "report") run_report(c);
    else run_pipeline(c);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << usage();
        return kExitMissingInput;
    }
    const std::string command = argv[1];
    if (command == "--help" || command == "-h" || command == "help") {
        std::cout << usage();
        return 0;
    }
    const bool known = std::any_of(kCommands.begin(), kCommands.end(), [&](const auto& c) { return c.first == command; });
    if (!known) {
        std::cerr << fmt::format("unknown command '{}'\n\n", command) << usage();
        return kExitMissingInput;
    }

    configure_logging();
    CLI::App app{fmt::format("polarlens {}", command), fmt::format("polarlens {}", command)};
    Flags flags;
    add_flags(app, flags);
    try {
        app.parse(argc - 1, argv + 1);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        return fail(kExitValidation, "usage", e.what());
    }

    try {
        auto config = resolve(flags);
        return dispatch(command, config);
    } catch (const MissingInput& e) {
        return fail(kExitMissingInput, "missing_input", e.what());
    } catch (const NotFound& e) {
        return fail(kExitMissingInput, "not_found", e.what());
    } catch (const InvalidArgument& e) {
        return fail(kExitValidation, "invalid_argument", e.what());
    } catch (const RangeError& e) {
        return fail(kExitValidation, "range_error", e.what());
    } catch (const ParseError& e) {
        return fail(kExitValidation, "parse_error", e.what());
    } catch (const std::exception& e) {
        return fail(kExitInternal, "internal", e.what());
    }
}
