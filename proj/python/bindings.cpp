#include "polarlens/counterfactual.hpp"
#include "polarlens/pipeline.hpp"
#include "polarlens/polarization.hpp"
#include "polarlens/sentiment.hpp"
#include "polarlens/stance.hpp"
#include "polarlens/synth.hpp"

#include <fmt/format.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace polarlens;

namespace {

Stance stance_arg(const std::string& text) {
    auto s = parse_stance(text);
    if (!s) throw InvalidArgument(fmt::format("unknown stance '{}'", text));
    return *s;
}

Direction direction_arg(const std::string& text) {
    auto d = parse_direction(text);
    if (!d) throw InvalidArgument(fmt::format("unknown direction '{}'", text));
    return *d;
}

WeightMode mode_arg(const std::string& text) {
    auto m = parse_weight_mode(text);
    if (!m) throw InvalidArgument(fmt::format("unknown weight mode '{}'", text));
    return *m;
}

nlohmann::json json_arg(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(e.what());
    }
}

const Lexicon& builtin_lexicon() {
    static const Lexicon lex = Lexicon::builtin();
    return lex;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Native core of polarlens";

    // Translators registered later are tried first, so specific errors map
    // to builtin Python exceptions and everything else to PolarlensError.
    py::register_exception<Error>(m, "PolarlensError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const MissingInput& e) {
            PyErr_SetString(PyExc_FileNotFoundError, e.what());
        } catch (const NotFound& e) {
            PyErr_SetString(PyExc_LookupError, e.what());
        } catch (const InvalidArgument& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const RangeError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const ParseError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def("score_text", [](const std::string& text) { return score_text(text, builtin_lexicon()); },
          py::arg("text"), "Sentiment of a text in (-1, 1) under the built-in lexicon.");

    m.def(
        "ei_index",
        [](const std::vector<std::tuple<std::string, std::string, double>>& edges,
           const std::map<std::string, std::string>& stances, const std::string& direction, const std::string& mode,
           double tau) -> std::optional<double> {
            StanceMap st;
            for (const auto& [user, s] : stances) st[user] = stance_arg(s);
            std::vector<InteractionEdge> list;
            const auto at = *parse_timestamp("2000-01-01T00:00:00Z");
            for (std::size_t i = 0; i < edges.size(); ++i) {
                const auto& [a, b, s] = edges[i];
                list.push_back({a, b, InteractionKind::reply, std::to_string(i), "c", at, s});
            }
            return ei_index(InteractionGraph({}, std::move(list)), st, direction_arg(direction), {mode_arg(mode), tau})
                .value;
        },
        py::arg("edges"), py::arg("stances"), py::arg("direction") = "pro->anti", py::arg("mode") = "count_negative",
        py::arg("tau") = 0.05, "E/I index over (author, target, sentiment) edges; None when undefined.");

    m.def(
        "compare_scores",
        [](std::optional<double> with, std::optional<double> without) {
            auto r = compare_scores(with, without);
            return py::make_tuple(r.delta, std::string(to_string(r.classification)));
        },
        py::arg("with_score"), py::arg("without_score"), "(delta, classification) for a score pair.");

    m.def(
        "classify_stance",
        [](double p, double t1, double t2) { return std::string(to_string(classify_stance(p, {t1, t2}))); },
        py::arg("p_anti"), py::arg("t1"), py::arg("t2"));

    m.def(
        "calibrate_thresholds",
        [](const std::vector<std::pair<double, std::string>>& labeled, double step) {
            std::vector<LabeledProbability> list;
            for (const auto& [p, s] : labeled) list.push_back({p, stance_arg(s)});
            auto c = calibrate_thresholds(list, step);
            return py::make_tuple(c.thresholds.t1, c.thresholds.t2, c.macro_f1);
        },
        py::arg("labeled"), py::arg("step") = 0.05, "(t1, t2, macro_f1) maximizing macro F1 on the grid.");

    m.def(
        "propagate",
        [](const std::vector<std::pair<std::string, std::vector<std::string>>>& user_hashtags,
           const std::map<std::string, double>& seeds, double tol, std::size_t max_iter) {
            std::vector<Tweet> tweets;
            for (std::size_t i = 0; i < user_hashtags.size(); ++i) {
                Tweet t;
                t.id = std::to_string(i);
                t.author_id = user_hashtags[i].first;
                t.conversation_id = t.id;
                t.hashtags = normalize_hashtags(user_hashtags[i].second);
                tweets.push_back(std::move(t));
            }
            SeedHashtags seed_map(seeds.begin(), seeds.end());
            auto r = propagate(build_bipartite(tweets, seed_map), {1.0, tol, max_iter});
            return py::make_tuple(r.p_anti, r.iterations, r.converged);
        },
        py::arg("user_hashtags"), py::arg("seeds"), py::arg("tol") = 1e-6, py::arg("max_iter") = 1000,
        "(p_anti per user, iterations, converged) from one (user, hashtags) entry per tweet.");

    m.def(
        "generate_corpus",
        [](const std::string& config_json, const std::string& out_dir) {
            auto corpus = generate_corpus(synth_config_from_json(json_arg(config_json)));
            write_synth_corpus(corpus, out_dir);
            return corpus.tweets.size();
        },
        py::arg("config_json"), py::arg("out_dir"), "Writes a synthetic corpus; returns the tweet count.");

    m.def(
        "run_pipeline",
        [](const std::string& config_json) {
            auto config = PipelineConfig::from_json(json_arg(config_json));
            py::gil_scoped_release release;
            run_pipeline(config);
        },
        py::arg("config_json"), "Runs every stage with a JSON pipeline config.");
}
