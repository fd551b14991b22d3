#include <atomic>
#include <fstream>
#include <numeric>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kundoku/automaton.hpp"
#include "kundoku/combinatorics.hpp"
#include "kundoku/corpus.hpp"
#include "kundoku/errors.hpp"
#include "kundoku/markgen.hpp"
#include "kundoku/metrics.hpp"
#include "kundoku/model.hpp"
#include "kundoku/unicode.hpp"

using namespace kundoku;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitDomain = 2;
constexpr int kExitUsage = 64;

Corpus load(const std::string& path, const std::string& format_name, bool lenient) {
    CorpusFormat format =
        format_name.empty() ? format_from_path(path) : format_from_name(format_name);
    LoadReport report;
    Corpus corpus = load_corpus(path, format, lenient, &report);
    for (const auto& d : report.diagnostics) std::cerr << "skipped " << d << "\n";
    return corpus;
}

Permutation parse_perm(const std::string& text) {
    Permutation perm;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        perm.push_back(std::stoi(item));
    }
    if (perm.empty()) throw ParseError("empty permutation '" + text + "'");
    return perm;
}

// Order-preserving parallel map; exceptions surface as error strings so a
// bad sentence cannot tear down the pool.
template <typename T, typename F>
auto parallel_map(const std::vector<T>& items, int jobs, F fn)
    -> std::vector<decltype(fn(items[0]))> {
    std::vector<decltype(fn(items[0]))> out(items.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < items.size(); ++i) out[i] = fn(items[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++) out[i] = fn(items[i]);
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

std::string two_decimals(double v) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << v;
    return os.str();
}

json json_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return json::parse(in);
}

struct SentenceRun {
    bool accepted = false;
    std::string reason;
    Permutation permutation;
    std::string reading, rendered;
    bool ambiguous = false;
    json trace;
};

SentenceRun run_one(const AnnotatedSentence& s, bool strict, bool want_trace) {
    RunOptions opt;
    opt.strict = strict;
    opt.want_trace = want_trace;
    SentenceRun r;
    try {
        auto result = run(s, opt);
        r.accepted = result.accepted;
        r.reason = result.reason;
        if (result.accepted) {
            r.permutation = *result.permutation;
            r.reading = result.ordered->reading();
            r.rendered = result.ordered->rendered();
            r.ambiguous = result.ambiguous.value_or(false);
        }
        if (want_trace && result.trace)
            r.trace = trace_to_json(*result.trace, flatten_input(s));
    } catch (const std::exception& e) {
        r.accepted = false;
        r.reason = e.what();
    }
    return r;
}

std::vector<EvalPair> eval_pairs_from_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::vector<EvalPair> pairs;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            EvalPair p;
            p.id = j.value("id", "line-" + std::to_string(line_number));
            if (j.contains("prediction")) p.prediction = j["prediction"].get<std::string>();
            if (j.contains("reference")) p.reference = j["reference"].get<std::string>();
            if (j.contains("pred_order"))
                p.pred_order = j["pred_order"].get<Permutation>();
            if (j.contains("gold_order"))
                p.gold_order = j["gold_order"].get<Permutation>();
            if (j.contains("annotation"))
                p.annotation = sentence_from_json(j["annotation"]);
            pairs.push_back(std::move(p));
        } catch (const std::exception& e) {
            throw ParseError(path + ":" + std::to_string(line_number) + ": " + e.what());
        }
    }
    return pairs;
}

std::vector<std::string> lines_of(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.push_back(line);
    }
    return out;
}

// ---- subcommand bodies ----------------------------------------------------

int cmd_validate(const std::string& in, const std::string& format, bool lenient,
                 bool strict, int jobs, bool as_json) {
    Corpus corpus = load(in, format, lenient);
    auto results = parallel_map(corpus.sentences, jobs, [&](const AnnotatedSentence& s) {
        return run_one(s, strict, false);
    });
    int accepted = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const auto& s = corpus.sentences[i];
        if (r.accepted) ++accepted;
        if (as_json) {
            json j = {{"id", s.id}, {"accepted", r.accepted}};
            if (!r.accepted) j["reason"] = r.reason;
            if (strict && r.accepted) j["ambiguous"] = r.ambiguous;
            std::cout << j.dump() << "\n";
        } else if (r.accepted) {
            std::cout << s.id << "\tACCEPT\n";
        } else {
            std::cout << s.id << "\tREJECT\t" << r.reason << "\n";
        }
    }
    double rate = results.empty() ? 0.0 : 100.0 * accepted / results.size();
    if (as_json)
        std::cout << json{{"pass_rate", rate}}.dump() << "\n";
    else
        std::cout << "pass_rate " << two_decimals(rate) << "\n";
    return accepted == static_cast<int>(results.size()) && !results.empty() ? kExitOk
                                                                            : kExitDomain;
}

int cmd_transduce(const std::string& in, const std::string& format, bool lenient,
                  bool strict, bool want_trace, bool rendered, int jobs, bool as_json) {
    Corpus corpus = load(in, format, lenient);
    auto results = parallel_map(corpus.sentences, jobs, [&](const AnnotatedSentence& s) {
        return run_one(s, strict, want_trace);
    });
    bool any_rejected = false;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const auto& s = corpus.sentences[i];
        if (!r.accepted) {
            any_rejected = true;
            std::cerr << s.id << ": " << r.reason << "\n";
            if (as_json)
                std::cout << json{{"id", s.id}, {"accepted", false}, {"reason", r.reason}}
                                 .dump()
                          << "\n";
            continue;
        }
        if (as_json) {
            json j = {{"id", s.id},
                      {"accepted", true},
                      {"permutation", r.permutation},
                      {"reading", r.reading},
                      {"rendered", r.rendered}};
            if (want_trace) j["trace"] = r.trace;
            std::cout << j.dump() << "\n";
        } else {
            std::cout << (rendered ? r.rendered : r.reading) << "\n";
        }
    }
    return any_rejected ? kExitDomain : kExitOk;
}

int cmd_annotate(const std::string& in, const std::string& dict_path,
                 const std::string& pos_path, const std::string& out_path, bool lenient,
                 bool as_json) {
    (void)as_json;  // output is corpus JSONL either way
    Corpus corpus = load(in, "tsv", lenient);
    KanaDictionary dict;
    if (!dict_path.empty()) dict = KanaDictionary::from_json(json_from_file(dict_path));

    // Optional POS spans, one JSONL record per input line:
    // {"spans": [[begin, end, "TAG"], ...]}.
    std::vector<std::vector<PosSpan>> all_spans;
    if (!pos_path.empty()) {
        for (const auto& line : lines_of(pos_path)) {
            std::vector<PosSpan> spans;
            if (!line.empty())
                for (const auto& sp : json::parse(line).at("spans"))
                    spans.push_back(
                        {sp.at(0).get<int>(), sp.at(1).get<int>(), sp.at(2).get<std::string>()});
            all_spans.push_back(std::move(spans));
        }
        if (all_spans.size() != corpus.sentences.size())
            throw ParseError("POS span count " + std::to_string(all_spans.size()) +
                             " does not match sentence count " +
                             std::to_string(corpus.sentences.size()));
    }

    std::ofstream out_file;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
        out_file.open(out_path);
        if (!out_file) throw IoError("cannot open '" + out_path + "' for writing");
        out = &out_file;
    }

    for (std::size_t idx = 0; idx < corpus.sentences.size(); ++idx) {
        AnnotatedSentence& s = corpus.sentences[idx];
        if (!s.translation) throw ParseError(s.id + ": missing translation column");
        std::vector<std::string> glyphs;
        for (const auto& c : s.chars) glyphs.push_back(c.glyph);
        Alignment a = align(glyphs, *s.translation, dict);
        for (int u : a.unread) s.chars[u].silent = true;
        // A one-scalar non-kana restoration is a variant form of the source
        // glyph; remember it for rendering.
        auto t_scalars = split_scalars(*s.translation);
        for (const auto& r : a.restored)
            if (r.end - r.begin == 1 && !is_kana(t_scalars[r.begin]))
                for (std::size_t c = 0; c < s.chars.size(); ++c)
                    if (s.chars[c].glyph == r.glyph && s.chars[c].display.empty())
                        s.chars[c].display = t_scalars[r.begin];

        // Reading order over the non-silent characters, compressed to ranks.
        std::vector<int> non_silent;
        for (std::size_t c = 0; c < s.chars.size(); ++c)
            if (!s.chars[c].silent) non_silent.push_back(static_cast<int>(c));
        std::vector<int> rank(s.chars.size(), -1);
        for (std::size_t r = 0; r < non_silent.size(); ++r) rank[non_silent[r]] = static_cast<int>(r);
        Permutation source_order = alignment_permutation(a);
        Permutation compressed;
        for (int src : source_order) compressed.push_back(rank[src]);

        auto marks = generate_marks(static_cast<int>(non_silent.size()), compressed);
        for (std::size_t r = 0; r < non_silent.size(); ++r)
            s.chars[non_silent[r]].marks = marks.marks[r];
        int gid = 0;
        for (auto [ga, gb] : marks.groups) {
            for (int r = ga; r < gb; ++r) s.chars[non_silent[r]].group = gid;
            ++gid;
        }

        if (!all_spans.empty()) {
            auto k = classify_kana(*s.translation, all_spans[idx], a,
                                   static_cast<int>(s.chars.size()));
            for (const auto& w : k.warnings) std::cerr << s.id << ": " << w << "\n";
            for (std::size_t c = 0; c < s.chars.size(); ++c) {
                s.chars[c].okurigana = k.okurigana[c];
                s.chars[c].particle = k.particle[c];
            }
        }
        s.validate();
        *out << sentence_to_json(s).dump() << "\n";
    }
    return kExitOk;
}

int cmd_align(const std::string& source, const std::string& translation,
              const std::string& dict_path, bool as_json) {
    KanaDictionary dict;
    if (!dict_path.empty()) dict = KanaDictionary::from_json(json_from_file(dict_path));
    auto glyphs = split_scalars(source);
    Alignment a = align(glyphs, translation, dict);
    if (as_json) {
        json restored = json::array();
        for (const auto& r : a.restored)
            restored.push_back({{"begin", r.begin}, {"end", r.end}, {"glyph", r.glyph}});
        std::cout << json{{"mapping", a.mapping},
                          {"unread", std::vector<int>(a.unread.begin(), a.unread.end())},
                          {"restored", restored},
                          {"order", alignment_permutation(a)}}
                         .dump()
                  << "\n";
    } else {
        for (const auto& [src, pos] : a.mapping)
            std::cout << src << "\t" << glyphs[src] << "\t" << pos << "\n";
        for (int u : a.unread) std::cout << u << "\t" << glyphs[u] << "\tunread\n";
    }
    return kExitOk;
}

int cmd_expressible(const std::string& perm_text, bool no_groups, bool as_json) {
    Permutation perm = parse_perm(perm_text);
    std::vector<int> sorted(perm.size());
    std::iota(sorted.begin(), sorted.end(), 0);
    validate_permutation(perm, sorted);
    bool ok = is_expressible(perm, !no_groups);
    if (as_json)
        std::cout << json{{"permutation", perm},
                          {"groups", !no_groups},
                          {"expressible", ok}}
                         .dump()
                  << "\n";
    else
        std::cout << (ok ? "expressible" : "inexpressible") << "\n";
    return ok ? kExitOk : kExitDomain;
}

int cmd_count(int n, bool table, bool brute, bool as_json) {
    int from = table ? 1 : n;
    json rows = json::array();
    if (!as_json) {
        std::cout << "n\tcatalan\tstack_of_queues\tfactorial";
        std::cout << (brute ? "\tbrute_stack\tbrute_groups\n" : "\n");
    }
    for (int k = from; k <= n; ++k) {
        mpz_class c = catalan_count(k), q = stack_of_queues_count(k), f = factorial(k);
        if (as_json) {
            json row = {{"n", k},
                        {"catalan", c.get_str()},
                        {"stack_of_queues", q.get_str()},
                        {"gf_series", gf_series_count(k, std::max(64, k + 2)).get_str()},
                        {"factorial", f.get_str()}};
            if (brute && k <= 9) {
                row["brute_stack"] = brute_force_count(k, false).get_str();
                row["brute_groups"] = brute_force_count(k, true).get_str();
            }
            rows.push_back(std::move(row));
        } else {
            std::cout << k << "\t" << c << "\t" << q << "\t" << f;
            if (brute && k <= 9)
                std::cout << "\t" << brute_force_count(k, false) << "\t"
                          << brute_force_count(k, true);
            std::cout << "\n";
        }
    }
    if (as_json) std::cout << rows.dump() << "\n";
    return kExitOk;
}

int cmd_enumerate(int n, bool no_groups, bool as_json) {
    auto perms = enumerate_expressible(n, !no_groups);
    if (as_json) {
        std::cout << json(perms).dump() << "\n";
        return kExitOk;
    }
    for (const auto& p : perms) {
        for (std::size_t i = 0; i < p.size(); ++i)
            std::cout << (i ? "," : "") << p[i];
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_evaluate(const std::string& in, const std::string& pred_path,
                 const std::string& ref_path, const EvalOptions& opt, int jobs,
                 bool as_json) {
    (void)jobs;  // metrics aggregate over the corpus; per-metric cost is low
    std::vector<EvalPair> pairs;
    if (!in.empty()) {
        pairs = eval_pairs_from_jsonl(in);
    } else if (!pred_path.empty() && !ref_path.empty()) {
        auto preds = lines_of(pred_path), refs = lines_of(ref_path);
        if (preds.size() != refs.size())
            throw ParseError("prediction/reference line counts differ: " +
                             std::to_string(preds.size()) + " vs " +
                             std::to_string(refs.size()));
        for (std::size_t i = 0; i < preds.size(); ++i) {
            EvalPair p;
            p.id = "line-" + std::to_string(i + 1);
            p.prediction = preds[i];
            p.reference = refs[i];
            pairs.push_back(std::move(p));
        }
    } else {
        throw ParseError("evaluate needs --in, or both --pred and --ref");
    }
    MetricsReport report = evaluate(pairs, opt);
    if (as_json) {
        json j;
        auto put = [&](const char* name, const std::optional<double>& v) {
            if (v) j[name] = *v;
        };
        put("bleu", report.bleu);
        put("chrf", report.chrf);
        put("rouge_l", report.rouge_l);
        put("ribes", report.ribes);
        put("kendall_tau", report.kendall_tau);
        put("pmr", report.pmr);
        put("pass_rate", report.pass_rate);
        j["counts"] = report.counts;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << format_report(report);
    }
    return kExitOk;
}

int cmd_stats(const std::string& in, const std::string& format, bool lenient,
              bool as_json) {
    Corpus corpus = load(in, format, lenient);
    StatsReport r = corpus_stats(corpus);
    if (as_json) {
        std::cout << json{{"sentences", r.sentences},
                          {"characters", r.characters},
                          {"length_buckets", r.length_buckets},
                          {"okurigana_labels", r.okurigana_labels},
                          {"particle_labels", r.particle_labels},
                          {"kaeriten_labels", r.kaeriten_labels}}
                         .dump()
                  << "\n";
        return kExitOk;
    }
    std::cout << "sentences " << r.sentences << "\n"
              << "characters " << r.characters << "\n"
              << "bucket<=10 " << r.length_buckets[0] << "\n"
              << "bucket(10,20] " << r.length_buckets[1] << "\n"
              << "bucket(20,30] " << r.length_buckets[2] << "\n"
              << "bucket>30 " << r.length_buckets[3] << "\n"
              << "okurigana_labels " << r.okurigana_labels << "\n"
              << "particle_labels " << r.particle_labels << "\n"
              << "kaeriten_labels " << r.kaeriten_labels << "\n";
    return kExitOk;
}

int cmd_split(const std::string& in, const std::string& format, bool lenient,
              const std::string& ratios_text, std::uint64_t seed,
              const std::string& prefix) {
    Corpus corpus = load(in, format, lenient);
    std::array<double, 3> ratios{};
    std::stringstream ss(ratios_text);
    std::string item;
    int i = 0;
    while (std::getline(ss, item, ',') && i < 3) ratios[i++] = std::stod(item);
    if (i != 3) throw ParseError("expected three comma-separated ratios");
    auto result = split_corpus(corpus, ratios, seed);
    save_corpus(result.train, prefix + ".train.jsonl", CorpusFormat::Jsonl);
    save_corpus(result.validation, prefix + ".validation.jsonl", CorpusFormat::Jsonl);
    save_corpus(result.test, prefix + ".test.jsonl", CorpusFormat::Jsonl);
    std::cout << "train " << result.train.sentences.size() << "\n"
              << "validation " << result.validation.sentences.size() << "\n"
              << "test " << result.test.sentences.size() << "\n";
    return kExitOk;
}

int cmd_reduce_labels(const std::string& in, const std::string& format, bool lenient,
                      const std::string& field, int threshold, bool as_json) {
    Corpus corpus = load(in, format, lenient);
    std::map<std::string, int> stats;
    if (field == "okurigana")
        stats = corpus.okurigana_stats();
    else if (field == "particle")
        stats = corpus.particle_stats();
    else if (field == "kaeriten")
        stats = corpus.kaeriten_stats();
    else
        throw ParseError("unknown label field '" + field + "'");
    LabelMapping mapping = reduce_labels(stats, threshold);
    if (as_json) {
        std::cout << json{{"field", field},
                          {"threshold", mapping.threshold},
                          {"pairs", mapping.pairs}}
                         .dump()
                  << "\n";
    } else {
        for (const auto& [rare, target] : mapping.pairs)
            std::cout << rare << "\t" << target << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kanbun Kundoku toolkit: Kaeriten validation, transduction, "
                 "generation, counting, and corpus evaluation"};
    app.require_subcommand(1);

    bool as_json = false, lenient = false;
    int jobs = 1;
    app.add_flag("--json", as_json, "machine-readable JSON output");
    app.add_flag("--lenient", lenient, "skip unparseable corpus lines");
    app.add_option("--jobs", jobs, "worker threads for per-sentence commands")
        ->check(CLI::PositiveNumber);

    std::string in, format, out, dict_path, pos_path, source, translation, perm_text;
    std::string pred_path, ref_path, ratios = "0.8,0.1,0.1", prefix = "split";
    std::string field = "okurigana";
    bool strict = false, want_trace = false, rendered = false, table = false;
    bool brute = false, no_groups = false;
    int n = 0, threshold = 10;
    std::uint64_t seed = 0;
    bool seed_given = false;
    EvalOptions eval_opt;

    auto add_input = [&](CLI::App* cmd) {
        cmd->add_option("--in", in, "input corpus file")->required();
        cmd->add_option("--format", format, "jsonl, tsv, or mark-notation");
    };

    auto* validate = app.add_subcommand("validate", "run the automaton over a corpus");
    add_input(validate);
    validate->add_flag("--strict", strict, "exhaustive search with ambiguity detection");

    auto* transduce_cmd =
        app.add_subcommand("transduce", "emit Japanese reading order per sentence");
    add_input(transduce_cmd);
    transduce_cmd->add_flag("--strict", strict);
    transduce_cmd->add_flag("--trace", want_trace, "attach the transition trace (JSON)");
    transduce_cmd->add_flag("--rendered", rendered,
                            "print glyph+okurigana+particle instead of the reading");

    auto* annotate = app.add_subcommand(
        "annotate", "generate marks from a (source TAB translation) TSV");
    annotate->add_option("--in", in, "two-column TSV input")->required();
    annotate->add_option("--dict", dict_path, "kana/variant restoration dictionary JSON");
    annotate->add_option("--pos", pos_path, "POS span JSONL, aligned with the input");
    annotate->add_option("--out", out, "output JSONL path (default stdout)");

    auto* align_cmd = app.add_subcommand("align", "align one source to a translation");
    align_cmd->add_option("--source", source, "source glyphs")->required();
    align_cmd->add_option("--translation", translation, "Japanese translation")->required();
    align_cmd->add_option("--dict", dict_path, "restoration dictionary JSON");

    auto* expressible =
        app.add_subcommand("expressible", "test whether a reading order is markable");
    expressible->add_option("--perm", perm_text, "comma-separated reading order")
        ->required();
    expressible->add_flag("--no-groups", no_groups, "forbid — group bonds");

    auto* count = app.add_subcommand("count", "expressiveness counts");
    count->add_option("--n", n, "sentence length")->required()->check(CLI::PositiveNumber);
    count->add_flag("--table", table, "rows for 1..n");
    count->add_flag("--brute", brute, "include brute-force columns (n <= 9)");

    auto* enumerate =
        app.add_subcommand("enumerate", "list expressible reading orders (n <= 8)");
    enumerate->add_option("--n", n, "sentence length")->required()->check(CLI::PositiveNumber);
    enumerate->add_flag("--no-groups", no_groups);

    auto* evaluate_cmd = app.add_subcommand("evaluate", "character-level metric suite");
    evaluate_cmd->add_option("--in", in, "EvalPair JSONL");
    evaluate_cmd->add_option("--pred", pred_path, "prediction text file (one per line)");
    evaluate_cmd->add_option("--ref", ref_path, "reference text file");
    evaluate_cmd->add_option("--bleu-n", eval_opt.bleu_max_n, "max BLEU n-gram order");
    evaluate_cmd->add_option("--chrf-n", eval_opt.chrf_n, "max chrF n-gram order");
    evaluate_cmd->add_option("--chrf-beta", eval_opt.chrf_beta, "chrF beta");
    evaluate_cmd->add_option("--ribes-alpha", eval_opt.ribes_alpha, "RIBES precision power");
    evaluate_cmd->add_option("--ribes-beta", eval_opt.ribes_beta, "RIBES BP power");
    evaluate_cmd->add_flag("--keep-punct", eval_opt.keep_punct, "keep punctuation");
    evaluate_cmd->add_flag("--normalized-tau", eval_opt.normalized_tau,
                           "report (tau+1)/2 instead of raw tau");

    auto* stats = app.add_subcommand("stats", "corpus statistics");
    add_input(stats);

    auto* split = app.add_subcommand("split", "seeded train/validation/test split");
    add_input(split);
    split->add_option("--ratios", ratios, "three ratios summing to 1");
    split->add_option("--seed", seed, "shuffle seed")->required();
    split->add_option("--out-prefix", prefix, "output path prefix");
    (void)seed_given;

    auto* reduce = app.add_subcommand("reduce-labels", "map rare labels to frequent ones");
    add_input(reduce);
    reduce->add_option("--field", field, "okurigana, particle, or kaeriten");
    reduce->add_option("--threshold", threshold, "frequency cutoff");

    // Let --json/--jobs/--lenient appear after the subcommand name too.
    for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        std::cerr << app.help();
        return kExitUsage;
    }

    try {
        if (*validate) return cmd_validate(in, format, lenient, strict, jobs, as_json);
        if (*transduce_cmd)
            return cmd_transduce(in, format, lenient, strict, want_trace, rendered, jobs,
                                 as_json);
        if (*annotate) return cmd_annotate(in, dict_path, pos_path, out, lenient, as_json);
        if (*align_cmd) return cmd_align(source, translation, dict_path, as_json);
        if (*expressible) return cmd_expressible(perm_text, no_groups, as_json);
        if (*count) return cmd_count(n, table, brute, as_json);
        if (*enumerate) return cmd_enumerate(n, no_groups, as_json);
        if (*evaluate_cmd)
            return cmd_evaluate(in, pred_path, ref_path, eval_opt, jobs, as_json);
        if (*stats) return cmd_stats(in, format, lenient, as_json);
        if (*split) return cmd_split(in, format, lenient, ratios, seed, prefix);
        if (*reduce) return cmd_reduce_labels(in, format, lenient, field, threshold, as_json);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const InexpressibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const AlignmentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
