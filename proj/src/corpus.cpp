#include "kundoku/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kundoku/errors.hpp"
#include "kundoku/unicode.hpp"

namespace kundoku {

CorpusFormat format_from_name(const std::string& name) {
    if (name == "jsonl") return CorpusFormat::Jsonl;
    if (name == "tsv") return CorpusFormat::Tsv;
    if (name == "mark-notation" || name == "kmk") return CorpusFormat::MarkNotation;
    throw ParseError("unknown corpus format '" + name +
                     "' (expected jsonl, tsv, or mark-notation)");
}

CorpusFormat format_from_path(const std::string& path) {
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "jsonl" || ext == "json") return CorpusFormat::Jsonl;
    if (ext == "tsv") return CorpusFormat::Tsv;
    if (ext == "kmk" || ext == "txt") return CorpusFormat::MarkNotation;
    throw ParseError("cannot infer corpus format from path '" + path +
                     "'; pass --format explicitly");
}

namespace {

AnnotatedSentence parse_line(const std::string& line, CorpusFormat format,
                             int line_number) {
    switch (format) {
        case CorpusFormat::Jsonl: {
            nlohmann::json j = nlohmann::json::parse(line);
            return sentence_from_json(j);
        }
        case CorpusFormat::Tsv: {
            auto tab = line.find('\t');
            std::string source = tab == std::string::npos ? line : line.substr(0, tab);
            AnnotatedSentence s;
            s.id = "line-" + std::to_string(line_number);
            for (auto& g : split_scalars(source)) {
                AnnotatedChar c;
                c.glyph = std::move(g);
                s.chars.push_back(std::move(c));
            }
            if (tab != std::string::npos) {
                std::string rest = line.substr(tab + 1);
                auto tab2 = rest.find('\t');
                if (tab2 != std::string::npos) rest = rest.substr(0, tab2);
                if (!rest.empty()) s.translation = rest;
            }
            s.validate();
            return s;
        }
        case CorpusFormat::MarkNotation: {
            AnnotatedSentence s = parse_annotated(line);
            s.id = "line-" + std::to_string(line_number);
            return s;
        }
    }
    throw ParseError("unreachable corpus format");
}

}  // namespace

Corpus load_corpus(const std::string& path, CorpusFormat format, bool lenient,
                   LoadReport* report) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    Corpus corpus;
    corpus.provenance = path;
    std::set<std::string> seen_ids;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            AnnotatedSentence s = parse_line(line, format, line_number);
            if (!seen_ids.insert(s.id).second)
                throw ParseError("duplicate sentence id '" + s.id + "'");
            corpus.sentences.push_back(std::move(s));
        } catch (const std::exception& e) {
            std::string diagnostic =
                path + ":" + std::to_string(line_number) + ": " + e.what();
            if (!lenient) throw ParseError(diagnostic);
            if (report) {
                ++report->skipped;
                report->diagnostics.push_back(diagnostic);
            }
        }
    }
    return corpus;
}

void save_corpus(const Corpus& c, const std::string& path, CorpusFormat format) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    for (const auto& s : c.sentences) {
        switch (format) {
            case CorpusFormat::Jsonl:
                out << sentence_to_json(s).dump() << "\n";
                break;
            case CorpusFormat::Tsv:
                out << s.source_text() << "\t" << s.translation.value_or("") << "\n";
                break;
            case CorpusFormat::MarkNotation:
                out << render_annotated(s) << "\n";
                break;
        }
    }
    if (!out) throw IoError("write to '" + path + "' failed");
}

namespace {

std::map<std::string, int> collect(const Corpus& c,
                                   const std::function<std::string(const AnnotatedChar&)>& key) {
    std::map<std::string, int> stats;
    for (const auto& s : c.sentences)
        for (const auto& ch : s.chars) {
            std::string k = key(ch);
            if (!k.empty()) ++stats[k];
        }
    return stats;
}

}  // namespace

std::map<std::string, int> Corpus::okurigana_stats() const {
    return collect(*this, [](const AnnotatedChar& c) { return c.okurigana; });
}

std::map<std::string, int> Corpus::particle_stats() const {
    return collect(*this, [](const AnnotatedChar& c) { return c.particle; });
}

std::map<std::string, int> Corpus::kaeriten_stats() const {
    return collect(*this, [](const AnnotatedChar& c) {
        std::string slot;
        for (const auto& m : c.marks) slot += m.code();
        return slot;
    });
}

StatsReport corpus_stats(const Corpus& c) {
    StatsReport r;
    r.sentences = static_cast<int>(c.sentences.size());
    for (const auto& s : c.sentences) {
        int len = static_cast<int>(s.chars.size());
        r.characters += len;
        if (len <= 10)
            ++r.length_buckets[0];
        else if (len <= 20)
            ++r.length_buckets[1];
        else if (len <= 30)
            ++r.length_buckets[2];
        else
            ++r.length_buckets[3];
    }
    r.okurigana_labels = static_cast<int>(c.okurigana_stats().size());
    r.particle_labels = static_cast<int>(c.particle_stats().size());
    r.kaeriten_labels = static_cast<int>(c.kaeriten_stats().size());
    return r;
}

int levenshtein(const std::string& a, const std::string& b) {
    auto sa = split_scalars(a), sb = split_scalars(b);
    std::vector<int> prev(sb.size() + 1), cur(sb.size() + 1);
    for (std::size_t j = 0; j <= sb.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= sa.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= sb.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                               prev[j - 1] + (sa[i - 1] == sb[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[sb.size()];
}

LabelMapping reduce_labels(const std::map<std::string, int>& stats, int threshold) {
    std::vector<std::pair<std::string, int>> frequent;
    for (const auto& [label, freq] : stats)
        if (freq >= threshold) frequent.emplace_back(label, freq);
    if (frequent.empty())
        throw ParseError("no label reaches frequency threshold " +
                         std::to_string(threshold));
    LabelMapping mapping;
    mapping.threshold = threshold;
    for (const auto& [label, freq] : stats) {
        if (freq >= threshold) continue;
        const std::pair<std::string, int>* best = nullptr;
        int best_dist = 0;
        for (const auto& cand : frequent) {
            int d = levenshtein(label, cand.first);
            bool better = !best || d < best_dist ||
                          (d == best_dist && (cand.second > best->second ||
                                              (cand.second == best->second &&
                                               cand.first < best->first)));
            if (better) {
                best = &cand;
                best_dist = d;
            }
        }
        mapping.pairs[label] = best->first;
    }
    return mapping;
}

SplitResult split_corpus(const Corpus& c, std::array<double, 3> ratios,
                         std::uint64_t seed) {
    double sum = ratios[0] + ratios[1] + ratios[2];
    for (double r : ratios)
        if (r <= 0.0) throw ParseError("split ratios must be positive");
    if (std::abs(sum - 1.0) > 1e-9)
        throw ParseError("split ratios must sum to 1 (got " + std::to_string(sum) + ")");
    std::size_t n = c.sentences.size();
    if (n < 3) throw ParseError("corpus must have at least 3 sentences to split");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Fisher-Yates driven by mt19937_64; documented in docs/formats.md so
    // splits reproduce across implementations.
    std::mt19937_64 engine(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        std::size_t j = engine() % (i + 1);
        std::swap(order[i], order[j]);
    }

    std::size_t n_val = static_cast<std::size_t>(std::floor(ratios[1] * n));
    std::size_t n_test = static_cast<std::size_t>(std::floor(ratios[2] * n));
    std::size_t n_train = n - n_val - n_test;

    SplitResult result;
    result.train.provenance = c.provenance + " [train]";
    result.validation.provenance = c.provenance + " [validation]";
    result.test.provenance = c.provenance + " [test]";
    for (std::size_t k = 0; k < n; ++k) {
        const auto& s = c.sentences[order[k]];
        if (k < n_train)
            result.train.sentences.push_back(s);
        else if (k < n_train + n_val)
            result.validation.sentences.push_back(s);
        else
            result.test.sentences.push_back(s);
    }
    return result;
}

}  // namespace kundoku
