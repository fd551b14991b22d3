#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kundoku/model.hpp"

namespace kundoku {

enum class CorpusFormat { Jsonl, Tsv, MarkNotation };

CorpusFormat format_from_name(const std::string& name);

// Infers the format from a file extension (.jsonl, .tsv, .kmk); anything
// else throws.
CorpusFormat format_from_path(const std::string& path);

struct Corpus {
    std::vector<AnnotatedSentence> sentences;
    std::string provenance;

    // Frequency maps over okurigana, particle, and mark-slot code strings.
    std::map<std::string, int> okurigana_stats() const;
    std::map<std::string, int> particle_stats() const;
    std::map<std::string, int> kaeriten_stats() const;
};

struct LoadReport {
    int skipped = 0;  // lenient mode only
    std::vector<std::string> diagnostics;
};

// Loads and validates a corpus file. Fails fast with a line-numbered
// diagnostic, unless lenient: then bad lines are skipped and recorded in
// report (when non-null). Duplicate ids are always an error.
Corpus load_corpus(const std::string& path, CorpusFormat format, bool lenient = false,
                   LoadReport* report = nullptr);

void save_corpus(const Corpus& c, const std::string& path, CorpusFormat format);

struct StatsReport {
    int sentences = 0;
    long characters = 0;
    // ≤10, (10,20], (20,30], >30 source characters.
    std::array<int, 4> length_buckets{};
    int okurigana_labels = 0;
    int particle_labels = 0;
    int kaeriten_labels = 0;
};

StatsReport corpus_stats(const Corpus& c);

struct LabelMapping {
    std::map<std::string, std::string> pairs;  // rare -> frequent
    int threshold = 10;
};

// Levenshtein distance over Unicode scalars, unit costs.
int levenshtein(const std::string& a, const std::string& b);

// Maps every label with frequency < threshold to the closest frequent
// label (ties: higher frequency, then lexicographic). Throws when no label
// reaches the threshold.
LabelMapping reduce_labels(const std::map<std::string, int>& stats, int threshold = 10);

struct SplitResult {
    Corpus train, validation, test;
};

// Deterministic seeded shuffle (Fisher-Yates over mt19937_64, see
// docs/formats.md), sizes floor(ratio*n) with the remainder going to
// train. Ratios must be positive and sum to 1 within 1e-9; the corpus must
// have at least 3 sentences.
SplitResult split_corpus(const Corpus& c, std::array<double, 3> ratios, std::uint64_t seed);

}  // namespace kundoku
