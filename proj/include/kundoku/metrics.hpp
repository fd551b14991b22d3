#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kundoku/model.hpp"

namespace kundoku {

struct EvalOptions {
    int bleu_max_n = 4;
    int chrf_n = 6;
    double chrf_beta = 2.0;
    double ribes_alpha = 0.25;
    double ribes_beta = 0.10;
    bool keep_punct = false;       // keep punctuation characters in the n-gram streams
    bool normalized_tau = false;   // report (τ+1)/2 instead of raw τ
};

// Whitespace is always removed; punctuation unless keep_punct.
std::vector<std::string> strip_for_eval(const std::string& text, bool keep_punct);

// Corpus-level character BLEU (n-grams up to max_n, brevity penalty,
// add-one smoothing of numerator and denominator for n >= 2 on zero
// matches). Scores are x100. Throws on mismatched list lengths or an empty
// corpus.
double bleu_char(const std::vector<std::string>& preds,
                 const std::vector<std::string>& refs, const EvalOptions& opt = {});

// Character chrF: per order 1..n micro-aggregated precision/recall over the
// corpus, F_beta, averaged over orders present on either side. x100.
double chrf(const std::vector<std::string>& preds, const std::vector<std::string>& refs,
            const EvalOptions& opt = {});

// Character-level LCS F-measure, macro mean over sentences. x100.
double rouge_l_char(const std::vector<std::string>& preds,
                    const std::vector<std::string>& refs, const EvalOptions& opt = {});

// Per-sentence NKT * precision^alpha * BP^beta with crossing-minimal
// character alignment; corpus mean x100. No overlap scores 0.
double ribes(const std::vector<std::string>& preds, const std::vector<std::string>& refs,
             const EvalOptions& opt = {});

// Raw Kendall's tau in [-1,1] over the shared index set. n < 2 is defined
// as 1; *warned (when non-null) is set in that case.
double kendall_tau_order(const Permutation& pred, const Permutation& gold,
                         bool* warned = nullptr);

// One evaluation record; at least one of the string pair / permutation
// pair must be present.
struct EvalPair {
    std::string id;
    std::optional<std::string> prediction;
    std::optional<std::string> reference;
    std::optional<Permutation> pred_order;
    std::optional<Permutation> gold_order;
    std::optional<AnnotatedSentence> annotation;  // enables pass-rate
};

// Fraction of pairs whose predicted order equals gold, x100.
double pmr(const std::vector<EvalPair>& pairs);

struct MetricsReport {
    std::optional<double> bleu, chrf, rouge_l, ribes;  // [0,100]
    std::optional<double> kendall_tau;                 // [-100,100]
    std::optional<double> pmr;                         // [0,100]
    std::optional<double> pass_rate;                   // [0,100]
    std::map<std::string, int> counts;                 // sentences per metric
};

// Computes every metric whose inputs are present; throws when none is
// computable.
MetricsReport evaluate(const std::vector<EvalPair>& pairs, const EvalOptions& opt = {});

// Formats a report with two-decimal scores, one "name value" line each.
std::string format_report(const MetricsReport& report);

}  // namespace kundoku
