#include "kundoku/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "kundoku/automaton.hpp"
#include "kundoku/errors.hpp"
#include "kundoku/markgen.hpp"
#include "kundoku/unicode.hpp"

namespace kundoku {

namespace {

void check_corpus(const std::vector<std::string>& preds,
                  const std::vector<std::string>& refs) {
    if (preds.size() != refs.size())
        throw std::invalid_argument("prediction/reference count mismatch: " +
                                    std::to_string(preds.size()) + " vs " +
                                    std::to_string(refs.size()));
    if (preds.empty()) throw std::invalid_argument("empty evaluation corpus");
}

using GramCounts = std::map<std::vector<std::string>, long>;

GramCounts ngrams(const std::vector<std::string>& chars, int n) {
    GramCounts out;
    if (n <= 0) return out;
    for (std::size_t i = 0; i + n <= chars.size(); ++i)
        ++out[std::vector<std::string>(chars.begin() + i, chars.begin() + i + n)];
    return out;
}

long clipped_matches(const GramCounts& pred, const GramCounts& ref) {
    long m = 0;
    for (const auto& [gram, count] : pred) {
        auto it = ref.find(gram);
        if (it != ref.end()) m += std::min(count, it->second);
    }
    return m;
}

long total(const GramCounts& g) {
    long t = 0;
    for (const auto& [gram, count] : g) t += count;
    return t;
}

}  // namespace

std::vector<std::string> strip_for_eval(const std::string& text, bool keep_punct) {
    std::vector<std::string> out;
    for (auto& c : split_scalars(text)) {
        if (is_space(c)) continue;
        if (!keep_punct && is_punctuation(c)) continue;
        out.push_back(c);
    }
    return out;
}

double bleu_char(const std::vector<std::string>& preds,
                 const std::vector<std::string>& refs, const EvalOptions& opt) {
    check_corpus(preds, refs);
    int max_n = opt.bleu_max_n;
    if (max_n < 1) throw std::invalid_argument("bleu_max_n must be >= 1");
    std::vector<long> matches(max_n + 1, 0), totals(max_n + 1, 0);
    long pred_len = 0, ref_len = 0;
    for (std::size_t s = 0; s < preds.size(); ++s) {
        auto p = strip_for_eval(preds[s], opt.keep_punct);
        auto r = strip_for_eval(refs[s], opt.keep_punct);
        pred_len += static_cast<long>(p.size());
        ref_len += static_cast<long>(r.size());
        for (int n = 1; n <= max_n; ++n) {
            auto pg = ngrams(p, n);
            matches[n] += clipped_matches(pg, ngrams(r, n));
            totals[n] += total(pg);
        }
    }
    if (pred_len == 0) return 0.0;
    double log_sum = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        double num = static_cast<double>(matches[n]);
        double den = static_cast<double>(totals[n]);
        if (n >= 2 && (num == 0.0 || den == 0.0)) {
            num += 1.0;
            den += 1.0;
        }
        if (num == 0.0 || den == 0.0) return 0.0;  // unigrams with no match
        log_sum += std::log(num / den) / max_n;
    }
    double bp = pred_len < ref_len
                    ? std::exp(1.0 - static_cast<double>(ref_len) / pred_len)
                    : 1.0;
    return 100.0 * bp * std::exp(log_sum);
}

double chrf(const std::vector<std::string>& preds, const std::vector<std::string>& refs,
            const EvalOptions& opt) {
    check_corpus(preds, refs);
    int orders = opt.chrf_n;
    if (orders < 1) throw std::invalid_argument("chrf_n must be >= 1");
    double beta2 = opt.chrf_beta * opt.chrf_beta;
    std::vector<long> matches(orders + 1, 0), pred_totals(orders + 1, 0),
        ref_totals(orders + 1, 0);
    for (std::size_t s = 0; s < preds.size(); ++s) {
        auto p = strip_for_eval(preds[s], opt.keep_punct);
        auto r = strip_for_eval(refs[s], opt.keep_punct);
        for (int n = 1; n <= orders; ++n) {
            auto pg = ngrams(p, n);
            auto rg = ngrams(r, n);
            matches[n] += clipped_matches(pg, rg);
            pred_totals[n] += total(pg);
            ref_totals[n] += total(rg);
        }
    }
    double f_sum = 0.0;
    int f_orders = 0;
    for (int n = 1; n <= orders; ++n) {
        if (pred_totals[n] == 0 && ref_totals[n] == 0) continue;  // too short everywhere
        double prec = pred_totals[n] ? static_cast<double>(matches[n]) / pred_totals[n] : 0.0;
        double rec = ref_totals[n] ? static_cast<double>(matches[n]) / ref_totals[n] : 0.0;
        double denom = beta2 * prec + rec;
        f_sum += denom > 0.0 ? (1.0 + beta2) * prec * rec / denom : 0.0;
        ++f_orders;
    }
    if (f_orders == 0) throw std::invalid_argument("chrf: no n-grams in corpus");
    return 100.0 * f_sum / f_orders;
}

namespace {

int lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<int> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                          : std::max(prev[j], cur[j - 1]);
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace

double rouge_l_char(const std::vector<std::string>& preds,
                    const std::vector<std::string>& refs, const EvalOptions& opt) {
    check_corpus(preds, refs);
    double sum = 0.0;
    for (std::size_t s = 0; s < preds.size(); ++s) {
        auto p = strip_for_eval(preds[s], opt.keep_punct);
        auto r = strip_for_eval(refs[s], opt.keep_punct);
        if (p.empty() || r.empty()) continue;  // scores 0
        double lcs = lcs_length(p, r);
        if (lcs == 0.0) continue;
        double prec = lcs / p.size(), rec = lcs / r.size();
        sum += 2.0 * prec * rec / (prec + rec);
    }
    return 100.0 * sum / preds.size();
}

double ribes(const std::vector<std::string>& preds, const std::vector<std::string>& refs,
             const EvalOptions& opt) {
    check_corpus(preds, refs);
    double sum = 0.0;
    for (std::size_t s = 0; s < preds.size(); ++s) {
        auto p = strip_for_eval(preds[s], opt.keep_punct);
        auto r = strip_for_eval(refs[s], opt.keep_punct);
        if (p.empty() || r.empty()) continue;
        // Crossing-minimal character alignment, same policy as align().
        std::vector<std::vector<int>> candidates(p.size());
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = 0; j < r.size(); ++j)
                if (p[i] == r[j]) candidates[i].push_back(static_cast<int>(j));
        auto chosen = detail::min_crossing_assignment(candidates);
        std::vector<int> aligned;
        for (int pos : chosen)
            if (pos >= 0) aligned.push_back(pos);
        if (aligned.empty()) continue;  // no overlap -> 0
        double nkt = 1.0;
        if (aligned.size() >= 2) {
            long concordant = 0, pairs = 0;
            for (std::size_t i = 0; i < aligned.size(); ++i)
                for (std::size_t j = i + 1; j < aligned.size(); ++j) {
                    ++pairs;
                    if (aligned[i] < aligned[j]) ++concordant;
                }
            double tau = (2.0 * concordant - pairs) / pairs;
            nkt = (tau + 1.0) / 2.0;
        }
        double precision = static_cast<double>(aligned.size()) / p.size();
        double bp = p.size() < r.size()
                        ? std::exp(1.0 - static_cast<double>(r.size()) / p.size())
                        : 1.0;
        sum += nkt * std::pow(precision, opt.ribes_alpha) * std::pow(bp, opt.ribes_beta);
    }
    return 100.0 * sum / preds.size();
}

double kendall_tau_order(const Permutation& pred, const Permutation& gold, bool* warned) {
    validate_permutation(pred, gold);
    if (warned) *warned = false;
    std::size_t n = pred.size();
    if (n < 2) {
        if (warned) *warned = true;
        return 1.0;
    }
    std::map<int, int> pos_pred, pos_gold;
    for (std::size_t i = 0; i < n; ++i) {
        pos_pred[pred[i]] = static_cast<int>(i);
        pos_gold[gold[i]] = static_cast<int>(i);
    }
    long concordant = 0, discordant = 0;
    for (auto a = pos_gold.begin(); a != pos_gold.end(); ++a)
        for (auto b = std::next(a); b != pos_gold.end(); ++b) {
            int dp = pos_pred[a->first] - pos_pred[b->first];
            int dg = a->second - b->second;
            (static_cast<long>(dp) * dg > 0 ? concordant : discordant) += 1;
        }
    return static_cast<double>(concordant - discordant) /
           (static_cast<double>(n) * (n - 1) / 2.0);
}

double pmr(const std::vector<EvalPair>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("empty evaluation corpus");
    int exact = 0, counted = 0;
    for (const auto& p : pairs) {
        if (!p.pred_order || !p.gold_order) continue;
        ++counted;
        if (*p.pred_order == *p.gold_order) ++exact;
    }
    if (counted == 0) throw std::invalid_argument("pmr: no permutation pairs");
    return 100.0 * exact / counted;
}

MetricsReport evaluate(const std::vector<EvalPair>& pairs, const EvalOptions& opt) {
    if (pairs.empty()) throw std::invalid_argument("empty evaluation corpus");
    std::vector<std::string> preds, refs;
    for (const auto& p : pairs) {
        if (!p.prediction && !p.reference && !p.pred_order && !p.gold_order &&
            !p.annotation)
            throw std::invalid_argument("pair '" + p.id + "' carries no evaluable data");
        if (p.prediction && p.reference) {
            preds.push_back(*p.prediction);
            refs.push_back(*p.reference);
        }
    }

    MetricsReport report;
    if (!preds.empty()) {
        report.bleu = bleu_char(preds, refs, opt);
        report.chrf = chrf(preds, refs, opt);
        report.rouge_l = rouge_l_char(preds, refs, opt);
        report.ribes = ribes(preds, refs, opt);
        report.counts["bleu"] = report.counts["chrf"] = report.counts["rouge_l"] =
            report.counts["ribes"] = static_cast<int>(preds.size());
    }

    double tau_sum = 0.0;
    int tau_count = 0, exact = 0;
    for (const auto& p : pairs) {
        if (!p.pred_order || !p.gold_order) continue;
        double tau = kendall_tau_order(*p.pred_order, *p.gold_order);
        tau_sum += opt.normalized_tau ? (tau + 1.0) / 2.0 : tau;
        ++tau_count;
        if (*p.pred_order == *p.gold_order) ++exact;
    }
    if (tau_count > 0) {
        report.kendall_tau = 100.0 * tau_sum / tau_count;
        report.pmr = 100.0 * exact / tau_count;
        report.counts["kendall_tau"] = report.counts["pmr"] = tau_count;
    }

    std::vector<AnnotatedSentence> annotated;
    for (const auto& p : pairs)
        if (p.annotation) annotated.push_back(*p.annotation);
    if (!annotated.empty()) {
        report.pass_rate = 100.0 * pass_rate(annotated);
        report.counts["pass_rate"] = static_cast<int>(annotated.size());
    }

    if (report.counts.empty())
        throw std::invalid_argument("no metric is computable from the given pairs");
    return report;
}

std::string format_report(const MetricsReport& report) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    auto line = [&](const char* name, const std::optional<double>& v) {
        if (v) os << name << " " << *v << "\n";
    };
    line("bleu", report.bleu);
    line("chrf", report.chrf);
    line("rouge_l", report.rouge_l);
    line("ribes", report.ribes);
    line("kendall_tau", report.kendall_tau);
    line("pmr", report.pmr);
    line("pass_rate", report.pass_rate);
    return os.str();
}

}  // namespace kundoku
