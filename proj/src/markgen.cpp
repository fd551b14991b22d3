#include "kundoku/markgen.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

#include <nlohmann/json.hpp>

#include "kundoku/automaton.hpp"
#include "kundoku/errors.hpp"
#include "kundoku/unicode.hpp"

namespace kundoku {

namespace {

Permutation inverse(const Permutation& perm) {
    Permutation pos(perm.size());
    for (int p = 0; p < static_cast<int>(perm.size()); ++p) pos[perm[p]] = p;
    return pos;
}

void check_full_permutation(int n, const Permutation& reading) {
    std::vector<int> expected(n);
    std::iota(expected.begin(), expected.end(), 0);
    validate_permutation(reading, expected);
}

// One unit of the reading schedule: characters [first..last] emitted
// together, either straight from the input (direct) or popped off the stack.
struct Emission {
    int first = 0, last = 0;
    bool direct = true;
};

// Replays the reading order against a stack of blocks. Blocks pushed onto
// the stack are maximal co-moving runs (consecutive source characters that
// stay adjacent and in order in the reading); characters read in place are
// emitted one by one without stack residence.
std::vector<Emission> build_schedule(int n, const Permutation& reading) {
    Permutation pos = inverse(reading);
    std::vector<Emission> emissions;
    std::vector<std::pair<int, int>> stack;  // blocks [first, last]
    int next_input = 0;
    int p = 0;
    while (p < n) {
        int t = reading[p];
        if (!stack.empty() && stack.back().first == t) {
            auto [a, b] = stack.back();
            stack.pop_back();
            emissions.push_back({a, b, false});
            p += b - a + 1;
        } else if (t >= next_input) {
            int cur = next_input;
            while (cur < t) {
                int end = cur;
                while (end + 1 < t && pos[end + 1] == pos[end] + 1) ++end;
                stack.emplace_back(cur, end);
                cur = end + 1;
            }
            emissions.push_back({t, t, true});
            ++p;
            int b = t;
            while (p < n && reading[p] == b + 1) {
                ++b;
                emissions.push_back({b, b, true});
                ++p;
            }
            next_input = b + 1;
        } else {
            throw InexpressibleError(
                "reading order is not realizable by a stack of queues: character " +
                std::to_string(t) + " (reading position " + std::to_string(p) +
                ") is buried beneath character " + std::to_string(stack.back().first) +
                " — crossing spans break the stack discipline");
        }
    }
    return emissions;
}

}  // namespace

MarkAssignment generate_marks(int n, const Permutation& reading) {
    check_full_permutation(n, reading);
    auto emissions = build_schedule(n, reading);
    int m = static_cast<int>(emissions.size());

    struct Chain {
        int lo = 0, hi = 0;  // character span covered by members + trigger
        int level = 0;
    };
    std::vector<Chain> chains;
    std::vector<bool> has_re(m, false);
    std::vector<int> chain_of(m, -1);
    std::vector<int> ordinal_of(m, 0);

    auto extend_span = [&](int chain, const Emission& e) {
        chains[chain].lo = std::min(chains[chain].lo, e.first);
        chains[chain].hi = std::max(chains[chain].hi, e.last);
    };

    for (int q = 1; q < m; ++q) {
        if (emissions[q].direct) continue;
        const Emission& prev = emissions[q - 1];
        int succ_char = emissions[q].last + 1;
        if (prev.first == succ_char) {
            // Popped right after the unit that follows it in the source.
            has_re[q] = true;
        } else if (chain_of[q - 1] != -1 && ordinal_of[q - 1] >= 1 && !has_re[q - 1] &&
                   !prev.direct) {
            // Previous emission is a plain chain member: same level, next ordinal.
            chain_of[q] = chain_of[q - 1];
            ordinal_of[q] = ordinal_of[q - 1] + 1;
            extend_span(chain_of[q], emissions[q]);
        } else {
            // Previous emission (direct, or a レ pop) becomes the trigger of
            // a fresh chain; a レ trigger yields the combined 一レ slot.
            int chain = static_cast<int>(chains.size());
            chains.push_back({std::min(prev.first, emissions[q].first),
                              std::max(prev.last, emissions[q].last), 0});
            chain_of[q - 1] = chain;
            ordinal_of[q - 1] = 1;
            chain_of[q] = chain;
            ordinal_of[q] = 2;
        }
    }

    // Hierarchy levels: outermost span gets 一二 (level 1), each nesting
    // step adds one. Disjoint chains may share a level.
    for (std::size_t x = 0; x < chains.size(); ++x) {
        int depth = 1;
        for (std::size_t y = 0; y < chains.size(); ++y) {
            if (x == y) continue;
            bool contains = chains[y].lo <= chains[x].lo && chains[x].hi <= chains[y].hi &&
                            (chains[y].lo < chains[x].lo || chains[x].hi < chains[y].hi);
            if (contains) ++depth;
        }
        chains[x].level = depth;
    }

    // A two-mark chain at level 2 is written 上…下 by convention (下 is
    // ordinal 3 in the 上中下 series); the reader normalizes it back.
    std::vector<int> chain_max(chains.size(), 0);
    for (int q = 0; q < m; ++q)
        if (chain_of[q] != -1)
            chain_max[chain_of[q]] = std::max(chain_max[chain_of[q]], ordinal_of[q]);
    for (int q = 0; q < m; ++q)
        if (chain_of[q] != -1 && chains[chain_of[q]].level == 2 &&
            chain_max[chain_of[q]] == 2 && ordinal_of[q] == 2)
            ordinal_of[q] = 3;

    MarkAssignment out;
    out.marks.assign(n, {});
    for (int q = 0; q < m; ++q) {
        std::vector<MarkToken> slot;
        if (chain_of[q] != -1)
            slot.push_back(MarkToken::order(chains[chain_of[q]].level, ordinal_of[q]));
        if (has_re[q]) slot.push_back(MarkToken::re());
        if (!slot.empty()) out.marks[emissions[q].last] = std::move(slot);
        if (emissions[q].last > emissions[q].first)
            out.groups.emplace_back(emissions[q].first, emissions[q].last + 1);
    }
    std::sort(out.groups.begin(), out.groups.end());
    return out;
}

AnnotatedSentence annotate_sentence(const std::vector<std::string>& glyphs,
                                    const Permutation& reading) {
    auto assignment = generate_marks(static_cast<int>(glyphs.size()), reading);
    AnnotatedSentence s;
    s.chars.resize(glyphs.size());
    for (std::size_t i = 0; i < glyphs.size(); ++i) {
        s.chars[i].glyph = glyphs[i];
        s.chars[i].marks = assignment.marks[i];
    }
    int gid = 0;
    for (auto [a, b] : assignment.groups) {
        for (int k = a; k < b; ++k) s.chars[k].group = gid;
        ++gid;
    }
    s.validate();
    return s;
}

namespace {

// Direct search over block push / pop moves, targeted at one reading.
// Deliberately shares nothing with build_schedule: it is the oracle the
// generator is checked against.
struct ExpressSearch {
    const Permutation& reading;
    const Permutation pos;
    bool allow_groups;
    int n;

    explicit ExpressSearch(const Permutation& r, bool groups)
        : reading(r), pos(inverse(r)), allow_groups(groups),
          n(static_cast<int>(r.size())) {}

    bool search(int next_input, std::vector<std::pair<int, int>>& stack, int p) {
        if (p == n) return stack.empty();
        int t = reading[p];
        if (!stack.empty() && stack.back().first == t) {
            auto block = stack.back();
            int len = block.second - block.first + 1;
            bool matches = true;
            for (int k = 0; k < len; ++k)
                if (p + k >= n || reading[p + k] != t + k) {
                    matches = false;
                    break;
                }
            if (matches) {
                stack.pop_back();
                if (search(next_input, stack, p + len)) return true;
                stack.push_back(block);
            }
        }
        if (next_input < n) {
            int limit = allow_groups ? n - 1 : next_input;
            for (int j = next_input; j <= limit; ++j) {
                // A block can only ever pop if its characters stay adjacent
                // and in order in the reading.
                if (j > next_input && pos[j] != pos[j - 1] + 1) break;
                stack.emplace_back(next_input, j);
                if (search(j + 1, stack, p)) return true;
                stack.pop_back();
            }
        }
        return false;
    }
};

}  // namespace

bool is_expressible(const Permutation& reading, bool allow_groups) {
    check_full_permutation(static_cast<int>(reading.size()), reading);
    ExpressSearch s(reading, allow_groups);
    std::vector<std::pair<int, int>> stack;
    return s.search(0, stack, 0);
}

bool round_trip(int n, const Permutation& reading) {
    std::vector<std::string> glyphs;
    glyphs.reserve(n);
    for (int i = 0; i < n; ++i) glyphs.push_back("c" + std::to_string(i));
    AnnotatedSentence s = annotate_sentence(glyphs, reading);
    ValidationResult r = run(s);
    return r.accepted && *r.permutation == reading;
}

void KanaDictionary::add(std::string key, std::string glyph, std::string tag) {
    if (key.empty() || glyph.empty())
        throw ParseError("dictionary entries require a non-empty key and glyph");
    entries.push_back({std::move(key), std::move(glyph), std::move(tag)});
}

KanaDictionary KanaDictionary::from_json(const nlohmann::json& j) {
    KanaDictionary d;
    if (j.is_array()) {
        for (const auto& e : j)
            d.add(e.at("key").get<std::string>(), e.at("glyph").get<std::string>(),
                  e.value("tag", ""));
    } else if (j.is_object()) {
        for (const auto& [key, glyph] : j.items()) d.add(key, glyph.get<std::string>());
    } else {
        throw ParseError("dictionary JSON must be an object or an entry array");
    }
    return d;
}

namespace detail {

namespace {

struct AssignState {
    const std::vector<std::vector<int>>& candidates;
    std::vector<int> current;
    std::vector<int> best;
    int best_count = -1;
    long best_crossings = 0;

    bool better(int count, long crossings, const std::vector<int>& positions) const {
        if (count != best_count) return count > best_count;
        if (crossings != best_crossings) return crossings < best_crossings;
        return positions < best;
    }

    void recurse(std::size_t item, int count, long crossings,
                 std::vector<bool>& used_positions_dummy) {
        int remaining = static_cast<int>(candidates.size() - item);
        if (count + remaining < best_count) return;
        if (count + remaining == best_count && crossings > best_crossings) return;
        if (item == candidates.size()) {
            if (better(count, crossings, current)) {
                best = current;
                best_count = count;
                best_crossings = crossings;
            }
            return;
        }
        for (int pos : candidates[item]) {
            bool used = false;
            for (std::size_t k = 0; k < item; ++k)
                if (current[k] == pos) {
                    used = true;
                    break;
                }
            if (used) continue;
            long added = 0;
            for (std::size_t k = 0; k < item; ++k)
                if (current[k] >= 0 && current[k] > pos) ++added;
            current[item] = pos;
            recurse(item + 1, count + 1, crossings + added, used_positions_dummy);
        }
        current[item] = -1;
        recurse(item + 1, count, crossings, used_positions_dummy);
        current[item] = -1;
    }
};

}  // namespace

std::vector<int> min_crossing_assignment(const std::vector<std::vector<int>>& candidates) {
    std::vector<std::vector<int>> sorted = candidates;
    for (auto& c : sorted) std::sort(c.begin(), c.end());
    AssignState state{sorted, std::vector<int>(sorted.size(), -1),
                      std::vector<int>(sorted.size(), -1)};
    std::vector<bool> dummy;
    state.recurse(0, 0, 0, dummy);
    return state.best;
}

}  // namespace detail

Alignment align(const std::vector<std::string>& source, const std::string& translation,
                const KanaDictionary& dict, bool allow_unread) {
    if (translation.empty()) throw AlignmentError("translation is empty");
    auto tchars = split_scalars(translation);
    int tn = static_cast<int>(tchars.size());

    // Candidate translation positions per source glyph: literal occurrences
    // plus dictionary restorations (kana or variant forms).
    std::vector<std::vector<int>> candidates(source.size());
    std::map<std::pair<int, int>, Alignment::Restoration> restorations;  // (src, pos)
    for (std::size_t s = 0; s < source.size(); ++s) {
        for (int p = 0; p < tn; ++p)
            if (tchars[p] == source[s]) candidates[s].push_back(p);
        for (const auto& entry : dict.entries) {
            if (entry.glyph != source[s]) continue;
            auto key_chars = split_scalars(entry.key);
            int klen = static_cast<int>(key_chars.size());
            for (int p = 0; p + klen <= tn; ++p) {
                bool match = true;
                for (int k = 0; k < klen; ++k)
                    if (tchars[p + k] != key_chars[k]) {
                        match = false;
                        break;
                    }
                if (match) {
                    candidates[s].push_back(p);
                    restorations[{static_cast<int>(s), p}] = {p, p + klen, source[s]};
                }
            }
        }
        std::sort(candidates[s].begin(), candidates[s].end());
        candidates[s].erase(std::unique(candidates[s].begin(), candidates[s].end()),
                            candidates[s].end());
        if (candidates[s].empty() && !allow_unread)
            throw AlignmentError("source glyph '" + source[s] + "' (index " +
                                 std::to_string(s) + ") has no translation position");
    }

    auto chosen = detail::min_crossing_assignment(candidates);
    Alignment a;
    for (std::size_t s = 0; s < source.size(); ++s) {
        if (chosen[s] < 0) {
            a.unread.insert(static_cast<int>(s));
            continue;
        }
        a.mapping.emplace_back(static_cast<int>(s), chosen[s]);
        auto it = restorations.find({static_cast<int>(s), chosen[s]});
        if (it != restorations.end()) a.restored.push_back(it->second);
    }
    return a;
}

Permutation alignment_permutation(const Alignment& a) {
    auto sorted = a.mapping;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& x, const auto& y) { return x.second < y.second; });
    Permutation perm;
    perm.reserve(sorted.size());
    for (const auto& [src, pos] : sorted) perm.push_back(src);
    return perm;
}

KanaClassification classify_kana(const std::string& translation,
                                 const std::vector<PosSpan>& pos_spans,
                                 const Alignment& alignment, int n_source) {
    auto tchars = split_scalars(translation);
    int tn = static_cast<int>(tchars.size());

    auto spans = pos_spans;
    std::sort(spans.begin(), spans.end(),
              [](const PosSpan& a, const PosSpan& b) { return a.begin < b.begin; });
    int expect = 0;
    for (const auto& sp : spans) {
        if (sp.begin != expect || sp.end <= sp.begin)
            throw ParseError("POS spans do not tile the translation at position " +
                             std::to_string(expect));
        expect = sp.end;
    }
    if (expect != tn)
        throw ParseError("POS spans cover " + std::to_string(expect) + " of " +
                         std::to_string(tn) + " characters");

    // Translation positions owned by an aligned source glyph. Restored
    // spans count in full: their kana realize the glyph itself.
    std::vector<int> owner(tn, -1);
    for (const auto& [src, pos] : alignment.mapping)
        if (pos >= 0 && pos < tn) owner[pos] = src;
    for (const auto& r : alignment.restored) {
        int src = -1;
        for (const auto& [s, pos] : alignment.mapping)
            if (pos == r.begin) src = s;
        for (int p = r.begin; p < r.end && p < tn; ++p) owner[p] = src;
    }

    static const std::set<std::string> okurigana_tags = {"VERB", "ADV",  "NOUN",
                                                         "ADJ",  "PRON", "DET"};
    static const std::set<std::string> known_tags = {
        "VERB", "ADV",  "NOUN",  "ADJ",  "PRON", "DET", "ADP", "AUX", "PART",
        "PUNCT", "CCONJ", "SCONJ", "NUM", "SYM",  "X",   "INTJ", "PROPN"};

    KanaClassification out;
    out.okurigana.assign(n_source, "");
    out.particle.assign(n_source, "");

    int last_glyph = -1;  // most recent aligned source index, any span
    for (const auto& sp : spans) {
        bool word_tag = okurigana_tags.count(sp.tag) > 0;
        if (!known_tags.count(sp.tag))
            out.warnings.push_back("unknown POS tag '" + sp.tag + "', treating kana as particle");
        int span_host = -1;  // nearest preceding aligned glyph inside this span
        for (int p = sp.begin; p < sp.end; ++p) {
            if (owner[p] >= 0) {
                span_host = owner[p];
                last_glyph = owner[p];
                continue;
            }
            if (!is_kana(tchars[p])) continue;  // punctuation etc.
            if (word_tag && span_host >= 0) {
                out.okurigana[span_host] += tchars[p];
            } else if (last_glyph >= 0) {
                out.particle[last_glyph] += tchars[p];
            } else {
                out.warnings.push_back("kana '" + tchars[p] +
                                       "' precedes every aligned glyph, dropped");
            }
        }
    }
    return out;
}

}  // namespace kundoku
