#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kundoku/model.hpp"

namespace kundoku {

// Kaeriten marks plus group bonds for a sentence of n characters.
struct MarkAssignment {
    std::vector<std::vector<MarkToken>> marks;  // per character, Order before Re
    std::vector<std::pair<int, int>> groups;    // [start, end) bonded spans
};

// Rule-based Kaeriten generation: レ for adjacent-unit reversals, Order
// pairs for non-adjacent ones (nesting depth picks the hierarchy level,
// outermost = 一二), — bonds for blocks that move as one unit.
// Throws InexpressibleError when the reading order is not realizable by a
// stack of queues.
MarkAssignment generate_marks(int n, const Permutation& reading);

// Convenience: build a fully annotated sentence from glyphs + reading order.
AnnotatedSentence annotate_sentence(const std::vector<std::string>& glyphs,
                                    const Permutation& reading);

// Direct simulator, independent of generate_marks and of the automaton:
// allow_groups=false is classic single-element stack sorting, =true pushes
// blocks of consecutive source characters that pop in internal order.
bool is_expressible(const Permutation& reading, bool allow_groups);

// transduce(generate_marks(n, reading)) == reading. Propagates
// InexpressibleError for unrealizable readings.
bool round_trip(int n, const Permutation& reading);

// Kana (or variant-glyph) string -> source glyph restoration dictionary.
struct KanaDictionary {
    struct Entry {
        std::string key;    // kana or variant form appearing in translations
        std::string glyph;  // the classical Chinese character it stands for
        std::string tag;    // optional context tag
    };
    std::vector<Entry> entries;

    void add(std::string key, std::string glyph, std::string tag = "");
    static KanaDictionary from_json(const nlohmann::json& j);
};

struct Alignment {
    // (source index, translation scalar position), in source order.
    std::vector<std::pair<int, int>> mapping;
    std::set<int> unread;  // source indices with no translation position
    struct Restoration {
        int begin = 0, end = 0;  // translation scalar span
        std::string glyph;
    };
    std::vector<Restoration> restored;
};

// Matches each source glyph to a position in the translation, applying
// dictionary restorations for glyphs realized as kana or variant forms.
// Duplicated glyphs resolve to the crossing-minimal assignment, ties to
// the leftmost positions. Throws AlignmentError when allow_unread is false
// and a glyph has no candidate position.
Alignment align(const std::vector<std::string>& source, const std::string& translation,
                const KanaDictionary& dict, bool allow_unread = true);

// Reading order induced by an alignment: matched source indices sorted by
// translation position.
Permutation alignment_permutation(const Alignment& a);

// Externally supplied POS word spans over the translation (scalar
// positions, [begin, end), tiling the string).
struct PosSpan {
    int begin = 0, end = 0;
    std::string tag;
};

struct KanaClassification {
    std::vector<std::string> okurigana;  // per source index
    std::vector<std::string> particle;
    std::vector<std::string> warnings;
};

// Kana inside a word span tagged VERB/ADV/NOUN/ADJ/PRON/DET become
// okurigana of that word's glyph; independent kana become the particle of
// the preceding glyph. Throws ParseError when the spans do not tile the
// translation.
KanaClassification classify_kana(const std::string& translation,
                                 const std::vector<PosSpan>& pos_spans,
                                 const Alignment& alignment, int n_source);

namespace detail {
// Injective assignment of items to candidate positions maximizing matches,
// then minimizing crossings, ties broken toward leftmost positions.
// Returns one chosen position per item (-1 = unassigned). Shared between
// align() and the RIBES character aligner.
std::vector<int> min_crossing_assignment(const std::vector<std::vector<int>>& candidates);
}  // namespace detail

}  // namespace kundoku
