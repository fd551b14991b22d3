#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace kundoku {

// One Kaeriten symbol. A slot with no tokens means "no mark"; an explicit
// E token is allowed for round-tripping corpora that spell it out, and is
// treated identically by the automaton.
struct MarkToken {
    enum class Kind { E, Re, Order };

    Kind kind = Kind::E;
    int level = 0;    // Order only: 1 = 一二…, 2 = 上中下, 3 = 甲乙…, 4 = 天地人
    int ordinal = 0;  // Order only: position within the level, 1-based

    static MarkToken e() { return {Kind::E, 0, 0}; }
    static MarkToken re() { return {Kind::Re, 0, 0}; }
    static MarkToken order(int level, int ordinal);

    bool is_order() const { return kind == Kind::Order; }
    bool is_re() const { return kind == Kind::Re; }
    bool is_e() const { return kind == Kind::E; }

    // Canonical code: native glyph where the traditional series covers the
    // ordinal, "level.ordinal" digits otherwise.
    std::string code() const;

    friend auto operator<=>(const MarkToken&, const MarkToken&) = default;
};

// Parses one mark code ("レ", "re", "一", "2.3", "E").
MarkToken parse_mark_code(std::string_view code);

struct AnnotatedChar {
    std::string glyph;
    // Glyph used when rendering the Japanese reading; differs from `glyph`
    // when the translation side uses a variant form (溫 → 温). Empty means
    // same as glyph.
    std::string display;
    std::vector<MarkToken> marks;    // the mark slot, Order before Re
    std::optional<int> group;        // characters sharing an id are —-bonded
    bool silent = false;             // okiji: present in the source, unread
    std::string okurigana;
    std::string particle;

    const std::string& display_glyph() const { return display.empty() ? glyph : display; }

    friend bool operator==(const AnnotatedChar&, const AnnotatedChar&) = default;
};

struct AnnotatedSentence {
    std::string id;
    std::vector<AnnotatedChar> chars;
    std::optional<std::string> translation;

    std::string source_text() const;

    // Contiguous [start, end) runs per group id, in source order.
    std::vector<std::pair<int, int>> groups() const;

    // Throws ParseError if any type invariant is broken: empty sentence,
    // E combined with another token, non-contiguous or undersized groups,
    // marks on a non-final group member, silent grouped characters.
    void validate() const;

    friend bool operator==(const AnnotatedSentence&, const AnnotatedSentence&) = default;
};

// The Japanese reading order: 0-based source indices covering every
// non-silent index exactly once.
using Permutation = std::vector<int>;

// Throws ParseError unless `perm` is a bijection onto `index_set`.
void validate_permutation(const Permutation& perm, const std::vector<int>& index_set);

struct OrderedSentence {
    struct Entry {
        std::string glyph;
        std::string okurigana;
        std::string particle;
    };
    std::vector<Entry> chars;

    // Glyph + okurigana + particle concatenated per char.
    std::string rendered() const;
    // Glyphs only, space separated.
    std::string reading() const;
};

// Mark-notation text format, one sentence per line:
//   glyphs separated by single spaces, `_<codes>` suffix for marks,
//   `-` joins bonded glyphs, `!` suffix marks silent characters,
//   `=<glyph>` sets a display variant.
AnnotatedSentence parse_annotated(std::string_view text);
std::string render_annotated(const AnnotatedSentence& s);

// Corpus JSON-lines object (fields id, source, marks, groups, silent,
// okurigana, particle, translation, optional display).
AnnotatedSentence sentence_from_json(const nlohmann::json& j);
nlohmann::json sentence_to_json(const AnnotatedSentence& s);

}  // namespace kundoku
