#include "kundoku/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kundoku/errors.hpp"
#include "kundoku/unicode.hpp"

namespace kundoku {

namespace {

const std::array<std::vector<std::string>, 4>& order_series() {
    static const std::array<std::vector<std::string>, 4> series = {
        split_scalars("一二三四五六七八九十"),
        split_scalars("上中下"),
        split_scalars("甲乙丙丁戊己庚辛壬癸"),
        split_scalars("天地人"),
    };
    return series;
}

// Reverse lookup: native order glyph -> (level, ordinal).
const std::map<std::string, std::pair<int, int>>& order_glyph_table() {
    static const std::map<std::string, std::pair<int, int>> table = [] {
        std::map<std::string, std::pair<int, int>> t;
        const auto& series = order_series();
        for (int level = 0; level < 4; ++level)
            for (int ord = 0; ord < static_cast<int>(series[level].size()); ++ord)
                t[series[level][ord]] = {level + 1, ord + 1};
        return t;
    }();
    return table;
}

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

}  // namespace

MarkToken MarkToken::order(int level, int ordinal) {
    if (level < 1 || ordinal < 1)
        fail("Order mark requires level >= 1 and ordinal >= 1, got " +
             std::to_string(level) + "." + std::to_string(ordinal));
    return {Kind::Order, level, ordinal};
}

std::string MarkToken::code() const {
    switch (kind) {
        case Kind::E:
            return "E";
        case Kind::Re:
            return "レ";
        case Kind::Order: {
            const auto& series = order_series();
            if (level >= 1 && level <= 4 &&
                ordinal <= static_cast<int>(series[level - 1].size()))
                return series[level - 1][ordinal - 1];
            return std::to_string(level) + "." + std::to_string(ordinal);
        }
    }
    return {};
}

MarkToken parse_mark_code(std::string_view code) {
    auto tokens = [&] {
        std::vector<MarkToken> out;
        std::size_t i = 0;
        std::string s(code);
        while (i < s.size()) {
            if (s.compare(i, 2, "re") == 0) {
                out.push_back(MarkToken::re());
                i += 2;
            } else if (s[i] == 'E') {
                out.push_back(MarkToken::e());
                i += 1;
            } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
                std::size_t j = i;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                if (j >= s.size() || s[j] != '.')
                    fail("malformed numeric mark code '" + s + "'");
                std::size_t k = j + 1;
                while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
                if (k == j + 1) fail("malformed numeric mark code '" + s + "'");
                out.push_back(MarkToken::order(std::stoi(s.substr(i, j - i)),
                                               std::stoi(s.substr(j + 1, k - j - 1))));
                i = k;
            } else {
                auto scalars = split_scalars(std::string_view(s).substr(i));
                const std::string& g = scalars.front();
                if (g == "レ") {
                    out.push_back(MarkToken::re());
                } else if (auto it = order_glyph_table().find(g);
                           it != order_glyph_table().end()) {
                    out.push_back(MarkToken::order(it->second.first, it->second.second));
                } else {
                    fail("unknown mark code '" + g + "' in '" + s + "'");
                }
                i += g.size();
            }
        }
        return out;
    }();
    if (tokens.size() != 1) fail("expected a single mark code, got '" + std::string(code) + "'");
    return tokens.front();
}

namespace {

// Tokenizes a concatenated `_` suffix (e.g. "一レ", "2.1re") into slot order.
std::vector<MarkToken> parse_mark_codes(std::string_view codes, const std::string& where) {
    std::vector<MarkToken> out;
    std::size_t i = 0;
    std::string s(codes);
    while (i < s.size()) {
        std::size_t start = i;
        if (s.compare(i, 2, "re") == 0) {
            i += 2;
        } else if (s[i] == 'E') {
            i += 1;
        } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (i < s.size() && s[i] == '.') ++i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        } else {
            auto scalars = split_scalars(std::string_view(s).substr(i));
            i += scalars.front().size();
        }
        try {
            out.push_back(parse_mark_code(std::string_view(s).substr(start, i - start)));
        } catch (const ParseError& e) {
            fail(std::string(e.what()) + " at " + where);
        }
    }
    return out;
}

void validate_slot(const std::vector<MarkToken>& marks, const std::string& where) {
    bool seen_re = false;
    for (const auto& m : marks) {
        if (m.is_e() && marks.size() != 1)
            fail("E cannot be combined with another mark at " + where);
        if (m.is_re()) seen_re = true;
        if (m.is_order() && seen_re)
            fail("combined slot must store Order before レ at " + where);
    }
}

}  // namespace

std::string AnnotatedSentence::source_text() const {
    std::string out;
    for (const auto& c : chars) out += c.glyph;
    return out;
}

std::vector<std::pair<int, int>> AnnotatedSentence::groups() const {
    std::vector<std::pair<int, int>> out;
    int i = 0, n = static_cast<int>(chars.size());
    while (i < n) {
        if (!chars[i].group) {
            ++i;
            continue;
        }
        int j = i;
        while (j < n && chars[j].group == chars[i].group) ++j;
        out.emplace_back(i, j);
        i = j;
    }
    return out;
}

void AnnotatedSentence::validate() const {
    if (chars.empty()) fail("sentence '" + id + "' has no characters");
    for (std::size_t i = 0; i < chars.size(); ++i) {
        if (chars[i].glyph.empty())
            fail("empty glyph at position " + std::to_string(i));
        validate_slot(chars[i].marks, "position " + std::to_string(i));
    }
    // Group ids must form contiguous runs of length >= 2, with marks only
    // on the final member; silent characters cannot be bonded.
    std::map<int, std::pair<int, int>> seen;  // id -> [first, last]
    for (int i = 0; i < static_cast<int>(chars.size()); ++i) {
        if (!chars[i].group) continue;
        int g = *chars[i].group;
        auto [it, fresh] = seen.try_emplace(g, i, i);
        if (!fresh) {
            if (it->second.second != i - 1)
                fail("group " + std::to_string(g) + " is not contiguous at position " +
                     std::to_string(i));
            it->second.second = i;
        }
        if (chars[i].silent)
            fail("silent character inside group at position " + std::to_string(i));
    }
    for (const auto& [g, span] : seen) {
        if (span.first == span.second)
            fail("group " + std::to_string(g) + " has a single member at position " +
                 std::to_string(span.first));
        for (int i = span.first; i < span.second; ++i)
            if (!chars[i].marks.empty())
                fail("marks on non-final group member at position " + std::to_string(i));
    }
}

void validate_permutation(const Permutation& perm, const std::vector<int>& index_set) {
    Permutation sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != index_set)
        fail("permutation is not a bijection onto the expected index set");
}

std::string OrderedSentence::rendered() const {
    std::string out;
    for (const auto& e : chars) out += e.glyph + e.okurigana + e.particle;
    return out;
}

std::string OrderedSentence::reading() const {
    std::string out;
    for (std::size_t i = 0; i < chars.size(); ++i) {
        if (i) out += ' ';
        out += chars[i].glyph;
    }
    return out;
}

namespace {

struct Member {
    std::string glyph;
    std::string display;
    bool silent = false;
    std::vector<MarkToken> marks;
};

Member parse_member(std::string_view text, const std::string& where) {
    Member m;
    std::size_t i = 0;
    while (i < text.size() && text[i] != '=' && text[i] != '!' && text[i] != '_')
        ++i;
    m.glyph = std::string(text.substr(0, i));
    if (m.glyph.empty()) fail("missing glyph at " + where);
    if (i < text.size() && text[i] == '=') {
        std::size_t j = ++i;
        while (i < text.size() && text[i] != '!' && text[i] != '_') ++i;
        m.display = std::string(text.substr(j, i - j));
        if (m.display.empty()) fail("empty display variant at " + where);
    }
    if (i < text.size() && text[i] == '!') {
        m.silent = true;
        ++i;
    }
    if (i < text.size() && text[i] == '_') {
        m.marks = parse_mark_codes(text.substr(i + 1), where);
        if (m.marks.empty()) fail("empty mark suffix at " + where);
        i = text.size();
    }
    if (i != text.size()) fail("unexpected character in token at " + where);
    return m;
}

}  // namespace

AnnotatedSentence parse_annotated(std::string_view text) {
    AnnotatedSentence s;
    int next_group = 0;
    std::size_t pos = 0;
    int token_index = 0;
    while (pos < text.size()) {
        while (pos < text.size() && text[pos] == ' ') ++pos;
        if (pos >= text.size()) break;
        std::size_t end = text.find(' ', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view token = text.substr(pos, end - pos);
        pos = end;

        std::string where = "token " + std::to_string(token_index);
        std::vector<Member> members;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= token.size(); ++i) {
            if (i == token.size() || token[i] == '-') {
                members.push_back(parse_member(token.substr(start, i - start), where));
                start = i + 1;
            }
        }
        std::optional<int> group;
        if (members.size() > 1) group = next_group++;

        // Marks may be written on any single member of a bonded token (the
        // canonical place is the first); they are stored on the last.
        std::vector<MarkToken> group_marks;
        if (members.size() > 1) {
            for (auto& m : members) {
                if (m.marks.empty()) continue;
                if (!group_marks.empty())
                    fail("marks on more than one member of a bonded token at " + where);
                group_marks = std::move(m.marks);
                m.marks.clear();
            }
        }
        for (std::size_t i = 0; i < members.size(); ++i) {
            AnnotatedChar c;
            c.glyph = std::move(members[i].glyph);
            c.display = std::move(members[i].display);
            c.silent = members[i].silent;
            c.group = group;
            if (members.size() > 1)
                c.marks = (i + 1 == members.size()) ? group_marks : std::vector<MarkToken>{};
            else
                c.marks = std::move(members[i].marks);
            s.chars.push_back(std::move(c));
        }
        ++token_index;
    }
    s.validate();
    return s;
}

namespace {

std::string render_codes(const std::vector<MarkToken>& marks) {
    std::string out;
    for (const auto& m : marks) out += m.code();
    return out;
}

std::string render_member(const AnnotatedChar& c, const std::vector<MarkToken>* marks) {
    std::string out = c.glyph;
    if (!c.display.empty()) out += "=" + c.display;
    if (c.silent) out += "!";
    if (marks && !marks->empty()) out += "_" + render_codes(*marks);
    return out;
}

}  // namespace

std::string render_annotated(const AnnotatedSentence& s) {
    s.validate();
    std::string out;
    int n = static_cast<int>(s.chars.size());
    int i = 0;
    while (i < n) {
        if (!out.empty()) out += ' ';
        if (!s.chars[i].group) {
            out += render_member(s.chars[i], &s.chars[i].marks);
            ++i;
            continue;
        }
        int j = i;
        while (j < n && s.chars[j].group == s.chars[i].group) ++j;
        // Group marks live on the last member but render after the first glyph.
        out += render_member(s.chars[i], &s.chars[j - 1].marks);
        for (int k = i + 1; k < j; ++k)
            out += "-" + render_member(s.chars[k], nullptr);
        i = j;
    }
    return out;
}

AnnotatedSentence sentence_from_json(const nlohmann::json& j) {
    AnnotatedSentence s;
    s.id = j.value("id", "");
    auto glyphs = split_scalars(j.at("source").get<std::string>());
    std::size_t n = glyphs.size();
    s.chars.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.chars[i].glyph = glyphs[i];

    auto check_len = [&](const nlohmann::json& arr, const char* field) {
        if (arr.size() != n)
            fail(std::string(field) + " length " + std::to_string(arr.size()) +
                 " does not match source length " + std::to_string(n));
    };
    if (j.contains("marks")) {
        check_len(j["marks"], "marks");
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& code : j["marks"][i])
                s.chars[i].marks.push_back(parse_mark_code(code.get<std::string>()));
    }
    if (j.contains("groups")) {
        int gid = 0;
        for (const auto& span : j["groups"]) {
            int a = span.at(0).get<int>(), b = span.at(1).get<int>();
            if (a < 0 || b > static_cast<int>(n) || b - a < 2)
                fail("bad group span [" + std::to_string(a) + "," + std::to_string(b) + ")");
            for (int k = a; k < b; ++k) s.chars[k].group = gid;
            ++gid;
        }
    }
    if (j.contains("silent"))
        for (const auto& idx : j["silent"]) {
            int k = idx.get<int>();
            if (k < 0 || k >= static_cast<int>(n)) fail("silent index out of range");
            s.chars[k].silent = true;
        }
    if (j.contains("okurigana")) {
        check_len(j["okurigana"], "okurigana");
        for (std::size_t i = 0; i < n; ++i) s.chars[i].okurigana = j["okurigana"][i];
    }
    if (j.contains("particle")) {
        check_len(j["particle"], "particle");
        for (std::size_t i = 0; i < n; ++i) s.chars[i].particle = j["particle"][i];
    }
    if (j.contains("display")) {
        check_len(j["display"], "display");
        for (std::size_t i = 0; i < n; ++i) s.chars[i].display = j["display"][i];
    }
    if (j.contains("translation") && !j["translation"].is_null())
        s.translation = j["translation"].get<std::string>();
    s.validate();
    return s;
}

nlohmann::json sentence_to_json(const AnnotatedSentence& s) {
    nlohmann::json j;
    j["id"] = s.id;
    j["source"] = s.source_text();
    auto marks = nlohmann::json::array();
    auto okurigana = nlohmann::json::array();
    auto particle = nlohmann::json::array();
    auto silent = nlohmann::json::array();
    bool any_display = false;
    for (std::size_t i = 0; i < s.chars.size(); ++i) {
        const auto& c = s.chars[i];
        auto slot = nlohmann::json::array();
        for (const auto& m : c.marks) slot.push_back(m.code());
        marks.push_back(slot);
        okurigana.push_back(c.okurigana);
        particle.push_back(c.particle);
        if (c.silent) silent.push_back(i);
        if (!c.display.empty()) any_display = true;
    }
    j["marks"] = marks;
    j["okurigana"] = okurigana;
    j["particle"] = particle;
    j["silent"] = silent;
    auto groups = nlohmann::json::array();
    for (auto [a, b] : s.groups()) groups.push_back(nlohmann::json::array({a, b}));
    j["groups"] = groups;
    if (any_display) {
        auto display = nlohmann::json::array();
        for (const auto& c : s.chars) display.push_back(c.display);
        j["display"] = display;
    }
    if (s.translation) j["translation"] = *s.translation;
    return j;
}

}  // namespace kundoku
