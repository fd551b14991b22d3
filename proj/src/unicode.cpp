#include "kundoku/unicode.hpp"

#include <cstdint>

namespace kundoku {

namespace {

std::size_t sequence_length(unsigned char lead) {
    if (lead < 0x80) return 1;
    if ((lead & 0xE0) == 0xC0) return 2;
    if ((lead & 0xF0) == 0xE0) return 3;
    if ((lead & 0xF8) == 0xF0) return 4;
    return 1;  // stray continuation byte
}

uint32_t decode_scalar(std::string_view s) {
    if (s.empty()) return 0;
    unsigned char lead = static_cast<unsigned char>(s[0]);
    std::size_t len = sequence_length(lead);
    if (len == 1) return lead;
    uint32_t cp = lead & (0x7F >> len);
    for (std::size_t i = 1; i < len && i < s.size(); ++i)
        cp = (cp << 6) | (static_cast<unsigned char>(s[i]) & 0x3F);
    return cp;
}

}  // namespace

std::vector<std::string> split_scalars(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t len = sequence_length(static_cast<unsigned char>(text[i]));
        if (i + len > text.size()) len = 1;
        out.emplace_back(text.substr(i, len));
        i += len;
    }
    return out;
}

std::size_t scalar_length(std::string_view text) {
    std::size_t n = 0, i = 0;
    while (i < text.size()) {
        std::size_t len = sequence_length(static_cast<unsigned char>(text[i]));
        if (i + len > text.size()) len = 1;
        i += len;
        ++n;
    }
    return n;
}

bool is_kana(std::string_view scalar) {
    uint32_t cp = decode_scalar(scalar);
    return (cp >= 0x3041 && cp <= 0x3096) ||  // hiragana
           (cp >= 0x30A1 && cp <= 0x30FA) ||  // katakana
           cp == 0x30FC;                      // prolonged sound mark
}

bool is_space(std::string_view scalar) {
    uint32_t cp = decode_scalar(scalar);
    return cp == ' ' || cp == '\t' || cp == '\r' || cp == '\n' || cp == 0x3000;
}

bool is_punctuation(std::string_view scalar) {
    uint32_t cp = decode_scalar(scalar);
    switch (cp) {
        case 0x3001:  // 、
        case 0x3002:  // 。
        case 0xFF0C:  // ，
        case 0xFF0E:  // ．
        case 0x30FB:  // ・
        case 0x300C: case 0x300D:  // 「」
        case 0x300E: case 0x300F:  // 『』
        case 0xFF01: case 0xFF1F:  // ！？
        case 0xFF1A: case 0xFF1B:  // ：；
        case 0xFF08: case 0xFF09:  // （）
            return true;
        default:
            break;
    }
    if (cp < 0x80)
        return cp == '.' || cp == ',' || cp == '!' || cp == '?' || cp == ';' ||
               cp == ':' || cp == '(' || cp == ')' || cp == '"' || cp == '\'';
    return false;
}

}  // namespace kundoku
