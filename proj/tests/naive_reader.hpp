#pragma once

// A direct transcription of the three prose reading rules (レ pops when its
// following unit was just read; an Order chain pops in ordinal sequence once
// its trigger is read; bonded groups move as one unit), written without
// reference to the automaton's transition table. Used as an independent
// oracle for the PDA.

#include <optional>
#include <vector>

#include "kundoku/model.hpp"

namespace kundoku::testutil {

struct NaiveUnit {
    std::vector<int> members;          // ascending source indices
    std::vector<MarkToken> slot;
};

inline std::vector<NaiveUnit> naive_units(const AnnotatedSentence& s) {
    std::vector<NaiveUnit> units;
    int n = static_cast<int>(s.chars.size());
    int i = 0;
    while (i < n) {
        if (s.chars[i].silent) {
            ++i;
            continue;
        }
        int j = i + 1;
        if (s.chars[i].group)
            while (j < n && s.chars[j].group == s.chars[i].group) ++j;
        NaiveUnit u;
        for (int k = i; k < j; ++k) u.members.push_back(k);
        for (const auto& m : s.chars[j - 1].marks)
            if (!m.is_e()) u.slot.push_back(m);
        units.push_back(std::move(u));
        i = j;
    }
    return units;
}

// Reads the sentence by the prose rules; returns the reading order over
// source indices, or nullopt when the rules get stuck or leave residue.
inline std::optional<Permutation> naive_read(const AnnotatedSentence& s) {
    auto units = naive_units(s);
    std::vector<int> stack;  // unit ids
    std::vector<int> output;

    auto has_re = [&](int u) {
        for (const auto& m : units[u].slot)
            if (m.is_re()) return true;
        return false;
    };
    auto order_of = [&](int u) -> std::optional<MarkToken> {
        for (const auto& m : units[u].slot)
            if (m.is_order()) return m;
        return std::nullopt;
    };

    // After each emission, cascade: a レ unit pops when the unit following
    // it in the source was just emitted; a chain member O(i,j+1) pops when
    // the O(i,j) (or trigger O(i,1)) unit was just emitted.
    auto cascade = [&]() {
        bool progressed = true;
        while (progressed && !stack.empty() && !output.empty()) {
            progressed = false;
            int top = stack.back();
            int last = output.back();
            if (has_re(top) && top + 1 == last) {
                stack.pop_back();
                output.push_back(top);
                progressed = true;
                continue;
            }
            auto mt = order_of(top);
            auto ml = order_of(last);
            // Later in the series pops next; covers both 一二三-style
            // consecutive ordinals and the 上…下 two-mark convention.
            if (mt && ml && mt->level == ml->level && mt->ordinal > ml->ordinal) {
                stack.pop_back();
                output.push_back(top);
                progressed = true;
            }
        }
    };

    for (int u = 0; u < static_cast<int>(units.size()); ++u) {
        auto order = order_of(u);
        bool pushes = has_re(u) || (order && order->ordinal >= 2);
        if (pushes) {
            stack.push_back(u);
        } else {
            output.push_back(u);  // unmarked, or an O(i,1) trigger
            cascade();
        }
    }
    if (!stack.empty() || output.size() != units.size()) return std::nullopt;

    Permutation perm;
    for (int u : output)
        for (int idx : units[u].members) perm.push_back(idx);
    return perm;
}

}  // namespace kundoku::testutil
