#include "kundoku/automaton.hpp"

#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "kundoku/errors.hpp"

namespace kundoku {

namespace {

StackSymbol z0() { return {StackSymbol::Kind::Z0, -1, 0, 0}; }
StackSymbol unit_sym(int u) { return {StackSymbol::Kind::Unit, u, 0, 0}; }
StackSymbol re_sym() { return {StackSymbol::Kind::Re, -1, 0, 0}; }
StackSymbol order_sym(int level, int ordinal) {
    return {StackSymbol::Kind::Order, -1, level, ordinal};
}

bool is_unit(const StackSymbol& s) { return s.kind == StackSymbol::Kind::Unit; }
bool is_order(const StackSymbol& s) { return s.kind == StackSymbol::Kind::Order; }
bool is_order1(const StackSymbol& s) { return is_order(s) && s.ordinal == 1; }

}  // namespace

Tape flatten_input(const AnnotatedSentence& s) {
    s.validate();
    Tape tape;
    int n = static_cast<int>(s.chars.size());
    int i = 0;
    while (i < n) {
        if (s.chars[i].silent) {
            tape.silent_indices.push_back(i);
            ++i;
            continue;
        }
        int j = i + 1;
        if (s.chars[i].group)
            while (j < n && s.chars[j].group == s.chars[i].group) ++j;
        std::vector<int> members;
        for (int k = i; k < j; ++k) members.push_back(k);
        const auto& marks = s.chars[j - 1].marks;  // group marks sit on the last member

        int unit_id = static_cast<int>(tape.units.size());
        tape.units.push_back(std::move(members));
        tape.symbols.push_back({TapeSymbol::Kind::Unit, unit_id, 0, 0});
        bool any = false;
        for (const auto& m : marks) {
            if (m.is_e()) continue;  // explicit E equals an empty slot
            if (m.is_re())
                tape.symbols.push_back({TapeSymbol::Kind::Re, -1, 0, 0});
            else
                tape.symbols.push_back({TapeSymbol::Kind::Order, -1, m.level, m.ordinal});
            any = true;
        }
        if (!any) tape.symbols.push_back({TapeSymbol::Kind::E, -1, 0, 0});
        i = j;
    }

    // Normalize ordinals per chain to consecutive ranks: traditional texts
    // write two-mark level-2 chains as 上…下 (ordinals 1 and 3 in the
    // 上中下 series), which must read as a 1,2 chain. A chain is the run of
    // same-level Order symbols closed by its ordinal-1 trigger; same-level
    // chains never interleave. Trigger-less runs keep their gap above 1 so
    // they still fail to resolve.
    std::map<int, std::vector<std::size_t>> pending;  // level -> symbol positions
    auto normalize = [&](std::vector<std::size_t>& group, bool has_trigger) {
        std::set<int> seen;
        for (std::size_t p : group) seen.insert(tape.symbols[p].ordinal);
        int base = has_trigger ? 1 : 2;
        for (std::size_t p : group) {
            auto& sym = tape.symbols[p];
            sym.ordinal = base + static_cast<int>(std::distance(
                                     seen.begin(), seen.find(sym.ordinal)));
        }
        group.clear();
    };
    for (std::size_t pos = 0; pos < tape.symbols.size(); ++pos) {
        auto& sym = tape.symbols[pos];
        if (sym.kind != TapeSymbol::Kind::Order) continue;
        pending[sym.level].push_back(pos);
        if (sym.ordinal == 1) normalize(pending[sym.level], true);
    }
    for (auto& [level, group] : pending)
        if (!group.empty()) normalize(group, false);
    return tape;
}

MachineConfig initial_config() {
    MachineConfig c;
    c.state = State::q0;
    c.stack = {z0()};
    return c;
}

std::vector<std::pair<int, MachineConfig>> step(const MachineConfig& c, const Tape& tape) {
    std::vector<std::pair<int, MachineConfig>> out;
    auto push_succ = [&](int rule, State state, auto&& mutate) {
        MachineConfig next = c;
        next.state = state;
        mutate(next);
        out.emplace_back(rule, std::move(next));
    };
    const auto& stack = c.stack;
    auto top = [&](std::size_t depth) -> const StackSymbol& {
        return stack[stack.size() - 1 - depth];
    };

    switch (c.state) {
        case State::q0: {
            if (c.cursor < tape.symbols.size()) {
                const TapeSymbol& in = tape.symbols[c.cursor];
                switch (in.kind) {
                    case TapeSymbol::Kind::Unit:
                        if (is_order1(top(0))) {
                            // δ(q0, c, O(i,1)) -> q3: reject trap.
                            push_succ(2, State::q3, [&](MachineConfig& n) { ++n.cursor; });
                        } else {
                            push_succ(1, State::q0, [&](MachineConfig& n) {
                                n.stack.push_back(unit_sym(in.unit));
                                ++n.cursor;
                            });
                        }
                        break;
                    case TapeSymbol::Kind::Re:
                        push_succ(3, State::q0, [&](MachineConfig& n) {
                            n.stack.push_back(re_sym());
                            ++n.cursor;
                        });
                        break;
                    case TapeSymbol::Kind::E:
                        if (is_unit(top(0))) {
                            push_succ(4, State::q1, [&](MachineConfig& n) {
                                n.output.push_back(n.stack.back().unit);
                                n.stack.pop_back();
                                ++n.cursor;
                            });
                        }
                        break;
                    case TapeSymbol::Kind::Order:
                        if (in.ordinal > 1) {
                            push_succ(5, State::q0, [&](MachineConfig& n) {
                                n.stack.push_back(order_sym(in.level, in.ordinal));
                                ++n.cursor;
                            });
                        } else {
                            // Nondeterministic: keep reading (push branch)
                            // or start resolving the level (q2 branch).
                            auto push_mark = [&](MachineConfig& n) {
                                n.stack.push_back(order_sym(in.level, in.ordinal));
                                ++n.cursor;
                            };
                            push_succ(6, State::q0, push_mark);
                            push_succ(6, State::q2, push_mark);
                        }
                        break;
                }
            }
            if (stack.size() == 1)  // [Z0]
                push_succ(15, State::q4, [](MachineConfig&) {});
            break;
        }
        case State::q1: {
            if (top(0).kind == StackSymbol::Kind::Re && stack.size() >= 2) {
                if (is_unit(top(1))) {
                    push_succ(7, State::q1, [&](MachineConfig& n) {
                        n.stack.pop_back();
                        n.output.push_back(n.stack.back().unit);
                        n.stack.pop_back();
                    });
                } else if (is_order1(top(1))) {
                    push_succ(9, State::q2,
                              [&](MachineConfig& n) { n.stack.pop_back(); });
                }
            } else if (top(0).kind == StackSymbol::Kind::Z0) {
                push_succ(8, State::q0, [](MachineConfig&) {});
            } else if (is_order(top(0))) {
                push_succ(10, State::q0, [](MachineConfig&) {});
            }
            break;
        }
        case State::q2: {
            if (stack.size() >= 3 && is_order(top(0)) && is_unit(top(1))) {
                const StackSymbol& third = top(2);
                auto pop_emit = [&](MachineConfig& n) {
                    n.stack.pop_back();
                    n.output.push_back(n.stack.back().unit);
                    n.stack.pop_back();
                };
                if (is_order(third)) {
                    if (third.level == top(0).level && third.ordinal == top(0).ordinal + 1)
                        push_succ(11, State::q2, pop_emit);
                    else if (third.level != top(0).level)
                        push_succ(12, State::q0, pop_emit);
                    // same level, non-consecutive ordinal: stuck
                } else if (third.kind == StackSymbol::Kind::Z0) {
                    push_succ(13, State::q0, pop_emit);
                } else if (third.kind == StackSymbol::Kind::Re) {
                    push_succ(14, State::q1, pop_emit);
                }
            }
            break;
        }
        case State::q3:
        case State::q4:
            break;  // q3 is the reject trap; q4 has no exits
    }
    return out;
}

namespace {

struct Search {
    const Tape& tape;
    RunOptions opts;
    std::size_t visited = 0;

    std::optional<std::vector<int>> first_output;
    bool ambiguous = false;

    std::vector<TraceStep> path;
    std::optional<Trace> accept_trace;
    std::vector<TraceStep> failure_path;

    std::size_t failure_cursor = 0;
    std::string failure_reason;

    void record_failure(const MachineConfig& c, const std::string& reason) {
        if (c.cursor >= failure_cursor) {
            failure_cursor = c.cursor;
            failure_reason = reason;
            if (opts.want_trace) failure_path = path;
        }
    }

    // Returns true when the search should stop.
    bool dfs(const MachineConfig& c) {
        if (++visited > opts.max_configs)
            throw ResourceLimitError("automaton search exceeded " +
                                     std::to_string(opts.max_configs) + " configurations");
        if (c.state == State::q4) {
            if (c.cursor == tape.symbols.size()) {
                if (!first_output) {
                    first_output = c.output;
                    if (opts.want_trace) {
                        accept_trace = Trace{path, true, std::nullopt};
                    }
                    return !opts.strict;
                }
                if (c.output != *first_output) {
                    ambiguous = true;
                    return true;
                }
            } else {
                record_failure(c, "accepting state reached with input remaining");
            }
            return false;
        }
        if (c.state == State::q3) {
            record_failure(c, "character read over unresolved O(i,1) at tape position " +
                                  std::to_string(c.cursor - 1));
            return false;
        }
        auto successors = step(c, tape);
        if (successors.empty()) {
            std::string reason =
                c.cursor < tape.symbols.size()
                    ? "no transition applicable at tape position " + std::to_string(c.cursor)
                    : "input exhausted with " + std::to_string(c.stack.size() - 1) +
                          " unresolved stack symbols";
            record_failure(c, reason);
            return false;
        }
        for (auto& [rule, next] : successors) {
            if (opts.want_trace) {
                int emitted = next.output.size() > c.output.size() ? next.output.back() : -1;
                path.push_back({c, rule, emitted});
            }
            bool stop = dfs(next);
            if (opts.want_trace) path.pop_back();
            if (stop) return true;
        }
        return false;
    }
};

}  // namespace

ValidationResult run(const AnnotatedSentence& s, const RunOptions& options) {
    Tape tape = flatten_input(s);
    ValidationResult result;
    if (tape.units.empty()) {
        result.reason = "no readable characters (all silent)";
        if (options.want_trace) result.trace = Trace{{}, false, result.reason};
        return result;
    }

    Search search{tape, options};
    search.dfs(initial_config());

    if (search.first_output) {
        result.accepted = true;
        Permutation perm;
        for (int u : *search.first_output)
            for (int idx : tape.units[u]) perm.push_back(idx);
        OrderedSentence ordered;
        for (int idx : perm)
            ordered.chars.push_back({s.chars[idx].display_glyph(), s.chars[idx].okurigana,
                                     s.chars[idx].particle});
        result.permutation = std::move(perm);
        result.ordered = std::move(ordered);
        if (options.strict) result.ambiguous = search.ambiguous;
        if (options.want_trace) result.trace = search.accept_trace;
    } else {
        result.reason = search.failure_reason.empty() ? "no accepting branch"
                                                      : search.failure_reason;
        if (options.want_trace)
            result.trace = Trace{search.failure_path, false, result.reason};
    }
    return result;
}

std::pair<Permutation, OrderedSentence> transduce(const AnnotatedSentence& s) {
    ValidationResult r = run(s);
    if (!r.accepted)
        throw ParseError("invalid annotation for sentence '" + s.id + "': " + r.reason);
    return {std::move(*r.permutation), std::move(*r.ordered)};
}

double pass_rate(const std::vector<AnnotatedSentence>& corpus) {
    if (corpus.empty()) throw ParseError("pass rate is undefined on an empty corpus");
    std::size_t accepted = 0;
    for (const auto& s : corpus)
        if (run(s).accepted) ++accepted;
    return static_cast<double>(accepted) / static_cast<double>(corpus.size());
}

namespace {

std::string state_name(State s) {
    switch (s) {
        case State::q0: return "q0";
        case State::q1: return "q1";
        case State::q2: return "q2";
        case State::q3: return "q3";
        case State::q4: return "q4";
    }
    return "?";
}

nlohmann::json stack_to_json(const std::vector<StackSymbol>& stack, const Tape& tape) {
    auto arr = nlohmann::json::array();
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {  // top first
        switch (it->kind) {
            case StackSymbol::Kind::Z0:
                arr.push_back("Z0");
                break;
            case StackSymbol::Kind::Re:
                arr.push_back("レ");
                break;
            case StackSymbol::Kind::Order:
                arr.push_back("O(" + std::to_string(it->level) + "," +
                              std::to_string(it->ordinal) + ")");
                break;
            case StackSymbol::Kind::Unit: {
                nlohmann::json u = nlohmann::json::array();
                for (int idx : tape.units[it->unit]) u.push_back(idx);
                arr.push_back(u);
                break;
            }
        }
    }
    return arr;
}

}  // namespace

nlohmann::json trace_to_json(const Trace& t, const Tape& tape) {
    nlohmann::json j;
    j["accepted"] = t.accepted;
    if (t.failure_reason) j["failure_reason"] = *t.failure_reason;
    auto steps = nlohmann::json::array();
    for (const auto& step : t.steps) {
        nlohmann::json s;
        s["state"] = state_name(step.before.state);
        s["cursor"] = step.before.cursor;
        s["stack"] = stack_to_json(step.before.stack, tape);
        s["rule"] = step.rule;
        if (step.emitted_unit >= 0) {
            nlohmann::json u = nlohmann::json::array();
            for (int idx : tape.units[step.emitted_unit]) u.push_back(idx);
            s["emitted"] = u;
        }
        steps.push_back(std::move(s));
    }
    j["steps"] = std::move(steps);
    return j;
}

}  // namespace kundoku
