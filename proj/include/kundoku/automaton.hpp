#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kundoku/model.hpp"

namespace kundoku {

// One symbol of the flattened input tape: a character/group unit, the
// explicit no-mark symbol E, レ, or an Order(i,j) mark.
struct TapeSymbol {
    enum class Kind { Unit, E, Re, Order };
    Kind kind = Kind::E;
    int unit = -1;  // Unit only: index into Tape::units
    int level = 0, ordinal = 0;

    friend bool operator==(const TapeSymbol&, const TapeSymbol&) = default;
};

// The automaton's input: each unit (single character or —-bonded group)
// followed by its mark tokens, E standing in for an empty slot. Silent
// characters never reach the tape.
struct Tape {
    std::vector<TapeSymbol> symbols;
    std::vector<std::vector<int>> units;  // unit id -> source char indices, ascending
    std::vector<int> silent_indices;
};

// Throws ParseError on invariant violations (delegates to validate()).
Tape flatten_input(const AnnotatedSentence& s);

enum class State { q0, q1, q2, q3, q4 };

// Stack alphabet: units, レ, Order marks, and the bottom symbol Z0.
struct StackSymbol {
    enum class Kind { Z0, Unit, Re, Order };
    Kind kind = Kind::Z0;
    int unit = -1;
    int level = 0, ordinal = 0;

    friend bool operator==(const StackSymbol&, const StackSymbol&) = default;
};

struct MachineConfig {
    State state = State::q0;
    std::vector<StackSymbol> stack;  // back() is the top; Z0 at front
    std::size_t cursor = 0;          // index into Tape::symbols
    std::vector<int> output;         // emitted unit ids

    friend bool operator==(const MachineConfig&, const MachineConfig&) = default;
};

MachineConfig initial_config();

// All configurations reachable by one δ application, paired with the rule
// number (1-15, in the transition table's order). The two branches of the
// nondeterministic O(i,1) rule come back push-branch first.
std::vector<std::pair<int, MachineConfig>> step(const MachineConfig& c, const Tape& tape);

struct TraceStep {
    MachineConfig before;
    int rule = 0;
    int emitted_unit = -1;  // -1 for ε
};

struct Trace {
    std::vector<TraceStep> steps;
    bool accepted = false;
    std::optional<std::string> failure_reason;
};

nlohmann::json trace_to_json(const Trace& t, const Tape& tape);

struct RunOptions {
    bool strict = false;          // exhaust branches, detect output ambiguity
    bool want_trace = false;
    std::size_t max_configs = 1'000'000;
};

struct ValidationResult {
    bool accepted = false;
    std::optional<Permutation> permutation;
    std::optional<OrderedSentence> ordered;
    std::optional<bool> ambiguous;  // strict mode only
    std::optional<Trace> trace;
    std::string reason;  // diagnostic when rejected
};

// Depth-first search over the nondeterministic branches with a fixed
// branch order, so the non-strict result is deterministic. Rejection is a
// value; ResourceLimitError is thrown only when max_configs is exceeded.
ValidationResult run(const AnnotatedSentence& s, const RunOptions& options = {});

// Throws ParseError (carrying the failure diagnostic) when the annotation
// is rejected.
std::pair<Permutation, OrderedSentence> transduce(const AnnotatedSentence& s);

// Fraction of sentences accepted; throws ParseError on an empty corpus.
double pass_rate(const std::vector<AnnotatedSentence>& corpus);

}  // namespace kundoku
