#pragma once

#include <stdexcept>
#include <string>

namespace kundoku {

// Malformed notation, broken invariants, bad file contents.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A permutation that no Kaeriten assignment can realize.
struct InexpressibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No consistent character alignment exists.
struct AlignmentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// DFS over the automaton exceeded its configuration budget.
struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace kundoku
