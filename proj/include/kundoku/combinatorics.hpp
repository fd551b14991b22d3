#pragma once

#include <vector>

#include <gmpxx.h>

#include "kundoku/model.hpp"

namespace kundoku {

// Exact factorial, n >= 0.
mpz_class factorial(int n);

// Readings of n characters realizable with レ and Order marks but no group
// bonds: single-stack sortable orders, the n-th Catalan number. n >= 1.
mpz_class catalan_count(int n);

// Readings realizable with group bonds as well: the stack-of-queues
// closed-form sum. Agrees with brute force for small n; the sequence
// starts 1, 2, 6, 20, 70, 254, 948 ... n >= 1.
mpz_class stack_of_queues_count(int n);

// Same sequence via the generating function
//   (1 - 3x + x^2 - sqrt(1 - 6x + 7x^2 - 2x^3 + x^4)) / (2x),
// expanded as an exact rational power series. terms must exceed n.
mpz_class gf_series_count(int n, int terms = 64);

// Exhaustive push/pop enumeration with duplicate elimination. Guarded to
// n <= 9 (the schedule space explodes factorially past that).
mpz_class brute_force_count(int n, bool allow_groups);

// All expressible reading orders of n characters in lexicographic order.
// Guarded to n <= 8.
std::vector<Permutation> enumerate_expressible(int n, bool allow_groups);

struct CountRow {
    int n = 0;
    mpz_class stack_only;    // Catalan
    mpz_class with_groups;   // stack of queues
    mpz_class total;         // n!
};

// Count table for 1..n.
std::vector<CountRow> count_all(int n);

}  // namespace kundoku
