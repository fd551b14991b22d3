#include "kundoku/combinatorics.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "kundoku/errors.hpp"
#include "kundoku/markgen.hpp"

namespace kundoku {

namespace {

mpz_class binom(long a, long b) {
    if (b < 0 || a < 0 || b > a) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(a),
                 static_cast<unsigned long>(b));
    return r;
}

}  // namespace

mpz_class factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial requires n >= 0");
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

mpz_class catalan_count(int n) {
    if (n < 1) throw std::invalid_argument("catalan_count requires n >= 1");
    return binom(2L * n, n) / (n + 1);
}

mpz_class stack_of_queues_count(int n) {
    if (n < 1) throw std::invalid_argument("stack_of_queues_count requires n >= 1");
    mpq_class total = 0;
    for (int m = 1; m <= n + 1; ++m) {
        mpz_class inner = 0;
        for (int i = 0; i < m; ++i) inner += binom(m, i) * binom(2 * m - i - 2, m - 1);
        mpq_class term(binom(m, n - m + 1) * inner, m);
        term.canonicalize();
        if ((n - m + 1) % 2 == 1) term = -term;
        total += term;
    }
    total.canonicalize();
    if (total.get_den() != 1)
        throw std::logic_error("stack_of_queues_count: non-integral sum");
    return total.get_num();
}

mpz_class gf_series_count(int n, int terms) {
    if (n < 1) throw std::invalid_argument("gf_series_count requires n >= 1");
    if (terms < n + 2)
        throw std::invalid_argument("gf_series_count needs terms >= n + 2");
    // P(x) = 1 - 6x + 7x^2 - 2x^3 + x^4; s = sqrt(P) as a power series.
    std::vector<mpq_class> p(terms, 0);
    p[0] = 1;
    if (terms > 1) p[1] = -6;
    if (terms > 2) p[2] = 7;
    if (terms > 3) p[3] = -2;
    if (terms > 4) p[4] = 1;
    std::vector<mpq_class> s(terms, 0);
    s[0] = 1;
    for (int k = 1; k < terms; ++k) {
        mpq_class acc = p[k];
        for (int i = 1; i < k; ++i) acc -= s[i] * s[k - i];
        s[k] = acc / 2;
        s[k].canonicalize();
    }
    // f(x) = (1 - 3x + x^2 - s(x)) / (2x): coefficient n is
    // (q_{n+1} - s_{n+1}) / 2 with q = 1 - 3x + x^2.
    mpq_class q = 0;
    if (n + 1 == 1) q = -3;
    if (n + 1 == 2) q = 1;
    mpq_class coeff = (q - s[n + 1]) / 2;
    coeff.canonicalize();
    if (coeff.get_den() != 1)
        throw std::logic_error("gf_series_count: non-integral coefficient");
    return coeff.get_num();
}

namespace {

void enumerate_schedules(int n, bool allow_groups, int next_input,
                         std::vector<std::pair<int, int>>& stack, Permutation& out,
                         std::set<Permutation>& results) {
    if (static_cast<int>(out.size()) == n && stack.empty()) {
        results.insert(out);
        return;
    }
    if (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        for (int k = a; k <= b; ++k) out.push_back(k);
        enumerate_schedules(n, allow_groups, next_input, stack, out, results);
        out.resize(out.size() - (b - a + 1));
        stack.emplace_back(a, b);
    }
    if (next_input < n) {
        int limit = allow_groups ? n - 1 : next_input;
        for (int j = next_input; j <= limit; ++j) {
            stack.emplace_back(next_input, j);
            enumerate_schedules(n, allow_groups, j + 1, stack, out, results);
            stack.pop_back();
        }
    }
}

}  // namespace

mpz_class brute_force_count(int n, bool allow_groups) {
    if (n < 1) throw std::invalid_argument("brute_force_count requires n >= 1");
    if (n > 9)
        throw ResourceLimitError("brute_force_count is limited to n <= 9, got n = " +
                                 std::to_string(n));
    std::set<Permutation> results;
    std::vector<std::pair<int, int>> stack;
    Permutation out;
    enumerate_schedules(n, allow_groups, 0, stack, out, results);
    return mpz_class(static_cast<unsigned long>(results.size()));
}

std::vector<Permutation> enumerate_expressible(int n, bool allow_groups) {
    if (n < 1) throw std::invalid_argument("enumerate_expressible requires n >= 1");
    if (n > 8)
        throw ResourceLimitError("enumerate_expressible is limited to n <= 8, got n = " +
                                 std::to_string(n));
    Permutation perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Permutation> out;
    do {
        if (is_expressible(perm, allow_groups)) out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

std::vector<CountRow> count_all(int n) {
    if (n < 1) throw std::invalid_argument("count_all requires n >= 1");
    std::vector<CountRow> rows;
    rows.reserve(n);
    for (int k = 1; k <= n; ++k)
        rows.push_back({k, catalan_count(k), stack_of_queues_count(k), factorial(k)});
    return rows;
}

}  // namespace kundoku
