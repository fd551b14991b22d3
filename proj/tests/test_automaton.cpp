#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "kundoku/automaton.hpp"
#include "kundoku/errors.hpp"
#include "kundoku/markgen.hpp"
#include "kundoku/model.hpp"
#include "naive_reader.hpp"
#include "test_util.hpp"

using namespace kundoku;

namespace {

std::string reading_of(const std::string& notation) {
    auto [perm, ordered] = transduce(parse_annotated(notation));
    return ordered.reading();
}

}  // namespace

TEST_CASE("flatten_input builds the character/mark tape") {
    auto tape = flatten_input(parse_annotated("A B_レ C_レ D"));
    REQUIRE(tape.symbols.size() == 8);
    CHECK(tape.symbols[0].kind == TapeSymbol::Kind::Unit);
    CHECK(tape.symbols[1].kind == TapeSymbol::Kind::E);
    CHECK(tape.symbols[3].kind == TapeSymbol::Kind::Re);
    CHECK(tape.symbols[7].kind == TapeSymbol::Kind::E);
    CHECK(tape.units.size() == 4);

    auto grouped = flatten_input(parse_annotated("A_二-B C D_一"));
    REQUIRE(grouped.units.size() == 3);
    CHECK(grouped.units[0] == std::vector<int>{0, 1});
    REQUIRE(grouped.symbols.size() == 6);
    CHECK(grouped.symbols[1].kind == TapeSymbol::Kind::Order);
    CHECK(grouped.symbols[1].ordinal == 2);

    auto silent = flatten_input(parse_annotated("A 而! B"));
    CHECK(silent.units.size() == 2);
    CHECK(silent.silent_indices == std::vector<int>{1});
}

TEST_CASE("two-mark 上下 chains normalize to consecutive ordinals") {
    auto tape = flatten_input(parse_annotated("A_下 B_上"));
    REQUIRE(tape.symbols.size() == 4);
    CHECK(tape.symbols[1].kind == TapeSymbol::Kind::Order);
    CHECK(tape.symbols[1].ordinal == 2);  // 下 parses as ordinal 3, reads as 2
    CHECK(tape.symbols[3].ordinal == 1);
}

TEST_CASE("step from the initial configuration") {
    auto tape = flatten_input(parse_annotated("A B_レ C_レ D"));
    auto succ = step(initial_config(), tape);
    // Unit head: push it; plus the ε acceptance attempt on the bare Z0
    // stack (dead here, input remains).
    REQUIRE(succ.size() == 2);
    CHECK(succ[0].second.state == State::q0);
    CHECK(succ[0].second.stack.size() == 2);
    CHECK(succ[0].second.stack.back().kind == StackSymbol::Kind::Unit);
    CHECK(succ[1].second.state == State::q4);
}

TEST_CASE("the O(i,1) head is nondeterministic with the push branch first") {
    auto tape = flatten_input(parse_annotated("A_一 B"));
    MachineConfig c = initial_config();
    c.cursor = 1;  // at the O(1,1) symbol
    c.stack.push_back({StackSymbol::Kind::Unit, 0, 0, 0});
    auto succ = step(c, tape);
    REQUIRE(succ.size() == 2);
    CHECK(succ[0].second.state == State::q0);  // push branch
    CHECK(succ[1].second.state == State::q2);  // resolve branch
}

TEST_CASE("reference golden sentences transduce exactly") {
    CHECK(reading_of("A B_レ C_レ D") == "A D C B");
    CHECK(reading_of("A_二 B_下 C D_上 E_一") == "C D B E A");
    CHECK(reading_of("A_二-B C D_一") == "C D A B");
}

TEST_CASE("unmarked text is the identity transduction") {
    auto [perm, ordered] = transduce(parse_annotated("A B C"));
    CHECK(perm == Permutation{0, 1, 2});
    CHECK(ordered.reading() == "A B C");
}

TEST_CASE("silent characters are skipped in the output") {
    auto [perm, ordered] = transduce(parse_annotated("A 而! B_レ C"));
    CHECK(perm == Permutation{0, 3, 2});
    CHECK(ordered.reading() == "A C B");
}

TEST_CASE("the full combined-slot sentence transduces") {
    auto s = parse_annotated("子 曰 溫_レ 故 而! 知_レ 新 可_二 以 爲_一レ 師 矣!");
    auto [perm, ordered] = transduce(s);
    std::string reading;
    for (int i : perm) reading += s.chars[i].glyph;
    CHECK(reading == "子曰故溫新知以師爲可");
}

TEST_CASE("invalid annotations are rejected with diagnostics") {
    auto r = run(parse_annotated("A_二 B"));
    CHECK_FALSE(r.accepted);
    CHECK_FALSE(r.permutation.has_value());
    CHECK_FALSE(r.reason.empty());
    CHECK_THROWS_AS(transduce(parse_annotated("A_二 B")), ParseError);
}

TEST_CASE("a dangling trigger resolves vacuously") {
    // The q2 branch pops the trigger with no chain members behind it, so
    // the marked unit reads in place.
    auto lone = run(parse_annotated("A_一 B"));
    REQUIRE(lone.accepted);
    CHECK(*lone.permutation == Permutation{0, 1});
    auto tail = run(parse_annotated("A B_一"));
    REQUIRE(tail.accepted);
    CHECK(*tail.permutation == Permutation{0, 1});
}

TEST_CASE("rejection cases from each mark family") {
    // レ with nothing to follow it.
    CHECK_FALSE(run(parse_annotated("A B_レ")).accepted);
    // A push mark with no trigger.
    CHECK_FALSE(run(parse_annotated("A_二 B")).accepted);
    // Crossing chains break the stack discipline.
    CHECK_FALSE(run(parse_annotated("A_二 B_下 C_一 D_上")).accepted);
    // Same-level ordinal gap inside one chain context.
    CHECK_FALSE(run(parse_annotated("A_二 B_四 C_一 D_三")).accepted);
}

TEST_CASE("an all-silent sentence is rejected as unreadable") {
    auto r = run(parse_annotated("A! B!"));
    CHECK_FALSE(r.accepted);
    CHECK(r.reason.find("silent") != std::string::npos);
}

TEST_CASE("accepting runs report traces ending in q4") {
    RunOptions opt;
    opt.want_trace = true;
    auto r = run(parse_annotated("A B_レ C"), opt);
    REQUIRE(r.accepted);
    REQUIRE(r.trace.has_value());
    CHECK(r.trace->accepted);
    CHECK_FALSE(r.trace->steps.empty());
    // Every step's rule id is within the table.
    for (const auto& step : r.trace->steps) {
        CHECK(step.rule >= 1);
        CHECK(step.rule <= 15);
    }
}

TEST_CASE("strict mode reports unambiguous outputs on the reference sentences") {
    RunOptions opt;
    opt.strict = true;
    for (const char* text : {"A B_レ C_レ D", "A_二 B_下 C D_上 E_一", "A_二-B C D_一"}) {
        auto r = run(parse_annotated(text), opt);
        REQUIRE(r.accepted);
        REQUIRE(r.ambiguous.has_value());
        CHECK_FALSE(*r.ambiguous);
    }
}

TEST_CASE("the automaton agrees with the prose-rule reader") {
    std::mt19937_64 rng(97);
    int agreements = 0;
    for (int trial = 0; trial < 400; ++trial) {
        int n = 2 + static_cast<int>(rng() % 9);
        auto perm = testutil::random_expressible(n, rng, true);
        std::vector<std::string> glyphs;
        for (int i = 0; i < n; ++i) glyphs.push_back("g" + std::to_string(i));
        auto s = annotate_sentence(glyphs, perm);
        auto naive = testutil::naive_read(s);
        auto r = run(s);
        REQUIRE(r.accepted);
        REQUIRE(naive.has_value());
        CHECK(*naive == *r.permutation);
        CHECK(*r.permutation == perm);
        ++agreements;
    }
    CHECK(agreements == 400);
}

TEST_CASE("emission completeness: every non-silent index appears once") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng() % 10);
        auto perm = testutil::random_expressible(n, rng, true);
        std::vector<std::string> glyphs;
        for (int i = 0; i < n; ++i) glyphs.push_back("g" + std::to_string(i));
        auto r = run(annotate_sentence(glyphs, perm));
        REQUIRE(r.accepted);
        Permutation sorted = *r.permutation;
        std::sort(sorted.begin(), sorted.end());
        Permutation expected(n);
        std::iota(expected.begin(), expected.end(), 0);
        CHECK(sorted == expected);
    }
}

TEST_CASE("runs are deterministic") {
    auto s = parse_annotated("A_二 B_下 C D_上 E_一");
    auto first = run(s);
    for (int i = 0; i < 5; ++i) {
        auto again = run(s);
        CHECK(again.accepted == first.accepted);
        CHECK(again.permutation == first.permutation);
    }
}

TEST_CASE("pass_rate counts acceptances and rejects empty corpora") {
    std::vector<AnnotatedSentence> corpus;
    CHECK_THROWS(pass_rate(corpus));
    for (int i = 0; i < 19; ++i) corpus.push_back(parse_annotated("A B_レ C"));
    corpus.push_back(parse_annotated("A_二 B"));
    CHECK(pass_rate(corpus) == doctest::Approx(0.95));
}
