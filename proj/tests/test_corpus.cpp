#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "kundoku/corpus.hpp"
#include "kundoku/errors.hpp"
#include "kundoku/model.hpp"

using namespace kundoku;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("kundoku-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name, const std::string& content) const {
        fs::path p = path / name;
        std::ofstream(p) << content;
        return p.string();
    }
};

const char* kJsonlFixture =
    R"({"id":"s1","source":"ABCD","marks":[[],["レ"],["レ"],[]],"groups":[],"silent":[],"okurigana":["","","",""],"particle":["","","",""],"translation":"ADCB"}
{"id":"s2","source":"ABC","marks":[[],[],[]],"groups":[],"silent":[]}
{"id":"s3","source":"AB","marks":[[],["二"]],"groups":[[0,2]],"silent":[]}
)";

}  // namespace

TEST_CASE("format names and extensions resolve") {
    CHECK(format_from_name("jsonl") == CorpusFormat::Jsonl);
    CHECK(format_from_name("tsv") == CorpusFormat::Tsv);
    CHECK(format_from_name("mark-notation") == CorpusFormat::MarkNotation);
    CHECK_THROWS_AS(format_from_name("xml"), ParseError);
    CHECK(format_from_path("a/b.jsonl") == CorpusFormat::Jsonl);
    CHECK(format_from_path("fig2.kmk") == CorpusFormat::MarkNotation);
    CHECK_THROWS_AS(format_from_path("data.bin"), ParseError);
}

TEST_CASE("a three-line JSONL fixture loads") {
    TempDir dir;
    auto path = dir.file("c.jsonl", kJsonlFixture);
    auto corpus = load_corpus(path, CorpusFormat::Jsonl);
    REQUIRE(corpus.sentences.size() == 3);
    CHECK(corpus.sentences[0].id == "s1");
    CHECK(corpus.sentences[0].source_text() == "ABCD");
    CHECK(corpus.sentences[2].groups() == std::vector<std::pair<int, int>>{{0, 2}});
}

TEST_CASE("bad lines fail fast with the line number, or skip when lenient") {
    TempDir dir;
    std::string bad = R"({"id":"ok","source":"AB","marks":[[],[]]}
{"id":"bad","source":"AB","marks":[["E","レ"],[]]}
)";
    auto path = dir.file("bad.jsonl", bad);
    try {
        load_corpus(path, CorpusFormat::Jsonl);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
    LoadReport report;
    auto corpus = load_corpus(path, CorpusFormat::Jsonl, true, &report);
    CHECK(corpus.sentences.size() == 1);
    CHECK(report.skipped == 1);
    REQUIRE(report.diagnostics.size() == 1);
    CHECK(report.diagnostics[0].find(":2:") != std::string::npos);
}

TEST_CASE("duplicate ids are rejected") {
    TempDir dir;
    std::string dup = R"({"id":"x","source":"A","marks":[[]]}
{"id":"x","source":"B","marks":[[]]}
)";
    auto path = dir.file("dup.jsonl", dup);
    CHECK_THROWS_AS(load_corpus(path, CorpusFormat::Jsonl), ParseError);
}

TEST_CASE("TSV loads sources awaiting annotation") {
    TempDir dir;
    auto path = dir.file("c.tsv", "子曰\t子曰、\n学而時習之\t学て時に之を習う\n");
    auto corpus = load_corpus(path, CorpusFormat::Tsv);
    REQUIRE(corpus.sentences.size() == 2);
    CHECK(corpus.sentences[0].chars.size() == 2);
    CHECK(corpus.sentences[0].translation == "子曰、");
    for (const auto& c : corpus.sentences[1].chars) CHECK(c.marks.empty());
}

TEST_CASE("mark-notation corpora load line by line") {
    TempDir dir;
    auto path = dir.file("fig2.kmk", "A B_レ C_レ D\nA_二 B_下 C D_上 E_一\nA_二-B C D_一\n");
    auto corpus = load_corpus(path, CorpusFormat::MarkNotation);
    REQUIRE(corpus.sentences.size() == 3);
    CHECK(corpus.sentences[1].chars.size() == 5);
}

TEST_CASE("missing files raise IO errors") {
    CHECK_THROWS_AS(load_corpus("/nonexistent/x.jsonl", CorpusFormat::Jsonl), IoError);
}

TEST_CASE("JSONL save/load round-trips structurally") {
    TempDir dir;
    auto corpus = load_corpus(dir.file("c.jsonl", kJsonlFixture), CorpusFormat::Jsonl);
    auto out = (dir.path / "copy.jsonl").string();
    save_corpus(corpus, out, CorpusFormat::Jsonl);
    auto again = load_corpus(out, CorpusFormat::Jsonl);
    CHECK(again.sentences == corpus.sentences);
}

TEST_CASE("corpus_stats buckets lengths at 10/20/30") {
    Corpus c;
    for (int len : {5, 10, 15, 20, 25, 30, 35}) {
        AnnotatedSentence s;
        s.id = "len" + std::to_string(len);
        for (int i = 0; i < len; ++i) s.chars.push_back({.glyph = "子"});
        c.sentences.push_back(std::move(s));
    }
    auto r = corpus_stats(c);
    CHECK(r.sentences == 7);
    CHECK(r.characters == 140);
    CHECK(r.length_buckets == std::array<int, 4>{2, 2, 2, 1});
    CHECK(r.length_buckets[0] + r.length_buckets[1] + r.length_buckets[2] +
              r.length_buckets[3] ==
          r.sentences);
    CHECK(corpus_stats(Corpus{}).sentences == 0);
    CHECK(corpus_stats(Corpus{}).characters == 0);
}

TEST_CASE("label statistics count okurigana, particle and kaeriten strings") {
    Corpus c;
    AnnotatedSentence s;
    s.id = "s";
    s.chars = {{.glyph = "知", .marks = {MarkToken::re()}, .okurigana = "る",
                .particle = "は"},
               {.glyph = "師", .particle = "と"},
               {.glyph = "故", .particle = "と"}};
    c.sentences.push_back(s);
    CHECK(c.okurigana_stats() == std::map<std::string, int>{{"る", 1}});
    CHECK(c.particle_stats() == std::map<std::string, int>{{"は", 1}, {"と", 2}});
    CHECK(c.kaeriten_stats() == std::map<std::string, int>{{"レ", 1}});
}

TEST_CASE("levenshtein works on unicode scalars") {
    CHECK(levenshtein("", "") == 0);
    CHECK(levenshtein("ヲ", "ヺ") == 1);
    CHECK(levenshtein("する", "せらる") == 2);
    CHECK(levenshtein("abc", "abc") == 0);
}

TEST_CASE("reduce_labels maps rare labels to the closest frequent one") {
    auto m = reduce_labels({{"ヲ", 500}, {"ヺ", 3}}, 10);
    CHECK(m.pairs == std::map<std::string, std::string>{{"ヺ", "ヲ"}});

    // Equidistant tie: the more frequent target wins.
    auto tie = reduce_labels({{"する", 100}, {"すれ", 200}, {"すら", 3}}, 10);
    CHECK(tie.pairs.at("すら") == "すれ");

    // Frequency tie falls back to lexicographic order.
    auto lex = reduce_labels({{"ab", 50}, {"ac", 50}, {"ax", 2}}, 10);
    CHECK(lex.pairs.at("ax") == "ab");

    CHECK(reduce_labels({{"る", 20}}, 10).pairs.empty());
    CHECK_THROWS_AS(reduce_labels({{"る", 2}}, 10), ParseError);
}

TEST_CASE("reduce_labels never produces chains") {
    auto m = reduce_labels({{"a", 100}, {"b", 40}, {"ab", 4}, {"bb", 2}}, 10);
    for (const auto& [rare, target] : m.pairs) CHECK_FALSE(m.pairs.count(target));
}

TEST_CASE("split_corpus is a seeded deterministic partition") {
    Corpus c;
    for (int i = 0; i < 10; ++i) {
        AnnotatedSentence s;
        s.id = "s" + std::to_string(i);
        s.chars.push_back({.glyph = "子"});
        c.sentences.push_back(std::move(s));
    }
    auto split = split_corpus(c, {0.8, 0.1, 0.1}, 42);
    CHECK(split.train.sentences.size() == 8);
    CHECK(split.validation.sentences.size() == 1);
    CHECK(split.test.sentences.size() == 1);

    auto again = split_corpus(c, {0.8, 0.1, 0.1}, 42);
    CHECK(again.train.sentences == split.train.sentences);
    CHECK(again.test.sentences == split.test.sentences);

    std::set<std::string> ids;
    for (const auto* part : {&split.train, &split.validation, &split.test})
        for (const auto& s : part->sentences) CHECK(ids.insert(s.id).second);
    CHECK(ids.size() == 10);

    CHECK_THROWS_AS(split_corpus(c, {0.5, 0.2, 0.2}, 1), ParseError);
    CHECK_THROWS_AS(split_corpus(c, {1.1, -0.05, -0.05}, 1), ParseError);
    Corpus tiny;
    tiny.sentences.assign(2, c.sentences[0]);
    tiny.sentences[1].id = "other";
    CHECK_THROWS_AS(split_corpus(tiny, {0.8, 0.1, 0.1}, 1), ParseError);
}

TEST_CASE("split sizes at full corpus scale") {
    Corpus c;
    for (int i = 0; i < 9292; ++i) {
        AnnotatedSentence s;
        s.id = "s" + std::to_string(i);
        s.chars.push_back({.glyph = "子"});
        c.sentences.push_back(std::move(s));
    }
    auto split = split_corpus(c, {0.8, 0.1, 0.1}, 7);
    CHECK(split.train.sentences.size() == 7434);
    CHECK(split.validation.sentences.size() == 929);
    CHECK(split.test.sentences.size() == 929);
}
