#include <gtest/gtest.h>

#include <random>

#include "lexent/report.hpp"
#include "oracle.hpp"

using namespace lexent;

namespace {

const char* kText =
    "el perro come pan y el gato come pan. el perro duerme, el gato no duerme. "
    "¿Quién come pan? El niño come pan y el perro come carne. No hay pan para el gato.";

void expect_matches_oracle(const std::string& text, std::size_t n_max, Windowing windowing) {
    const bool disjoint = windowing == Windowing::disjoint;
    const auto s = normalize(text, AlphabetSpec{});
    const auto o = oracle::tokenize(text);
    const auto r = build_report(s, n_max, windowing, AlphabetSpec{}, "toy");

    EXPECT_EQ(r.char_count, o.chars.size());
    EXPECT_EQ(r.word_count, o.words.size());
    EXPECT_EQ(r.distinct_chars, oracle::char_grams(o.chars, 1).size());
    EXPECT_EQ(r.distinct_digrams, oracle::char_grams(o.alnum, 2).size());
    EXPECT_EQ(r.distinct_trigrams, oracle::char_grams(o.alnum, 3).size());
    EXPECT_EQ(r.distinct_words, oracle::word_grams(o.words, 1, false).size());

    const double h1 = oracle::entropy(oracle::char_grams(o.chars, 1));
    const double h2 = oracle::entropy(oracle::char_grams(o.alnum, 2));
    const double h3 = oracle::entropy(oracle::char_grams(o.alnum, 3));
    EXPECT_NEAR(r.h_char, h1, 1e-9);
    EXPECT_NEAR(r.h_digram, h2, 1e-9);
    EXPECT_NEAR(r.h_trigram, h3, 1e-9);
    EXPECT_NEAR(r.f_char_series.at(1), h1, 1e-9);
    EXPECT_NEAR(r.f_char_series.at(2), h2 - h1, 1e-9);
    EXPECT_NEAR(r.f_char_series.at(3), h3 - h2, 1e-9);

    const double alpha = oracle::alpha(oracle::word_grams(o.words, 1, false));
    EXPECT_NEAR(r.alpha, alpha, 1e-9);

    double previous = 0.0;
    double h_max = -1.0;
    std::size_t h_max_n = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const auto grams = oracle::word_grams(o.words, n, disjoint);
        const double h = oracle::entropy(grams);
        std::uint64_t windows = 0;
        for (const auto& [k, c] : grams) windows += c;
        EXPECT_NEAR(r.h_nword.at(n), h, 1e-9) << "n=" << n;
        EXPECT_EQ(r.nword_windows.at(n), windows);
        EXPECT_EQ(r.nword_distinct.at(n), grams.size());
        EXPECT_NEAR(r.f_word_series.at(n), n == 1 ? h : h - previous, 1e-9);
        EXPECT_NEAR(r.per_char_eq5.at(n), h / (n * alpha), 1e-9);
        EXPECT_NEAR(r.per_char_eq8.at(n), h / (n * (alpha + 1)), 1e-9);
        if (h > h_max + 1e-12) {
            h_max = h;
            h_max_n = n;
        }
        previous = h;
    }
    EXPECT_EQ(r.h_max_n, h_max_n);
    const double h3w = oracle::entropy(oracle::word_grams(o.words, 3, disjoint));
    EXPECT_NEAR(r.entropy_rate, h3w / (3 * (alpha + 1)), 1e-9);
    const double distinct = static_cast<double>(r.distinct_chars);
    if (distinct >= 2) {
        EXPECT_NEAR(r.redundancy, std::clamp(1 - r.entropy_rate / std::log2(distinct), 0.0, 1.0), 1e-9);
    }
    EXPECT_EQ(r.onset, oracle::onset(o.words, n_max, disjoint));
}

}  // namespace

TEST(BuildReport, Deterministic) {
    const auto s = normalize(kText, AlphabetSpec{});
    const auto a = build_report(s, 6, Windowing::disjoint, AlphabetSpec{}, "x");
    const auto b = build_report(normalize(kText, AlphabetSpec{}), 6, Windowing::disjoint, AlphabetSpec{}, "x");
    EXPECT_EQ(a, b);
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(BuildReport, DefaultsToDisjointBlocks) {
    const auto r = build_report(normalize(kText, AlphabetSpec{}), 4);
    EXPECT_EQ(r.windowing, Windowing::disjoint);
    EXPECT_EQ(r.nword_windows.at(4), r.word_count / 4);
}

TEST(BuildReport, RejectsSmallNmax) {
    try {
        build_report(normalize(kText, AlphabetSpec{}), 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::domain);
    }
}

TEST(BuildReport, ShortCorpusNamesQuantity) {
    try {
        build_report(normalize("uno dos tres", AlphabetSpec{}), 5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::insufficient_data);
        EXPECT_NE(std::string(e.what()).find("h_nword"), std::string::npos) << e.what();
    }
}

TEST(BuildReport, MatchesOracleOnSpanishSample) {
    expect_matches_oracle("el perro come pan y el gato come pan el perro duerme", 5, Windowing::disjoint);
    expect_matches_oracle("el perro come pan y el gato come pan el perro duerme", 5, Windowing::sliding);
}

TEST(BuildReport, MatchesOracleOnToyCorpora) {
    std::mt19937_64 rng(500);
    for (int trial = 0; trial < 12; ++trial) {
        std::string text;
        while (oracle::tokenize(text).words.size() < 20) text += oracle::toy_corpus(rng, 500, 2 + trial % 8);
        for (auto w : {Windowing::sliding, Windowing::disjoint}) expect_matches_oracle(text, 8, w);
    }
}

TEST(BuildReport, GrowthViolationsOnlyBeforeOnset) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const auto text = oracle::toy_corpus(rng, 400, 3) + oracle::toy_corpus(rng, 400, 3);
        const auto r = build_report(normalize(text, AlphabetSpec{}), 8, Windowing::sliding);
        for (auto n : r.growth_violations) {
            EXPECT_LT(r.h_nword.at(n + 1), r.h_nword.at(n));
            if (r.onset) {
                EXPECT_LT(n, *r.onset);
            }
        }
        const auto d = build_report(normalize(text, AlphabetSpec{}), 8, Windowing::disjoint);
        EXPECT_TRUE(d.growth_violations.empty());
    }
}

TEST(ReportInvariants, HoldOnRandomCorpora) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        std::string text;
        while (oracle::tokenize(text).words.size() < 12) text += oracle::toy_corpus(rng, 300, 1 + trial % 10);
        for (auto w : {Windowing::sliding, Windowing::disjoint}) {
            const auto r = build_report(normalize(text, AlphabetSpec{}), 10, w);
            EXPECT_NO_THROW(check_report_invariants(r));
            double sum = 0.0;
            for (const auto& [n, h] : r.h_nword) {
                sum += r.f_word_series.at(n);
                EXPECT_NEAR(sum, h, 1e-9);
                EXPECT_EQ(r.per_char_eq5.at(n), per_char(h, n, r.alpha, false));
                EXPECT_EQ(r.per_char_eq8.at(n), per_char(h, n, r.alpha, true));
                // Past the onset every block is unique: H = log2(windows).
                if (r.onset && n >= *r.onset) {
                    EXPECT_NEAR(h, std::log2(static_cast<double>(r.nword_windows.at(n))), 1e-9) << "n=" << n;
                }
            }
            EXPECT_GE(r.redundancy, 0.0);
            EXPECT_LE(r.redundancy, 1.0);
        }
    }
}

TEST(ReportInvariants, DetectsTampering) {
    auto r = build_report(normalize(kText, AlphabetSpec{}), 5);
    auto bad = r;
    bad.per_char_eq8[2] += 1e-6;
    try {
        check_report_invariants(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invariant);
    }
    bad = r;
    bad.f_word_series[3] += 0.01;
    EXPECT_THROW(check_report_invariants(bad), Error);
    bad = r;
    bad.h_nword[4] = std::log2(static_cast<double>(r.nword_windows.at(4))) + 0.1;
    EXPECT_THROW(check_report_invariants(bad), Error);
}

TEST(ReportJson, RoundTrip) {
    AlphabetSpec spec;
    spec.case_sensitive = true;
    const auto r = build_report(normalize(kText, spec), 7, Windowing::sliding, spec, "muestra");
    const auto j = to_json(r);
    EXPECT_EQ(report_from_json(j), r);
    EXPECT_EQ(report_from_json(nlohmann::json::parse(j.dump())), r);
    EXPECT_TRUE(j.at("h_nword").is_array());
    EXPECT_EQ(j.at("h_nword").at(0).at("n"), 1);
    EXPECT_THROW(report_from_json(nlohmann::json::object()), Error);
}
