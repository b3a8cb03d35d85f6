#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexent/alphabet.hpp"
#include "lexent/counting.hpp"
#include "lexent/entropy.hpp"
#include "lexent/error.hpp"

namespace lexent {

using Series = std::map<std::size_t, double>;

/// The full entropy battery for one corpus.
struct EntropyReport {
    std::string name;
    AlphabetSpec alphabet;
    Windowing windowing = Windowing::disjoint;
    std::size_t n_max = 0;

    std::size_t char_count = 0;
    std::size_t word_count = 0;
    std::size_t distinct_words = 0;
    std::size_t distinct_chars = 0;
    std::size_t distinct_digrams = 0;
    std::size_t distinct_trigrams = 0;

    double h_char = 0.0;
    double h_digram = 0.0;
    double h_trigram = 0.0;
    Series h_nword;
    std::map<std::size_t, std::size_t> nword_windows;
    std::map<std::size_t, std::size_t> nword_distinct;

    Series f_char_series;  // F1 = H_char, F2 = H_digram - H_char, F3 = H_trigram - H_digram
    Series f_word_series;
    Series per_char_eq5;   // H_n / (n alpha)
    Series per_char_eq8;   // H_n / (n (alpha + 1))

    double alpha = 0.0;
    double entropy_rate = 0.0;
    double redundancy = 0.0;
    std::optional<std::size_t> onset;
    std::size_t h_max_n = 0;
    /// n at which H_{n+1} < H_n before the onset. Only tracked for sliding windows.
    std::vector<std::size_t> growth_violations;

    bool operator==(const EntropyReport&) const = default;
};

namespace detail {

template <typename Fn>
auto quantity(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.kind(), std::string(name) + ": " + e.what());
    }
}

}  // namespace detail

/// Computes every field from the streams. n_max >= 3 because the entropy rate
/// needs the 3-word block.
inline EntropyReport build_report(const SymbolStreams& streams, std::size_t n_max,
                                  Windowing windowing = Windowing::disjoint, const AlphabetSpec& alphabet = {},
                                  std::string name = {}) {
    if (n_max < 3) throw Error(ErrorKind::domain, "n_max must be >= 3, got " + std::to_string(n_max));

    EntropyReport r;
    r.name = std::move(name);
    r.alphabet = alphabet;
    r.windowing = windowing;
    r.n_max = n_max;
    r.char_count = streams.char_stream.size();
    r.word_count = streams.word_stream.size();

    const auto chars = detail::quantity("h_char", [&] { return count_chars(streams); });
    const auto digrams = detail::quantity("h_digram", [&] { return count_ngrams(streams, 2); });
    const auto trigrams = detail::quantity("h_trigram", [&] { return count_ngrams(streams, 3); });
    r.h_char = plugin_entropy(chars);
    r.h_digram = plugin_entropy(digrams);
    r.h_trigram = plugin_entropy(trigrams);
    r.distinct_chars = chars.distinct();
    r.distinct_digrams = digrams.distinct();
    r.distinct_trigrams = trigrams.distinct();

    const auto words = detail::quantity("alpha", [&] { return count_nwords(streams, 1, windowing); });
    r.distinct_words = words.distinct();
    r.alpha = average_word_length(words);

    detail::quantity("h_nword", [&] {
        detail::require_length(streams.word_stream.size(), n_max, "word stream");
        WordBlockLadder ladder(streams.word_stream);
        for (std::size_t n = 1; n <= n_max; ++n) {
            if (n > 1) ladder.advance();
            const auto counts = ladder.counts(windowing);
            r.h_nword[n] = plugin_entropy(std::span<const std::uint64_t>(counts));
            r.nword_distinct[n] = counts.size();
            std::size_t windows = 0;
            for (auto c : counts) windows += c;
            r.nword_windows[n] = windows;
            if (!r.onset && counts.front() == 1) r.onset = n;
        }
        return 0;
    });

    r.f_char_series = f_series({{1, r.h_char}, {2, r.h_digram}, {3, r.h_trigram}});
    r.f_word_series = f_series(r.h_nword);
    for (const auto& [n, h] : r.h_nword) {
        r.per_char_eq5[n] = per_char(h, n, r.alpha, false);
        r.per_char_eq8[n] = per_char(h, n, r.alpha, true);
        if (r.h_max_n == 0 || h > r.h_nword.at(r.h_max_n)) r.h_max_n = n;
    }
    r.entropy_rate = entropy_rate(r.h_nword.at(3), r.alpha);
    r.redundancy = r.distinct_chars >= 2 ? redundancy(r.entropy_rate, static_cast<double>(r.distinct_chars)) : 0.0;

    if (windowing == Windowing::sliding) {
        for (std::size_t n = 1; n < n_max; ++n) {
            if (r.onset && n >= *r.onset) break;
            if (r.h_nword.at(n + 1) < r.h_nword.at(n)) r.growth_violations.push_back(n);
        }
    }
    return r;
}

/// Throws ErrorKind::invariant if the definitional identities between report
/// fields do not hold.
inline void check_report_invariants(const EntropyReport& r) {
    auto fail = [&](const std::string& what) {
        throw Error(ErrorKind::invariant, (r.name.empty() ? std::string("report") : r.name) + ": " + what);
    };
    if (r.h_char < 0.0 || r.h_digram < 0.0 || r.h_trigram < 0.0) fail("negative character entropy");
    double telescoped = 0.0;
    for (const auto& [n, h] : r.h_nword) {
        if (h < 0.0) fail("negative block entropy at n=" + std::to_string(n));
        const double bound = std::log2(static_cast<double>(r.nword_windows.at(n)));
        if (h > bound + 1e-9) fail("block entropy above log2(windows) at n=" + std::to_string(n));
        if (r.per_char_eq5.at(n) != per_char(h, n, r.alpha, false) ||
            r.per_char_eq8.at(n) != per_char(h, n, r.alpha, true)) {
            fail("per-character normalization mismatch at n=" + std::to_string(n));
        }
        telescoped += r.f_word_series.at(n);
        if (std::abs(telescoped - h) > 1e-9) fail("conditional series does not telescope at n=" + std::to_string(n));
    }
    if (r.redundancy < 0.0 || r.redundancy > 1.0) fail("redundancy outside [0, 1]");
}

// ---------------------------------------------------------------------------
// JSON: scalars as numbers, series as arrays of {n, value}.

namespace detail {

template <typename Map>
nlohmann::json series_to_json(const Map& series) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [n, v] : series) out.push_back({{"n", n}, {"value", v}});
    return out;
}

template <typename Value>
std::map<std::size_t, Value> series_from_json(const nlohmann::json& j) {
    std::map<std::size_t, Value> out;
    for (const auto& item : j) out[item.at("n").get<std::size_t>()] = item.at("value").get<Value>();
    return out;
}

}  // namespace detail

inline nlohmann::json alphabet_to_json(const AlphabetSpec& spec) {
    return {{"letters", to_utf8(spec.letters)},
            {"include_digits", spec.include_digits},
            {"case_sensitive", spec.case_sensitive},
            {"include_space_punct", spec.include_space_punct}};
}

inline AlphabetSpec alphabet_from_json(const nlohmann::json& j) {
    AlphabetSpec spec;
    spec.letters = decode_utf8(j.at("letters").get<std::string>());
    spec.include_digits = j.at("include_digits").get<bool>();
    spec.case_sensitive = j.at("case_sensitive").get<bool>();
    spec.include_space_punct = j.at("include_space_punct").get<bool>();
    return spec;
}

inline nlohmann::json to_json(const EntropyReport& r) {
    return {
        {"name", r.name},
        {"alphabet", alphabet_to_json(r.alphabet)},
        {"windowing", to_string(r.windowing)},
        {"n_max", r.n_max},
        {"char_count", r.char_count},
        {"word_count", r.word_count},
        {"distinct_words", r.distinct_words},
        {"distinct_chars", r.distinct_chars},
        {"distinct_digrams", r.distinct_digrams},
        {"distinct_trigrams", r.distinct_trigrams},
        {"h_char", r.h_char},
        {"h_digram", r.h_digram},
        {"h_trigram", r.h_trigram},
        {"h_nword", detail::series_to_json(r.h_nword)},
        {"nword_windows", detail::series_to_json(r.nword_windows)},
        {"nword_distinct", detail::series_to_json(r.nword_distinct)},
        {"f_char_series", detail::series_to_json(r.f_char_series)},
        {"f_word_series", detail::series_to_json(r.f_word_series)},
        {"per_char_eq5", detail::series_to_json(r.per_char_eq5)},
        {"per_char_eq8", detail::series_to_json(r.per_char_eq8)},
        {"alpha", r.alpha},
        {"entropy_rate", r.entropy_rate},
        {"redundancy", r.redundancy},
        {"onset", r.onset ? nlohmann::json(*r.onset) : nlohmann::json(nullptr)},
        {"h_max_n", r.h_max_n},
        {"growth_violations", r.growth_violations},
    };
}

inline EntropyReport report_from_json(const nlohmann::json& j) {
    try {
        EntropyReport r;
        r.name = j.at("name").get<std::string>();
        r.alphabet = alphabet_from_json(j.at("alphabet"));
        r.windowing = parse_windowing(j.at("windowing").get<std::string>());
        r.n_max = j.at("n_max").get<std::size_t>();
        r.char_count = j.at("char_count").get<std::size_t>();
        r.word_count = j.at("word_count").get<std::size_t>();
        r.distinct_words = j.at("distinct_words").get<std::size_t>();
        r.distinct_chars = j.at("distinct_chars").get<std::size_t>();
        r.distinct_digrams = j.at("distinct_digrams").get<std::size_t>();
        r.distinct_trigrams = j.at("distinct_trigrams").get<std::size_t>();
        r.h_char = j.at("h_char").get<double>();
        r.h_digram = j.at("h_digram").get<double>();
        r.h_trigram = j.at("h_trigram").get<double>();
        r.h_nword = detail::series_from_json<double>(j.at("h_nword"));
        r.nword_windows = detail::series_from_json<std::size_t>(j.at("nword_windows"));
        r.nword_distinct = detail::series_from_json<std::size_t>(j.at("nword_distinct"));
        r.f_char_series = detail::series_from_json<double>(j.at("f_char_series"));
        r.f_word_series = detail::series_from_json<double>(j.at("f_word_series"));
        r.per_char_eq5 = detail::series_from_json<double>(j.at("per_char_eq5"));
        r.per_char_eq8 = detail::series_from_json<double>(j.at("per_char_eq8"));
        r.alpha = j.at("alpha").get<double>();
        r.entropy_rate = j.at("entropy_rate").get<double>();
        r.redundancy = j.at("redundancy").get<double>();
        if (!j.at("onset").is_null()) r.onset = j.at("onset").get<std::size_t>();
        r.h_max_n = j.at("h_max_n").get<std::size_t>();
        r.growth_violations = j.at("growth_violations").get<std::vector<std::size_t>>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse, std::string("report JSON: ") + e.what());
    }
}

}  // namespace lexent
