#pragma once

// Paper-style CSV tables over a set of corpus reports.
//
// Scalar-per-corpus tables put corpora in rows; n-indexed tables put n in
// rows and corpora in columns. Every table ends with a weighted average
// (weights = corpus word counts) computed from the rounded values as printed,
// so anyone re-deriving it from the CSV gets the same digits. Full precision
// stays in the report JSON and aggregate.json.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexent/entropy.hpp"
#include "lexent/error.hpp"
#include "lexent/frequency_table.hpp"
#include "lexent/io.hpp"
#include "lexent/report.hpp"

namespace lexent {

/// Per-corpus values and their weighted mean.
struct AggregateRow {
    std::vector<double> values;
    std::vector<double> weights;

    double weighted_average() const {
        if (values.empty() || values.size() != weights.size()) {
            throw Error(ErrorKind::domain, "aggregate needs one weight per value");
        }
        CompensatedSum num;
        CompensatedSum den;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (weights[i] < 0.0) throw Error(ErrorKind::domain, "negative weight");
            num.add(values[i] * weights[i]);
            den.add(weights[i]);
        }
        if (!(den.value() > 0.0)) throw Error(ErrorKind::domain, "weights sum to zero");
        // Clamp against rounding so the mean never leaves [min, max].
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        return std::clamp(num.value() / den.value(), *lo, *hi);
    }
};

/// Fixed-decimal rendering with no negative zero.
inline std::string fixed(double value, int decimals) {
    std::string s = format("%.*f", decimals, value);
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

inline double rounded(double value, int decimals) { return std::stod(fixed(value, decimals)); }

namespace detail {

inline std::vector<double> word_weights(const std::vector<EntropyReport>& reports) {
    std::vector<double> w;
    for (const auto& r : reports) w.push_back(static_cast<double>(r.word_count));
    return w;
}

/// Weighted mean of the printed (rounded) values.
inline std::string printed_average(const std::vector<double>& values, const std::vector<double>& weights,
                                   int decimals) {
    AggregateRow row{{}, weights};
    for (double v : values) row.values.push_back(rounded(v, decimals));
    return fixed(row.weighted_average(), decimals);
}

struct Column {
    std::string header;
    std::function<double(const EntropyReport&)> value;
    int decimals = 2;
};

inline std::string corpus_rows(const std::vector<EntropyReport>& reports, const std::vector<Column>& columns) {
    std::string out = "corpus";
    for (const auto& c : columns) out += "," + c.header;
    out += '\n';
    for (const auto& r : reports) {
        out += csv_quote(r.name);
        for (const auto& c : columns) out += "," + fixed(c.value(r), c.decimals);
        out += '\n';
    }
    const auto weights = word_weights(reports);
    out += "\"weighted average\"";
    for (const auto& c : columns) {
        std::vector<double> values;
        for (const auto& r : reports) values.push_back(c.value(r));
        out += "," + printed_average(values, weights, c.decimals);
    }
    out += '\n';
    return out;
}

inline std::string n_rows(const std::vector<EntropyReport>& reports, std::size_t n_last,
                          const std::function<double(const EntropyReport&, std::size_t)>& value, int decimals) {
    std::string out = "n";
    for (const auto& r : reports) out += "," + csv_quote(r.name);
    out += ",\"weighted average\"\n";
    const auto weights = word_weights(reports);
    for (std::size_t n = 1; n <= n_last; ++n) {
        out += std::to_string(n);
        std::vector<double> values;
        for (const auto& r : reports) {
            values.push_back(value(r, n));
            out += "," + fixed(values.back(), decimals);
        }
        out += "," + printed_average(values, weights, decimals) + "\n";
    }
    return out;
}

}  // namespace detail

/// One CSV per table, keyed by file name. All reports must share n_max.
inline std::map<std::string, std::string> emit_tables(const std::vector<EntropyReport>& reports) {
    if (reports.empty()) throw Error(ErrorKind::domain, "no reports to tabulate");
    const std::size_t n_max = reports.front().n_max;
    for (const auto& r : reports) {
        if (r.n_max != n_max) {
            throw Error(ErrorKind::mismatch, "report '" + r.name + "' has n_max " + std::to_string(r.n_max) +
                                                 ", expected " + std::to_string(n_max));
        }
    }
    using detail::Column;
    std::map<std::string, std::string> files;

    files["word_stats.csv"] = [&] {
        std::string out = "corpus,words,distinct_words,alpha\n";
        AggregateRow alpha{{}, detail::word_weights(reports)};
        std::size_t words = 0;
        for (const auto& r : reports) {
            out += detail::csv_quote(r.name) + "," + std::to_string(r.word_count) + "," +
                   std::to_string(r.distinct_words) + "," + fixed(r.alpha, 2) + "\n";
            alpha.values.push_back(rounded(r.alpha, 2));
            words += r.word_count;
        }
        out += "\"weighted average\"," + std::to_string(words) + ",," + fixed(alpha.weighted_average(), 2) + "\n";
        return out;
    }();

    files["char_entropy.csv"] = detail::corpus_rows(
        reports, {Column{"h_char", [](const EntropyReport& r) { return r.h_char; }},
                  Column{"h_digram", [](const EntropyReport& r) { return r.h_digram; }},
                  Column{"h_trigram", [](const EntropyReport& r) { return r.h_trigram; }}});

    files["char_conditional.csv"] = detail::corpus_rows(
        reports, {Column{"F2", [](const EntropyReport& r) { return r.f_char_series.at(2); }},
                  Column{"F3", [](const EntropyReport& r) { return r.f_char_series.at(3); }}});

    files["nword_entropy.csv"] = detail::n_rows(
        reports, n_max, [](const EntropyReport& r, std::size_t n) { return r.h_nword.at(n); }, 2);

    files["nword_bits_per_char_eq5.csv"] = detail::n_rows(
        reports, n_max, [](const EntropyReport& r, std::size_t n) { return r.per_char_eq5.at(n); }, 2);

    files["nword_bits_per_char_eq8.csv"] = detail::n_rows(
        reports, n_max, [](const EntropyReport& r, std::size_t n) { return r.per_char_eq8.at(n); }, 3);

    files["word_conditional.csv"] = detail::n_rows(
        reports, std::min<std::size_t>(5, n_max),
        [](const EntropyReport& r, std::size_t n) { return r.f_word_series.at(n); }, 2);

    files["entropy_rate.csv"] = [&] {
        std::string out = "corpus,entropy_rate,distinct_chars,redundancy\n";
        const auto weights = detail::word_weights(reports);
        AggregateRow rate{{}, weights};
        AggregateRow distinct{{}, weights};
        for (const auto& r : reports) {
            out += detail::csv_quote(r.name) + "," + fixed(r.entropy_rate, 2) + "," +
                   std::to_string(r.distinct_chars) + "," + fixed(r.redundancy, 2) + "\n";
            rate.values.push_back(rounded(r.entropy_rate, 2));
            distinct.values.push_back(static_cast<double>(r.distinct_chars));
        }
        const double avg_rate = rate.weighted_average();
        const double avg_distinct = distinct.weighted_average();
        const double avg_redundancy = avg_distinct >= 2.0 ? redundancy(avg_rate, avg_distinct) : 0.0;
        out += "\"weighted average\"," + fixed(avg_rate, 2) + "," + fixed(avg_distinct, 2) + "," +
               fixed(avg_redundancy, 2) + "\n";
        return out;
    }();

    return files;
}

/// Full-precision weighted averages of every scalar and series.
inline nlohmann::json aggregate_json(const std::vector<EntropyReport>& reports) {
    if (reports.empty()) throw Error(ErrorKind::domain, "no reports to aggregate");
    const auto weights = detail::word_weights(reports);
    auto avg = [&](auto&& get) {
        AggregateRow row{{}, weights};
        for (const auto& r : reports) row.values.push_back(get(r));
        return row.weighted_average();
    };
    auto avg_series = [&](auto&& get) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& [n, unused] : get(reports.front())) {
            out.push_back({{"n", n}, {"value", avg([&](const EntropyReport& r) { return get(r).at(n); })}});
        }
        return out;
    };
    nlohmann::json corpora = nlohmann::json::array();
    for (const auto& r : reports) corpora.push_back({{"name", r.name}, {"word_count", r.word_count}});
    const double rate = avg([](const EntropyReport& r) { return r.entropy_rate; });
    const double distinct = avg([](const EntropyReport& r) { return static_cast<double>(r.distinct_chars); });
    return {
        {"corpora", corpora},
        {"weight", "word_count"},
        {"alpha", avg([](const EntropyReport& r) { return r.alpha; })},
        {"h_char", avg([](const EntropyReport& r) { return r.h_char; })},
        {"h_digram", avg([](const EntropyReport& r) { return r.h_digram; })},
        {"h_trigram", avg([](const EntropyReport& r) { return r.h_trigram; })},
        {"entropy_rate", rate},
        {"distinct_chars", distinct},
        {"redundancy", distinct >= 2.0 ? redundancy(rate, distinct) : 0.0},
        {"h_nword", avg_series([](const EntropyReport& r) -> const Series& { return r.h_nword; })},
        {"f_char_series", avg_series([](const EntropyReport& r) -> const Series& { return r.f_char_series; })},
        {"f_word_series", avg_series([](const EntropyReport& r) -> const Series& { return r.f_word_series; })},
        {"per_char_eq5", avg_series([](const EntropyReport& r) -> const Series& { return r.per_char_eq5; })},
        {"per_char_eq8", avg_series([](const EntropyReport& r) -> const Series& { return r.per_char_eq8; })},
    };
}

inline void write_tables(const std::vector<EntropyReport>& reports, const std::filesystem::path& dir) {
    for (const auto& [name, content] : emit_tables(reports)) write_file_atomic(dir / name, content);
}

}  // namespace lexent
