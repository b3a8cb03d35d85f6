#pragma once

// First-order artificial text: words drawn independently from a lexicon.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexent/alphabet.hpp"
#include "lexent/entropy.hpp"
#include "lexent/error.hpp"
#include "lexent/frequency_table.hpp"
#include "lexent/io.hpp"
#include "lexent/report.hpp"

namespace lexent {

inline constexpr const char* kGeneratorRng = "mt19937_64";

struct LexiconEntry {
    std::string word;
    double probability = 0.0;
    std::optional<std::uint64_t> count;  // set when built from counts

    bool operator==(const LexiconEntry&) const = default;
};

class GeneratorModel {
public:
    GeneratorModel() = default;

    /// Takes ownership of entries whose probabilities are already normalized.
    explicit GeneratorModel(std::vector<LexiconEntry> entries, std::uint64_t seed = 0)
        : entries_(std::move(entries)), seed_(seed) {
        if (entries_.empty()) throw Error(ErrorKind::empty_corpus, "lexicon has no words");
        std::stable_sort(entries_.begin(), entries_.end(),
                         [](const auto& a, const auto& b) { return a.probability > b.probability; });
        cumulative_.reserve(entries_.size());
        CompensatedSum running;
        for (const auto& e : entries_) {
            running.add(e.probability);
            cumulative_.push_back(running.value());
        }
        if (std::abs(cumulative_.back() - 1.0) > 1e-9) {
            throw Error(ErrorKind::validation, "lexicon probabilities sum to " + format("%.12g", cumulative_.back()));
        }
    }

    const std::vector<LexiconEntry>& entries() const noexcept { return entries_; }
    const std::vector<double>& cumulative() const noexcept { return cumulative_; }
    std::uint64_t seed() const noexcept { return seed_; }
    void set_seed(std::uint64_t seed) noexcept { seed_ = seed; }
    std::size_t size() const noexcept { return entries_.size(); }

    /// Index of the word whose cumulative interval contains u in [0, 1).
    std::size_t sample_index(double u) const {
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        return it == cumulative_.end() ? entries_.size() - 1 : static_cast<std::size_t>(it - cumulative_.begin());
    }

    /// Model entropy in bits/word.
    double entropy() const {
        CompensatedSum h;
        for (const auto& e : entries_) h.add(plogp(e.probability));
        return h.value();
    }

    /// Sum of L_i p_i over the lexicon, lengths in code points.
    double alpha() const {
        CompensatedSum a;
        for (const auto& e : entries_) {
            std::size_t length = 0;
            for (unsigned char b : e.word) length += (b & 0xC0) != 0x80;
            a.add(static_cast<double>(length) * e.probability);
        }
        return a.value();
    }

private:
    std::vector<LexiconEntry> entries_;
    std::vector<double> cumulative_;
    std::uint64_t seed_ = 0;
};

namespace detail {

inline bool has_digit(const std::string& word) {
    for (char32_t cp : decode_utf8(word)) {
        if (u_isdigit(static_cast<UChar32>(cp))) return true;
    }
    return false;
}

/// A lexicon word must survive normalization as exactly one lowercase token.
inline bool is_clean_token(const std::string& word) {
    if (word.empty()) return false;
    try {
        const auto streams = normalize(word, AlphabetSpec{});
        return streams.word_stream.size() == 1 && streams.word_stream.front() == word;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace detail

struct LexiconOptions {
    bool drop_digit_tokens = true;
};

/// Plug-in probabilities from a 1-word table, most probable first.
inline GeneratorModel build_lexicon(const FrequencyTable& word_table, LexiconOptions options = {},
                                    std::uint64_t seed = 0) {
    if (word_table.empty()) throw Error(ErrorKind::empty_corpus, "lexicon from an empty table");
    if (word_table.spec().unit != Unit::word_gram || word_table.spec().n != 1) {
        throw Error(ErrorKind::mismatch, "lexicon needs a 1-word table, got " + describe(word_table.spec()));
    }
    std::vector<std::pair<std::string, std::uint64_t>> kept;
    std::uint64_t total = 0;
    for (auto& [word, count] : word_table.ranked_entries()) {
        if (options.drop_digit_tokens && detail::has_digit(word)) continue;
        total += count;
        kept.emplace_back(std::move(word), count);
    }
    if (kept.empty()) throw Error(ErrorKind::empty_corpus, "no lexicon words left after filtering");
    std::vector<LexiconEntry> entries;
    entries.reserve(kept.size());
    for (auto& [word, count] : kept) {
        entries.push_back({std::move(word), static_cast<double>(count) / static_cast<double>(total), count});
    }
    return GeneratorModel(std::move(entries), seed);
}

/// CSV "word,count" or "word,probability", optional header row. Counts are
/// recognised when every value is an integer; otherwise values are
/// probabilities and must already sum to 1 within 1e-6.
inline GeneratorModel parse_lexicon(std::string_view text, std::uint64_t seed = 0) {
    struct Row {
        std::string word;
        std::string value;
        std::size_t line;
    };
    std::vector<Row> rows;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    std::size_t line = 1;
    while (true) {
        const std::size_t record_line = line;
        if (!detail::next_csv_record(text, pos, fields, line)) break;
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != 2) {
            throw Error(ErrorKind::parse, "line " + std::to_string(record_line) + ": expected 2 fields, got " +
                                              std::to_string(fields.size()));
        }
        rows.push_back({detail::trim(fields[0]), detail::trim(fields[1]), record_line});
    }
    auto numeric = [](const std::string& s) {
        char* end = nullptr;
        std::strtod(s.c_str(), &end);
        return !s.empty() && end == s.c_str() + s.size();
    };
    if (!rows.empty() && !numeric(rows.front().value)) rows.erase(rows.begin());  // header
    if (rows.empty()) throw Error(ErrorKind::empty_corpus, "lexicon has no rows");

    const bool counts = std::all_of(rows.begin(), rows.end(), [](const Row& r) {
        return r.value.find_first_of(".eE") == std::string::npos;
    });

    std::vector<LexiconEntry> entries;
    std::set<std::string> seen;
    CompensatedSum sum;
    for (const auto& row : rows) {
        const std::string where = "line " + std::to_string(row.line) + ": ";
        if (!numeric(row.value)) throw Error(ErrorKind::parse, where + "value '" + row.value + "' is not a number");
        const double value = std::strtod(row.value.c_str(), nullptr);
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw Error(ErrorKind::parse, where + "value must be positive, got " + row.value);
        }
        if (!detail::is_clean_token(row.word)) {
            throw Error(ErrorKind::parse, where + "'" + row.word + "' is not a single lowercase word token");
        }
        if (!seen.insert(row.word).second) throw Error(ErrorKind::validation, where + "duplicate word '" + row.word + "'");
        LexiconEntry entry{row.word, value, std::nullopt};
        if (counts) {
            std::uint64_t c = 0;
            const auto [ptr, ec] = std::from_chars(row.value.data(), row.value.data() + row.value.size(), c);
            if (ec != std::errc{} || ptr != row.value.data() + row.value.size()) {
                throw Error(ErrorKind::parse, where + "bad count '" + row.value + "'");
            }
            entry.count = c;
        }
        sum.add(value);
        entries.push_back(std::move(entry));
    }
    const double total = sum.value();
    if (!counts && std::abs(total - 1.0) > 1e-6) {
        throw Error(ErrorKind::validation, "probabilities sum to " + format("%.9g", total) + ", expected 1");
    }
    for (auto& e : entries) e.probability /= total;
    return GeneratorModel(std::move(entries), seed);
}

inline GeneratorModel load_lexicon(const std::filesystem::path& path, std::uint64_t seed = 0) {
    try {
        return parse_lexicon(read_file(path), seed);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::io) throw;
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

/// word,count when every entry carries a count, word,probability otherwise.
inline std::string lexicon_csv(const GeneratorModel& model) {
    const bool counts = std::all_of(model.entries().begin(), model.entries().end(),
                                    [](const LexiconEntry& e) { return e.count.has_value(); });
    std::string out = counts ? "word,count\n" : "word,probability\n";
    for (const auto& e : model.entries()) {
        out += detail::csv_quote(e.word);
        out += counts ? "," + std::to_string(*e.count) + "\n" : format(",%.17g\n", e.probability);
    }
    return out;
}

inline void save_lexicon(const GeneratorModel& model, const std::filesystem::path& path) {
    write_file_atomic(path, lexicon_csv(model));
}

/// 64-bit FNV-1a of the canonical lexicon CSV.
inline std::string lexicon_digest(const GeneratorModel& model) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : lexicon_csv(model)) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return format("%016llx", static_cast<unsigned long long>(hash));
}

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double next_unit(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// k independent draws, single-space separated, no trailing newline.
inline std::string generate(const GeneratorModel& model, std::size_t k_words, std::uint64_t seed) {
    if (k_words < 1) throw Error(ErrorKind::domain, "k_words must be >= 1");
    if (model.size() == 0) throw Error(ErrorKind::empty_corpus, "empty generator model");
    std::mt19937_64 engine(seed);
    std::string text;
    text.reserve(k_words * 6);
    for (std::size_t i = 0; i < k_words; ++i) {
        if (i > 0) text.push_back(' ');
        text += model.entries()[model.sample_index(next_unit(engine))].word;
    }
    return text;
}

inline std::string generate(const GeneratorModel& model, std::size_t k_words) {
    return generate(model, k_words, model.seed());
}

inline nlohmann::json generation_metadata(const GeneratorModel& model, std::size_t k_words, std::uint64_t seed) {
    return {{"seed", seed},
            {"k_words", k_words},
            {"rng", kGeneratorRng},
            {"lexicon_size", model.size()},
            {"lexicon_digest", lexicon_digest(model)}};
}

// ---------------------------------------------------------------------------
// Natural vs artificial comparison

struct QuantityDelta {
    std::string quantity;
    std::size_t n = 0;  // block length for h_nword, 0 otherwise
    double natural = 0.0;
    double artificial = 0.0;

    double absolute() const { return artificial - natural; }
    double relative() const { return natural == 0.0 ? 0.0 : (artificial - natural) / std::abs(natural); }
};

struct ReportComparison {
    std::string natural_name;
    std::string artificial_name;
    std::vector<QuantityDelta> deltas;

    const QuantityDelta& get(const std::string& quantity, std::size_t n = 0) const {
        for (const auto& d : deltas) {
            if (d.quantity == quantity && d.n == n) return d;
        }
        throw Error(ErrorKind::range, "no delta for " + quantity + (n ? " n=" + std::to_string(n) : ""));
    }
};

inline ReportComparison compare_reports(const EntropyReport& natural, const EntropyReport& artificial) {
    if (!(natural.alphabet == artificial.alphabet) || natural.n_max != artificial.n_max ||
        natural.windowing != artificial.windowing) {
        throw Error(ErrorKind::mismatch, "reports differ in alphabet, n_max or windowing");
    }
    ReportComparison out{natural.name, artificial.name, {}};
    out.deltas.push_back({"h_char", 0, natural.h_char, artificial.h_char});
    out.deltas.push_back({"h_digram", 0, natural.h_digram, artificial.h_digram});
    out.deltas.push_back({"h_trigram", 0, natural.h_trigram, artificial.h_trigram});
    for (const auto& [n, h] : natural.h_nword) out.deltas.push_back({"h_nword", n, h, artificial.h_nword.at(n)});
    out.deltas.push_back({"alpha", 0, natural.alpha, artificial.alpha});
    return out;
}

inline nlohmann::json to_json(const ReportComparison& c) {
    nlohmann::json deltas = nlohmann::json::array();
    for (const auto& d : c.deltas) {
        nlohmann::json row = {{"quantity", d.quantity},
                              {"natural", d.natural},
                              {"artificial", d.artificial},
                              {"absolute", d.absolute()},
                              {"relative", d.relative()}};
        if (d.n) row["n"] = d.n;
        deltas.push_back(std::move(row));
    }
    return {{"natural", c.natural_name}, {"artificial", c.artificial_name}, {"deltas", std::move(deltas)}};
}

}  // namespace lexent
