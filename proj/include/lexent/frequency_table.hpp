#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexent/error.hpp"

namespace lexent {

/// Joins the tokens of an n-word key. Normalization drops all control
/// characters, so it never occurs inside a token.
inline constexpr char kWordSeparator = '\x1F';

enum class Unit {
    character,       // char_stream, spaces and punctuation included
    character_gram,  // alnum_stream (word-bridging)
    word_gram,       // word_stream
};

enum class Windowing { sliding, disjoint };

inline const char* to_string(Unit unit) {
    switch (unit) {
    case Unit::character: return "character";
    case Unit::character_gram: return "character-gram";
    case Unit::word_gram: return "word-gram";
    }
    return "?";
}

inline const char* to_string(Windowing windowing) {
    return windowing == Windowing::sliding ? "sliding" : "disjoint";
}

inline Unit parse_unit(std::string_view s) {
    if (s == "character") return Unit::character;
    if (s == "character-gram") return Unit::character_gram;
    if (s == "word-gram") return Unit::word_gram;
    throw Error(ErrorKind::parse, "unknown unit '" + std::string(s) + "'");
}

inline Windowing parse_windowing(std::string_view s) {
    if (s == "sliding") return Windowing::sliding;
    if (s == "disjoint") return Windowing::disjoint;
    throw Error(ErrorKind::parse, "unknown windowing '" + std::string(s) + "'");
}

struct BlockSpec {
    Unit unit = Unit::character;
    std::size_t n = 1;
    Windowing windowing = Windowing::sliding;

    std::size_t step() const { return windowing == Windowing::sliding ? 1 : n; }

    /// Number of windows over a stream of the given length.
    std::size_t window_count(std::size_t length) const {
        if (length < n) return 0;
        return windowing == Windowing::sliding ? length - n + 1 : length / n;
    }

    bool operator==(const BlockSpec&) const = default;
};

inline std::string describe(const BlockSpec& spec) {
    return std::string(to_string(spec.unit)) + " n=" + std::to_string(spec.n) + " " +
           to_string(spec.windowing);
}

/// Symbol -> count map with running total. Every stored count is >= 1.
class FrequencyTable {
public:
    using Map = std::unordered_map<std::string, std::uint64_t>;

    FrequencyTable() = default;
    explicit FrequencyTable(BlockSpec spec) : spec_(spec) {}

    void add(std::string key, std::uint64_t count = 1) {
        if (count == 0) return;
        counts_[std::move(key)] += count;
        total_ += count;
    }

    const BlockSpec& spec() const noexcept { return spec_; }
    const Map& counts() const noexcept { return counts_; }
    std::uint64_t total() const noexcept { return total_; }
    std::size_t distinct() const noexcept { return counts_.size(); }
    bool empty() const noexcept { return total_ == 0; }

    std::uint64_t count(const std::string& key) const {
        const auto it = counts_.find(key);
        return it == counts_.end() ? 0 : it->second;
    }

    std::uint64_t max_count() const {
        std::uint64_t best = 0;
        for (const auto& [key, c] : counts_) best = std::max(best, c);
        return best;
    }

    /// Counts in descending order; the canonical order for floating sums.
    std::vector<std::uint64_t> count_values() const {
        std::vector<std::uint64_t> values;
        values.reserve(counts_.size());
        for (const auto& [key, c] : counts_) values.push_back(c);
        std::sort(values.begin(), values.end(), std::greater<>());
        return values;
    }

    /// Entries by descending count, ties by ascending byte order of the key.
    std::vector<std::pair<std::string, std::uint64_t>> ranked_entries() const {
        std::vector<std::pair<std::string, std::uint64_t>> entries(counts_.begin(), counts_.end());
        std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        return entries;
    }

    friend bool operator==(const FrequencyTable& a, const FrequencyTable& b) {
        return a.spec_ == b.spec_ && a.total_ == b.total_ && a.counts_ == b.counts_;
    }

private:
    BlockSpec spec_;
    Map counts_;
    std::uint64_t total_ = 0;
};

/// Pointwise sum. Empty tables act as the identity whatever their spec;
/// non-empty tables must share a spec.
inline FrequencyTable merge(const std::vector<FrequencyTable>& tables) {
    const FrequencyTable* first = nullptr;
    for (const auto& t : tables) {
        if (t.empty()) continue;
        if (first == nullptr) {
            first = &t;
        } else if (!(t.spec() == first->spec())) {
            throw Error(ErrorKind::mismatch,
                        "cannot merge " + describe(t.spec()) + " into " + describe(first->spec()));
        }
    }
    if (first == nullptr) return tables.empty() ? FrequencyTable{} : FrequencyTable(tables.front().spec());
    FrequencyTable out(first->spec());
    for (const auto& t : tables) {
        for (const auto& [key, c] : t.counts()) out.add(key, c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline std::string csv_quote(std::string_view field) {
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

/// Splits one CSV record. Quoted fields may contain commas, doubled quotes and
/// newlines; the caller hands over the whole text and a cursor.
inline bool next_csv_record(std::string_view text, std::size_t& pos, std::vector<std::string>& fields,
                            std::size_t& line) {
    fields.clear();
    if (pos >= text.size()) return false;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    while (pos < text.size()) {
        const char c = text[pos++];
        if (quoted) {
            if (c == '"') {
                if (pos < text.size() && text[pos] == '"') {
                    field.push_back('"');
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
        } else if (c == '"' && field.empty() && !was_quoted) {
            quoted = was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else if (c == '\n') {
            ++line;
            break;
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    if (quoted) throw Error(ErrorKind::parse, "line " + std::to_string(line) + ": unterminated quoted field");
    fields.push_back(std::move(field));
    return true;
}

}  // namespace detail

/// "symbol,count" rows in ranked order, symbol always quoted.
inline std::string to_csv(const FrequencyTable& table) {
    std::string out = "symbol,count\n";
    for (const auto& [key, c] : table.ranked_entries()) {
        out += detail::csv_quote(key);
        out += ',';
        out += std::to_string(c);
        out += '\n';
    }
    return out;
}

inline nlohmann::json to_json(const FrequencyTable& table) {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [key, c] : table.counts()) counts[key] = c;
    return {
        {"unit", to_string(table.spec().unit)},
        {"n", table.spec().n},
        {"windowing", to_string(table.spec().windowing)},
        {"total", table.total()},
        {"distinct", table.distinct()},
        {"counts", std::move(counts)},
    };
}

inline FrequencyTable frequency_table_from_json(const nlohmann::json& j) {
    try {
        BlockSpec spec{parse_unit(j.at("unit").get<std::string>()), j.at("n").get<std::size_t>(),
                       parse_windowing(j.at("windowing").get<std::string>())};
        FrequencyTable table(spec);
        for (const auto& [key, c] : j.at("counts").items()) {
            const auto count = c.get<std::int64_t>();
            if (count < 1) throw Error(ErrorKind::validation, "count for '" + key + "' must be >= 1");
            table.add(key, static_cast<std::uint64_t>(count));
        }
        if (table.total() != j.at("total").get<std::uint64_t>() ||
            table.distinct() != j.at("distinct").get<std::size_t>()) {
            throw Error(ErrorKind::validation, "total/distinct do not match counts");
        }
        return table;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse, std::string("frequency table JSON: ") + e.what());
    }
}

}  // namespace lexent
