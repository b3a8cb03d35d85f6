#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "lexent/alphabet.hpp"
#include "lexent/error.hpp"
#include "lexent/frequency_table.hpp"

namespace lexent {

namespace detail {

inline std::string char_key(std::span<const char32_t> window) {
    std::string key;
    key.reserve(window.size() * 2);
    for (char32_t cp : window) append_utf8(key, cp);
    return key;
}

inline std::string word_key(std::span<const std::string> window) {
    std::size_t size = window.size();
    for (const auto& w : window) size += w.size();
    std::string key;
    key.reserve(size);
    for (std::size_t i = 0; i < window.size(); ++i) {
        if (i > 0) key.push_back(kWordSeparator);
        key += window[i];
    }
    return key;
}

/// Windows whose start lies in [begin, end) of the chunk and that fit inside it.
/// offset is the chunk's position in the full stream (used for disjoint alignment).
template <typename T, typename KeyFn>
FrequencyTable count_chunk(std::span<const T> chunk, std::size_t offset, const BlockSpec& spec, KeyFn key_fn) {
    FrequencyTable table(spec);
    const std::size_t n = spec.n;
    const std::size_t step = spec.step();
    std::size_t start = (offset % step == 0) ? 0 : step - offset % step;
    for (; start + n <= chunk.size(); start += step) table.add(key_fn(chunk.subspan(start, n)));
    return table;
}

/// Shard-parallel count. Chunk boundaries are given as unit indices; each
/// worker sees only its own chunk, and the windows straddling a boundary are
/// counted here, once, at the first boundary they cross.
template <typename T, typename KeyFn>
FrequencyTable count_sharded(std::span<const T> units, const BlockSpec& spec, std::vector<std::size_t> cuts,
                             KeyFn key_fn) {
    cuts.insert(cuts.begin(), 0);
    cuts.push_back(units.size());
    std::vector<FrequencyTable> parts(cuts.size() - 1);
    {
        std::vector<std::jthread> workers;
        for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
            workers.emplace_back([&, j] {
                parts[j] = count_chunk(units.subspan(cuts[j], cuts[j + 1] - cuts[j]), cuts[j], spec, key_fn);
            });
        }
    }
    FrequencyTable seams(spec);
    const std::size_t n = spec.n;
    const std::size_t step = spec.step();
    for (std::size_t j = 1; j + 1 < cuts.size(); ++j) {
        const std::size_t boundary = cuts[j];
        std::size_t lo = std::max(cuts[j - 1], boundary >= n ? boundary - n + 1 : 0);
        if (lo % step != 0) lo += step - lo % step;
        for (std::size_t start = lo; start < boundary && start + n <= units.size(); start += step) {
            seams.add(key_fn(units.subspan(start, n)));
        }
    }
    parts.push_back(std::move(seams));
    return merge(parts);
}

inline std::vector<std::size_t> even_cuts(std::size_t length, std::size_t shards) {
    std::vector<std::size_t> cuts;
    for (std::size_t k = 1; k < shards; ++k) cuts.push_back(length * k / shards);
    return cuts;
}

inline void require_length(std::size_t length, std::size_t n, const char* what) {
    if (n < 1) throw Error(ErrorKind::domain, "block length n must be >= 1");
    if (length < n) {
        throw Error(ErrorKind::insufficient_data, std::string(what) + " has " + std::to_string(length) +
                                                      " units, fewer than n=" + std::to_string(n));
    }
}

}  // namespace detail

/// One entry per distinct character of char_stream.
inline FrequencyTable count_chars(const SymbolStreams& streams, std::size_t shards = 1) {
    if (streams.char_stream.empty()) throw Error(ErrorKind::empty_corpus, "character stream is empty");
    const std::span<const char32_t> units(streams.char_stream);
    return detail::count_sharded(units, BlockSpec{Unit::character, 1, Windowing::sliding},
                                 detail::even_cuts(units.size(), shards), detail::char_key);
}

/// Sliding character n-grams over the word-bridging alnum stream; case preserved.
inline FrequencyTable count_ngrams(const SymbolStreams& streams, std::size_t n, std::size_t shards = 1) {
    detail::require_length(streams.alnum_stream.size(), n, "alphanumeric stream");
    const std::span<const char32_t> units(streams.alnum_stream);
    return detail::count_sharded(units, BlockSpec{Unit::character_gram, n, Windowing::sliding},
                                 detail::even_cuts(units.size(), shards), detail::char_key);
}

/// n-word blocks, keys joined with kWordSeparator.
inline FrequencyTable count_nwords(const SymbolStreams& streams, std::size_t n,
                                   Windowing windowing = Windowing::sliding, std::size_t shards = 1) {
    detail::require_length(streams.word_stream.size(), n, "word stream");
    const std::span<const std::string> units(streams.word_stream);
    return detail::count_sharded(units, BlockSpec{Unit::word_gram, n, windowing},
                                 detail::even_cuts(units.size(), shards), detail::word_key);
}

/// Same as count_nwords with explicit chunk boundaries (word indices).
inline FrequencyTable count_nwords_chunked(const SymbolStreams& streams, std::size_t n, Windowing windowing,
                                           std::vector<std::size_t> cuts) {
    detail::require_length(streams.word_stream.size(), n, "word stream");
    const std::span<const std::string> units(streams.word_stream);
    return detail::count_sharded(units, BlockSpec{Unit::word_gram, n, windowing}, std::move(cuts),
                                 detail::word_key);
}

// ---------------------------------------------------------------------------
// Deep n-word scans

/// Exact block identities for n = 1, 2, 3, ... without materializing keys.
/// Level n assigns every sliding window start i a dense id such that two
/// windows share an id iff their n words are equal; level n+1 is the pair
/// (id_n[i], word[i+n]) renumbered. Each level costs O(length).
class WordBlockLadder {
public:
    explicit WordBlockLadder(const std::vector<std::string>& words) : word_ids_(words.size()) {
        std::unordered_map<std::string_view, std::uint32_t> vocab;
        vocab.reserve(words.size());
        for (std::size_t i = 0; i < words.size(); ++i) {
            const auto [it, inserted] = vocab.try_emplace(words[i], static_cast<std::uint32_t>(vocab.size()));
            word_ids_[i] = it->second;
        }
        block_ids_ = word_ids_;
        distinct_ = vocab.size();
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t distinct() const noexcept { return distinct_; }
    bool exhausted() const noexcept { return block_ids_.empty(); }

    /// Advances from n to n+1. Returns false once no window of length n+1 fits.
    bool advance() {
        if (block_ids_.size() <= 1) {
            block_ids_.clear();
            ++n_;
            return false;
        }
        std::unordered_map<std::uint64_t, std::uint32_t> ids;
        ids.reserve(block_ids_.size());
        std::vector<std::uint32_t> next(block_ids_.size() - 1);
        for (std::size_t i = 0; i < next.size(); ++i) {
            const std::uint64_t pair = (std::uint64_t{block_ids_[i]} << 32) | word_ids_[i + n_];
            next[i] = ids.try_emplace(pair, static_cast<std::uint32_t>(ids.size())).first->second;
        }
        block_ids_ = std::move(next);
        distinct_ = ids.size();
        ++n_;
        return true;
    }

    /// Count per distinct block at the current level, descending.
    std::vector<std::uint64_t> counts(Windowing windowing = Windowing::sliding) const {
        std::vector<std::uint64_t> by_id(distinct_, 0);
        const std::size_t step = windowing == Windowing::sliding ? 1 : n_;
        for (std::size_t i = 0; i < block_ids_.size(); i += step) ++by_id[block_ids_[i]];
        std::erase(by_id, std::uint64_t{0});
        std::sort(by_id.begin(), by_id.end(), std::greater<>());
        return by_id;
    }

private:
    std::vector<std::uint32_t> word_ids_;
    std::vector<std::uint32_t> block_ids_;
    std::size_t n_ = 1;
    std::size_t distinct_ = 0;
};

/// Smallest n <= n_max at which every n-word block occurs exactly once.
inline std::optional<std::size_t> equiprobability_onset(const SymbolStreams& streams, std::size_t n_max,
                                                        Windowing windowing = Windowing::sliding) {
    if (n_max < 1) throw Error(ErrorKind::domain, "n_max must be >= 1");
    detail::require_length(streams.word_stream.size(), 1, "word stream");
    WordBlockLadder ladder(streams.word_stream);
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (n > 1 && !ladder.advance()) {
            throw Error(ErrorKind::insufficient_data, "word stream has " +
                                                          std::to_string(streams.word_stream.size()) +
                                                          " units, fewer than n=" + std::to_string(n));
        }
        const auto counts = ladder.counts(windowing);
        if (!counts.empty() && counts.front() == 1) return n;
    }
    return std::nullopt;
}

}  // namespace lexent
