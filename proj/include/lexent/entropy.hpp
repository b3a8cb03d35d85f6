#pragma once

// Plug-in entropy estimators and the quantities derived from them.
//
// All logarithms are base 2. Probabilities are maximum-likelihood estimates
// count/total with no smoothing, so undersampled long blocks produce
// negative conditional entropies; that bias is kept, not corrected.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "lexent/error.hpp"
#include "lexent/frequency_table.hpp"

namespace lexent {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            compensation_ += (sum_ - t) + x;
        } else {
            compensation_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/// -sum p log2 p over the given counts. Counts are summed in the order given;
/// pass them in a canonical order (FrequencyTable::count_values) when results
/// must be bit-identical across equal tables.
inline double plugin_entropy(std::span<const std::uint64_t> counts) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) throw Error(ErrorKind::empty_corpus, "entropy of an empty table");
    const double t = static_cast<double>(total);
    CompensatedSum h;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / t;
        h.add(-p * std::log2(p));
    }
    return std::max(0.0, h.value());
}

inline double plugin_entropy(const FrequencyTable& table) {
    if (table.empty()) throw Error(ErrorKind::empty_corpus, "entropy of an empty table");
    const auto values = table.count_values();
    return plugin_entropy(std::span<const std::uint64_t>(values));
}

/// Per-unit block entropy H_N / N.
inline double gn(double block_entropy, std::size_t n) {
    if (n < 1) throw Error(ErrorKind::domain, "block length must be >= 1");
    return block_entropy / static_cast<double>(n);
}

/// Conditional-entropy series: F_1 = H_1, F_N = H_N - H_{N-1}.
/// The input must cover 1..max without gaps.
inline std::map<std::size_t, double> f_series(const std::map<std::size_t, double>& block_entropies) {
    std::map<std::size_t, double> out;
    std::size_t expected = 1;
    double previous = 0.0;
    for (const auto& [n, h] : block_entropies) {
        if (n != expected) {
            throw Error(ErrorKind::missing_order, "block entropy for n=" + std::to_string(expected) + " is missing");
        }
        out[n] = n == 1 ? h : h - previous;
        previous = h;
        ++expected;
    }
    return out;
}

/// Probability-weighted mean token length in characters (code points).
inline double average_word_length(const FrequencyTable& word_table) {
    if (word_table.empty()) throw Error(ErrorKind::empty_corpus, "average word length of an empty table");
    if (word_table.spec().unit != Unit::word_gram || word_table.spec().n != 1) {
        throw Error(ErrorKind::mismatch, "average word length needs a 1-word table, got " +
                                             describe(word_table.spec()));
    }
    // Sorted by key so the sum is independent of hash order.
    std::vector<std::pair<std::string_view, std::uint64_t>> entries(word_table.counts().begin(),
                                                                    word_table.counts().end());
    std::sort(entries.begin(), entries.end());
    const double total = static_cast<double>(word_table.total());
    CompensatedSum alpha;
    for (const auto& [word, c] : entries) {
        std::size_t length = 0;
        for (unsigned char b : word) length += (b & 0xC0) != 0x80;
        alpha.add(static_cast<double>(length) * static_cast<double>(c) / total);
    }
    return alpha.value();
}

/// Bits per character of a k-word block entropy. Without the space symbol the
/// block spans k*alpha characters; with it, k*(alpha+1).
inline double per_char(double h_symbol, std::size_t k, double alpha, bool include_space) {
    if (k < 1) throw Error(ErrorKind::domain, "word count k must be >= 1");
    if (!(alpha > 0.0)) throw Error(ErrorKind::domain, "average word length must be positive");
    const double chars_per_word = include_space ? alpha + 1.0 : alpha;
    return h_symbol / (static_cast<double>(k) * chars_per_word);
}

/// H_3word / (3 (alpha + 1)) in bits per character.
inline double entropy_rate(double h_3word, double alpha) { return per_char(h_3word, 3, alpha, true); }

/// 1 - rate / log2(distinct characters), clamped at 0. distinct_chars may be
/// fractional (a weighted average over corpora).
inline double redundancy(double h_rate, double distinct_chars) {
    if (!(distinct_chars >= 2.0)) throw Error(ErrorKind::domain, "redundancy needs at least 2 distinct characters");
    if (h_rate < 0.0) throw Error(ErrorKind::domain, "entropy rate must be nonnegative");
    return std::clamp(1.0 - h_rate / std::log2(distinct_chars), 0.0, 1.0);
}

/// -p log2 p, with the limits 0 at p = 0 and p = 1.
inline double plogp(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::domain, "probability outside [0, 1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p);
}

struct PlogpPoint {
    double p = 0.0;
    double value = 0.0;
};

/// Evenly spaced samples of plogp over [0, 1], endpoints included.
inline std::vector<PlogpPoint> plogp_curve(std::size_t samples) {
    if (samples < 2) throw Error(ErrorKind::domain, "need at least 2 samples");
    std::vector<PlogpPoint> curve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double p = static_cast<double>(i) / static_cast<double>(samples - 1);
        curve[i] = {p, plogp(p)};
    }
    return curve;
}

/// Maximizer of plogp on [0, 1] by golden-section search; converges to 1/e.
inline PlogpPoint plogp_maximum(double tolerance = 1e-12) {
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0;
    double hi = 1.0;
    double a = hi - ratio * (hi - lo);
    double b = lo + ratio * (hi - lo);
    while (hi - lo > tolerance) {
        if (plogp(a) < plogp(b)) {
            lo = a;
            a = b;
            b = lo + ratio * (hi - lo);
        } else {
            hi = b;
            b = a;
            a = hi - ratio * (hi - lo);
        }
    }
    const double p = (lo + hi) / 2.0;
    return {p, plogp(p)};
}

}  // namespace lexent
