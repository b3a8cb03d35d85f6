#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lexent/error.hpp"
#include "lexent/frequency_table.hpp"
#include "lexent/io.hpp"

namespace lexent {

struct RankPoint {
    std::size_t rank = 0;
    std::uint64_t count = 0;
    double probability = 0.0;
    std::string symbol;
};

/// Rank/probability pairs, ranks 1..distinct, probabilities non-increasing.
struct RankSeries {
    BlockSpec spec;
    std::vector<RankPoint> points;

    std::size_t max_rank() const { return points.size(); }
    double probability(std::size_t rank) const { return points.at(rank - 1).probability; }
};

/// Ties are ordered by the symbol's byte order so output is deterministic.
inline RankSeries rank_series(const FrequencyTable& table) {
    if (table.empty()) throw Error(ErrorKind::empty_corpus, "rank series of an empty table");
    RankSeries series{table.spec(), {}};
    const double total = static_cast<double>(table.total());
    std::size_t rank = 0;
    for (auto& [symbol, count] : table.ranked_entries()) {
        series.points.push_back({++rank, count, static_cast<double>(count) / total, std::move(symbol)});
    }
    return series;
}

/// Series from raw probabilities already in rank order (rank i+1 = p[i]).
inline RankSeries rank_series_from_probabilities(const std::vector<double>& probabilities) {
    RankSeries series;
    for (std::size_t i = 0; i < probabilities.size(); ++i) series.points.push_back({i + 1, 0, probabilities[i], {}});
    return series;
}

namespace detail {

inline void check_window(const RankSeries& series, std::size_t lo, std::size_t hi) {
    if (lo < 1 || hi < lo || hi > series.max_rank()) {
        throw Error(ErrorKind::range, "rank window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                          "] outside series of " + std::to_string(series.max_rank()) + " ranks");
    }
}

}  // namespace detail

/// Median of r * p(r) over ranks lo..hi inclusive.
inline double zipf_constant(const RankSeries& series, std::size_t rank_lo, std::size_t rank_hi) {
    detail::check_window(series, rank_lo, rank_hi);
    std::vector<double> products;
    products.reserve(rank_hi - rank_lo + 1);
    for (std::size_t r = rank_lo; r <= rank_hi; ++r) products.push_back(static_cast<double>(r) * series.probability(r));
    std::sort(products.begin(), products.end());
    const std::size_t mid = products.size() / 2;
    return products.size() % 2 == 1 ? products[mid] : (products[mid - 1] + products[mid]) / 2.0;
}

/// Least-squares slope of log2 p against log2 r over ranks lo..hi.
inline double loglog_slope(const RankSeries& series, std::size_t rank_lo, std::size_t rank_hi) {
    detail::check_window(series, rank_lo, rank_hi);
    const double p_first = series.probability(rank_lo);
    bool varies = false;
    for (std::size_t r = rank_lo; r <= rank_hi; ++r) varies = varies || series.probability(r) != p_first;
    if (!varies) throw Error(ErrorKind::undefined_slope, "all probabilities in the window are equal");

    const double m = static_cast<double>(rank_hi - rank_lo + 1);
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t r = rank_lo; r <= rank_hi; ++r) {
        mean_x += std::log2(static_cast<double>(r));
        mean_y += std::log2(series.probability(r));
    }
    mean_x /= m;
    mean_y /= m;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t r = rank_lo; r <= rank_hi; ++r) {
        const double dx = std::log2(static_cast<double>(r)) - mean_x;
        sxy += dx * (std::log2(series.probability(r)) - mean_y);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

/// "log2(rank) log2(probability)" per line, full precision.
inline std::string loglog_text(const RankSeries& series) {
    std::string out = "# log2_rank log2_probability\n";
    for (const auto& pt : series.points) {
        out += format("%.17g %.17g\n", std::log2(static_cast<double>(pt.rank)), std::log2(pt.probability));
    }
    return out;
}

/// rank,count,probability (and the symbol, quoted, for reference).
inline std::string rank_csv(const RankSeries& series) {
    std::string out = "rank,count,probability,symbol\n";
    for (const auto& pt : series.points) {
        out += format("%zu,%llu,%.17g,", pt.rank, static_cast<unsigned long long>(pt.count), pt.probability);
        out += detail::csv_quote(pt.symbol);
        out += '\n';
    }
    return out;
}

/// Writes the log-log data file at path and the raw CSV next to it
/// (same stem, ".csv" extension).
inline void export_loglog(const RankSeries& series, const std::filesystem::path& path) {
    if (path.empty()) throw Error(ErrorKind::io, "empty output path for log-log export");
    write_file_atomic(path, loglog_text(series));
    std::filesystem::path csv = path;
    csv.replace_extension(path.extension() == ".csv" ? ".rank.csv" : ".csv");
    write_file_atomic(csv, rank_csv(series));
}

/// Parses a log-log data file back into (log2 rank, log2 probability) pairs.
inline std::vector<std::pair<double, double>> read_loglog(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::vector<std::pair<double, double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        double x = 0.0;
        double y = 0.0;
        if (!(fields >> x >> y)) {
            throw Error(ErrorKind::parse, path.string() + " line " + std::to_string(line_no) + ": expected two numbers");
        }
        rows.emplace_back(x, y);
    }
    return rows;
}

}  // namespace lexent
