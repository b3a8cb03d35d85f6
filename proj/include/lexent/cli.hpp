#pragma once

// Command runner behind the lexent executable. Argument parsing lives in
// tools/; this header takes a parsed RunConfig so the commands are testable
// without a process boundary.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexent/alphabet.hpp"
#include "lexent/counting.hpp"
#include "lexent/error.hpp"
#include "lexent/io.hpp"
#include "lexent/report.hpp"
#include "lexent/tables.hpp"
#include "lexent/textgen.hpp"
#include "lexent/zipf.hpp"

namespace lexent {

enum class Command { analyze, fseries, rate, zipf, generate, compare, report };
enum class OutputFormat { csv, json, both };

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int input = 2;
inline constexpr int internal = 3;
}  // namespace exit_code

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Command command = Command::analyze;
    std::vector<std::filesystem::path> inputs;
    std::size_t n_max = 18;
    Windowing windowing = Windowing::disjoint;
    AlphabetSpec alphabet;
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 0;
    std::size_t rank_lo = 2;
    std::size_t rank_hi = 100;
    OutputFormat format = OutputFormat::both;
    std::size_t jobs = 0;  // 0: hardware concurrency

    bool dump_counts = false;                // analyze
    std::size_t k_words = 0;                 // generate
    std::filesystem::path lexicon;           // generate: CSV instead of corpora
    std::filesystem::path output;            // generate: text file
    std::filesystem::path save_lexicon;      // generate
    bool lexicon_digits = false;             // generate: keep tokens with digits
};

inline void validate(const RunConfig& config) {
    const bool needs_reports = config.command == Command::analyze || config.command == Command::report;
    if (needs_reports && config.n_max < 3) {
        throw UsageError("--n-max must be at least 3 (the entropy rate needs the 3-word block)");
    }
    if (config.n_max < 1) throw UsageError("--n-max must be at least 1");
    if (config.command != Command::generate && config.inputs.empty()) throw UsageError("no input files given");
    if (config.command == Command::compare && config.inputs.size() != 2) {
        throw UsageError("compare takes exactly two inputs: NATURAL ARTIFICIAL");
    }
    if (config.command == Command::generate) {
        if (config.k_words < 1) throw UsageError("generate needs --words K with K >= 1");
        if (config.lexicon.empty() && config.inputs.empty()) {
            throw UsageError("generate needs --lexicon FILE or corpus inputs");
        }
        if (!config.lexicon.empty() && !config.inputs.empty()) {
            throw UsageError("generate takes either --lexicon or corpus inputs, not both");
        }
    }
    if (config.rank_lo < 1 || config.rank_hi < config.rank_lo) {
        throw UsageError("--rank-window needs 1 <= LO <= HI");
    }
    if (config.dump_counts && config.command != Command::analyze) {
        throw UsageError("--dump-counts only applies to analyze");
    }
}

namespace detail {

struct Corpus {
    std::string name;
    std::filesystem::path path;
};

/// Files as given; directories expand to their regular files in name order.
inline std::vector<Corpus> collect_corpora(const std::vector<std::filesystem::path>& inputs,
                                           const std::string& required_suffix = {}) {
    std::vector<Corpus> corpora;
    auto add = [&](const std::filesystem::path& p) {
        std::string name = p.filename().string();
        if (!required_suffix.empty() && name.size() > required_suffix.size() &&
            name.ends_with(required_suffix)) {
            name.resize(name.size() - required_suffix.size());
        } else {
            name = p.stem().string();
        }
        corpora.push_back({name, p});
    };
    for (const auto& input : inputs) {
        std::error_code ec;
        if (std::filesystem::is_directory(input, ec)) {
            std::vector<std::filesystem::path> files;
            for (const auto& entry : std::filesystem::directory_iterator(input)) {
                if (!entry.is_regular_file()) continue;
                if (!required_suffix.empty() && !entry.path().filename().string().ends_with(required_suffix)) continue;
                files.push_back(entry.path());
            }
            std::sort(files.begin(), files.end());
            for (const auto& f : files) add(f);
        } else if (std::filesystem::is_regular_file(input, ec)) {
            add(input);
        } else {
            throw Error(ErrorKind::io, "cannot read " + input.string() + ": no such file or directory");
        }
    }
    std::map<std::string, std::filesystem::path> seen;
    for (const auto& c : corpora) {
        const auto [it, inserted] = seen.emplace(c.name, c.path);
        if (!inserted) {
            throw Error(ErrorKind::validation, "duplicate corpus name '" + c.name + "' (" + it->second.string() +
                                                   " and " + c.path.string() + ")");
        }
    }
    return corpora;
}

inline SymbolStreams load_streams(const std::filesystem::path& path, const AlphabetSpec& alphabet) {
    const std::string text = read_file(path);
    try {
        return normalize(text, alphabet);
    } catch (const Error& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

/// Runs fn(i) for i in [0, count) on up to `jobs` threads; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, count);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    {
        std::vector<std::jthread> workers;
        for (std::size_t w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

inline std::vector<EntropyReport> analyze_corpora(const std::vector<Corpus>& corpora, const RunConfig& config,
                                                  std::size_t n_max) {
    std::vector<EntropyReport> reports(corpora.size());
    parallel_for(corpora.size(), config.jobs, [&](std::size_t i) {
        const auto streams = load_streams(corpora[i].path, config.alphabet);
        try {
            reports[i] = build_report(streams, n_max, config.windowing, config.alphabet, corpora[i].name);
        } catch (const Error& e) {
            throw Error(e.kind(), corpora[i].path.string() + ": " + e.what());
        }
        check_report_invariants(reports[i]);
    });
    return reports;
}

inline bool wants_csv(const RunConfig& c) { return c.format != OutputFormat::json; }
inline bool wants_json(const RunConfig& c) { return c.format != OutputFormat::csv; }

inline void ensure_out_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!std::filesystem::is_directory(dir)) throw Error(ErrorKind::io, "cannot create output directory " + dir.string());
}

inline void write_reports(const std::vector<EntropyReport>& reports, const RunConfig& config, bool per_corpus_json) {
    if (wants_json(config)) {
        if (per_corpus_json) {
            for (const auto& r : reports) {
                write_file_atomic(config.out_dir / (r.name + ".report.json"), to_json(r).dump(2) + "\n");
            }
        }
        write_file_atomic(config.out_dir / "aggregate.json", aggregate_json(reports).dump(2) + "\n");
    }
    if (wants_csv(config)) write_tables(reports, config.out_dir);
}

inline void summarize(std::ostream& out, const EntropyReport& r) {
    out << r.name << ": words=" << r.word_count << " distinct=" << r.distinct_words
        << " H_char=" << fixed(r.h_char, 2) << " H_digram=" << fixed(r.h_digram, 2)
        << " H_trigram=" << fixed(r.h_trigram, 2) << " alpha=" << fixed(r.alpha, 2)
        << " H_max@n=" << r.h_max_n << " onset=" << (r.onset ? std::to_string(*r.onset) : "none")
        << " H_L=" << fixed(r.entropy_rate, 2) << " R=" << fixed(r.redundancy, 2) << "\n";
}

// ---------------------------------------------------------------------------
// Commands

inline void run_analyze(const RunConfig& config, std::ostream& out) {
    const auto corpora = collect_corpora(config.inputs);
    const auto reports = analyze_corpora(corpora, config, config.n_max);
    write_reports(reports, config, true);
    if (config.dump_counts) {
        for (const auto& corpus : corpora) {
            const auto streams = load_streams(corpus.path, config.alphabet);
            std::vector<std::pair<std::string, FrequencyTable>> tables;
            tables.emplace_back("char", count_chars(streams));
            tables.emplace_back("digram", count_ngrams(streams, 2));
            tables.emplace_back("trigram", count_ngrams(streams, 3));
            for (std::size_t n = 1; n <= 3; ++n) {
                tables.emplace_back("word" + std::to_string(n), count_nwords(streams, n, config.windowing));
            }
            for (const auto& [label, table] : tables) {
                const auto stem = config.out_dir / (corpus.name + ".counts." + label);
                if (wants_csv(config)) write_file_atomic(stem.string() + ".csv", to_csv(table));
                if (wants_json(config)) write_file_atomic(stem.string() + ".json", to_json(table).dump() + "\n");
            }
        }
    }
    for (const auto& r : reports) summarize(out, r);
}

inline void run_report(const RunConfig& config, std::ostream& out) {
    const auto files = collect_corpora(config.inputs, ".report.json");
    std::vector<EntropyReport> reports;
    for (const auto& f : files) {
        try {
            reports.push_back(report_from_json(nlohmann::json::parse(read_file(f.path))));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::parse, f.path.string() + ": " + e.what());
        } catch (const Error& e) {
            throw Error(e.kind(), f.path.string() + ": " + e.what());
        }
        check_report_invariants(reports.back());
    }
    write_reports(reports, config, false);
    for (const auto& r : reports) summarize(out, r);
}

inline void run_fseries(const RunConfig& config, std::ostream& out) {
    const auto corpora = collect_corpora(config.inputs);
    const auto reports = analyze_corpora(corpora, config, std::max<std::size_t>(config.n_max, 3));
    for (const auto& r : reports) {
        if (wants_csv(config)) {
            std::string csv = "series,n,value\n";
            for (const auto& [n, v] : r.f_char_series) csv += format("char,%zu,%.17g\n", n, v);
            for (const auto& [n, v] : r.f_word_series) csv += format("word,%zu,%.17g\n", n, v);
            write_file_atomic(config.out_dir / (r.name + ".fseries.csv"), csv);
        }
        if (wants_json(config)) {
            const nlohmann::json j = {{"name", r.name},
                                      {"f_char_series", detail::series_to_json(r.f_char_series)},
                                      {"f_word_series", detail::series_to_json(r.f_word_series)}};
            write_file_atomic(config.out_dir / (r.name + ".fseries.json"), j.dump(2) + "\n");
        }
        out << r.name << ":";
        for (const auto& [n, v] : r.f_char_series) out << " F" << n << "=" << fixed(v, 2);
        for (const auto& [n, v] : r.f_word_series) {
            if (n <= 5) out << " F" << n << "w=" << fixed(v, 2);
        }
        out << "\n";
    }
}

inline void run_rate(const RunConfig& config, std::ostream& out) {
    const auto corpora = collect_corpora(config.inputs);
    const auto reports = analyze_corpora(corpora, config, 3);
    if (wants_csv(config)) {
        write_file_atomic(config.out_dir / "entropy_rate.csv", emit_tables(reports).at("entropy_rate.csv"));
    }
    if (wants_json(config)) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : reports) {
            j.push_back({{"name", r.name},
                         {"h_3word", r.h_nword.at(3)},
                         {"alpha", r.alpha},
                         {"entropy_rate", r.entropy_rate},
                         {"distinct_chars", r.distinct_chars},
                         {"redundancy", r.redundancy}});
        }
        write_file_atomic(config.out_dir / "entropy_rate.json", j.dump(2) + "\n");
    }
    for (const auto& r : reports) {
        out << r.name << ": H_3word=" << fixed(r.h_nword.at(3), 2) << " alpha=" << fixed(r.alpha, 2)
            << " H_L=" << fixed(r.entropy_rate, 2) << " R=" << fixed(r.redundancy, 3) << "\n";
    }
}

inline void run_zipf(const RunConfig& config, std::ostream& out) {
    const auto corpora = collect_corpora(config.inputs);
    for (const auto& corpus : corpora) {
        const auto streams = load_streams(corpus.path, config.alphabet);
        std::vector<std::pair<std::string, RankSeries>> series;
        series.emplace_back("char", rank_series(count_chars(streams)));
        series.emplace_back("digram", rank_series(count_ngrams(streams, 2)));
        series.emplace_back("trigram", rank_series(count_ngrams(streams, 3)));
        for (std::size_t n = 1; n <= 3; ++n) {
            series.emplace_back("word" + std::to_string(n), rank_series(count_nwords(streams, n, config.windowing)));
        }
        for (const auto& [label, s] : series) {
            export_loglog(s, config.out_dir / (corpus.name + "." + label + ".loglog.dat"));
        }
        const auto& words = series[3].second;
        const double constant = zipf_constant(words, config.rank_lo, config.rank_hi);
        auto slope = [&](const RankSeries& s) -> nlohmann::json {
            const std::size_t hi = std::min(config.rank_hi, s.max_rank());
            if (hi <= config.rank_lo) return nullptr;
            try {
                return loglog_slope(s, config.rank_lo, hi);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::undefined_slope) return nullptr;
                throw;
            }
        };
        const nlohmann::json summary = {{"name", corpus.name},
                                        {"rank_window", {config.rank_lo, config.rank_hi}},
                                        {"zipf_constant", constant},
                                        {"slope_word1", slope(series[3].second)},
                                        {"slope_word2", slope(series[4].second)},
                                        {"slope_word3", slope(series[5].second)}};
        write_file_atomic(config.out_dir / (corpus.name + ".zipf.json"), summary.dump(2) + "\n");
        out << corpus.name << ": zipf_constant[" << config.rank_lo << "," << config.rank_hi
            << "]=" << fixed(constant, 4) << " slope_word2=" << summary["slope_word2"].dump()
            << " slope_word3=" << summary["slope_word3"].dump() << "\n";
    }
}

inline void run_generate(const RunConfig& config, std::ostream& out) {
    GeneratorModel model;
    if (!config.lexicon.empty()) {
        model = load_lexicon(config.lexicon, config.seed);
    } else {
        std::vector<FrequencyTable> tables;
        for (const auto& corpus : collect_corpora(config.inputs)) {
            tables.push_back(count_nwords(load_streams(corpus.path, config.alphabet), 1, config.windowing));
        }
        model = build_lexicon(merge(tables), LexiconOptions{!config.lexicon_digits}, config.seed);
    }
    if (!config.save_lexicon.empty()) save_lexicon(model, config.save_lexicon);
    const auto text_path = config.output.empty() ? config.out_dir / "generated.txt" : config.output;
    write_file_atomic(text_path, generate(model, config.k_words, config.seed) + "\n");
    auto meta_path = text_path;
    meta_path += ".meta.json";
    write_file_atomic(meta_path, generation_metadata(model, config.k_words, config.seed).dump(2) + "\n");
    out << "wrote " << config.k_words << " words to " << text_path.string() << " (lexicon " << model.size()
        << " words, entropy " << fixed(model.entropy(), 2) << " bits/word, alpha " << fixed(model.alpha(), 2)
        << ", seed " << config.seed << ")\n";
}

inline void run_compare(const RunConfig& config, std::ostream& out) {
    const auto corpora = collect_corpora(config.inputs);
    const auto reports = analyze_corpora(corpora, config, std::max<std::size_t>(config.n_max, 3));
    const auto comparison = compare_reports(reports[0], reports[1]);
    if (wants_json(config)) {
        write_file_atomic(config.out_dir / "comparison.json", to_json(comparison).dump(2) + "\n");
    }
    if (wants_csv(config)) {
        std::string csv = "quantity,n,natural,artificial,absolute,relative\n";
        for (const auto& d : comparison.deltas) {
            csv += format("%s,%zu,%.6f,%.6f,%.6f,%.6f\n", d.quantity.c_str(), d.n, d.natural, d.artificial,
                          d.absolute(), d.relative());
        }
        write_file_atomic(config.out_dir / "comparison.csv", csv);
    }
    for (const auto& d : comparison.deltas) {
        out << d.quantity << (d.n ? "[" + std::to_string(d.n) + "]" : "") << ": " << fixed(d.natural, 2) << " vs "
            << fixed(d.artificial, 2) << " (delta " << fixed(d.absolute(), 2) << ")\n";
    }
}

}  // namespace detail

/// Executes one command. Returns the process exit code; diagnostics go to err.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        validate(config);
        if (config.command != Command::generate || config.output.empty()) detail::ensure_out_dir(config.out_dir);
        switch (config.command) {
        case Command::analyze: detail::run_analyze(config, out); break;
        case Command::report: detail::run_report(config, out); break;
        case Command::fseries: detail::run_fseries(config, out); break;
        case Command::rate: detail::run_rate(config, out); break;
        case Command::zipf: detail::run_zipf(config, out); break;
        case Command::generate: detail::run_generate(config, out); break;
        case Command::compare: detail::run_compare(config, out); break;
        }
        return exit_code::ok;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::invariant ? exit_code::internal : exit_code::input;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_code::internal;
    }
}

}  // namespace lexent
