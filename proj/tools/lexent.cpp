#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lexent/cli.hpp"

namespace {

void add_common(CLI::App& cmd, lexent::RunConfig& config, std::string& windowing, std::string& format,
                std::string& alphabet_config) {
    cmd.add_option("--n-max", config.n_max, "Largest n-word block (default 18; deep scans up to 40)");
    cmd.add_option("--windowing", windowing, "n-word windowing: disjoint (default) or sliding")
        ->check(CLI::IsMember({"sliding", "disjoint"}));
    cmd.add_flag("--case-sensitive", config.alphabet.case_sensitive, "Keep case in word tokens");
    cmd.add_option("--include-digits", config.alphabet.include_digits, "Digits are word characters (default true)");
    cmd.add_flag("--include-space-punct", config.alphabet.include_space_punct,
                 "Count space and punctuation in the alphabet size");
    cmd.add_option("--alphabet-config", alphabet_config, "key = value file with alphabet switches");
    cmd.add_option("--out", config.out_dir, "Output directory");
    cmd.add_option("--format", format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
    cmd.add_option("--jobs", config.jobs, "Corpora analyzed in parallel (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Direct-count entropy analysis of text corpora"};
    app.require_subcommand(1);

    lexent::RunConfig config;
    std::string windowing = "disjoint";
    std::string format = "both";
    std::string alphabet_config;
    std::string rank_window = "2:100";

    struct Sub {
        const char* name;
        lexent::Command command;
        const char* help;
    };
    const Sub subs[] = {
        {"analyze", lexent::Command::analyze, "Full entropy report per corpus, plus tables"},
        {"fseries", lexent::Command::fseries, "Conditional entropy series for characters and words"},
        {"rate", lexent::Command::rate, "Entropy rate and redundancy"},
        {"zipf", lexent::Command::zipf, "Rank-frequency series, Zipf constant and log-log slopes"},
        {"generate", lexent::Command::generate, "First-order artificial text from a lexicon"},
        {"compare", lexent::Command::compare, "Compare a natural and an artificial corpus"},
        {"report", lexent::Command::report, "Rebuild tables from saved report JSON files"},
    };
    for (const auto& sub : subs) {
        auto* cmd = app.add_subcommand(sub.name, sub.help);
        add_common(*cmd, config, windowing, format, alphabet_config);
        cmd->add_option("inputs", config.inputs, "Corpus files or directories");
        cmd->callback([&config, c = sub.command] { config.command = c; });
        switch (sub.command) {
        case lexent::Command::analyze:
            cmd->add_flag("--dump-counts", config.dump_counts, "Also write the frequency tables");
            break;
        case lexent::Command::zipf:
            cmd->add_option("--rank-window", rank_window, "Rank window LO:HI for the Zipf constant (default 2:100)");
            break;
        case lexent::Command::generate:
            cmd->add_option("--words", config.k_words, "Number of words to generate")->required();
            cmd->add_option("--seed", config.seed, "RNG seed");
            cmd->add_option("--lexicon", config.lexicon, "Lexicon CSV (word,count or word,probability)");
            cmd->add_option("--output", config.output, "Generated text file (default OUT/generated.txt)");
            cmd->add_option("--save-lexicon", config.save_lexicon, "Write the lexicon used as CSV");
            cmd->add_flag("--lexicon-digits", config.lexicon_digits, "Keep corpus tokens that contain digits");
            break;
        default:
            break;
        }
    }

    try {
        app.parse(argc, argv);
        config.windowing = lexent::parse_windowing(windowing);
        config.format = format == "csv" ? lexent::OutputFormat::csv
                        : format == "json" ? lexent::OutputFormat::json
                                           : lexent::OutputFormat::both;
        const auto colon = rank_window.find(':');
        if (colon == std::string::npos) throw CLI::ValidationError("--rank-window", "expected LO:HI");
        config.rank_lo = std::stoul(rank_window.substr(0, colon));
        config.rank_hi = std::stoul(rank_window.substr(colon + 1));
        if (!alphabet_config.empty()) config.alphabet = lexent::load_alphabet_config(alphabet_config, config.alphabet);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? lexent::exit_code::ok : lexent::exit_code::usage;
    } catch (const std::logic_error&) {
        std::cerr << "usage error: --rank-window expects LO:HI with integers\n";
        return lexent::exit_code::usage;
    } catch (const lexent::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lexent::exit_code::input;
    }
    return lexent::run(config, std::cout, std::cerr);
}
