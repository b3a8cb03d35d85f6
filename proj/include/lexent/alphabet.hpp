#pragma once

// Text normalization: raw UTF-8 in, three symbol streams out.
//
//   char_stream   every retained character (letters, digits, spaces,
//                 punctuation), case preserved, whitespace runs collapsed
//                 to a single space, line breaks mapped to space.
//   alnum_stream  char_stream with every non-word character deleted. Word
//                 boundaries disappear, so n-grams over this stream bridge
//                 words ("LINDO DIA" -> "LINDODIA" -> ..., DOD, ODI, DIA).
//   word_stream   maximal runs of word characters, lowercased unless the
//                 alphabet is case sensitive.
//
// Input is NFC-composed before classification, so a decomposed "n" + U+0303
// and a precomposed U+00F1 are the same symbol.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "lexent/error.hpp"

namespace lexent {

/// Spaces and punctuation counted when include_space_punct is set.
inline constexpr std::u32string_view kSpacePunct = U" .,;:¿?¡!\"'()-«»";

struct AlphabetSpec {
    /// Case-folded base letters: a-z, n-tilde, and the six accented vowels.
    std::u32string letters = U"abcdefghijklmnopqrstuvwxyzñáéíóúü";
    bool include_digits = true;
    bool case_sensitive = false;
    bool include_space_punct = false;

    static AlphabetSpec letters_only() {
        AlphabetSpec spec;
        spec.include_digits = false;
        return spec;
    }

    std::size_t letter_count() const {
        std::u32string sorted = letters;
        std::sort(sorted.begin(), sorted.end());
        return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    }

    std::size_t symbol_count() const {
        return letter_count() * (case_sensitive ? 2 : 1) + (include_digits ? 10 : 0) +
               (include_space_punct ? kSpacePunct.size() : 0);
    }

    bool operator==(const AlphabetSpec&) const = default;
};

struct SymbolStreams {
    std::u32string char_stream;
    std::u32string alnum_stream;
    std::vector<std::string> word_stream;
};

// ---------------------------------------------------------------------------
// UTF-8 helpers

inline void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string to_utf8(std::u32string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t cp : text) append_utf8(out, cp);
    return out;
}

/// Strict decode. Throws DecodeError naming the offending byte offset;
/// base_offset shifts reported offsets when decoding a chunk of a larger file.
inline std::u32string decode_utf8(std::string_view bytes, std::size_t base_offset = 0) {
    std::u32string out;
    out.reserve(bytes.size());
    const auto* data = reinterpret_cast<const uint8_t*>(bytes.data());
    const auto length = static_cast<int32_t>(bytes.size());
    int32_t i = 0;
    while (i < length) {
        const int32_t start = i;
        UChar32 cp = 0;
        U8_NEXT(data, i, length, cp);
        if (cp < 0) {
            throw DecodeError(base_offset + static_cast<std::size_t>(start), "invalid UTF-8 sequence");
        }
        out.push_back(static_cast<char32_t>(cp));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Classification

inline bool is_word_char(char32_t cp, const AlphabetSpec& spec) {
    const auto c = static_cast<UChar32>(cp);
    if (u_isdigit(c)) return spec.include_digits;
    return u_hasBinaryProperty(c, UCHAR_ALPHABETIC) != 0;
}

inline char32_t fold_case(char32_t cp) {
    return static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
}

namespace detail {

inline bool is_space(char32_t cp) {
    return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0;
}

// Controls, format characters (BOM, zero-width joiners) and unassigned code
// points carry no text; dropping them keeps 0x1F out of every token.
inline bool is_dropped(char32_t cp) {
    const auto type = u_charType(static_cast<UChar32>(cp));
    return type == U_CONTROL_CHAR || type == U_FORMAT_CHAR || type == U_UNASSIGNED ||
           type == U_SURROGATE || type == U_PRIVATE_USE_CHAR;
}

inline std::u32string nfc(const std::u32string& text) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) {
        throw Error(ErrorKind::invariant, std::string("NFC normalizer unavailable: ") + u_errorName(status));
    }
    icu::UnicodeString source = icu::UnicodeString::fromUTF32(
        reinterpret_cast<const UChar32*>(text.data()), static_cast<int32_t>(text.size()));
    if (normalizer->isNormalized(source, status) && U_SUCCESS(status)) return text;
    status = U_ZERO_ERROR;
    icu::UnicodeString composed = normalizer->normalize(source, status);
    if (U_FAILURE(status)) {
        throw Error(ErrorKind::invariant, std::string("NFC normalization failed: ") + u_errorName(status));
    }
    std::u32string out;
    out.reserve(static_cast<std::size_t>(composed.length()));
    for (int32_t i = 0; i < composed.length(); i = composed.moveIndex32(i, 1)) {
        out.push_back(static_cast<char32_t>(composed.char32At(i)));
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Normalization

/// Incremental stream construction. Chunks must not split a multi-byte
/// character or a word token; whitespace state carries across chunks.
class StreamBuilder {
public:
    explicit StreamBuilder(AlphabetSpec spec) : spec_(std::move(spec)) {}

    StreamBuilder& append(std::string_view chunk) {
        const std::u32string decoded = decode_utf8(chunk, consumed_bytes_);
        consumed_bytes_ += chunk.size();
        for (char32_t cp : detail::nfc(decoded)) push(cp);
        return *this;
    }

    SymbolStreams finish() {
        flush_word();
        if (streams_.char_stream.empty()) {
            throw Error(ErrorKind::empty_corpus, "input contains no text");
        }
        return std::move(streams_);
    }

private:
    void push(char32_t cp) {
        if (detail::is_space(cp)) {
            flush_word();
            pending_space_ = !streams_.char_stream.empty();
            return;
        }
        if (detail::is_dropped(cp)) return;
        if (pending_space_) {
            streams_.char_stream.push_back(U' ');
            pending_space_ = false;
        }
        streams_.char_stream.push_back(cp);
        if (is_word_char(cp, spec_)) {
            streams_.alnum_stream.push_back(cp);
            append_utf8(word_, spec_.case_sensitive ? cp : fold_case(cp));
        } else {
            flush_word();
        }
    }

    void flush_word() {
        if (!word_.empty()) {
            streams_.word_stream.push_back(std::move(word_));
            word_.clear();
        }
    }

    AlphabetSpec spec_;
    SymbolStreams streams_;
    std::string word_;
    bool pending_space_ = false;
    std::size_t consumed_bytes_ = 0;
};

/// Leading and trailing whitespace is dropped.
inline SymbolStreams normalize(std::string_view raw_text, const AlphabetSpec& spec) {
    if (raw_text.empty()) throw Error(ErrorKind::empty_corpus, "input is empty");
    return StreamBuilder(spec).append(raw_text).finish();
}

/// F0 = log2 of the alphabet size.
inline double f0(std::size_t symbol_count) {
    if (symbol_count < 2) {
        throw Error(ErrorKind::invalid_alphabet,
                    "alphabet needs at least 2 symbols, got " + std::to_string(symbol_count));
    }
    return std::log2(static_cast<double>(symbol_count));
}

inline double f0(const AlphabetSpec& spec) { return f0(spec.symbol_count()); }

// ---------------------------------------------------------------------------
// Config file: "key = value" lines, '#' comments.

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

inline bool parse_bool(const std::string& value, std::size_t line) {
    std::string v = value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw Error(ErrorKind::parse, "line " + std::to_string(line) + ": expected boolean, got '" + value + "'");
}

}  // namespace detail

inline AlphabetSpec parse_alphabet_config(std::string_view text, AlphabetSpec spec = {}) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = detail::trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = detail::trim(std::string_view(line).substr(0, eq));
        const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
        if (key == "case_sensitive") {
            spec.case_sensitive = detail::parse_bool(value, line_no);
        } else if (key == "include_digits") {
            spec.include_digits = detail::parse_bool(value, line_no);
        } else if (key == "include_space_punct") {
            spec.include_space_punct = detail::parse_bool(value, line_no);
        } else {
            throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    return spec;
}

inline AlphabetSpec load_alphabet_config(const std::string& path, AlphabetSpec spec = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot read alphabet config " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_alphabet_config(buffer.str(), std::move(spec));
}

}  // namespace lexent
