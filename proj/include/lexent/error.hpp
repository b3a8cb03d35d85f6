#pragma once

#include <stdexcept>
#include <string>

namespace lexent {

enum class ErrorKind {
    decode,             // invalid UTF-8
    empty_corpus,
    invalid_alphabet,
    insufficient_data,  // stream shorter than the requested block
    mismatch,           // provenance / configuration mismatch
    domain,             // argument outside the function's domain
    missing_order,      // gap in a block-entropy series
    range,              // rank window outside a series
    undefined_slope,
    io,
    parse,
    validation,
    invariant,          // internal invariant violated
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::decode: return "decode error";
    case ErrorKind::empty_corpus: return "empty corpus";
    case ErrorKind::invalid_alphabet: return "invalid alphabet";
    case ErrorKind::insufficient_data: return "insufficient data";
    case ErrorKind::mismatch: return "mismatch";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::missing_order: return "missing order";
    case ErrorKind::range: return "range error";
    case ErrorKind::undefined_slope: return "undefined slope";
    case ErrorKind::io: return "I/O error";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::validation: return "validation error";
    case ErrorKind::invariant: return "invariant violation";
    }
    return "error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Decode failure; offset is the byte position of the first ill-formed sequence.
class DecodeError : public Error {
public:
    DecodeError(std::size_t offset, const std::string& what)
        : Error(ErrorKind::decode, what + " at byte offset " + std::to_string(offset)),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace lexent
