#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace reloss {

// Every failure the library can signal, one code per contract violation.
enum class Errc {
    // document / graph loading
    MalformedDocument,
    DuplicateNodeId,
    DanglingEdge,
    UnknownKind,
    // mapping and loss metrics
    MappingReferencesUnknownNode,
    DirectionMismatch,
    OutOfRange,
    GraphTooLarge,
    // lexing / splitting
    UnterminatedString,
    UnterminatedComment,
    UnterminatedDollarQuote,
    UnbalancedBlock,
    // chunk metrics
    FileSetMismatch,
    UnsortedBoundaries,
    // scoring
    EmptyDenominator,
    // retrieval
    EmptyIndex,
    UnknownSeed,
    BadGlob,
    // plumbing
    IoError,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::MalformedDocument: return "MalformedDocument";
        case Errc::DuplicateNodeId: return "DuplicateNodeId";
        case Errc::DanglingEdge: return "DanglingEdge";
        case Errc::UnknownKind: return "UnknownKind";
        case Errc::MappingReferencesUnknownNode: return "MappingReferencesUnknownNode";
        case Errc::DirectionMismatch: return "DirectionMismatch";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::GraphTooLarge: return "GraphTooLarge";
        case Errc::UnterminatedString: return "UnterminatedString";
        case Errc::UnterminatedComment: return "UnterminatedComment";
        case Errc::UnterminatedDollarQuote: return "UnterminatedDollarQuote";
        case Errc::UnbalancedBlock: return "UnbalancedBlock";
        case Errc::FileSetMismatch: return "FileSetMismatch";
        case Errc::UnsortedBoundaries: return "UnsortedBoundaries";
        case Errc::EmptyDenominator: return "EmptyDenominator";
        case Errc::EmptyIndex: return "EmptyIndex";
        case Errc::UnknownSeed: return "UnknownSeed";
        case Errc::BadGlob: return "BadGlob";
        case Errc::IoError: return "IoError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Error(Errc code, std::size_t byte_offset, std::string message)
        : std::runtime_error(std::string(errc_name(code)) + " at byte " +
                             std::to_string(byte_offset) + ": " + message),
          code_(code),
          offset_(byte_offset) {}

    Errc code() const { return code_; }
    std::optional<std::size_t> offset() const { return offset_; }

private:
    Errc code_;
    std::optional<std::size_t> offset_;
};

} // namespace reloss
