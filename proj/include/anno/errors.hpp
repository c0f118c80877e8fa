// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace anno {

/// Failure categories shared by all modules. Tests match on the kind, not on
/// message wording.
enum class ErrorKind {
    Parse,              // malformed input, carries position info in the message
    ExternalEntity,     // XML external entity / DTD rejected
    Cycle,              // vocabulary subtype graph has a cycle
    DanglingReference,  // named thing does not exist
    UnknownType,
    UnknownProperty,
    RangeMismatch,
    MissingClosure,     // structured range without its own type spec
    Conversion,         // literal value does not fit its declared datatype
    IdCollision,
    Io,
    Network,
    HttpStatus,
    Config,
    DuplicateKey,
    NotInjectable,
    Locked,
};

inline std::string_view to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::Parse: return "parse error";
        case ErrorKind::ExternalEntity: return "external-entity-rejected";
        case ErrorKind::Cycle: return "cycle error";
        case ErrorKind::DanglingReference: return "dangling-reference";
        case ErrorKind::UnknownType: return "unknown-type";
        case ErrorKind::UnknownProperty: return "unknown-property";
        case ErrorKind::RangeMismatch: return "range-mismatch";
        case ErrorKind::MissingClosure: return "missing-closure";
        case ErrorKind::Conversion: return "value-conversion error";
        case ErrorKind::IdCollision: return "id-collision";
        case ErrorKind::Io: return "i/o error";
        case ErrorKind::Network: return "network error";
        case ErrorKind::HttpStatus: return "http status error";
        case ErrorKind::Config: return "config error";
        case ErrorKind::DuplicateKey: return "duplicate-key";
        case ErrorKind::NotInjectable: return "not-injectable";
        case ErrorKind::Locked: return "repository locked";
    }
    return "error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace anno
