#pragma once

#include <stdexcept>
#include <string>

namespace mixhal {

enum class ErrorKind {
    validation,
    backend_unavailable,
    parse,
    injection,
    construction,
    decomposition,
    aggregation,
    retrieval,
    ner_unavailable,
    generation,
    annotation,
    io,
    config,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::validation: return "validation";
        case ErrorKind::backend_unavailable: return "backend-unavailable";
        case ErrorKind::parse: return "parse";
        case ErrorKind::injection: return "injection";
        case ErrorKind::construction: return "construction";
        case ErrorKind::decomposition: return "decomposition";
        case ErrorKind::aggregation: return "aggregation";
        case ErrorKind::retrieval: return "retrieval";
        case ErrorKind::ner_unavailable: return "ner-unavailable";
        case ErrorKind::generation: return "generation";
        case ErrorKind::annotation: return "annotation";
        case ErrorKind::io: return "io";
        case ErrorKind::config: return "config";
    }
    return "unknown";
}

class MixhalError : public std::runtime_error {
public:
    MixhalError(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + " error: " + message),
          kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Thrown by backends for failures worth retrying (timeouts, 5xx responses).
class TransientBackendError : public std::runtime_error {
public:
    explicit TransientBackendError(const std::string& message)
        : std::runtime_error(message) {}
};

}  // namespace mixhal
