#pragma once

#include <stdexcept>
#include <string>

namespace sandpile {

/// Stable machine-readable failure identifiers; these names appear verbatim
/// in CLI error JSON and never change meaning.
enum class Errc {
    // input / construction
    NotConnected,
    LoopEdge,
    NoSink,
    DuplicateVertexLabel,
    BadInput,
    // structural graph operations
    NoSuchEdge,
    SinkAdjacentEdge,
    // dynamics
    IllegalToppling,
    UnstableConfiguration,
    SinkVertex,
    SafetyCapExceeded,
    // resource bounds
    TooManyEdges,
    StateSpaceTooLarge,
    // recurrence / bijection
    NotRecurrent,
    BadEdge,
    IrreducibleComponent,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NotConnected: return "NotConnected";
        case Errc::LoopEdge: return "LoopEdge";
        case Errc::NoSink: return "NoSink";
        case Errc::DuplicateVertexLabel: return "DuplicateVertexLabel";
        case Errc::BadInput: return "BadInput";
        case Errc::NoSuchEdge: return "NoSuchEdge";
        case Errc::SinkAdjacentEdge: return "SinkAdjacentEdge";
        case Errc::IllegalToppling: return "IllegalToppling";
        case Errc::UnstableConfiguration: return "UnstableConfiguration";
        case Errc::SinkVertex: return "SinkVertex";
        case Errc::SafetyCapExceeded: return "SafetyCapExceeded";
        case Errc::TooManyEdges: return "TooManyEdges";
        case Errc::StateSpaceTooLarge: return "StateSpaceTooLarge";
        case Errc::NotRecurrent: return "NotRecurrent";
        case Errc::BadEdge: return "BadEdge";
        case Errc::IrreducibleComponent: return "IrreducibleComponent";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace sandpile
