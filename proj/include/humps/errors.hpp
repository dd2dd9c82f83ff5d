#pragma once

#include <stdexcept>
#include <string>

namespace humps {

// Error taxonomy shared by all modules. Every class carries a plain message;
// callers that need the offending value format it into the message.

struct InvalidSignPattern : std::runtime_error {
    explicit InvalidSignPattern(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureFailure : std::runtime_error {
    explicit QuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

struct NonPositiveInput : std::invalid_argument {
    explicit NonPositiveInput(const std::string& what) : std::invalid_argument(what) {}
};

struct EpsilonTooLarge : std::invalid_argument {
    explicit EpsilonTooLarge(const std::string& what) : std::invalid_argument(what) {}
};

struct EpsilonOutOfRange : std::invalid_argument {
    explicit EpsilonOutOfRange(const std::string& what) : std::invalid_argument(what) {}
};

struct DegenerateHump : std::runtime_error {
    explicit DegenerateHump(const std::string& what) : std::runtime_error(what) {}
};

struct NoAdmissibleR : std::runtime_error {
    explicit NoAdmissibleR(const std::string& what) : std::runtime_error(what) {}
};

struct StepSizeUnderflow : std::runtime_error {
    explicit StepSizeUnderflow(const std::string& what) : std::runtime_error(what) {}
};

struct NonFiniteState : std::runtime_error {
    explicit NonFiniteState(const std::string& what) : std::runtime_error(what) {}
};

struct OnBoundary : std::runtime_error {
    explicit OnBoundary(const std::string& what) : std::runtime_error(what) {}
};

struct AboveR : std::runtime_error {
    explicit AboveR(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct ConvergedToNegative : std::runtime_error {
    explicit ConvergedToNegative(const std::string& what) : std::runtime_error(what) {}
};

struct OverlappingIndexSets : std::invalid_argument {
    explicit OverlappingIndexSets(const std::string& what) : std::invalid_argument(what) {}
};

struct InfeasibleSize : std::invalid_argument {
    explicit InfeasibleSize(const std::string& what) : std::invalid_argument(what) {}
};

struct WindowMismatch : std::invalid_argument {
    explicit WindowMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidRadii : std::invalid_argument {
    explicit InvalidRadii(const std::string& what) : std::invalid_argument(what) {}
};

struct ConfigParseError : std::runtime_error {
    ConfigParseError(const std::string& what, int line, int col)
        : std::runtime_error(what + " (line " + std::to_string(line) + ", col " +
                             std::to_string(col) + ")"),
          line(line), col(col) {}
    int line;
    int col;
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace humps
