#pragma once

#include <stdexcept>
#include <string>

namespace calex {

// Every contract violation in the library throws Error with one of these
// kinds. The CLI maps categories to exit codes; tests match on the kind.
enum class ErrorKind {
    // dataset
    MissingColumn,
    ParseError,
    SchemaViolation,
    EmptyFile,
    BadFraction,
    BadCount,
    EmptyTable,
    BadSpec,
    // linmod
    DegenerateTarget,
    NonFinite,
    WidthMismatch,
    TooFewPerClass,
    // eval
    OneClassOnly,
    LengthMismatch,
    TooFewEstimates,
    Empty,
    // calib
    Degenerate,
    TooFewPoints,
    BadSpan,
    TooFewBins,
    // explain
    EmptyBackground,
    UnknownFeature,
    TooManyFeatures,
    BinaryFeature,
    // diff
    NotPermutation,
    BadK,
    FeatureSetMismatch,
    // cli
    UnknownInstance,
    MissingArtifacts,
    MissingFile,
    ConfigError,
    ProvenanceMismatch,
};

const char* error_kind_name(ErrorKind kind);

// Exit-code categories for the CLI: config=2, data=3, numeric=4.
enum class ErrorCategory { config = 2, data = 3, numeric = 4 };

ErrorCategory error_category(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const { return kind_; }
    const char* kind_name() const { return error_kind_name(kind_); }

private:
    ErrorKind kind_;
};

}  // namespace calex
