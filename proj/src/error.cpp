#include "calex/error.hpp"

namespace calex {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::MissingColumn: return "MissingColumn";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::SchemaViolation: return "SchemaViolation";
        case ErrorKind::EmptyFile: return "EmptyFile";
        case ErrorKind::BadFraction: return "BadFraction";
        case ErrorKind::BadCount: return "BadCount";
        case ErrorKind::EmptyTable: return "EmptyTable";
        case ErrorKind::BadSpec: return "BadSpec";
        case ErrorKind::DegenerateTarget: return "DegenerateTarget";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::WidthMismatch: return "WidthMismatch";
        case ErrorKind::TooFewPerClass: return "TooFewPerClass";
        case ErrorKind::OneClassOnly: return "OneClassOnly";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::TooFewEstimates: return "TooFewEstimates";
        case ErrorKind::Empty: return "Empty";
        case ErrorKind::Degenerate: return "Degenerate";
        case ErrorKind::TooFewPoints: return "TooFewPoints";
        case ErrorKind::BadSpan: return "BadSpan";
        case ErrorKind::TooFewBins: return "TooFewBins";
        case ErrorKind::EmptyBackground: return "EmptyBackground";
        case ErrorKind::UnknownFeature: return "UnknownFeature";
        case ErrorKind::TooManyFeatures: return "TooManyFeatures";
        case ErrorKind::BinaryFeature: return "BinaryFeature";
        case ErrorKind::NotPermutation: return "NotPermutation";
        case ErrorKind::BadK: return "BadK";
        case ErrorKind::FeatureSetMismatch: return "FeatureSetMismatch";
        case ErrorKind::UnknownInstance: return "UnknownInstance";
        case ErrorKind::MissingArtifacts: return "MissingArtifacts";
        case ErrorKind::MissingFile: return "MissingFile";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::ProvenanceMismatch: return "ProvenanceMismatch";
    }
    return "Unknown";
}

ErrorCategory error_category(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::BadFraction:
        case ErrorKind::BadCount:
        case ErrorKind::BadSpec:
        case ErrorKind::BadSpan:
        case ErrorKind::BadK:
        case ErrorKind::ConfigError:
        case ErrorKind::UnknownInstance:
        case ErrorKind::UnknownFeature:
            return ErrorCategory::config;
        case ErrorKind::MissingColumn:
        case ErrorKind::ParseError:
        case ErrorKind::SchemaViolation:
        case ErrorKind::EmptyFile:
        case ErrorKind::EmptyTable:
        case ErrorKind::MissingFile:
        case ErrorKind::MissingArtifacts:
        case ErrorKind::ProvenanceMismatch:
        case ErrorKind::WidthMismatch:
        case ErrorKind::LengthMismatch:
        case ErrorKind::Empty:
        case ErrorKind::EmptyBackground:
        case ErrorKind::FeatureSetMismatch:
        case ErrorKind::NotPermutation:
            return ErrorCategory::data;
        default:
            return ErrorCategory::numeric;
    }
}

}  // namespace calex
