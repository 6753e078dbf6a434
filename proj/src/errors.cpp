#include "shotkit/errors.hpp"

namespace shotkit {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::BadMagic: return "BadMagic";
        case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
        case ErrorCode::UnsupportedDtype: return "UnsupportedDtype";
        case ErrorCode::TruncatedPayload: return "TruncatedPayload";
        case ErrorCode::TrailingData: return "TrailingData";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
        case ErrorCode::NonMonotonic: return "NonMonotonic";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NegativeTime: return "NegativeTime";
        case ErrorCode::InvalidK: return "InvalidK";
        case ErrorCode::InvalidRho: return "InvalidRho";
        case ErrorCode::InvalidL: return "InvalidL";
        case ErrorCode::InvalidN: return "InvalidN";
        case ErrorCode::InvalidTau: return "InvalidTau";
        case ErrorCode::InconsistentInputs: return "InconsistentInputs";
        case ErrorCode::EmptyVisual: return "EmptyVisual";
        case ErrorCode::EmptyQuery: return "EmptyQuery";
        case ErrorCode::InvalidText: return "InvalidText";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::Unrecoverable: return "Unrecoverable";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::MissingPredictions: return "MissingPredictions";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::BadManifest: return "BadManifest";
        case ErrorCode::BadConfig: return "BadConfig";
    }
    return "UnknownError";
}

}  // namespace shotkit
