#pragma once

#include <stdexcept>
#include <string>

namespace evotse {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroVectorError : Error {
    ZeroVectorError() : Error("vector norm below 1e-12, cannot normalize") {}
};

struct DimensionMismatchError : Error {
    using Error::Error;
};

struct AttributeMismatchError : Error {
    using Error::Error;
};

struct EmptyCandidatesError : Error {
    EmptyCandidatesError() : Error("candidate set is empty") {}
};

struct InvalidCapacityError : Error {
    using Error::Error;
};

struct BankTooSmallError : Error {
    using Error::Error;
};

struct EmptyBankError : Error {
    EmptyBankError() : Error("memory bank is empty") {}
};

struct SampleRateMismatchError : Error {
    using Error::Error;
};

struct LengthMismatchError : Error {
    using Error::Error;
};

struct ZeroReferenceError : Error {
    ZeroReferenceError() : Error("reference signal is all-zero") {}
};

struct EmptyListError : Error {
    EmptyListError() : Error("empty value list") {}
};

struct ShapeMismatchError : Error {
    using Error::Error;
};

struct MissingTruthError : Error {
    MissingTruthError() : Error("segment carries no hidden truth; use a file-backed embedder") {}
};

struct AlignmentError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct MalformedWavError : IoError {
    using IoError::IoError;
};

struct BadMagicError : IoError {
    using IoError::IoError;
};

struct TruncatedFileError : IoError {
    using IoError::IoError;
};

struct DimMismatchError : IoError {
    using IoError::IoError;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace evotse
