#pragma once

#include <stdexcept>
#include <string>

namespace causalgen {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Graph construction
struct CycleError : Error {
    using Error::Error;
};
struct IndexError : Error {
    using Error::Error;
};

// Data ingestion
struct CsvFormatError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct DegenerateColumnError : Error {
    using Error::Error;
};

// Statistical machinery
struct SampleTooSmallError : Error {
    using Error::Error;
};
struct DegenerateInputError : Error {
    using Error::Error;
};
struct SingularKernelError : Error {
    using Error::Error;
};
struct EnumerationLimitError : Error {
    using Error::Error;
};
struct FitFailureError : Error {
    using Error::Error;
};

// Shape / compatibility
struct ShapeError : Error {
    using Error::Error;
};
struct NodeCountMismatchError : Error {
    using Error::Error;
};
struct TooFewReferenceRowsError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace causalgen
