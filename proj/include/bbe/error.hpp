#pragma once

#include <stdexcept>
#include <string>

namespace bbe {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Underlying stream or file failure (unreadable input, failed write).
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed bytes: bad magic, bad JSON, inconsistent RLE counts.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Structurally valid input that violates a documented invariant
/// (out-of-range probability, overlapping instance masks, bad config).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Tensor-file parse failure with a machine-checkable reason.
class TensorParseError : public FormatError {
public:
    enum class Code {
        BadMagic,
        BadVersion,
        BadDtype,
        BadShape,
        LengthMismatch,
        NonFinite,
        InvalidValue,
    };

    TensorParseError(Code code, const std::string& what)
        : FormatError(what), code_(code) {}

    Code code() const { return code_; }

private:
    Code code_;
};

}  // namespace bbe
