#pragma once

#include <stdexcept>
#include <string>

namespace mhf {

enum class ErrorCode {
    invalid_argument,
    dimension,
    grade,
    unsupported_triad,
    parse,
    io,
    lattice_mismatch,
    distortion_undefined,
    invalid_exponent,
};

/// Base for all library errors; carries a stable code for the C boundary.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& what) : Error(ErrorCode::dimension, what) {}
};

struct GradeError : Error {
    explicit GradeError(const std::string& what) : Error(ErrorCode::grade, what) {}
};

struct UnsupportedTriadError : Error {
    explicit UnsupportedTriadError(const std::string& what) : Error(ErrorCode::unsupported_triad, what) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(ErrorCode::parse, what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

struct LatticeMismatchError : Error {
    explicit LatticeMismatchError(const std::string& what) : Error(ErrorCode::lattice_mismatch, what) {}
};

struct DistortionUndefined : Error {
    explicit DistortionUndefined(const std::string& what) : Error(ErrorCode::distortion_undefined, what) {}
};

struct InvalidExponent : Error {
    explicit InvalidExponent(const std::string& what) : Error(ErrorCode::invalid_exponent, what) {}
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

} // namespace mhf
