#pragma once

#include <stdexcept>
#include <string>

namespace lvnf {

// Error taxonomy shared by the library and the command line tool.
//
//   Validation - the input object violates a structural precondition
//                (bad dimensions, zero exponent row, singular transform, ...)
//   Domain     - the math is undefined at the requested point
//                (fractional power of a non-positive value, off-manifold state, ...)
//   Io         - file or serialization failure
//   Internal   - invariant broken inside the library (a bug, not a user error)
class Error : public std::runtime_error {
public:
    enum class Kind { Validation, Domain, Io, Internal };

    Error(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message)
        : Error(Kind::Validation, message) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& message)
        : Error(Kind::Domain, message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message)
        : Error(Kind::Io, message) {}
};

class InternalError : public Error {
public:
    explicit InternalError(const std::string& message)
        : Error(Kind::Internal, message) {}
};

} // namespace lvnf
