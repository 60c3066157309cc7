#ifndef HERMITEGF_ERRORS_HPP
#define HERMITEGF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hermitegf {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

class SingularVandermonde : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class CapacityExceeded : public Error {
public:
    using Error::Error;
};

class DegenerateDiagonal : public Error {
public:
    using Error::Error;
};

class ExponentOverflow : public Error {
public:
    using Error::Error;
};

class RankDeficientC : public Error {
public:
    using Error::Error;
};

class InsufficientBasis : public Error {
public:
    using Error::Error;
};

class CriterionNotMet : public Error {
public:
    using Error::Error;
};

class DimensionTooLarge : public Error {
public:
    using Error::Error;
};

class OutOfDomain : public Error {
public:
    using Error::Error;
};

class RejectionStalled : public Error {
public:
    using Error::Error;
};

class UnknownFunction : public Error {
public:
    using Error::Error;
};

class DivisionByZero : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace hermitegf

#endif
