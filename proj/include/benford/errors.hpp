#ifndef BENFORD_ERRORS_HPP
#define BENFORD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace benford {

/// Coarse failure class, used by the CLI to pick its exit code:
/// validation -> 1, data -> 2, internal -> 3.
enum class ErrorKind { validation, data, internal };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Argument outside an operation's domain (bad digit position, alpha >= 1, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(ErrorKind::validation, msg) {}
};

/// Input value fails a declared range/shape constraint (EIU of 150, duplicate id).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(ErrorKind::validation, msg) {}
};

/// A statistic was requested on an empty sample; carries the (zero) usable count.
class UndefinedStatisticError : public Error {
public:
    explicit UndefinedStatisticError(const std::string& msg, long long n = 0)
        : Error(ErrorKind::data, msg), n_(n) {}
    long long n() const noexcept { return n_; }

private:
    long long n_;
};

/// Malformed input file; message pins the location (row/column) when known.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(ErrorKind::data, msg) {}
};

/// Bundled fixture does not match its recorded checksum.
class IntegrityError : public Error {
public:
    explicit IntegrityError(const std::string& msg) : Error(ErrorKind::data, msg) {}
};

/// No growth cutoff derivable (e.g. all-zero confirmed series).
class NoCutoffError : public Error {
public:
    explicit NoCutoffError(const std::string& msg) : Error(ErrorKind::data, msg) {}
};

/// Rank-deficient regression design; message names the collinear columns.
class SingularityError : public Error {
public:
    explicit SingularityError(const std::string& msg) : Error(ErrorKind::data, msg) {}
};

/// Too few complete rows for the requested fit or contrast.
class SampleSizeError : public Error {
public:
    explicit SampleSizeError(const std::string& msg) : Error(ErrorKind::data, msg) {}
};

/// Logistic response perfectly separated by the design.
class SeparationError : public Error {
public:
    explicit SeparationError(const std::string& msg) : Error(ErrorKind::data, msg) {}
};

/// Degenerate input with no usable variation (constant response, constant quartile key).
class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& msg) : Error(ErrorKind::data, msg) {}
};

} // namespace benford

#endif // BENFORD_ERRORS_HPP
