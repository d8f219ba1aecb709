#pragma once

#include <stdexcept>
#include <string>

namespace levypot {

// Every failure the library reports derives from Error so callers can catch
// numerical failures in one place; exit_code() is what the CLI returns.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 3; }
};

#define LEVYPOT_ERROR(Name)                         \
    class Name : public Error {                     \
    public:                                         \
        using Error::Error;                         \
    };

LEVYPOT_ERROR(DomainError)
LEVYPOT_ERROR(NonConvergentQuadrature)
LEVYPOT_ERROR(UnknownFamily)
LEVYPOT_ERROR(ParamOutOfRange)
LEVYPOT_ERROR(ValidationFailed)
LEVYPOT_ERROR(TransienceNotGuaranteed)
LEVYPOT_ERROR(HypothesisViolated)
LEVYPOT_ERROR(UnboundedLevyRatio)
LEVYPOT_ERROR(ZeroDiagonal)
LEVYPOT_ERROR(NegativeWeight)
LEVYPOT_ERROR(DegenerateProfile)
LEVYPOT_ERROR(DivergentIntegral)
LEVYPOT_ERROR(CutoffTooSmall)
LEVYPOT_ERROR(IoError)
LEVYPOT_ERROR(NoWitnessFound)

#undef LEVYPOT_ERROR

// A computed lower bound exceeded the matching upper bound.
class OrderingViolated : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

class ConfigParseError : public Error {
public:
    ConfigParseError(const std::string& msg, int line, int column)
        : Error("config:" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

} // namespace levypot
