#ifndef QSS_ERRORS_HPP
#define QSS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qss {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DivByZero : Error {
    DivByZero() : Error("division by zero in GF(p)") {}
};

struct DuplicateAbscissa : Error {
    DuplicateAbscissa() : Error("interpolation points share an x coordinate") {}
};

struct SingularMatrix : Error {
    SingularMatrix() : Error("matrix is singular over GF(p)") {}
};

struct TooManyErasures : Error {
    TooManyErasures() : Error("erasure set exceeds what the code can handle") {}
};

struct UnsupportedGate : Error {
    UnsupportedGate(const std::string& backend, const std::string& gate)
        : Error("backend '" + backend + "' cannot apply gate " + gate) {}
};

struct InsufficientShares : Error {
    InsufficientShares() : Error("not enough clean positions for interpolation") {}
};

struct RecoveryFailed : Error {
    RecoveryFailed() : Error("fewer usable branches than the degree requires") {}
};

// Raised when an adversary callback touches state it does not own, or when an
// internal consistency check that should be unreachable fires.  These are
// harness assertions, not protocol events.
struct ContractViolation : Error {
    explicit ContractViolation(const std::string& what) : Error(what) {}
};

}  // namespace qss

#endif
