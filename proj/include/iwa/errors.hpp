#pragma once

#include <stdexcept>
#include <string>

namespace iwa {

// Base class of every error the library throws on purpose.  Callers that
// only care about "it failed" can catch this; the CLI maps the concrete
// types to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Binary operation between values living over different primes.
struct PrimeMismatch : Error {
    using Error::Error;
};

// Inversion (or substitution) requested for an element divisible by p.
struct NotAUnit : Error {
    using Error::Error;
};

// ord_{T=0} requested for a series that vanishes identically at the
// working precision; the true order cannot be certified.
struct IndeterminateOrder : Error {
    using Error::Error;
};

// The requested computation cannot be certified at the available
// coefficient precision (e.g. Weierstrass preparation of a series that is
// zero mod p^N).
struct InsufficientPrecision : Error {
    using Error::Error;
};

// An intermediate or final degree does not fit below the degree cap M.
struct DegreeCapExceeded : Error {
    using Error::Error;
};

// A graded characteristic-element entry (or a cyclotomic characteristic
// element) vanishes at working precision, violating the torsion
// hypothesis of the alternating-product construction.
struct TorsionViolation : Error {
    using Error::Error;
};

// An integer difference fails a required divisibility.
struct NotDivisible : Error {
    using Error::Error;
};

// A corank difference came out negative.
struct NegativeDifference : Error {
    using Error::Error;
};

// Structure deduction ran out of lambda budget.
struct NegativeResidual : Error {
    using Error::Error;
};

// A scenario file lacks the data a calculator needs.
struct MissingData : Error {
    using Error::Error;
};

// Malformed value that violates a documented invariant.
struct InvalidInput : Error {
    using Error::Error;
};

// Unreadable input text (series expressions, TOML, JSON).
struct ParseError : Error {
    using Error::Error;
};

}  // namespace iwa
