#pragma once

#include <stdexcept>
#include <string>

namespace conelag {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- geometry
struct DimensionMismatch : Error { using Error::Error; };
struct NoBase : Error { using Error::Error; };
struct NotQuasiInterior : Error { using Error::Error; };
struct EpsilonOutOfRange : Error { using Error::Error; };
struct EpsilonTooLarge : Error { using Error::Error; };
struct SeparationViolated : Error { using Error::Error; };
struct EmptySet : Error { using Error::Error; };

// -- set-valued maps
struct RegularityViolated : Error { using Error::Error; };
struct AnchorMissing : Error { using Error::Error; };

// -- processes and multipliers
struct Unbounded : Error { using Error::Error; };
struct NotSublinear : Error { using Error::Error; };
struct NotPositive : Error { using Error::Error; };
struct UnboundedBase : Error { using Error::Error; };
struct NondegeneracyViolated : Error { using Error::Error; };
struct NoBoundedBase : Error { using Error::Error; };
struct CertificateFailed : Error { using Error::Error; };

// -- penalty
struct Infeasible : Error { using Error::Error; };
struct GapExceedsTolerance : Error { using Error::Error; };

// -- equilibrium
struct ConsistencyViolated : Error { using Error::Error; };

// -- problem files / CLI
struct ParseError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct UnknownCommand : Error { using Error::Error; };

} // namespace conelag
