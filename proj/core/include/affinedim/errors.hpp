#pragma once

#include <stdexcept>
#include <string>

namespace affinedim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Singular gap below tolerance; the requested SVD subspace is ill-defined.
struct GapTooSmall : Error {
    using Error::Error;
};

struct DimMismatch : Error {
    using Error::Error;
};

// An enumeration grew past its configured cap.
struct BudgetExceeded : Error {
    using Error::Error;
};

struct EmptyCell : Error {
    using Error::Error;
};

struct WindowTooSmall : Error {
    using Error::Error;
};

struct SpecParseError : Error {
    using Error::Error;
};

struct InvariantViolation : Error {
    using Error::Error;
};

}  // namespace affinedim
