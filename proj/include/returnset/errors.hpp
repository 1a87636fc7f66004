#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace returnset {

// Base of every error the library throws on its own behalf.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutOfRange : Error {
  using Error::Error;
};

// windowed_density
struct EmptySweep : Error {
  EmptySweep() : Error("no interval lengths to sweep") {}
};
struct LengthExceedsHorizon : Error {
  using Error::Error;
};

// witness extraction
struct WindowTooShort : Error {
  using Error::Error;
};
struct NoPairedBlock : Error {
  NoPairedBlock() : Error("no block contains two members") {}
};
struct InvalidN : Error {
  using Error::Error;
};

// generators
struct NonIntegralValue : Error {
  using Error::Error;
};

// finite-space operations
struct APNotContained : Error {
  using Error::Error;
};
struct OrbitLeavesDomain : Error {
  using Error::Error;
};
struct NoBackwardOrbit : Error {
  using Error::Error;
};

// algebraic operations
struct ZeroDivide : Error {
  ZeroDivide() : Error("division by zero") {}
};
struct DomainError : Error {
  std::uint64_t step;
  explicit DomainError(std::uint64_t n)
      : Error("denominator vanished at orbit step " + std::to_string(n)), step(n) {}
};
struct PreperiodicPoint : Error {
  using Error::Error;
};
struct DegreeOverflow : Error {
  using Error::Error;
};
// Exact coordinates outgrew the configured size cap before the horizon.
struct OrbitOverflow : Error {
  using Error::Error;
};
// A membership below the horizon could be neither certified zero nor nonzero.
struct UndecidedMembership : Error {
  using Error::Error;
};

// input handling
struct ParseError : Error {
  using Error::Error;
};

}  // namespace returnset
