#pragma once

#include <stdexcept>
#include <string>

namespace lienard {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parameters outside the domain of an operation (e.g. (mu1,mu2) not in G2).
struct DomainError : Error {
  using Error::Error;
};

/// A precondition stated by an operation's contract was violated.
struct PreconditionError : Error {
  using Error::Error;
};

/// The parameter point lies within tol of two classification rows with
/// different labels; the caller must tighten tol.
struct ToleranceAmbiguityError : Error {
  using Error::Error;
};

/// Requested a focal value at an equilibrium that is not a weak-focus
/// candidate (nonzero trace or nonpositive determinant).
struct NotWeakFocusError : Error {
  using Error::Error;
};

/// b (= delta) lies within 1e-9 of the 2*sqrt(3) threshold.
struct ThresholdAmbiguityError : Error {
  using Error::Error;
};

/// The orbit escaped or timed out before reaching the requested section.
struct NoReturnError : Error {
  using Error::Error;
};

/// A manifold shot escaped or timed out before the target section.
struct NoCrossingError : Error {
  using Error::Error;
};

/// Bisection bracket endpoints have the same mismatch sign.
struct BadBracketError : Error {
  using Error::Error;
};

/// The equator probe hit max_time without a decision.
struct NoConclusionError : Error {
  using Error::Error;
};

/// The Hamiltonian loop quadrature missed its closing section.
struct PeriodNotClosedError : Error {
  using Error::Error;
};

/// The Riccati drift factor changes sign inside the requested grid.
struct SingularDriftError : Error {
  using Error::Error;
};

/// Curve tracing failed at this (a1, delta), so the region is undecidable.
struct UnresolvedRegionError : Error {
  using Error::Error;
};

}  // namespace lienard
