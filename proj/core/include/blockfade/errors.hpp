#pragma once

#include <stdexcept>
#include <string>

namespace blockfade {

// Thrown when an iterative numerical procedure (quadrature, series,
// optimizer, root finder) fails to reach its tolerance within its budget.
// The message carries the diagnostics of the failing computation.
class NumericsError : public std::runtime_error {
  public:
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

// Raised by Monte Carlo searches whose statistical resolution is too coarse
// for the requested target (e.g. the error-probability bisection when the
// standard error at the boundary exceeds epsilon/10).
class StatisticalResolutionError : public NumericsError {
  public:
    explicit StatisticalResolutionError(const std::string& what) : NumericsError(what) {}
};

}  // namespace blockfade
