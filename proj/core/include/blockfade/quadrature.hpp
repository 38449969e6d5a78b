#pragma once

#include <functional>

namespace blockfade {

// Budget for the adaptive quadrature driving the capacity-bound integrals.
// truncation_tail bounds the integral mass a caller may discard when it maps
// a semi-infinite integral onto a finite interval.
struct QuadratureSpec {
    double rel_tol = 1e-10;
    double truncation_tail = 1e-12;
    int max_subdivisions = 4000;

    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    int subdivisions = 0;
};

// Globally adaptive Gauss-Kronrod 7-15 on [a, b]: the segment with the
// largest error estimate is split until the summed error drops below
// max(abs_tol, rel_tol * |integral|). Throws NumericsError if the
// subdivision budget runs out first.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, double abs_tol, int max_subdivisions);

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadratureSpec& spec);

}  // namespace blockfade
