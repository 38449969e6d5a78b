#pragma once

#include <utility>

#include "blockfade/channel.hpp"
#include "blockfade/quadrature.hpp"
#include "blockfade/specfun.hpp"

namespace blockfade {

// Solver state reported alongside the duality upper bound.
struct UpperBoundDiagnostics {
    double lambda_star = 0.0;   // optimal multiplier; always > 1/(T(1+rho))
    double p_star = 0.0;        // optimizing input power ||x||^2
    double c1 = 0.0;            // additive constant of the dual objective
    double inner_value = 0.0;   // optimized inner objective, nats
    bool inner_multimodal = false;  // coarse grid saw more than one local max
    bool hit_power_cap = false;     // p_star landed on the search cap
};

/// Capacity lower bound of the isotropic unitary input, nats per channel use.
/// The closed part is evaluated directly; the cross-entropy integral by
/// adaptive quadrature on a truncated range whose discarded tail is kept
/// below quad.truncation_tail.
double lower_bound_L(const ChannelParams& params, const QuadratureSpec& quad);

/// Duality upper bound on capacity, nats per channel use, via the nested
/// min-max over the multiplier lambda and the input power p. The outer
/// problem is convex in lambda and the inner objective is scanned on a
/// coarse grid before golden-section refinement; multimodality of the inner
/// objective is detected and reported, not assumed away.
std::pair<double, UpperBoundDiagnostics> upper_bound_U(const ChannelParams& params,
                                                       const specfun::Tolerance& tol);

/// The series sum_{k>=0} (T-1) (1+1/p)^{-k} / (k+T-1) appearing in the dual
/// objective. Direct summation with a geometric tail bound for small p; for
/// large p the equivalent integral (T-1) int_0^1 t^{T-2}/(1 - t p/(1+p)) dt
/// is integrated adaptively instead, since the series needs O(p) terms.
double duality_inner_series(int coherence_time, double p, double abs_tol);

/// Inner dual objective at fixed multiplier lambda and input power p.
double duality_inner_objective(const ChannelParams& params, double lambda, double p,
                               double series_abs_tol);

/// Coherent (known-fade) capacity E[log(1 + rho |s|^2)], nats per channel
/// use. Independent of the coherence time.
double coherent_capacity(double rho, const QuadratureSpec& quad);

/// Coherent channel dispersion
///   T Var[log(1 + rho |s|^2)] + 1 - E[1/(1 + rho |s|^2)]^2.
/// Coherent formulas remain valid at T = 1 and rho = 0, so this takes the
/// raw parameters rather than ChannelParams.
double coherent_dispersion(int coherence_time, double rho, const QuadratureSpec& quad);

}  // namespace blockfade
