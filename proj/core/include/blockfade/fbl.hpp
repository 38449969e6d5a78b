#pragma once

#include <cstdint>

#include "blockfade/asymptotic.hpp"
#include "blockfade/channel.hpp"
#include "blockfade/mc.hpp"

namespace blockfade {

// One finite-blocklength operating point: codewords of n = blocks * T channel
// uses spanning `blocks` independent fades, decoded with block error
// probability at most epsilon.
struct FblSpec {
    std::int64_t n;
    std::int64_t blocks;
    double epsilon;
    ChannelParams params;

    FblSpec(std::int64_t n_, std::int64_t blocks_, double epsilon_, ChannelParams params_);
};

// Outcome of the dependence-testing rate search.
struct DtSearchResult {
    double log_m = 0.0;          // natural log of the codebook size
    double rate = 0.0;           // log_m / n, nats per channel use
    double epsilon_at_m = 0.0;   // empirical error bound at the returned log_m
    double log_m_std_error = 0.0;  // delta-method uncertainty of log_m
    McEstimate mc;               // provenance of the boundary epsilon estimate
};

/// Converse rate from Fano's inequality with a capacity upper bound plugged
/// in: (capacity_ub + H(epsilon)/n) / (1 - epsilon), nats per channel use.
/// epsilon = 0 is accepted as the degenerate boundary and returns capacity_ub.
double fano_upper(double capacity_ub, std::int64_t n, double epsilon);

/// Dependence-testing error bound at codebook size exp(log_m), evaluated on a
/// fixed sample set: the empirical mean of min(1, exp(tau - i)) with
/// tau = log((M-1)/2). The threshold-exceedance term of the bound is folded
/// into the same conditional-measure expectation through the change of
/// measure exp(-i), which is exact because the densities' ratio is the
/// sampled information density itself. Nondecreasing in log_m pointwise.
McEstimate dt_epsilon(const InfoDensitySamples& samples, double log_m);

/// Largest achievable log codebook size whose dependence-testing error bound
/// stays within spec.epsilon, found by bisection (resolution 1e-6 in log M)
/// over one shared sample set. The set is fully determined by (seed, chunk),
/// so callers can re-derive it with sample_info_densities. Throws
/// StatisticalResolutionError when the empirical standard error at the
/// boundary exceeds epsilon / 10.
DtSearchResult dt_rate(const FblSpec& spec, std::int64_t n_samples, std::uint64_t seed,
                       std::int64_t chunk = 1 << 15, int workers = 0);

/// Monte Carlo estimate of the noncoherent dispersion proxy
/// Var[i(x_bar; y)] / T from single-block information densities.
/// mean carries the estimate; std_error its fourth-moment based uncertainty.
McEstimate vbar_estimate(const ChannelParams& params, std::int64_t n_samples, std::uint64_t seed,
                         std::int64_t chunk = 1 << 15, int workers = 0);

/// Normal approximation of the coherent (known-fade) finite-blocklength rate:
/// C_coh - sqrt(V_coh / n) Qinv(epsilon).
double normal_approx_coh(const ChannelParams& params, std::int64_t n, double epsilon,
                         const QuadratureSpec& quad = {});

/// Normal approximation of the dependence-testing rate:
/// L - sqrt(vbar / n) Qinv(epsilon), with vbar estimated at the same params.
double normal_approx_noncoh(const ChannelParams& params, std::int64_t n, double epsilon,
                            const McEstimate& vbar, const QuadratureSpec& quad = {});

}  // namespace blockfade
