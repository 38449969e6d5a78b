#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "blockfade/rng.hpp"

namespace blockfade {

// Static description of the noncoherent Rayleigh block-fading channel:
// the fade stays constant for `coherence_time` channel uses and redraws
// independently afterwards; `snr` is the linear receive SNR.
//
// coherence_time >= 2 is required throughout: the induced output density and
// the duality bound involve the regularized incomplete gamma of shape T - 1
// and digamma at T - 1, neither of which exists at T = 1.
struct ChannelParams {
    int coherence_time;
    double snr;

    ChannelParams(int coherence_time_, double snr_);

    double t_rho() const { return static_cast<double>(coherence_time) * snr; }
};

// Everything the per-block information density needs to know about a channel
// output y: the squared magnitude of the component aligned with the
// representative input direction, and the summed squared magnitudes of the
// T - 1 orthogonal components. Sampling these two scalars instead of a
// T-dimensional complex vector makes a block O(1) instead of O(T).
struct OutputSufficientStats {
    double y1_sq = 0.0;
    double rest_sq = 0.0;

    double norm_sq() const { return y1_sq + rest_sq; }
};

// A batch of per-codeword information densities with its sampling provenance.
// When per_block is retained, values[j] is the plain left-to-right sum of
// per_block[j], bit for bit.
struct InfoDensitySamples {
    std::vector<double> values;
    std::optional<std::vector<std::vector<double>>> per_block;
    std::uint64_t seed = 0;
    ChannelParams params;
    std::int64_t blocks = 0;
};

/// log p(y | x) of one coherence block for an input along the representative
/// direction with squared norm x_norm_sq:
///   -T log pi - log(1 + ||x||^2) - ||y||^2 + |y^H x|^2 / (1 + ||x||^2).
double conditional_logpdf(const ChannelParams& params, double x_norm_sq,
                          const OutputSufficientStats& stats);

/// log density of the isotropic auxiliary output law whose squared norm is
/// Gamma(1, T(1+rho)) distributed. Requires y_norm_sq > 0.
double output_logpdf_gamma(const ChannelParams& params, double y_norm_sq);

/// log density of the channel output induced by the isotropic unitary input
/// (norm fixed at sqrt(T rho)). Requires y_norm_sq > 0; evaluated in the log
/// domain so large T rho ||y||^2 cannot overflow.
double output_logpdf_induced(const ChannelParams& params, double y_norm_sq);

/// Draws the sufficient statistics of one channel output under the
/// representative input: y1_sq ~ (1 + T rho) Exp(1), rest_sq ~ Gamma(T-1, 1),
/// independent.
OutputSufficientStats sample_output_stats(const ChannelParams& params, RngStream& rng);

/// Per-block information density i(x_bar; y), the log ratio of
/// conditional_logpdf (at the representative input) to output_logpdf_induced.
double info_density_block(const ChannelParams& params, const OutputSufficientStats& stats);

/// Information density of a codeword spanning `blocks` independent fades:
/// the sum of that many independent per-block densities.
double sample_codeword_density(const ChannelParams& params, std::int64_t blocks, RngStream& rng);

// Precomputed constants for info-density sampling in hot loops.
class InfoDensityKernel {
  public:
    explicit InfoDensityKernel(const ChannelParams& params);

    OutputSufficientStats sample(RngStream& rng) const {
        return {y1_scale_ * rng.exponential(), rng.gamma_int(shape_)};
    }

    double density(const OutputSufficientStats& stats) const;

    double sample_density(RngStream& rng) const { return density(sample(rng)); }

  private:
    int shape_;         // T - 1
    double kappa_;      // T rho / (1 + T rho)
    double y1_scale_;   // 1 + T rho
    double tm1_;        // T - 1 as double
    double lgamma_t_;   // log Gamma(T)
    double lgamma_tm1_; // log Gamma(T - 1)
};

/// Batch generator for dependence-testing evaluation: n_samples codeword
/// densities over `blocks` fades each, chunked so that results depend only on
/// (seed, chunk) and not on the worker count.
InfoDensitySamples sample_info_densities(const ChannelParams& params, std::int64_t blocks,
                                         std::int64_t n_samples, std::uint64_t seed,
                                         std::int64_t chunk = 1 << 15, bool keep_per_block = false,
                                         int workers = 0);

}  // namespace blockfade
