#include "blockfade/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "blockfade/mc.hpp"
#include "blockfade/specfun.hpp"

namespace blockfade {

namespace {
constexpr double kLogPi = 1.1447298858494002;
}

ChannelParams::ChannelParams(int coherence_time_, double snr_)
    : coherence_time(coherence_time_), snr(snr_) {
    if (coherence_time < 2)
        throw std::domain_error("ChannelParams: coherence time must be at least 2");
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw std::domain_error("ChannelParams: snr must be positive and finite");
}

double conditional_logpdf(const ChannelParams& params, double x_norm_sq,
                          const OutputSufficientStats& stats) {
    if (!(x_norm_sq >= 0.0))
        throw std::domain_error("conditional_logpdf: x_norm_sq must be nonnegative");
    if (!(stats.y1_sq >= 0.0) || !(stats.rest_sq >= 0.0))
        throw std::domain_error("conditional_logpdf: output statistics must be nonnegative");
    const double t = static_cast<double>(params.coherence_time);
    // |y^H x|^2 = x_norm_sq * y1_sq for inputs along the representative direction.
    return -t * kLogPi - std::log1p(x_norm_sq) - stats.norm_sq() +
           x_norm_sq * stats.y1_sq / (1.0 + x_norm_sq);
}

double output_logpdf_gamma(const ChannelParams& params, double y_norm_sq) {
    if (!(y_norm_sq > 0.0))
        throw std::domain_error("output_logpdf_gamma: density is singular at zero output norm");
    const double t = static_cast<double>(params.coherence_time);
    const double scale = t * (params.snr + 1.0);
    return specfun::log_gamma(t) + (1.0 - t) * std::log(y_norm_sq) - t * kLogPi -
           std::log(scale) - y_norm_sq / scale;
}

double output_logpdf_induced(const ChannelParams& params, double y_norm_sq) {
    if (!(y_norm_sq > 0.0))
        throw std::domain_error("output_logpdf_induced: density is singular at zero output norm");
    const double t = static_cast<double>(params.coherence_time);
    const double a = params.t_rho();
    const double kappa = a / (1.0 + a);
    return -y_norm_sq / (1.0 + a) + (1.0 - t) * std::log(y_norm_sq) + specfun::log_gamma(t) -
           t * kLogPi - std::log1p(a) + (t - 1.0) * std::log1p(1.0 / a) +
           specfun::log_reg_inc_gamma(t - 1.0, kappa * y_norm_sq);
}

OutputSufficientStats sample_output_stats(const ChannelParams& params, RngStream& rng) {
    return InfoDensityKernel(params).sample(rng);
}

InfoDensityKernel::InfoDensityKernel(const ChannelParams& params)
    : shape_(params.coherence_time - 1),
      kappa_(params.t_rho() / (1.0 + params.t_rho())),
      y1_scale_(1.0 + params.t_rho()),
      tm1_(static_cast<double>(params.coherence_time - 1)),
      lgamma_t_(specfun::log_gamma(static_cast<double>(params.coherence_time))),
      lgamma_tm1_(specfun::log_gamma(tm1_)) {}

double InfoDensityKernel::density(const OutputSufficientStats& stats) const {
    const double norm_sq = stats.norm_sq();
    if (!(norm_sq > 0.0))
        throw std::domain_error("info_density_block: zero output norm makes the density singular");
    const double z = kappa_ * norm_sq;
    // The constant log((1+Trho)/Gamma(T)) - log(1+Trho) collapses to
    // -log Gamma(T); the aligned-power and total-power terms collapse to
    // -kappa * rest_sq; (T-1) log(kappa) absorbs the (1+1/(T rho))^(T-1)
    // factor of the induced output density.
    return -lgamma_t_ - kappa_ * stats.rest_sq + tm1_ * std::log(z) -
           specfun::log_reg_inc_gamma_cached(tm1_, z, lgamma_tm1_);
}

double info_density_block(const ChannelParams& params, const OutputSufficientStats& stats) {
    return InfoDensityKernel(params).density(stats);
}

double sample_codeword_density(const ChannelParams& params, std::int64_t blocks, RngStream& rng) {
    if (blocks < 1) throw std::domain_error("sample_codeword_density: blocks must be >= 1");
    const InfoDensityKernel kernel(params);
    double sum = 0.0;
    for (std::int64_t l = 0; l < blocks; ++l) sum += kernel.sample_density(rng);
    return sum;
}

InfoDensitySamples sample_info_densities(const ChannelParams& params, std::int64_t blocks,
                                         std::int64_t n_samples, std::uint64_t seed,
                                         std::int64_t chunk, bool keep_per_block, int workers) {
    if (blocks < 1) throw std::domain_error("sample_info_densities: blocks must be >= 1");
    if (n_samples < 1) throw std::domain_error("sample_info_densities: n_samples must be >= 1");
    if (chunk < 1) throw std::domain_error("sample_info_densities: chunk must be >= 1");

    InfoDensitySamples out{std::vector<double>(static_cast<std::size_t>(n_samples)),
                           std::nullopt, seed, params, blocks};
    if (keep_per_block) {
        out.per_block.emplace(static_cast<std::size_t>(n_samples),
                              std::vector<double>(static_cast<std::size_t>(blocks)));
    }

    const InfoDensityKernel kernel(params);
    const std::int64_t n_chunks = (n_samples + chunk - 1) / chunk;
    detail::for_each_chunk(n_chunks, workers, [&](std::int64_t c) {
        RngStream rng(seed, static_cast<std::uint64_t>(c));
        const std::int64_t lo = c * chunk;
        const std::int64_t hi = std::min(n_samples, lo + chunk);
        for (std::int64_t j = lo; j < hi; ++j) {
            double sum = 0.0;
            if (keep_per_block) {
                auto& row = (*out.per_block)[static_cast<std::size_t>(j)];
                for (std::int64_t l = 0; l < blocks; ++l) {
                    row[static_cast<std::size_t>(l)] = kernel.sample_density(rng);
                    sum += row[static_cast<std::size_t>(l)];
                }
            } else {
                for (std::int64_t l = 0; l < blocks; ++l) sum += kernel.sample_density(rng);
            }
            out.values[static_cast<std::size_t>(j)] = sum;
        }
    });
    return out;
}

}  // namespace blockfade
