#include "blockfade/fbl.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "blockfade/errors.hpp"
#include "blockfade/specfun.hpp"

namespace blockfade {

namespace {

// tau = log((M - 1) / 2) from log M, stable for the whole range: at
// log_m = 0 this is -inf (M = 1), for large log_m it approaches log_m - log 2
// without ever forming M itself.
double dt_threshold(double log_m) {
    return log_m + std::log1p(-std::exp(-log_m)) - M_LN2;
}

struct DtPass {
    MomentAccumulator stat;   // min(1, e^{tau - i})
    double slope_mean = 0.0;  // mean of e^{tau - i} 1{i > tau} = d eps / d tau
};

DtPass dt_pass(const InfoDensitySamples& samples, double log_m) {
    if (!(log_m >= 0.0)) throw std::domain_error("dt_epsilon: log_m must be nonnegative");
    const double tau = dt_threshold(log_m);
    DtPass out;
    double slope_sum = 0.0;
    for (const double i : samples.values) {
        const double excess = tau - i;
        if (excess >= 0.0) {
            out.stat.add(1.0);
        } else {
            const double v = std::exp(excess);
            out.stat.add(v);
            slope_sum += v;
        }
    }
    out.slope_mean = slope_sum / static_cast<double>(samples.values.size());
    return out;
}

}  // namespace

FblSpec::FblSpec(std::int64_t n_, std::int64_t blocks_, double epsilon_, ChannelParams params_)
    : n(n_), blocks(blocks_), epsilon(epsilon_), params(params_) {
    if (blocks < 1) throw std::domain_error("FblSpec: blocks must be >= 1");
    if (n != blocks * params.coherence_time)
        throw std::domain_error("FblSpec: n must equal blocks * coherence_time exactly");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("FblSpec: epsilon must lie in (0, 1)");
}

double fano_upper(double capacity_ub, std::int64_t n, double epsilon) {
    if (n < 1) throw std::domain_error("fano_upper: n must be >= 1");
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw std::domain_error("fano_upper: epsilon must lie in [0, 1)");
    if (epsilon == 0.0) return capacity_ub;
    return (capacity_ub + specfun::binary_entropy_nats(epsilon) / static_cast<double>(n)) /
           (1.0 - epsilon);
}

McEstimate dt_epsilon(const InfoDensitySamples& samples, double log_m) {
    if (samples.values.empty()) throw std::domain_error("dt_epsilon: empty sample set");
    return dt_pass(samples, log_m).stat.to_estimate(samples.seed);
}

DtSearchResult dt_rate(const FblSpec& spec, std::int64_t n_samples, std::uint64_t seed,
                       std::int64_t chunk, int workers) {
    if (n_samples < 2) throw std::domain_error("dt_rate: n_samples must be >= 2");
    const InfoDensitySamples samples =
        sample_info_densities(spec.params, spec.blocks, n_samples, seed, chunk, false, workers);

    const auto eps_at = [&](double log_m) { return dt_pass(samples, log_m).stat.mean(); };

    // Bracket: eps(0) = 0 <= epsilon; double until the bound is violated.
    double lo = 0.0;
    double hi = 1.0;
    while (eps_at(hi) <= spec.epsilon) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12)
            throw NumericsError("dt_rate: error bound never exceeded epsilon; bracket ran away");
    }
    constexpr double kResolution = 1e-6;
    while (hi - lo > kResolution) {
        const double mid = 0.5 * (lo + hi);
        if (eps_at(mid) <= spec.epsilon) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    const DtPass boundary = dt_pass(samples, lo);
    const McEstimate est = boundary.stat.to_estimate(seed);
    if (est.std_error > spec.epsilon / 10.0) {
        throw StatisticalResolutionError(
            "dt_rate: standard error " + std::to_string(est.std_error) + " at the boundary " +
            "exceeds epsilon/10 = " + std::to_string(spec.epsilon / 10.0) +
            "; increase n_samples (currently " + std::to_string(n_samples) + ")");
    }

    DtSearchResult result;
    result.log_m = lo;
    result.rate = lo / static_cast<double>(spec.n);
    result.epsilon_at_m = est.mean;
    result.mc = est;
    // d eps / d log_m = slope_mean * d tau / d log_m with d tau / d log_m =
    // 1 / (1 - 1/M); at the solution M is astronomically large, so the factor
    // is 1 to double precision.
    result.log_m_std_error =
        boundary.slope_mean > 0.0 ? est.std_error / boundary.slope_mean : 0.0;
    return result;
}

McEstimate vbar_estimate(const ChannelParams& params, std::int64_t n_samples, std::uint64_t seed,
                         std::int64_t chunk, int workers) {
    if (n_samples < 2) throw std::domain_error("vbar_estimate: n_samples must be >= 2");
    const InfoDensityKernel kernel(params);
    const MomentAccumulator acc = accumulate(
        [&kernel](RngStream& rng) { return kernel.sample_density(rng); }, n_samples, seed, chunk,
        workers);

    const double t = static_cast<double>(params.coherence_time);
    const double var = acc.sample_variance();
    // Var[sample variance] ~ (mu4 - sigma^4) / n, fourth-moment delta method.
    const double m2 = acc.central_moment2();
    const double estimator_var = std::max(0.0, acc.central_moment4() - m2 * m2) / (t * t);
    McEstimate est;
    est.mean = var / t;
    est.variance = estimator_var;
    est.std_error = std::sqrt(estimator_var / static_cast<double>(n_samples));
    est.n_samples = n_samples;
    est.seed = seed;
    return est;
}

double normal_approx_coh(const ChannelParams& params, std::int64_t n, double epsilon,
                         const QuadratureSpec& quad) {
    if (n < 1) throw std::domain_error("normal_approx_coh: n must be >= 1");
    const double capacity = coherent_capacity(params.snr, quad);
    const double dispersion = coherent_dispersion(params.coherence_time, params.snr, quad);
    return capacity - std::sqrt(dispersion / static_cast<double>(n)) * specfun::q_inv(epsilon);
}

double normal_approx_noncoh(const ChannelParams& params, std::int64_t n, double epsilon,
                            const McEstimate& vbar, const QuadratureSpec& quad) {
    if (n < 1) throw std::domain_error("normal_approx_noncoh: n must be >= 1");
    if (!(vbar.mean >= 0.0)) throw std::domain_error("normal_approx_noncoh: vbar must be >= 0");
    const double lower = lower_bound_L(params, quad);
    return lower - std::sqrt(vbar.mean / static_cast<double>(n)) * specfun::q_inv(epsilon);
}

}  // namespace blockfade
