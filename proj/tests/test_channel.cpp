#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "blockfade/channel.hpp"
#include "blockfade/mc.hpp"
#include "blockfade/quadrature.hpp"
#include "blockfade/specfun.hpp"

using namespace blockfade;

namespace {

// Integral of exp(logpdf(y)) over C^T for densities depending on y only
// through ||y||^2: radial reduction with the complex-sphere surface factor
// pi^T v^{T-1} / Gamma(T).
double radial_normalization(int t, const std::function<double(double)>& logpdf, double v_max) {
    const double log_surface = t * std::log(M_PI) - specfun::log_gamma(t);
    const auto integrand = [&](double v) {
        if (v <= 0.0) return 0.0;
        return std::exp(logpdf(v) + log_surface + (t - 1.0) * std::log(v));
    };
    return integrate_adaptive(integrand, 0.0, v_max, QuadratureSpec{1e-11, 1e-14, 8000}).value;
}

}  // namespace

TEST_CASE("ChannelParams validates its domain") {
    CHECK_THROWS_AS(ChannelParams(1, 1.0), std::domain_error);
    CHECK_THROWS_AS(ChannelParams(2, 0.0), std::domain_error);
    CHECK_THROWS_AS(ChannelParams(2, -1.0), std::domain_error);
    CHECK_NOTHROW(ChannelParams(2, 1e-6));
}

TEST_CASE("conditional_logpdf worked examples") {
    const ChannelParams params(2, 1.0);
    CHECK(conditional_logpdf(params, 0.0, {0.0, 0.0}) ==
          doctest::Approx(-2.0 * std::log(M_PI)).epsilon(1e-14));
    CHECK(conditional_logpdf(params, 1.0, {1.0, 0.0}) ==
          doctest::Approx(-3.4826069522587457).epsilon(1e-14));
}

TEST_CASE("conditional_logpdf agrees with the explicit 2x2 matrix form") {
    // log p(y|x) = -log(pi^2 det(I + x x^H)) - y^H (I + x x^H)^{-1} y for
    // x = (1, 0), evaluated with an explicit inverse.
    using cd = std::complex<double>;
    const cd x[2] = {1.0, 0.0};
    const cd y[2] = {1.0, 0.0};
    const double det = 1.0 + std::norm(x[0]) + std::norm(x[1]);
    cd inv[2][2] = {{1.0 - x[0] * std::conj(x[0]) / det, -x[0] * std::conj(x[1]) / det},
                    {-x[1] * std::conj(x[0]) / det, 1.0 - x[1] * std::conj(x[1]) / det}};
    cd quad_form = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) quad_form += std::conj(y[i]) * inv[i][j] * y[j];
    const double reference = -2.0 * std::log(M_PI) - std::log(det) - quad_form.real();

    const ChannelParams params(2, 1.0);
    CHECK(conditional_logpdf(params, 1.0, {1.0, 0.0}) ==
          doctest::Approx(reference).epsilon(1e-14));
}

TEST_CASE("conditional density integrates to one over the output space") {
    // T = 2: separate radial measures for the aligned component (1 complex
    // dim) and the orthogonal remainder (1 complex dim).
    const ChannelParams params(2, 1.0);
    const double x_norm_sq = 2.0;  // representative input at T rho = 2
    const auto inner = [&](double y1) {
        const auto f = [&](double rest) {
            return std::exp(conditional_logpdf(params, x_norm_sq, {y1, rest}));
        };
        return integrate_adaptive(f, 0.0, 80.0, QuadratureSpec{1e-11, 1e-15, 4000}).value;
    };
    const double total =
        M_PI * M_PI *
        integrate_adaptive(inner, 0.0, 300.0, QuadratureSpec{1e-9, 1e-13, 4000}).value;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("output_logpdf_gamma worked example and normalization") {
    const ChannelParams params(2, 1.0);
    CHECK(output_logpdf_gamma(params, 4.0) ==
          doctest::Approx(-6.0620484939385816).epsilon(1e-14));
    CHECK_THROWS_AS(output_logpdf_gamma(params, 0.0), std::domain_error);

    const double total = radial_normalization(
        2, [&](double v) { return output_logpdf_gamma(params, v); }, 400.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

    // Norm law is Gamma(1, T(1+rho)): mean T(1+rho).
    const auto mean_est = estimate(
        [&](RngStream& rng) { return sample_output_stats(params, rng).norm_sq(); }, 200'000, 17,
        1 << 14);
    CHECK(std::fabs(mean_est.mean - 2.0 * (1.0 + 1.0)) <= 4.0 * mean_est.std_error);
}

TEST_CASE("output_logpdf_induced normalizes and matches its sampled entropy") {
    const ChannelParams params(2, 1.0);
    const double total = radial_normalization(
        2, [&](double v) { return output_logpdf_induced(params, v); }, 400.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

    // E[log q(y)] two ways: radial quadrature of q log q, and sampling y
    // from the channel (the norm law under the representative input is the
    // norm law of the induced output).
    const double log_surface = 2.0 * std::log(M_PI) - specfun::log_gamma(2.0);
    const auto qlogq = [&](double v) {
        if (v <= 0.0) return 0.0;
        const double lq = output_logpdf_induced(params, v);
        return std::exp(lq + log_surface + std::log(v)) * lq;
    };
    const double by_quadrature =
        integrate_adaptive(qlogq, 0.0, 400.0, QuadratureSpec{1e-10, 1e-13, 8000}).value;
    const auto by_sampling = estimate(
        [&](RngStream& rng) {
            return output_logpdf_induced(params, sample_output_stats(params, rng).norm_sq());
        },
        400'000, 23, 1 << 14);
    CHECK(std::fabs(by_sampling.mean - by_quadrature) <= 3.0 * by_sampling.std_error);
}

TEST_CASE("induced-to-noise density ratio is continuous in the output norm") {
    // The ratio grows like exp(kappa v), so continuity is checked through
    // the log-ratio: finite everywhere, increments bounded by the grid step
    // times a slope bound, across the series/continued-fraction switch of
    // the regularized gamma factor.
    const ChannelParams params(2, 1.0);
    const auto log_ratio = [&](double v) {
        const double noise_only = -2.0 * std::log(M_PI) - v;
        return output_logpdf_induced(params, v) - noise_only;
    };
    const double step = 0.005;
    double prev = log_ratio(step);
    for (double v = 2.0 * step; v <= 25.0; v += step) {
        const double cur = log_ratio(v);
        REQUIRE(std::isfinite(cur));
        REQUIRE(std::fabs(cur - prev) <= step * (1.0 + 2.0 / v));
        prev = cur;
    }
}

TEST_CASE("sample_output_stats moments") {
    const ChannelParams params(10, 3.0);
    const auto y1 = estimate(
        [&](RngStream& rng) { return sample_output_stats(params, rng).y1_sq; }, 1'000'000, 29,
        1 << 14);
    CHECK(std::fabs(y1.mean - (1.0 + 30.0)) <= 3.0 * y1.std_error);
    const auto rest = estimate(
        [&](RngStream& rng) { return sample_output_stats(params, rng).rest_sq; }, 1'000'000, 31,
        1 << 14);
    CHECK(std::fabs(rest.mean - 9.0) <= 3.0 * rest.std_error);
    const auto norm = estimate(
        [&](RngStream& rng) { return sample_output_stats(params, rng).norm_sq(); }, 1'000'000, 37,
        1 << 14);
    CHECK(std::fabs(norm.mean - (10.0 + 30.0)) <= 3.0 * norm.std_error);
}

TEST_CASE("info_density_block worked example") {
    const ChannelParams params(2, 1.0);
    // log(2/3) - log(1 - e^{-2/3})
    CHECK(info_density_block(params, {1.0, 0.0}) ==
          doctest::Approx(0.3148829220570836).epsilon(1e-12));
    CHECK_THROWS_AS(info_density_block(params, {0.0, 0.0}), std::domain_error);
}

TEST_CASE("info density equals conditional minus induced log density") {
    RngStream rng(41, 0);
    for (const auto& [t, rho] : std::vector<std::pair<int, double>>{{2, 1.0}, {7, 0.3}, {50, 10.0}}) {
        const ChannelParams params(t, rho);
        const double x_norm_sq = params.t_rho();
        for (int trial = 0; trial < 334; ++trial) {
            const OutputSufficientStats stats{x_norm_sq * rng.exponential() + 0.01,
                                              rng.gamma_int(t - 1)};
            const double direct = info_density_block(params, stats);
            const double via_pdfs = conditional_logpdf(params, x_norm_sq, stats) -
                                    output_logpdf_induced(params, stats.norm_sq());
            REQUIRE(direct == doctest::Approx(via_pdfs).epsilon(1e-9));
        }
    }
}

TEST_CASE("change of measure holds where the importance ratio is light-tailed") {
    // exp(-i) has tail index 1 + 1/(T rho); at T rho = 2 the mean is
    // estimable with modest samples. (Large T rho needs infeasible sample
    // sizes; see the acceptance suite output for the measured behaviour.)
    const ChannelParams params(2, 1.0);
    const InfoDensityKernel kernel(params);
    const auto est = estimate(
        [&](RngStream& rng) { return std::exp(-kernel.sample_density(rng)); }, 200'000, 43,
        1 << 14);
    CHECK(std::fabs(est.mean - 1.0) <= 4.0 * est.std_error);
}

TEST_CASE("mean information density matches the capacity lower bound oracle later") {
    // Cross-module identity tested at acceptance scale; keep a smoke-size
    // version here so unit runs exercise the kernel end to end.
    const ChannelParams params(2, 1.0);
    const InfoDensityKernel kernel(params);
    const auto est = estimate([&](RngStream& rng) { return kernel.sample_density(rng); }, 200'000,
                              47, 1 << 14);
    CHECK(est.mean / 2.0 == doctest::Approx(0.1395).epsilon(0.02));
}

TEST_CASE("codeword densities sum per-block densities bit for bit") {
    const ChannelParams params(5, 2.0);
    const auto samples = sample_info_densities(params, 8, 500, 53, 64, true);
    REQUIRE(samples.per_block.has_value());
    for (std::size_t j = 0; j < samples.values.size(); ++j) {
        double sum = 0.0;
        for (const double block : (*samples.per_block)[j]) sum += block;
        REQUIRE(sum == samples.values[j]);
    }
}

TEST_CASE("single-block codewords reproduce the block density stream") {
    const ChannelParams params(6, 2.0);
    RngStream a(71, 3), b(71, 3);
    for (int i = 0; i < 1000; ++i) {
        const double one_block = sample_codeword_density(params, 1, a);
        const double direct = info_density_block(params, sample_output_stats(params, b));
        REQUIRE(one_block == direct);
    }
}

TEST_CASE("codeword sampling is additive in distribution") {
    const ChannelParams params(4, 1.5);
    const InfoDensityKernel kernel(params);
    const auto single = accumulate([&](RngStream& rng) { return kernel.sample_density(rng); },
                                   400'000, 59, 1 << 14);
    const std::int64_t blocks = 6;
    const auto codeword = accumulate(
        [&](RngStream& rng) { return sample_codeword_density(params, blocks, rng); }, 200'000, 61,
        1 << 14);
    const double block_mean = single.mean();
    const double block_var = single.sample_variance();
    const double mean_se = std::sqrt(codeword.sample_variance() / 200'000.0);
    CHECK(std::fabs(codeword.mean() - blocks * block_mean) <= 4.0 * mean_se);
    CHECK(codeword.sample_variance() ==
          doctest::Approx(blocks * block_var).epsilon(0.05));
}

TEST_CASE("batch generation is reproducible and worker-invariant") {
    const ChannelParams params(13, 4.0);
    const auto a = sample_info_densities(params, 3, 10'000, 67, 512, false, 1);
    const auto b = sample_info_densities(params, 3, 10'000, 67, 512, false, 7);
    CHECK(a.values == b.values);
    const auto c = sample_info_densities(params, 3, 10'000, 68, 512, false, 1);
    CHECK(a.values != c.values);
}

TEST_CASE("representative input carries exactly the power budget") {
    const ChannelParams params(17, 2.5);
    CHECK(params.t_rho() == 17 * 2.5);
}
