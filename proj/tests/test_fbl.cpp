#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "blockfade/errors.hpp"
#include "blockfade/fbl.hpp"
#include "blockfade/specfun.hpp"

using namespace blockfade;
namespace sf = blockfade::specfun;

TEST_CASE("FblSpec enforces the block structure") {
    const ChannelParams params(4, 2.0);
    CHECK_NOTHROW(FblSpec(100, 25, 1e-3, params));
    CHECK_THROWS_AS(FblSpec(101, 25, 1e-3, params), std::domain_error);
    CHECK_THROWS_AS(FblSpec(100, 25, 0.0, params), std::domain_error);
    CHECK_THROWS_AS(FblSpec(100, 25, 1.0, params), std::domain_error);
}

TEST_CASE("fano_upper worked examples") {
    CHECK(fano_upper(1.0, 1000, 1e-3) == doctest::Approx(1.0010089161712836).epsilon(1e-12));
    CHECK(fano_upper(0.7345, 1234, 0.0) == 0.7345);
    CHECK(fano_upper(0.0, 100, 0.5) == doctest::Approx(0.013862943611198907).epsilon(1e-12));
    // Direct-formula oracle on a scan.
    for (double eps = 1e-4; eps < 0.9; eps *= 3.7) {
        const double expected = (0.5 + sf::binary_entropy_nats(eps) / 777.0) / (1.0 - eps);
        CHECK(fano_upper(0.5, 777, eps) == doctest::Approx(expected).epsilon(1e-13));
    }
    CHECK_THROWS_AS(fano_upper(1.0, 100, 1.0), std::domain_error);
    CHECK_THROWS_AS(fano_upper(1.0, 100, -0.1), std::domain_error);
    CHECK_THROWS_AS(fano_upper(1.0, 0, 0.5), std::domain_error);
}

TEST_CASE("dt_epsilon limits and exact monotonicity in log M") {
    const ChannelParams params(4, 2.0);
    const auto samples = sample_info_densities(params, 10, 20'000, 73, 1024);

    CHECK(dt_epsilon(samples, 0.0).mean == 0.0);     // M = 1: threshold below every sample
    CHECK(dt_epsilon(samples, 2000.0).mean == 1.0);  // M huge: statistic saturates at 1

    double previous = -1.0;
    for (double log_m = 0.0; log_m <= 120.0; log_m += 1.5) {
        const double eps = dt_epsilon(samples, log_m).mean;
        CHECK(eps >= previous);
        previous = eps;
    }
    CHECK_THROWS_AS(dt_epsilon(samples, -1.0), std::domain_error);
}

TEST_CASE("dt_epsilon matches the two-term threshold form by quadrature") {
    // Single block at T = 2, rho = 1: the sufficient statistics are two
    // independent exponentials, so both terms of the threshold bound are
    // 1-D/2-D quadratures. At fixed total norm v the density is linear in
    // the aligned energy, i(y1, v - y1) = i(0, v) + kappa y1, which gives
    // the output-measure term in closed threshold form. This pins three
    // routes to each other:
    //   (a) the collapsed statistic E[min(1, e^{tau - i})] sampled by MC,
    //   (b) P[i <= tau] + E_P[e^{tau-i} 1{i > tau}] by conditional-measure
    //       quadrature,
    //   (c) the same exceedance term as e^tau Q[i > tau] under the induced
    //       output law (the bounded change-of-measure identity).
    const ChannelParams params(2, 1.0);
    const double kappa = 2.0 / 3.0;
    const double y1_scale = 3.0;  // 1 + T rho
    const double log_m = 2.0;
    const double tau = log_m + std::log1p(-std::exp(-log_m)) - std::log(2.0);
    const QuadratureSpec quad{1e-10, 1e-14, 8000};

    const auto density = [&](double y1, double rest) {
        return info_density_block(params, {y1, rest});
    };
    // i is strictly increasing in y1 at fixed rest; threshold by bisection.
    const auto y1_crossing = [&](double rest) {
        double lo = 0.0, hi = 1.0;
        while (density(hi, rest) <= tau && hi < 1e6) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (density(mid, rest) <= tau ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    // (b) conditional-measure quadrature of both terms.
    const auto first_term_inner = [&](double rest) {
        return std::exp(-rest) * (1.0 - std::exp(-y1_crossing(rest) / y1_scale));
    };
    const double first_term =
        integrate_adaptive(first_term_inner, 1e-9, 80.0, quad).value;

    const auto second_term_inner = [&](double rest) {
        const double start = y1_crossing(rest);
        const auto over_y1 = [&](double y1) {
            return std::exp(-y1 / y1_scale) / y1_scale *
                   std::exp(tau - density(y1, rest));
        };
        return std::exp(-rest) *
               integrate_adaptive(over_y1, start, start + 80.0 * y1_scale,
                                  QuadratureSpec{1e-9, 1e-16, 4000})
                   .value;
    };
    const double second_term_p =
        integrate_adaptive(second_term_inner, 1e-9, 80.0, QuadratureSpec{1e-8, 1e-14, 4000})
            .value;

    // (c) the exceedance under the induced output law: at norm v the aligned
    // energy fraction is uniform on [0, 1] for T = 2.
    const auto q_side_inner = [&](double v) {
        const double q_norm = std::exp(output_logpdf_induced(params, v)) * M_PI * M_PI * v;
        const double y1_star = (tau - density(0.0, v)) / kappa;
        const double exceed_fraction = std::clamp(1.0 - y1_star / v, 0.0, 1.0);
        return q_norm * exceed_fraction;
    };
    const double second_term_q =
        std::exp(tau) * integrate_adaptive(q_side_inner, 1e-9, 300.0, quad).value;

    CHECK(second_term_p == doctest::Approx(second_term_q).epsilon(1e-6));

    // (a) the collapsed Monte Carlo statistic against (b).
    const auto samples = sample_info_densities(params, 1, 2'000'000, 113, 1 << 15);
    const McEstimate mc = dt_epsilon(samples, log_m);
    CHECK(std::fabs(mc.mean - (first_term + second_term_p)) <= 4.0 * mc.std_error);
}

TEST_CASE("dt_rate bisection lands exactly on the feasibility boundary") {
    const ChannelParams params(4, 2.0);
    const FblSpec spec(100, 25, 1e-2, params);
    const auto result = dt_rate(spec, 200'000, 79);

    CHECK(result.epsilon_at_m <= 1e-2);
    CHECK(result.rate == result.log_m / 100.0);
    CHECK(result.rate > 0.0);

    const auto samples = sample_info_densities(params, 25, 200'000, 79, 1 << 15);
    CHECK(dt_epsilon(samples, result.log_m).mean == result.epsilon_at_m);
    CHECK(dt_epsilon(samples, result.log_m + 1e-5).mean > 1e-2);
    CHECK(result.mc.n_samples == 200'000);
}

TEST_CASE("dt_rate grows with the error budget and reproduces by seed") {
    const ChannelParams params(4, 2.0);
    const FblSpec loose(100, 25, 1e-2, params);
    const FblSpec tight(100, 25, 1e-3, params);
    const auto loose_rate = dt_rate(loose, 200'000, 83);
    const auto tight_rate = dt_rate(tight, 200'000, 83);
    CHECK(loose_rate.rate >= tight_rate.rate);

    const auto again = dt_rate(loose, 200'000, 83);
    CHECK(again.log_m == loose_rate.log_m);
    CHECK(again.epsilon_at_m == loose_rate.epsilon_at_m);
}

TEST_CASE("dt_rate refuses statistically unresolved targets") {
    const ChannelParams params(4, 2.0);
    const FblSpec spec(100, 25, 1e-3, params);
    CHECK_THROWS_AS(dt_rate(spec, 2'000, 89), StatisticalResolutionError);
}

TEST_CASE("vbar scales into the codeword variance and is seed-consistent") {
    const ChannelParams params(10, 3.0);
    const auto vbar_a = vbar_estimate(params, 400'000, 97);
    const auto vbar_b = vbar_estimate(params, 400'000, 101);
    CHECK(vbar_a.mean > 0.0);
    CHECK(std::fabs(vbar_a.mean - vbar_b.mean) <=
          6.0 * std::sqrt(vbar_a.std_error * vbar_a.std_error +
                          vbar_b.std_error * vbar_b.std_error));

    // Var of an L-block codeword density = L * T * vbar, within sampling error.
    const std::int64_t blocks = 8;
    const auto samples = sample_info_densities(params, blocks, 200'000, 103, 1 << 14);
    MomentAccumulator acc;
    for (const double v : samples.values) acc.add(v);
    const double expected = static_cast<double>(blocks) * 10.0 * vbar_a.mean;
    CHECK(acc.sample_variance() == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("coherent normal approximation composes its tested parts") {
    const ChannelParams params(50, 10.0);
    const QuadratureSpec quad;

    // epsilon = 1/2 removes the penalty entirely.
    CHECK(normal_approx_coh(params, 4000, 0.5, quad) ==
          doctest::Approx(coherent_capacity(10.0, quad)).epsilon(1e-12));

    // Penalty term is sqrt(V/n) Qinv(eps) exactly.
    const double v = coherent_dispersion(50, 10.0, quad);
    const double expected =
        coherent_capacity(10.0, quad) - std::sqrt(v / 4000.0) * sf::q_inv(1e-3);
    CHECK(normal_approx_coh(params, 4000, 1e-3, quad) == doctest::Approx(expected).epsilon(1e-12));

    // Vanishing penalty at astronomical block lengths.
    const double at_huge_n = normal_approx_coh(params, 1'000'000'000'000LL, 1e-3, quad);
    CHECK(std::fabs(at_huge_n - coherent_capacity(10.0, quad)) < 1e-4);
}

TEST_CASE("noncoherent normal approximation tracks the lower bound") {
    const ChannelParams params(10, 3.0);
    const QuadratureSpec quad;
    const auto vbar = vbar_estimate(params, 200'000, 107);

    CHECK(normal_approx_noncoh(params, 4000, 0.5, vbar, quad) ==
          doctest::Approx(lower_bound_L(params, quad)).epsilon(1e-12));

    double previous = -1e9;
    for (const std::int64_t n : {100, 1000, 10'000, 100'000}) {
        const double value = normal_approx_noncoh(params, n, 1e-3, vbar, quad);
        CHECK(value >= previous);
        previous = value;
    }
    CHECK(previous < lower_bound_L(params, quad));
}

TEST_CASE("coherent approximation dominates the noncoherent one") {
    const QuadratureSpec quad;
    for (const auto& [t, rho] : std::vector<std::pair<int, double>>{
             {2, 0.5}, {10, 3.0}, {50, 10.0}}) {
        const ChannelParams params(t, rho);
        const auto vbar = vbar_estimate(params, 200'000, 109 + t);
        for (const std::int64_t n : {500, 4000, 40'000}) {
            CHECK(normal_approx_coh(params, n, 1e-3, quad) >=
                  normal_approx_noncoh(params, n, 1e-3, vbar, quad));
        }
    }
}
