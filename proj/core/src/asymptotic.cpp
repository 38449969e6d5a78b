#include "blockfade/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "blockfade/errors.hpp"

namespace blockfade {

namespace {

constexpr double kGolden = 0.61803398874989485;

// Golden-section maximization of f on [lo, hi]; f is assumed unimodal there.
std::pair<double, double> golden_max(const std::function<double(double)>& f, double lo, double hi,
                                     double x_tol, int max_iter) {
    double a = lo, b = hi;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > x_tol * (1.0 + std::fabs(a) + std::fabs(b)); ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        }
    }
    const double x = f1 > f2 ? x1 : x2;
    return {x, std::max(f1, f2)};
}

}  // namespace

double lower_bound_L(const ChannelParams& params, const QuadratureSpec& quad) {
    quad.validate();
    const double t = static_cast<double>(params.coherence_time);
    const double a = params.t_rho();
    const double lgamma_t = specfun::log_gamma(t);
    const double lgamma_tm1 = specfun::log_gamma(t - 1.0);

    const double closed =
        ((t - 1.0) * std::log(a) - lgamma_t - t + t * (1.0 + params.snr) / (1.0 + a)) / t;

    const double log_prefactor = (t - 1.0) * std::log1p(1.0 / a);
    const double prefactor = std::exp(log_prefactor);

    // e^{-u} decay dominates; extend the cutoff until the discarded mass of
    // prefactor * e^{-u} * (T-1) log u is provably below the tail budget.
    double u_max = 60.0 + 10.0 * std::log1p(a);
    const auto tail_bound = [&](double u) {
        return 2.0 * prefactor * (t - 1.0) * std::exp(-u) * (std::log(u) + 1.0);
    };
    while (tail_bound(u_max) > quad.truncation_tail) u_max *= 1.25;

    const auto integrand = [&](double u) -> double {
        if (u <= 0.0) return 0.0;
        if (u < 1e-12) {
            // Regular endpoint: u^{1-T} gamma~(T-1, a u) -> a^{T-1}/Gamma(T).
            const double inner = (t - 1.0) * std::log(a) - lgamma_t;
            const double gamma_val = std::exp((t - 1.0) * std::log(a * u) - lgamma_t);
            return std::exp(-u) * gamma_val * inner;
        }
        const double log_gamma_reg = specfun::log_reg_inc_gamma_cached(t - 1.0, a * u, lgamma_tm1);
        const double inner = log_gamma_reg - (t - 1.0) * std::log(u);
        return std::exp(-u + log_gamma_reg) * inner;
    };

    const QuadResult integral = integrate_adaptive(integrand, 0.0, u_max, quad);
    return closed - prefactor * integral.value / t;
}

double duality_inner_series(int coherence_time, double p, double abs_tol) {
    if (coherence_time < 2)
        throw std::domain_error("duality_inner_series: coherence time must be at least 2");
    if (!(p >= 0.0)) throw std::domain_error("duality_inner_series: p must be nonnegative");
    if (p == 0.0) return 1.0;

    const double tm1 = static_cast<double>(coherence_time - 1);
    const double r = p / (1.0 + p);

    if (p <= 64.0) {
        double sum = 0.0;
        double pow_r = 1.0;
        for (std::int64_t k = 0; k < 4'000'000; ++k) {
            sum += tm1 * pow_r / (static_cast<double>(k) + tm1);
            pow_r *= r;
            const double tail = tm1 * pow_r / ((static_cast<double>(k + 1) + tm1) * (1.0 - r));
            if (tail < abs_tol) return sum;
        }
        throw NumericsError("duality_inner_series: summation stalled at p=" + std::to_string(p));
    }

    // Same quantity as the beta-type integral; the integrand piles up in a
    // boundary layer of width 1/(1+p) at t = 1, which adaptive bisection
    // resolves in O(log p) splits instead of O(p) series terms.
    const auto integrand = [&](double x) {
        return std::pow(x, static_cast<double>(coherence_time - 2)) / (1.0 - r * x);
    };
    const QuadResult res = integrate_adaptive(integrand, 0.0, 1.0, 1e-12,
                                              abs_tol / (4.0 * tm1), 4000);
    return tm1 * res.value;
}

double duality_inner_objective(const ChannelParams& params, double lambda, double p,
                               double series_abs_tol) {
    const double t = static_cast<double>(params.coherence_time);
    const double power_cost = 1.0 / (t * (1.0 + params.snr));
    return duality_inner_series(params.coherence_time, p, series_abs_tol) - std::log1p(p) +
           power_cost * p + lambda * (params.t_rho() - p);
}

namespace {

struct InnerSup {
    double value = 0.0;
    double p_star = 0.0;
    bool multimodal = false;
};

InnerSup inner_supremum(const ChannelParams& params, double lambda, double p_max,
                        const specfun::Tolerance& tol) {
    const auto objective = [&](double p) {
        return duality_inner_objective(params, lambda, p, tol.abs_tol);
    };

    // Coarse bracket: geometric sweep plus the stationary-point hint
    // p ~ (T-2)/(lambda - 1/(T(1+rho))) of the large-p asymptotics.
    std::vector<double> grid;
    grid.push_back(0.0);
    for (double p = 1e-6 * (1.0 + params.t_rho()); p < p_max; p *= 2.0) grid.push_back(p);
    grid.push_back(p_max);
    const double power_cost = 1.0 / (static_cast<double>(params.coherence_time) * (1.0 + params.snr));
    if (params.coherence_time > 2 && lambda > power_cost) {
        const double hint = static_cast<double>(params.coherence_time - 2) / (lambda - power_cost);
        if (hint > 0.0 && hint < p_max) {
            grid.push_back(0.5 * hint);
            grid.push_back(hint);
            grid.push_back(2.0 * hint);
        }
    }
    std::sort(grid.begin(), grid.end());

    const auto scan = [&](const std::vector<double>& pts, std::vector<double>& vals) {
        vals.resize(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = objective(pts[i]);
        std::size_t best = 0;
        int local_maxima = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (vals[i] > vals[best]) best = i;
            const bool left_ok = i == 0 || vals[i] >= vals[i - 1];
            const bool right_ok = i + 1 == pts.size() || vals[i] > vals[i + 1];
            if (left_ok && right_ok) ++local_maxima;
        }
        return std::pair<std::size_t, int>{best, local_maxima};
    };

    std::vector<double> values;
    auto [best, local_maxima] = scan(grid, values);

    InnerSup out;
    out.multimodal = local_maxima > 1;
    if (out.multimodal) {
        // Refine rather than assume unimodality: subdivide every interval and
        // rescan, so the golden-section bracket holds the global maximum.
        std::vector<double> fine;
        fine.reserve(4 * grid.size());
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            for (int j = 0; j < 4; ++j)
                fine.push_back(grid[i] + 0.25 * j * (grid[i + 1] - grid[i]));
        }
        fine.push_back(grid.back());
        grid = std::move(fine);
        std::tie(best, local_maxima) = scan(grid, values);
    }
    const double lo = best == 0 ? grid[0] : grid[best - 1];
    const double hi = best + 1 == grid.size() ? grid[best] : grid[best + 1];
    auto [p_star, value] = golden_max(objective, lo, hi, tol.rel_tol, tol.max_iter);
    if (values[best] > value) {  // golden landed worse than the grid point
        p_star = grid[best];
        value = values[best];
    }
    out.p_star = p_star;
    out.value = value;
    return out;
}

}  // namespace

std::pair<double, UpperBoundDiagnostics> upper_bound_U(const ChannelParams& params,
                                                       const specfun::Tolerance& tol) {
    tol.validate();
    const double t = static_cast<double>(params.coherence_time);
    const double rho = params.snr;
    const double power_cost = 1.0 / (t * (1.0 + rho));  // inner sup diverges for lambda below this
    const double p_max = 1e3 * params.t_rho();

    UpperBoundDiagnostics diag;
    diag.c1 = std::log(t * (1.0 + rho)) - specfun::log_gamma(t) - t + 1.0 / (1.0 + rho) +
              (t - 1.0) * specfun::digamma(t - 1.0);

    const auto outer = [&](double mu) { return inner_supremum(params, power_cost + mu, p_max, tol); };

    // The outer objective is convex in lambda; scan mu = lambda - power_cost
    // geometrically to bracket its minimum.
    const double mu_ref = params.coherence_time > 2
                              ? static_cast<double>(params.coherence_time - 2) / params.t_rho()
                              : power_cost;
    std::vector<double> mu_grid;
    for (double mu = 1e-9 * mu_ref; mu <= 1e9 * mu_ref; mu *= 4.0) mu_grid.push_back(mu);

    std::size_t best = 0;
    std::vector<double> g(mu_grid.size());
    for (std::size_t i = 0; i < mu_grid.size(); ++i) {
        g[i] = outer(mu_grid[i]).value;
        if (g[i] < g[best]) best = i;
    }
    if (best + 1 == mu_grid.size())
        throw NumericsError("upper_bound_U: lambda search window exhausted at T=" +
                            std::to_string(params.coherence_time) +
                            " rho=" + std::to_string(rho));

    const double mu_lo = best == 0 ? mu_grid[0] : mu_grid[best - 1];
    const double mu_hi = mu_grid[best + 1];
    const auto neg_outer_log = [&](double log_mu) { return -outer(std::exp(log_mu)).value; };
    auto [log_mu_star, neg_g] = golden_max(neg_outer_log, std::log(mu_lo), std::log(mu_hi),
                                           tol.rel_tol, tol.max_iter);
    double mu_star = std::exp(log_mu_star);
    double g_star = -neg_g;
    if (g[best] < g_star) {
        mu_star = mu_grid[best];
        g_star = g[best];
    }

    const InnerSup inner = inner_supremum(params, power_cost + mu_star, p_max, tol);
    diag.lambda_star = power_cost + mu_star;
    diag.p_star = inner.p_star;
    diag.inner_value = inner.value;
    diag.inner_multimodal = inner.multimodal;
    diag.hit_power_cap = inner.p_star >= 0.999 * p_max;
    return {(diag.c1 + inner.value) / t, diag};
}

double coherent_capacity(double rho, const QuadratureSpec& quad) {
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw std::domain_error("coherent_capacity: rho must be positive");
    quad.validate();
    double z_max = 60.0;
    while (std::exp(-z_max) * (std::log1p(rho * z_max) + 1.0) > quad.truncation_tail) z_max *= 1.25;
    const auto integrand = [rho](double z) { return std::exp(-z) * std::log1p(rho * z); };
    return integrate_adaptive(integrand, 0.0, z_max, quad).value;
}

double coherent_dispersion(int coherence_time, double rho, const QuadratureSpec& quad) {
    if (coherence_time < 1)
        throw std::domain_error("coherent_dispersion: coherence time must be at least 1");
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw std::domain_error("coherent_dispersion: rho must be nonnegative");
    quad.validate();
    if (rho == 0.0) return 0.0;

    double z_max = 60.0;
    while (true) {
        const double log_hi = std::log1p(rho * z_max) + 1.0;
        if (std::exp(-z_max) * log_hi * log_hi <= quad.truncation_tail) break;
        z_max *= 1.25;
    }

    const auto log_term = [rho](double z) { return std::exp(-z) * std::log1p(rho * z); };
    const auto log_sq_term = [rho](double z) {
        const double l = std::log1p(rho * z);
        return std::exp(-z) * l * l;
    };
    const auto inv_term = [rho](double z) { return std::exp(-z) / (1.0 + rho * z); };

    const double m1 = integrate_adaptive(log_term, 0.0, z_max, quad).value;
    const double m2 = integrate_adaptive(log_sq_term, 0.0, z_max, quad).value;
    const double mean_inv = integrate_adaptive(inv_term, 0.0, z_max, quad).value;

    const double dispersion =
        static_cast<double>(coherence_time) * (m2 - m1 * m1) + 1.0 - mean_inv * mean_inv;
    return std::max(0.0, dispersion);
}

}  // namespace blockfade
