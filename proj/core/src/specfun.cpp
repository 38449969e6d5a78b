#include "blockfade/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "blockfade/errors.hpp"

namespace blockfade::specfun {

namespace {

constexpr double kHalfLogTwoPi = 0.91893853320467274178;  // log(2*pi)/2
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kEps = 1e-16;
constexpr int kMaxSeriesIter = 20000;

// Stirling tail sum_k B_{2k} / (2k (2k-1) x^{2k-1}); the first omitted term
// is 1/(156 x^13), below 1e-15 for x >= 10.
double stirling_correction(double x) {
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double s = -1.9175269175269175e-3;           // -691/360360
    s = 8.4175084175084175e-4 + s * inv2;        //  1/1188
    s = -5.9523809523809524e-4 + s * inv2;       // -1/1680
    s = 7.9365079365079365e-4 + s * inv2;        //  1/1260
    s = -2.7777777777777778e-3 + s * inv2;       // -1/360
    s = 8.3333333333333333e-2 + s * inv2;        //  1/12
    return s * inv;
}

// Asymptotic digamma tail -sum_k B_{2k} / (2k x^{2k}); the first omitted term
// is 1/(12 x^14), below 1e-15 for x >= 10.
double digamma_asymptotic_tail(double x) {
    const double inv2 = 1.0 / (x * x);
    double s = -2.1092796092796093e-2;           // -691/32760
    s = 7.5757575757575758e-3 + s * inv2;        //  1/132
    s = -4.1666666666666667e-3 + s * inv2;       // -1/240
    s = 3.9682539682539683e-3 + s * inv2;        //  1/252
    s = -8.3333333333333333e-3 + s * inv2;       // -1/120
    s = 8.3333333333333333e-2 + s * inv2;        //  1/12
    return -s * inv2;
}

// Series part of P(a, x) for x < a + 1 (Numerical Recipes gser loop).
// Returns sum = 1/a + x/(a(a+1)) + ... so that
//   P(a, x) = sum * exp(a log x - x - log Gamma(a)).
double lower_gamma_series_sum(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < kMaxSeriesIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) return sum;
    }
    throw NumericsError("reg_inc_gamma: series stalled at shape=" + std::to_string(a) +
                        " x=" + std::to_string(x));
}

// Lentz continued fraction for Q(a, x), valid for x >= a + 1.
// Returns the fraction value h so that Q = exp(-x + a log x - lgamma(a)) * h.
double upper_gamma_cf(double a, double x) {
    constexpr double kFpMin = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxSeriesIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw NumericsError("reg_inc_gamma: continued fraction stalled at shape=" +
                        std::to_string(a) + " x=" + std::to_string(x));
}

void require_domain(bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
}

}  // namespace

void Tolerance::validate() const {
    require_domain(rel_tol > 0.0, "Tolerance: rel_tol must be positive");
    require_domain(abs_tol > 0.0, "Tolerance: abs_tol must be positive");
    require_domain(max_iter >= 1, "Tolerance: max_iter must be at least 1");
}

double log_gamma(double x) {
    require_domain(x > 0.0 && std::isfinite(x), "log_gamma: argument must be positive");
    double shift = 0.0;
    while (x < 10.0) {
        shift -= std::log(x);
        x += 1.0;
    }
    return (x - 0.5) * std::log(x) - x + kHalfLogTwoPi + stirling_correction(x) + shift;
}

double digamma(double x) {
    require_domain(x > 0.0 && std::isfinite(x), "digamma: argument must be positive");
    double shift = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    return std::log(x) - 0.5 / x + digamma_asymptotic_tail(x) + shift;
}

double reg_inc_gamma(double shape, double x) {
    require_domain(shape > 0.0 && std::isfinite(shape), "reg_inc_gamma: shape must be positive");
    require_domain(x >= 0.0 && std::isfinite(x), "reg_inc_gamma: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < shape + 1.0) {
        const double log_pre = shape * std::log(x) - x - log_gamma(shape);
        const double p = lower_gamma_series_sum(shape, x) * std::exp(log_pre);
        return p < 1.0 ? p : 1.0;
    }
    const double log_pre = shape * std::log(x) - x - log_gamma(shape);
    if (log_pre < -745.0) return 1.0;  // Q underflows
    const double q = std::exp(log_pre) * upper_gamma_cf(shape, x);
    return q > 0.0 ? 1.0 - q : 1.0;
}

double log_reg_inc_gamma_cached(double shape, double x, double lgamma_shape) {
    require_domain(shape > 0.0 && std::isfinite(shape), "log_reg_inc_gamma: shape must be positive");
    require_domain(x >= 0.0 && std::isfinite(x), "log_reg_inc_gamma: x must be nonnegative");
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    const double log_pre = shape * std::log(x) - x - lgamma_shape;
    if (x < shape + 1.0) {
        return log_pre + std::log(lower_gamma_series_sum(shape, x));
    }
    // Upper tail: log P = log1p(-Q). Once Q < 1e-19 the result is 0 to double
    // precision, which skips the continued fraction on the bulk of samples.
    if (log_pre < -45.0) return 0.0;
    const double q = std::exp(log_pre) * upper_gamma_cf(shape, x);
    return std::log1p(-q);
}

double log_reg_inc_gamma(double shape, double x) {
    require_domain(shape > 0.0 && std::isfinite(shape), "log_reg_inc_gamma: shape must be positive");
    return log_reg_inc_gamma_cached(shape, x, log_gamma(shape));
}

double q_func(double x) { return 0.5 * std::erfc(x / kSqrt2); }

namespace {

// Acklam's rational approximation of the standard normal quantile, |err| < 1.2e-9.
double norm_quantile_seed(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double q_inv(double p) {
    require_domain(p > 0.0 && p < 1.0, "q_inv: probability must lie in (0, 1)");
    // Q(x) = p  <=>  Phi(x) = 1 - p, so negate the Phi quantile of p.
    double x = -norm_quantile_seed(p);
    double lo = -40.0, hi = 40.0;  // Q is strictly decreasing on this bracket
    for (int it = 0; it < 60; ++it) {
        const double f = q_func(x) - p;
        if (f == 0.0) return x;
        if (f > 0.0) lo = x; else hi = x;
        const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
        double step = pdf > 0.0 ? f / pdf : 0.0;
        double next = x + step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisect when Newton escapes
        if (std::fabs(next - x) < 1e-13 * (1.0 + std::fabs(next))) return next;
        x = next;
    }
    return x;
}

double binary_entropy_nats(double p) {
    require_domain(p >= 0.0 && p <= 1.0, "binary_entropy_nats: probability must lie in [0, 1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

}  // namespace blockfade::specfun
