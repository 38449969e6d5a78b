#pragma once

namespace blockfade::specfun {

// Convergence budget for iterative special-function and optimizer loops.
struct Tolerance {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_iter = 200;

    void validate() const;
};

/// log Gamma(x) for x > 0. Stirling series with Bernoulli correction after
/// shifting the argument above 10 by the recurrence.
double log_gamma(double x);

/// psi(x) = d/dx log Gamma(x) for x > 0.
double digamma(double x);

/// Regularized lower incomplete gamma P(shape, x) in [0, 1].
/// Power series for x < shape + 1, Lentz continued fraction otherwise.
double reg_inc_gamma(double shape, double x);

/// log P(shape, x), evaluated in the log domain so it stays finite where
/// P itself underflows (small x, large shape). Returns -inf at x == 0.
double log_reg_inc_gamma(double shape, double x);

// Same, with log Gamma(shape) precomputed by the caller (hot loops).
double log_reg_inc_gamma_cached(double shape, double x, double lgamma_shape);

/// Gaussian tail Q(x) = P[N(0,1) > x].
double q_func(double x);

/// Inverse of q_func on (0, 1). Rational initial guess (Acklam) polished by
/// safeguarded Newton iterations on q_func.
double q_inv(double p);

/// Binary entropy -p log p - (1-p) log(1-p) in nats, with H(0) = H(1) = 0.
double binary_entropy_nats(double p);

}  // namespace blockfade::specfun
