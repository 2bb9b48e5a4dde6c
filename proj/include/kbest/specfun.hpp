#pragma once

// Special functions needed by the throughput closed forms. Orders are
// integers wherever the formulas allow it.

namespace kbest::specfun {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// Gamma(k, x) for integer k >= 1 and x >= 0, from the finite sum
/// (k-1)! e^{-x} sum_{j<k} x^j / j!. Throws std::overflow_error if the
/// result is not representable.
double upper_incomplete_gamma(int k, double x);

/// psi(k) = -gamma + sum_{j=1}^{k-1} 1/j.
double digamma_int(int k);

/// e^x E1(x) for x > 0. Series below x = 1, continued fraction above.
double e1_scaled(double x);

/// e^x E_n(x) for integer n >= 1 and x > 0.
double expn_scaled(int n, double x);

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// ln U(a; b; z) for a > 0, z > 0, from the integral representation
/// U = 1/Gamma(a) * int_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt.
/// Throws quad::NonConvergence if the quadrature misses its tolerance.
double log_tricomi_u(double a, double b, double z);

/// Tricomi confluent hypergeometric U(a; b; z); see log_tricomi_u.
double tricomi_u(double a, double b, double z);

}  // namespace kbest::specfun
