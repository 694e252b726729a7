#pragma once

namespace dlab::specfun {

/// Degrees above this overflow the double range in the recurrence.
inline constexpr int kHermiteDegreeCap = 512;

/// Largest 1F1 argument the series kernel accepts (chi^2 values).
inline constexpr double kKummerMaxArgument = 50.0;

/// Physicists' Hermite polynomial H_n(x) by the three-term recurrence.
/// Throws DegreeTooLarge for n > kHermiteDegreeCap.
double hermite(int n, double x);

/// Error function; |erf| <= 1, odd, absolute error <= 1e-14.
double erf(double x);

/// Kummer confluent hypergeometric 1F1(a; b; x) for x in [0, 50].
/// Throws PoleInB when b is a nonpositive integer and NonConvergent when
/// x exceeds the supported range or the series fails to settle.
double kummer(double a, double b, double x);

}  // namespace dlab::specfun
