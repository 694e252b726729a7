#pragma once

#include <complex>

namespace dlab::classical {

/// Stationary-oscillator constants and the reference time t0.
struct OscillatorParams {
    double mass = 1.0;
    double omega0 = 0.5;
    double hbar = 1.0;
    double t0 = 0.0;
};

/// Ermakov solution parameters. b is always derived, never supplied:
/// b = sqrt(a*c - (2*hbar*lambda/(m*omega0))^2).
struct ErmakovSpec {
    double a = 1.0;
    double c = 4.0;
    double lambda = 0.5;
};

struct TrajectorySpec {
    double x0 = 0.0;
    double p0 = 0.0;
};

/// Default coupling lambda = m*omega0/hbar, the oscillator's own scale.
double default_lambda(const OscillatorParams& p);

struct PhasePoint {
    double x_mean = 0.0;
    double p_mean = 0.0;
};

/// <x>(t), <p>(t) from the rotation matrix solution of the classical motion.
PhasePoint trajectory(const OscillatorParams& p, const TrajectorySpec& traj, double t);

/// Validated bundle (a, b, c, lambda, constants). Construct via validate().
class ValidatedModel {
public:
    const OscillatorParams& params() const { return params_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }
    double lambda() const { return lambda_; }

    /// alpha(t) = sqrt(a cos^2 + b sin2 + c sin^2)(omega0 (t-t0)).
    double alpha(double t) const;
    double alpha_dot(double t) const;
    double alpha_ddot(double t) const;

private:
    friend ValidatedModel validate(const OscillatorParams&, const ErmakovSpec&);
    OscillatorParams params_;
    double a_ = 0, b_ = 0, c_ = 0, lambda_ = 0;
};

/// Checks positivity of the constants, lambda != 0, and the existence
/// condition a*c >= (2*hbar*lambda/(m*omega0))^2.
ValidatedModel validate(const OscillatorParams& params, const ErmakovSpec& spec);

struct AlphaState {
    double alpha;
    double alpha_dot;
};

AlphaState alpha_state(const ValidatedModel& model, double t);

/// Phase theta(t) = 2 omega0 Int_{t0}^{t} dtau / alpha^2(tau), by adaptive
/// Simpson quadrature (the integral is definitional; the arctan closed form
/// is only a branch-corrected cross-check).
double theta(const ValidatedModel& model, double t);

/// Principal-branch arctan closed form of theta. Discontinuous at the tan
/// singularities; the integral form equals this plus an integer multiple
/// of (2/Lambda)*pi with Lambda = 2 hbar lambda/(m omega0).
double theta_closed_form(const ValidatedModel& model, double t);

/// S(t) = (m/2hbar)(alpha_dot/alpha) + i lambda/alpha^2, the Riccati phase.
std::complex<double> s_complex(const ValidatedModel& model, double t);

/// (Delta x)^2(t) = (hbar/4 m omega0) alpha^2(t).
double variance_x(const ValidatedModel& model, double t);

}  // namespace dlab::classical
