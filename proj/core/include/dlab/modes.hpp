#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "dlab/grid.hpp"
#include "dlab/numerics.hpp"
#include "dlab/oscillator.hpp"

namespace dlab::modes {

using classical::TrajectorySpec;
using classical::ValidatedModel;
using verify::cplx;
using verify::Grid1D;
using verify::StateField;

/// Expansion cap for mode indices (coherent-series truncation limit).
inline constexpr int kModeCap = 64;

enum class Ladder { Raise, Lower };

/// Quadrature statistics of a state: dq = Delta q, dp = Delta p.
struct Quadratures {
    double dq = 0.0;
    double dp = 0.0;
    double product = 0.0;
};

/// Coefficients over an orthonormal mode family (phi_n or psi_n).
struct ModeExpansion {
    std::vector<cplx> coeff;

    int top_index() const;  // highest index with a nonzero coefficient, -1 if none
    double norm() const;
};

/// Per-time bundle of the classical quantities every mode formula needs.
struct Frame {
    double t = 0.0;
    double alpha = 1.0;
    double alpha_dot = 0.0;
    double theta = 0.0;
    double x_mean = 0.0;
    double p_mean = 0.0;
    cplx S{0.0, 0.0};
};

/// Hermite-Gauss wave packets phi_n(x,t) of the stationary oscillator:
///   phi_n = c_n e^{-i(n+1/2)theta} e^{i xi} e^{-chi^2/2} H_n(chi) / sqrt(alpha)
/// with chi = kappa (x - <x>)/alpha, kappa = sqrt(2 m omega0/hbar) and
/// c_n = (2 m omega0/(pi hbar))^{1/4} / sqrt(2^n n!).
/// Requires lambda = m omega0/hbar (the width-channel gauge the ladder
/// algebra closes in).
class HermiteGaussBasis {
public:
    HermiteGaussBasis(ValidatedModel model, TrajectorySpec traj);

    const ValidatedModel& model() const { return model_; }
    const TrajectorySpec& traj() const { return traj_; }

    double kappa() const { return kappa_; }
    Frame frame(double t) const;

    double chi(const Frame& fr, double x) const;
    double chi(double x, double t) const { return chi(frame(t), x); }

    double xi_phase(const Frame& fr, double x) const;
    double xi_phase(double x, double t) const { return xi_phase(frame(t), x); }

    cplx phi_n(const Frame& fr, int n, double x) const;
    cplx phi_n(int n, double x, double t) const { return phi_n(frame(t), n, x); }

    StateField sample_phi_n(int n, const Grid1D& grid, double t) const;
    /// phi_0 .. phi_{n_max} in one sweep (shared Hermite recurrence).
    std::vector<StateField> sample_phi_family(int n_max, const Grid1D& grid,
                                              double t) const;

private:
    ValidatedModel model_;
    TrajectorySpec traj_;
    double kappa_ = 1.0;
};

/// Normalized ladder operators on the grid:
///   A- = +i e^{+i theta} (alpha/sqrt(lambda)) [ (p-<p>)/(2 hbar) - S  (x-<x>) ]
///   A+ = -i e^{-i theta} (alpha/sqrt(lambda)) [ (p-<p>)/(2 hbar) - S* (x-<x>) ]
/// satisfying [A-, A+] = 1, A- phi_n = sqrt(n) phi_{n-1},
/// A+ phi_n = sqrt(n+1) phi_{n+1}.
StateField apply_A(Ladder direction, const StateField& field,
                   const HermiteGaussBasis& basis);

/// Dynamical invariant
///   I/I0 = (alpha^2/m^2) p^2 - (alpha_dot alpha/m) {x,p}
///          + (alpha_dot^2 + 4 omega0^2/alpha^2) x^2.
/// I0 defaults to hbar.
StateField apply_invariant_I(const StateField& field, const ValidatedModel& model,
                             std::optional<double> I0 = std::nullopt);

}  // namespace dlab::modes
