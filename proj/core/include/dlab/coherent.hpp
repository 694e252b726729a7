#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "dlab/darboux.hpp"
#include "dlab/grid.hpp"
#include "dlab/modes.hpp"

namespace dlab::coherent {

using darboux::DarbouxTransform;
using modes::HermiteGaussBasis;
using modes::ModeExpansion;
using modes::Quadratures;
using verify::cplx;
using verify::Grid1D;
using verify::StateField;

/// Truncation cap that keeps the Poisson tail of |c_n|^2 below 1e-14:
/// |z|^2 + 10 sqrt(|z|^2 + 1), clamped to the mode cap.
int coherent_cap(cplx z);

/// Coefficients c_n = e^{-|z|^2/2} z^n / sqrt(n!) up to `cap` (auto-chosen
/// when omitted). Strict mode rejects caps whose truncated tail exceeds
/// 1e-14 (CapTooSmall); clamped mode keeps the cap and accepts the loss.
ModeExpansion coherent_coeffs(cplx z, std::optional<int> cap = std::nullopt,
                              bool clamped = false);

/// Squared-norm tail 1 - sum |c_n|^2 of a coefficient vector.
double truncation_tail(const ModeExpansion& expansion);

/// Coherent state of the A-ladder over phi_n, closed Gaussian form.
cplx phi_z(const HermiteGaussBasis& basis, cplx z, double x, double t);
StateField sample_phi_z(const HermiteGaussBasis& basis, cplx z,
                        const Grid1D& grid, double t);

/// A coherent label bound to a transform. Caches the coefficient vector
/// and the t0 normalization of psi_z = L phi_z.
class CoherentState {
public:
    CoherentState(const DarbouxTransform& model, cplx z, bool clamped = false);

    cplx z() const { return z_; }
    const ModeExpansion& coeffs() const { return coeffs_; }
    /// ||L phi_z|| at t0 (conserved by the deformed evolution).
    double psi_norm() const { return psi_norm_; }

    cplx phi_z(double x, double t) const;
    StateField sample_phi_z(const Grid1D& grid, double t) const;

    /// psi_z = L phi_z / ||L phi_z||, via the closed form
    /// [ -l0 kappa F'/F + 2 z e^{-i theta} ] phi_z.
    cplx psi_z(double x, double t) const;
    StateField sample_psi_z(const Grid1D& grid, double t) const;

    /// Naive B-ladder analog: sum_n c_n psi_n (n = 0 is the missing state).
    StateField psi_tilde_z(const Grid1D& grid, double t) const;

private:
    const DarbouxTransform* model_;
    cplx z_;
    ModeExpansion coeffs_;
    double psi_norm_ = 1.0;
};

/// Free-function forms of the named operations.
cplx psi_z(const DarbouxTransform& model, cplx z, double x, double t);
StateField sample_psi_z(const DarbouxTransform& model, cplx z,
                        const Grid1D& grid, double t);
StateField psi_tilde_z(const DarbouxTransform& model, cplx z,
                       const Grid1D& grid, double t);

/// Which ladder realization supplies the quadratures: A acts on sampled
/// fields through the grid ladders, B on coefficient vectors over psi_n.
enum class Channel { A, B };

/// dq, dp and their product for a normalized state. Mismatched
/// channel/argument combinations raise ConfigError.
Quadratures quadrature_stats(const StateField& field, Channel which,
                             const HermiteGaussBasis& basis);
Quadratures quadrature_stats(const ModeExpansion& expansion, Channel which);

}  // namespace dlab::coherent
