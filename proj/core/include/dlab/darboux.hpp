#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "dlab/grid.hpp"
#include "dlab/modes.hpp"
#include "dlab/oscillator.hpp"

namespace dlab::darboux {

using modes::HermiteGaussBasis;
using modes::ModeExpansion;
using verify::cplx;
using verify::Grid1D;
using verify::StateField;

/// Transformation parameters: eigenvalue epsilon and seed coefficients.
struct DarbouxSpec {
    double epsilon = -0.5;
    double k_a = 0.89;
    double k_b = 1.0;
};

/// F(chi) together with its logarithmic derivatives:
///   dlog = F'/F, d2log = (F'/F)' = F''/F - (F'/F)^2.
struct FValue {
    double F = 0.0;
    double dlog = 0.0;
    double d2log = 0.0;
};

/// Seed profile F. epsilon = -1/2 and -3/2 use the closed erf forms, any
/// other epsilon the two-branch 1F1 combination. chi^2 must stay within
/// the 1F1 support (OutOfSupport otherwise).
FValue f_function(const DarbouxSpec& spec, double chi);

struct NodelessReport {
    bool pass = false;
    double chi_max = 0.0;        // scanned half-window
    double min_abs_value = 0.0;  // min |e^{-chi^2/2} F| over the scan
    double chi_at_min = 0.0;
    /// Bisection-refined zero location when pass == false.
    std::optional<double> zero_location;
};

/// Dense scan of e^{-chi^2/2} F over [-chi_max, chi_max] (step 1e-3) with
/// sign-change detection and bisection refinement.
NodelessReport certify_nodeless(const DarbouxSpec& spec, double chi_max);

enum class LForm { Primitive, Ladder };

/// A certified Darboux transformation of the oscillator model carried by
/// `basis`. Construction certifies nodelessness (CertificationFailure on
/// a zero crossing), fixes the intertwiner gauge
///   L = l(t) [d/dx + beta],  l(t) = sqrt(hbar/(m omega0)) alpha(t),
/// and caches the t0 normalization constants of psi_n = L phi_{n-1}/N_n
/// plus the missing state psi_0 = 1/(l u*) (NotNormalizable when its norm
/// diverges with window growth).
class DarbouxTransform {
public:
    struct Options {
        /// chi half-window for certification; clamped to the branch support.
        double chi_window = 8.0;
        /// Grid used for the one-time normalization quadratures at t0.
        Grid1D norm_grid{-20.0, 20.0, 2001};
    };

    DarbouxTransform(HermiteGaussBasis basis, DarbouxSpec spec);
    DarbouxTransform(HermiteGaussBasis basis, DarbouxSpec spec, Options opt);

    const HermiteGaussBasis& basis() const { return basis_; }
    const DarbouxSpec& spec() const { return spec_; }
    const NodelessReport& certification() const { return cert_; }
    double window() const { return window_; }

    /// Gauge constant l0 = sqrt(hbar/(m omega0)); l(t) = l0 alpha(t).
    double ell0() const { return ell0_; }
    double ell(double t) const { return ell0_ * basis_.model().alpha(t); }

    FValue f_at(double chi) const;
    /// F'/F over the full branch support (log-space path, wider than f_at).
    double dlog_f(double chi) const;
    /// Half-width of the evaluable chi range for this branch.
    double chi_support() const;

    /// Transformation function u = e^{-i eps theta} e^{i xi} e^{-chi^2/2} F/sqrt(alpha).
    cplx u_function(double x, double t) const;

    double potential_v0(double x) const;
    /// V1 = V0 + (2 hbar omega0/alpha^2) (1 - d2log(chi)).
    double potential_v1(double x, double t) const;
    /// V1 over a whole grid with one frame build.
    std::vector<double> sample_potential_v1(const Grid1D& grid, double t) const;

    /// beta = -(i/hbar)<p> - 2 i S (x-<x>) - (kappa/alpha) F'/F.
    cplx beta_function(double x, double t) const;

    /// G = (m/hbar^2)(V0 - V1).
    double g_operator(double x, double t) const;

    /// Normalized psi_n; n = 0 is the missing state.
    cplx psi_n(int n, double x, double t) const;
    cplx missing_state(double x, double t) const;
    bool missing_normalizable() const { return missing_ok_; }
    /// ||L phi_{n-1}||(t0) for n >= 1; missing-state raw norm for n = 0.
    double norm_constant(int n) const;

    StateField sample_psi_n(int n, const Grid1D& grid, double t) const;
    std::vector<StateField> sample_psi_family(int n_max, const Grid1D& grid,
                                              double t) const;

    /// Intertwiner on a sampled field; both realizations agree to
    /// discretization error and cross-validate each other.
    StateField apply_L(const StateField& field, LForm form = LForm::Primitive) const;
    /// Adjoint: L^dag f = l(t) [-f' + conj(beta) f].
    StateField apply_L_dagger(const StateField& field) const;

    /// I_G = I0 [ I/I0 - (2 hbar^2 alpha^2/m^2) G ]; I0 defaults to hbar.
    StateField apply_invariant_IG(const StateField& field,
                                  std::optional<double> I0 = std::nullopt) const;

private:
    HermiteGaussBasis basis_;
    DarbouxSpec spec_;
    double window_ = 8.0;
    NodelessReport cert_;
    double ell0_ = 1.0;
    int sign_F_ = 1;
    bool missing_ok_ = false;
    std::vector<double> norms_;  // index n; [0] = missing raw norm
    Grid1D norm_grid_{-20.0, 20.0, 2001};

    struct FLog {
        double log_abs = 0.0;  // ln|F|
        int sign = 1;
        double dlog = 0.0;
        double d2log = 0.0;
    };
    FLog f_log(double chi) const;
    cplx raw_psi(const modes::Frame& fr, int n, double x) const;
    cplx raw_missing(const modes::Frame& fr, double x) const;
    void build_norm_table();
};

/// Free-function façade mirroring the operation names.
inline cplx u_function(const DarbouxTransform& m, double x, double t) {
    return m.u_function(x, t);
}
inline double potential_v1(const DarbouxTransform& m, double x, double t) {
    return m.potential_v1(x, t);
}
inline cplx beta_function(const DarbouxTransform& m, double x, double t) {
    return m.beta_function(x, t);
}
inline cplx psi_n(const DarbouxTransform& m, int n, double x, double t) {
    return m.psi_n(n, x, t);
}
inline cplx missing_state(const DarbouxTransform& m, double x, double t) {
    return m.missing_state(x, t);
}
inline double g_operator(const DarbouxTransform& m, double x, double t) {
    return m.g_operator(x, t);
}
inline StateField apply_L(const DarbouxTransform& m, const StateField& f,
                          LForm form = LForm::Primitive) {
    return m.apply_L(f, form);
}
NodelessReport certify_nodeless(const DarbouxTransform& model, double chi_max);

/// B ladder operators realized on mode-expansion coefficients over {psi_n}:
/// raise: out[n+1] = sqrt(n+1) in[n]; lower: out[n-1] = sqrt(n) in[n].
ModeExpansion ladder_B(modes::Ladder direction, const ModeExpansion& expansion);

}  // namespace dlab::darboux
