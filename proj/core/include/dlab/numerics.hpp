#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "dlab/grid.hpp"

namespace dlab::verify {

enum class QuadRule { Trapezoid, NewtonCotes4 };

/// <f|g> = Int conj(f) g dx, conjugate-linear in the first argument.
/// Requires identical grids and identical time stamps.
cplx inner_product(const StateField& f, const StateField& g,
                   QuadRule rule = QuadRule::Trapezoid);

/// First derivative, 4th-order central stencil with one-sided closures.
StateField deriv1(const StateField& f);

/// Second derivative, 4th-order central stencil with one-sided closures.
StateField deriv2(const StateField& f);

/// Estimated relative 4th-order differentiation error from the field's
/// resolved wavenumber content. Used by the GridTooCoarse guard.
double derivative_error_estimate(const StateField& f);

/// Throws GridTooCoarse when derivative_error_estimate exceeds the guard.
void require_resolved(const StateField& f);

struct GramResult {
    std::vector<std::vector<cplx>> matrix;
    double deviation_from_identity;  // infinity norm of G - I
};

/// Gram matrix of a family of fields on a common grid and time.
GramResult gram_matrix(const std::vector<StateField>& fields,
                       QuadRule rule = QuadRule::Trapezoid);

/// <f|O f>/<f|f>. Throws ZeroNorm when the norm is below 1e-12.
cplx rayleigh_quotient(const std::function<StateField(const StateField&)>& op,
                       const StateField& field);

struct ResidualReport {
    double abs_residual = 0.0;
    double rel_residual = 0.0;
    double dx = 0.0;
    double dt = 0.0;
    double convergence_order_estimate = 0.0;
};

/// Residual of i hbar dpsi/dt - [-(hbar^2/2m) d2/dx2 + V] psi on the grid.
/// state(x, t) must be evaluable at t +- dt; potential(x, t) pointwise.
/// The convergence order is estimated by halving both dx and dt.
ResidualReport schrodinger_residual(
    const std::function<cplx(double, double)>& state,
    const std::function<double(double, double)>& potential,
    const Grid1D& grid, double t, double dt, double mass, double hbar);

/// Widens [x_min, x_max] symmetrically in steps (same spacing) until the
/// boundary amplitude of `f` drops below `threshold` times the peak.
Grid1D widen_to_support(const Grid1D& grid, double t,
                        const std::function<cplx(double, double)>& f,
                        double threshold = 1e-13, double max_halfwidth = 60.0);

}  // namespace dlab::verify
