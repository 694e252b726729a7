#include "dlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dlab::verify {

namespace {

void check_compatible(const StateField& f, const StateField& g) {
    if (!(f.grid == g.grid))
        throw GridMismatch("inner_product: fields live on different grids");
    if (f.time != g.time)
        throw TimeMismatch("inner_product: t = " + std::to_string(f.time) +
                           " vs " + std::to_string(g.time) +
                           " (equal-time evaluation required)");
}

}  // namespace

cplx inner_product(const StateField& f, const StateField& g, QuadRule rule) {
    check_compatible(f, g);
    const std::size_t n = f.values.size();
    std::vector<cplx> prod(n);
    for (std::size_t i = 0; i < n; ++i)
        prod[i] = std::conj(f.values[i]) * g.values[i];

    const double h = f.grid.spacing();
    if (rule == QuadRule::Trapezoid) {
        prod.front() *= 0.5;
        prod.back() *= 0.5;
        return pairwise_sum(prod) * h;
    }

    // Composite Simpson (4th-order closed Newton-Cotes); a 3/8 tail handles
    // an odd interval count.
    std::size_t simpson_end = n - 1;           // index of last node of the Simpson part
    bool tail38 = false;
    if ((n - 1) % 2 != 0) {
        if (n < 4)
            throw GridMismatch("inner_product: too few points for Newton-Cotes");
        simpson_end = n - 4;
        tail38 = true;
    }
    std::vector<cplx> w(n, cplx{0.0, 0.0});
    if (simpson_end >= 2) {
        w[0] += prod[0] * (h / 3.0);
        w[simpson_end] += prod[simpson_end] * (h / 3.0);
        for (std::size_t i = 1; i < simpson_end; ++i)
            w[i] += prod[i] * (h / 3.0) * ((i % 2 == 1) ? 4.0 : 2.0);
    }
    if (tail38) {
        const double c = 3.0 * h / 8.0;
        w[n - 4] += prod[n - 4] * c;
        w[n - 3] += prod[n - 3] * (3.0 * c);
        w[n - 2] += prod[n - 2] * (3.0 * c);
        w[n - 1] += prod[n - 1] * c;
    }
    return pairwise_sum(w);
}

StateField deriv1(const StateField& f) {
    const int n = f.grid.n_points;
    const double h = f.grid.spacing();
    StateField out(f.grid, f.time);
    const auto& v = f.values;
    auto at = [&](int i) { return v[std::size_t(i)]; };
    for (int i = 2; i < n - 2; ++i)
        out.values[std::size_t(i)] =
            (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * h);
    out.values[0] =
        (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) /
        (12.0 * h);
    out.values[1] =
        (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) /
        (12.0 * h);
    out.values[std::size_t(n - 2)] =
        -(-3.0 * at(n - 1) - 10.0 * at(n - 2) + 18.0 * at(n - 3) - 6.0 * at(n - 4) +
          at(n - 5)) /
        (12.0 * h);
    out.values[std::size_t(n - 1)] =
        -(-25.0 * at(n - 1) + 48.0 * at(n - 2) - 36.0 * at(n - 3) +
          16.0 * at(n - 4) - 3.0 * at(n - 5)) /
        (12.0 * h);
    return out;
}

StateField deriv2(const StateField& f) {
    const int n = f.grid.n_points;
    const double h2 = f.grid.spacing() * f.grid.spacing();
    StateField out(f.grid, f.time);
    const auto& v = f.values;
    auto at = [&](int i) { return v[std::size_t(i)]; };
    for (int i = 2; i < n - 2; ++i)
        out.values[std::size_t(i)] = (-at(i - 2) + 16.0 * at(i - 1) - 30.0 * at(i) +
                                      16.0 * at(i + 1) - at(i + 2)) /
                                     (12.0 * h2);
    out.values[0] = (45.0 * at(0) - 154.0 * at(1) + 214.0 * at(2) - 156.0 * at(3) +
                     61.0 * at(4) - 10.0 * at(5)) /
                    (12.0 * h2);
    out.values[1] = (10.0 * at(0) - 15.0 * at(1) - 4.0 * at(2) + 14.0 * at(3) -
                     6.0 * at(4) + at(5)) /
                    (12.0 * h2);
    out.values[std::size_t(n - 2)] =
        (10.0 * at(n - 1) - 15.0 * at(n - 2) - 4.0 * at(n - 3) + 14.0 * at(n - 4) -
         6.0 * at(n - 5) + at(n - 6)) /
        (12.0 * h2);
    out.values[std::size_t(n - 1)] =
        (45.0 * at(n - 1) - 154.0 * at(n - 2) + 214.0 * at(n - 3) -
         156.0 * at(n - 4) + 61.0 * at(n - 5) - 10.0 * at(n - 6)) /
        (12.0 * h2);
    return out;
}

double derivative_error_estimate(const StateField& f) {
    const std::size_t n = f.values.size();
    double peak = 0.0;
    double d2peak = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        peak = std::max(peak, std::abs(f.values[i]));
        d2peak = std::max(d2peak, std::abs(f.values[i - 1] - 2.0 * f.values[i] +
                                           f.values[i + 1]));
    }
    if (peak == 0.0) return 0.0;
    // |delta2 f|/|f| ~ (h k)^2 for the dominant wavenumber k; the 4th-order
    // stencil error then scales like (h k)^4 / 30.
    const double s = d2peak / peak;
    return s * s / 30.0;
}

void require_resolved(const StateField& f) {
    const double est = derivative_error_estimate(f);
    if (est > 1e-4)
        throw GridTooCoarse("estimated relative derivative error " +
                            std::to_string(est) + " exceeds 1e-4");
}

GramResult gram_matrix(const std::vector<StateField>& fields, QuadRule rule) {
    const std::size_t n = fields.size();
    GramResult res;
    res.matrix.assign(n, std::vector<cplx>(n, cplx{0.0, 0.0}));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const cplx v = inner_product(fields[i], fields[j], rule);
            res.matrix[i][j] = v;
            res.matrix[j][i] = std::conj(v);
        }
    }
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const cplx d = res.matrix[i][j] - (i == j ? cplx{1.0, 0.0} : cplx{0.0, 0.0});
            row += std::abs(d);
        }
        dev = std::max(dev, row);
    }
    res.deviation_from_identity = dev;
    return res;
}

cplx rayleigh_quotient(const std::function<StateField(const StateField&)>& op,
                       const StateField& field) {
    const double nrm = field.norm();
    if (nrm <= 1e-12) throw ZeroNorm("rayleigh_quotient: norm below 1e-12");
    const StateField of = op(field);
    return inner_product(field, of) / (nrm * nrm);
}

namespace {

double residual_norms(const std::function<cplx(double, double)>& state,
                      const std::function<double(double, double)>& potential,
                      const Grid1D& grid, double t, double dt, double mass,
                      double hbar, double* state_norm) {
    StateField now = StateField::sample(grid, t, [&](double x) { return state(x, t); });
    StateField fwd = StateField::sample(grid, t, [&](double x) { return state(x, t + dt); });
    StateField bwd = StateField::sample(grid, t, [&](double x) { return state(x, t - dt); });
    require_resolved(now);
    const StateField lap = deriv2(now);
    std::vector<double> r2(now.values.size());
    const cplx ih{0.0, hbar};
    for (std::size_t i = 0; i < now.values.size(); ++i) {
        const double x = grid.x(int(i));
        const cplx dpsi_dt = (fwd.values[i] - bwd.values[i]) / (2.0 * dt);
        const cplx hpsi = -(hbar * hbar / (2.0 * mass)) * lap.values[i] +
                          potential(x, t) * now.values[i];
        r2[i] = std::norm(ih * dpsi_dt - hpsi);
    }
    r2.front() *= 0.5;
    r2.back() *= 0.5;
    *state_norm = now.norm();
    return std::sqrt(std::max(0.0, pairwise_sum(r2) * grid.spacing()));
}

}  // namespace

ResidualReport schrodinger_residual(
    const std::function<cplx(double, double)>& state,
    const std::function<double(double, double)>& potential,
    const Grid1D& grid, double t, double dt, double mass, double hbar) {
    ResidualReport rep;
    rep.dx = grid.spacing();
    rep.dt = dt;
    double nrm = 1.0;
    rep.abs_residual = residual_norms(state, potential, grid, t, dt, mass, hbar, &nrm);
    rep.rel_residual = rep.abs_residual / nrm;

    // Halve both dx and dt: every contribution to the residual is at least
    // second order, so the ratio calibrates the dominant error term.
    Grid1D fine(grid.x_min, grid.x_max, 2 * grid.n_points - 1);
    double nrm_fine = 1.0;
    const double fine_abs =
        residual_norms(state, potential, fine, t, 0.5 * dt, mass, hbar, &nrm_fine);
    const double fine_rel = fine_abs / nrm_fine;
    if (fine_rel > 0.0 && rep.rel_residual > 0.0)
        rep.convergence_order_estimate = std::log2(rep.rel_residual / fine_rel);
    return rep;
}

Grid1D widen_to_support(const Grid1D& grid, double t,
                        const std::function<cplx(double, double)>& f,
                        double threshold, double max_halfwidth) {
    const double h = grid.spacing();
    double scale = 0.0;
    for (int i = 0; i < grid.n_points; i += std::max(1, grid.n_points / 64))
        scale = std::max(scale, std::abs(f(grid.x(i), t)));
    if (scale == 0.0) return grid;

    double lo = grid.x_min;
    double hi = grid.x_max;
    const int chunk = 50;
    auto needs = [&](double x) { return std::abs(f(x, t)) > threshold * scale; };
    while (needs(lo) && lo > -max_halfwidth) lo -= chunk * h;
    while (needs(hi) && hi < max_halfwidth) hi += chunk * h;
    const int extra_lo = int(std::round((grid.x_min - lo) / h));
    const int extra_hi = int(std::round((hi - grid.x_max) / h));
    if (extra_lo == 0 && extra_hi == 0) return grid;
    return Grid1D(grid.x_min - extra_lo * h, grid.x_max + extra_hi * h,
                  grid.n_points + extra_lo + extra_hi);
}

}  // namespace dlab::verify
