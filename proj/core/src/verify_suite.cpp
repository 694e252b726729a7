#include "dlab/verify_suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "dlab/coherent.hpp"
#include "dlab/darboux.hpp"
#include "dlab/errors.hpp"
#include "dlab/modes.hpp"
#include "dlab/numerics.hpp"
#include "dlab/oscillator.hpp"

#include "json.hpp"

namespace dlab::verify {

namespace {

constexpr double kPi = std::numbers::pi;

using classical::ValidatedModel;
using darboux::DarbouxTransform;
using modes::Frame;
using modes::HermiteGaussBasis;
using modes::Ladder;

CheckResult chk_small(std::string name, double measured, double bound,
                      std::string note = {}) {
    CheckResult r;
    r.name = std::move(name);
    r.measured = measured;
    r.bound = bound;
    r.pass = std::isfinite(measured) && measured <= bound;
    r.note = std::move(note);
    return r;
}

CheckResult chk_large(std::string name, double measured, double floor_value,
                      std::string note = {}) {
    CheckResult r;
    r.name = std::move(name);
    r.measured = measured;
    r.bound = floor_value;
    r.expect_large = true;
    r.pass = std::isfinite(measured) && measured > floor_value;
    r.note = std::move(note);
    return r;
}

CheckResult chk_range(std::string name, double measured, double lo, double hi) {
    CheckResult r;
    r.name = std::move(name);
    r.measured = measured;
    r.bound = hi;
    r.pass = std::isfinite(measured) && measured >= lo && measured <= hi;
    std::ostringstream os;
    os << "expected in [" << lo << ", " << hi << "]";
    r.note = os.str();
    return r;
}

StateField combine(const StateField& a, const StateField& b, cplx ca, cplx cb) {
    if (!(a.grid == b.grid)) throw GridMismatch("combine: grid mismatch");
    StateField out(a.grid, a.time);
    for (std::size_t k = 0; k < a.values.size(); ++k)
        out.values[k] = ca * a.values[k] + cb * b.values[k];
    return out;
}

double diff_norm(const StateField& a, const StateField& b) {
    return combine(a, b, 1.0, -1.0).norm();
}

/// Grid of spacing dx centered on the packet, clamped to the F support wall.
Grid1D centered_grid(const Frame& fr, double half, double dx,
                     const DarbouxTransform* tr, double kappa) {
    double lo = fr.x_mean - half;
    double hi = fr.x_mean + half;
    if (tr) {
        const double wall = 0.95 * tr->chi_support() * fr.alpha / kappa;
        lo = std::max(lo, fr.x_mean - wall);
        hi = std::min(hi, fr.x_mean + wall);
    }
    const int n = std::max(17, int(std::floor((hi - lo) / dx)) + 1);
    return Grid1D{lo, lo + double(n - 1) * dx, n};
}

double rel_spread(const std::vector<double>& vals) {
    const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
    const double scale = std::abs(*mn) + std::abs(*mx);
    if (scale == 0.0) return 0.0;
    return 2.0 * (*mx - *mn) / scale;
}

// ---------------------------------------------------------------- classical

SuiteReport classical_suite(const scenario::Scenario& sc) {
    SuiteReport rep;
    rep.suite = "classical";
    const ValidatedModel model = sc.model();
    const auto& p = model.params();
    const double w0 = p.omega0;
    const double t0 = p.t0;
    const double q = 2.0 * p.hbar * model.lambda() / (p.mass * w0);

    {  // alpha solves the Ermakov equation
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double t = t0 + 4.0 * kPi / w0 * double(i) / 999.0;
            const double al = model.alpha(t);
            const double r = model.alpha_ddot(t) + w0 * w0 * al -
                             w0 * w0 * q * q / (al * al * al);
            worst = std::max(worst, std::abs(r));
        }
        rep.checks.push_back(chk_small("ermakov_equation_residual", worst, 1e-9));
    }

    {  // S solves the Riccati equation
        double worst = 0.0;
        const double dt = 1e-6;
        for (int i = 0; i < 200; ++i) {
            const double t = t0 + 4.0 * kPi / w0 * double(i) / 199.0;
            const cplx sdot =
                (classical::s_complex(model, t + dt) - classical::s_complex(model, t - dt)) /
                (2.0 * dt);
            const cplx s = classical::s_complex(model, t);
            const cplx r = sdot + (2.0 * p.hbar / p.mass) * s * s +
                           p.mass * w0 * w0 / (2.0 * p.hbar);
            worst = std::max(worst, std::abs(r));
        }
        rep.checks.push_back(chk_small("riccati_residual", worst, 1e-8));
    }

    {  // integral theta equals the arctan form modulo its branch period
        double worst = 0.0;
        const double unit = 2.0 * kPi / q;  // jump per principal-branch wrap
        for (int i = 1; i <= 120; ++i) {
            const double t = t0 + 20.0 * double(i) / 120.0;
            const double d =
                classical::theta(model, t) - classical::theta_closed_form(model, t);
            const double m = d / unit;
            worst = std::max(worst, std::abs(m - std::round(m)) * unit);
        }
        rep.checks.push_back(
            chk_small("theta_integral_vs_closed_form", worst, 1e-7));
    }

    {  // <x>, <p> satisfy the classical equations of motion
        double worst = 0.0;
        const double dt = 1e-5;
        for (int i = 0; i < 300; ++i) {
            const double t = t0 + 25.0 * double(i) / 299.0;
            const auto c = classical::trajectory(p, sc.trajectory, t);
            const auto fp = classical::trajectory(p, sc.trajectory, t + dt);
            const auto fm = classical::trajectory(p, sc.trajectory, t - dt);
            const double xd = (fp.x_mean - fm.x_mean) / (2.0 * dt);
            const double pd = (fp.p_mean - fm.p_mean) / (2.0 * dt);
            worst = std::max(worst, std::abs(xd - c.p_mean / p.mass));
            worst = std::max(worst, std::abs(pd + p.mass * w0 * w0 * c.x_mean));
        }
        rep.checks.push_back(
            chk_small("trajectory_equations_of_motion", worst, 1e-8));
    }

    {  // 4 m omega0 Var(x) / hbar tracks alpha^2
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double t = t0 + 12.0 * double(i) / 199.0;
            const double a2 = model.alpha(t) * model.alpha(t);
            const double v =
                classical::variance_x(model, t) * 4.0 * p.mass * w0 / p.hbar;
            worst = std::max(worst, std::abs(v - a2) / a2);
        }
        rep.checks.push_back(chk_small("variance_width_channel", worst, 1e-12));
    }

    return rep;
}

// -------------------------------------------------------------------- modes

SuiteReport modes_suite(const scenario::Scenario& sc) {
    SuiteReport rep;
    rep.suite = "modes";
    const HermiteGaussBasis basis = sc.basis();
    const ValidatedModel& model = basis.model();
    const auto& p = model.params();
    const double t0 = p.t0;
    const double kappa = basis.kappa();
    const std::vector<double> times3 = {t0, t0 + 1.3, t0 + 6.0};
    const bool at_rest =
        sc.trajectory.x0 == 0.0 && sc.trajectory.p0 == 0.0;

    {  // orthonormality of phi_0..phi_7
        double worst = 0.0;
        for (double t : times3) {
            const Frame fr = basis.frame(t);
            const double half = (std::sqrt(15.0) + 8.0) * fr.alpha / kappa;
            const Grid1D g = centered_grid(fr, half, 0.02, nullptr, kappa);
            const auto fam = basis.sample_phi_family(7, g, t);
            worst = std::max(worst,
                             gram_matrix(fam).deviation_from_identity);
        }
        rep.checks.push_back(chk_small("phi_gram_orthonormality", worst, 1e-8));
    }

    {  // phi_2 solves the Schroedinger equation; residual shrinks at 2nd order
        const Grid1D g{-15.0, 15.0, 3001};
        auto state = [&](double x, double t) { return basis.phi_n(2, x, t); };
        auto pot = [&](double x, double) {
            return 0.5 * p.mass * p.omega0 * p.omega0 * x * x;
        };
        const ResidualReport rr =
            schrodinger_residual(state, pot, g, t0 + 1.1, 3e-4, p.mass, p.hbar);
        rep.checks.push_back(
            chk_small("phi_schrodinger_residual", rr.rel_residual, 1e-5));
        rep.checks.push_back(chk_range("phi_schrodinger_order",
                                       rr.convergence_order_estimate, 1.7, 4.3));
    }

    {  // A- and A+ shift mode index with sqrt weights
        double worst = 0.0;
        for (double t : {t0, t0 + 2.6}) {
            const Frame fr = basis.frame(t);
            const double half = (std::sqrt(13.0) + 8.0) * fr.alpha / kappa;
            const Grid1D g = centered_grid(fr, half, 0.01, nullptr, kappa);
            const auto fam = basis.sample_phi_family(6, g, t);
            for (int n = 0; n <= 5; ++n) {
                const auto low = modes::apply_A(Ladder::Lower, fam[std::size_t(n)], basis);
                const auto hig = modes::apply_A(Ladder::Raise, fam[std::size_t(n)], basis);
                if (n > 0)
                    worst = std::max(worst,
                                     diff_norm(low, combine(fam[std::size_t(n - 1)],
                                                            fam[std::size_t(n - 1)],
                                                            std::sqrt(double(n)), 0.0)));
                else
                    worst = std::max(worst, low.norm());
                worst = std::max(
                    worst, diff_norm(hig, combine(fam[std::size_t(n + 1)],
                                                  fam[std::size_t(n + 1)],
                                                  std::sqrt(double(n + 1)), 0.0)));
            }
        }
        rep.checks.push_back(chk_small("ladder_actions_phi", worst, 1e-6));
    }

    {  // minimum uncertainty of the ground packet in the A quadratures
        const double t = t0 + 1.7;
        const Frame fr = basis.frame(t);
        const Grid1D g =
            centered_grid(fr, (1.0 + 9.0) * fr.alpha / kappa, 0.02, nullptr, kappa);
        const auto f0 = basis.sample_phi_n(0, g, t);
        const auto st = coherent::quadrature_stats(f0, coherent::Channel::A, basis);
        rep.checks.push_back(
            chk_small("phi0_uncertainty_product", std::abs(st.product - 0.5), 1e-6));
    }

    {  // sqrt(alpha)|phi_n| at fixed chi is a constant of the motion
        double worst = 0.0;
        for (double chi : {0.4, 1.2}) {
            for (int n : {0, 3}) {
                std::vector<double> vals;
                for (double t : times3) {
                    const Frame fr = basis.frame(t);
                    const double x = fr.x_mean + chi * fr.alpha / kappa;
                    vals.push_back(std::sqrt(fr.alpha) *
                                   std::abs(basis.phi_n(fr, n, x)));
                }
                worst = std::max(worst, rel_spread(vals));
            }
        }
        rep.checks.push_back(
            chk_small("mode_phase_relation_amplitude", worst, 1e-10));
    }

    if (at_rest) {
        {  // Rayleigh quotient of I on phi_n is time-independent
            auto op = [&](const StateField& f) {
                return modes::apply_invariant_I(f, model);
            };
            double worst = 0.0;
            for (int n : {0, 1, 3}) {
                std::vector<double> vals;
                for (double t : times3) {
                    const Frame fr = basis.frame(t);
                    const double half =
                        (std::sqrt(2.0 * n + 1.0) + 9.0) * fr.alpha / kappa;
                    const Grid1D g = centered_grid(fr, half, 0.01, nullptr, kappa);
                    const auto f = basis.sample_phi_n(n, g, t);
                    vals.push_back(std::real(rayleigh_quotient(op, f)));
                }
                worst = std::max(worst, rel_spread(vals));
            }
            rep.checks.push_back(
                chk_small("invariant_I_rayleigh_constancy", worst, 1e-5));
        }

        {  // constant-alpha wells: I eigenvalues (4 hbar omega0 I0/m)(n + 1/2)
            const double lam = classical::default_lambda(p);
            const double qq = 2.0 * p.hbar * lam / (p.mass * p.omega0);
            const ValidatedModel cm =
                classical::validate(p, classical::ErmakovSpec{qq, qq, lam});
            const HermiteGaussBasis cb(cm, classical::TrajectorySpec{0.0, 0.0});
            auto op = [&](const StateField& f) {
                return modes::apply_invariant_I(f, cm);
            };
            double worst = 0.0;
            const double t = t0 + 0.8;
            const Frame fr = cb.frame(t);
            const Grid1D g = centered_grid(
                fr, (3.0 + 9.0) * fr.alpha / kappa, 0.01, nullptr, kappa);
            for (int n = 0; n <= 4; ++n) {
                const auto f = cb.sample_phi_n(n, g, t);
                const double want =
                    4.0 * p.hbar * p.omega0 * p.hbar / p.mass * (n + 0.5);
                const double got = std::real(rayleigh_quotient(op, f));
                worst = std::max(worst, std::abs(got - want) / std::abs(want));
            }
            rep.checks.push_back(
                chk_small("invariant_I_constant_alpha_eigenvalues", worst, 1e-6));
        }
    }

    return rep;
}

// ------------------------------------------------------------------ darboux

/// H phi on the grid for a sampled potential.
StateField apply_hamiltonian(const StateField& f, const std::vector<double>& v,
                             double mass, double hbar) {
    const StateField d2 = deriv2(f);
    StateField out(f.grid, f.time);
    const double kin = -hbar * hbar / (2.0 * mass);
    for (std::size_t k = 0; k < f.values.size(); ++k)
        out.values[k] = kin * d2.values[k] + v[k] * f.values[k];
    return out;
}

SuiteReport darboux_suite(const scenario::Scenario& sc) {
    SuiteReport rep;
    rep.suite = "darboux";
    const DarbouxTransform tr = sc.transform();
    const HermiteGaussBasis& basis = tr.basis();
    const ValidatedModel& model = basis.model();
    const auto& p = model.params();
    const double t0 = p.t0;
    const double kappa = basis.kappa();
    const double hw = p.hbar * p.omega0;
    const bool at_rest =
        sc.trajectory.x0 == 0.0 && sc.trajectory.p0 == 0.0;
    const std::vector<double> times3 = {t0, t0 + 1.3, t0 + 6.0};

    {  // the seed family is nodeless on the working window
        const auto& c = tr.certification();
        std::ostringstream os;
        os << "min |e^{-chi^2/2} F| = " << c.min_abs_value << " at chi = "
           << c.chi_at_min;
        rep.checks.push_back(
            chk_small("nodeless_certification", c.pass ? 0.0 : 1.0, 0.5, os.str()));
    }

    {  // primitive (derivative) and ladder forms of L agree
        const double t = t0 + 0.9;
        const Frame fr = basis.frame(t);
        const double half = (std::sqrt(11.0) + 6.0) * fr.alpha / kappa;
        const Grid1D g = centered_grid(fr, half, 0.002, &tr, kappa);
        const auto fam = basis.sample_phi_family(5, g, t);
        double worst = 0.0;
        for (const auto& f : fam) {
            const auto prim = tr.apply_L(f, darboux::LForm::Primitive);
            const auto ladd = tr.apply_L(f, darboux::LForm::Ladder);
            worst = std::max(worst, diff_norm(prim, ladd) /
                                        std::max(ladd.norm(), 1e-30));
        }
        rep.checks.push_back(chk_small("l_form_agreement", worst, 1e-6));
    }

    {  // intertwining L T0 = T1 L on a solution and on a generic field
        const double t = t0 + 0.8;
        const double dt = 1e-4;
        const Frame fr = basis.frame(t);
        const Grid1D g = centered_grid(fr, 10.0, 0.002, &tr, kappa);
        std::vector<double> v0(std::size_t(g.n_points));
        for (int i = 0; i < g.n_points; ++i)
            v0[std::size_t(i)] = tr.potential_v0(g.x(i));
        const std::vector<double> v1 = tr.sample_potential_v1(g, t);

        auto residual = [&](auto&& fieldAt) {
            const StateField f0 = fieldAt(t);
            const StateField fp = fieldAt(t + dt);
            const StateField fm = fieldAt(t - dt);
            const cplx w = cplx{0.0, p.hbar} / (2.0 * dt);
            // L applied only to smooth fields; the near-cancellation for a
            // solution happens in the final subtraction, not inside L.
            StateField fp_t(g, t);
            fp_t.values = fp.values;
            StateField fm_t(g, t);
            fm_t.values = fm.values;
            // lhs = L(t) (i hbar d/dt - H0) f
            const StateField lhs =
                combine(combine(tr.apply_L(fp_t), tr.apply_L(fm_t), w, -w),
                        tr.apply_L(apply_hamiltonian(f0, v0, p.mass, p.hbar)),
                        1.0, -1.0);
            // rhs = (i hbar d/dt - H1) L f, with L moving in time
            const StateField lf0 = tr.apply_L(f0);
            const StateField rhs =
                combine(combine(tr.apply_L(fp), tr.apply_L(fm), w, -w),
                        apply_hamiltonian(lf0, v1, p.mass, p.hbar), 1.0, -1.0);
            return diff_norm(lhs, rhs) / (hw * std::max(lf0.norm(), 1e-30));
        };

        const double sol = residual(
            [&](double tt) { return basis.sample_phi_n(2, g, tt); });
        auto bump = [&](double tt) {
            return StateField::sample(g, tt, [&](double x) {
                const double s = x - fr.x_mean - 1.0;
                return cplx{std::exp(-0.5 * s * s), 0.0};
            });
        };
        const double gen = residual(bump);
        rep.checks.push_back(chk_small("intertwining_solution_field", sol, 1e-4));
        rep.checks.push_back(chk_small("intertwining_generic_field", gen, 1e-4));

        // negative control: a phi_n is NOT a solution of the deformed equation
        const StateField f0 = basis.sample_phi_n(2, g, t);
        const StateField fp = basis.sample_phi_n(2, g, t + dt);
        const StateField fm = basis.sample_phi_n(2, g, t - dt);
        const cplx ih{0.0, p.hbar};
        const StateField t1f =
            combine(combine(fp, fm, ih / (2.0 * dt), -ih / (2.0 * dt)),
                    apply_hamiltonian(f0, v1, p.mass, p.hbar), 1.0, -1.0);
        rep.checks.push_back(chk_large("intertwining_negative_control",
                                       t1f.norm() / (hw * f0.norm()), 0.05,
                                       "phi_2 must fail the deformed equation"));
    }

    {  // V1 from the operator route: V0 + i hbar d/dt ln l + (hbar^2/m) beta_x
        const double t = t0 + 1.3;
        const double dtl = 3e-6;
        const double h = 1e-4;
        const Frame fr = basis.frame(t);
        const double lnl_dot =
            (std::log(tr.ell(t + dtl)) - std::log(tr.ell(t - dtl))) / (2.0 * dtl);
        double im_worst = 0.0;
        double re_worst = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double chi = -6.0 + 12.0 * double(i) / 100.0;
            const double x = fr.x_mean + chi * fr.alpha / kappa;
            const cplx dbeta =
                (tr.beta_function(x + h, t) - tr.beta_function(x - h, t)) /
                (2.0 * h);
            const cplx v1b = tr.potential_v0(x) + cplx{0.0, p.hbar} * lnl_dot +
                             p.hbar * p.hbar / p.mass * dbeta;
            im_worst = std::max(im_worst, std::abs(std::imag(v1b)));
            re_worst =
                std::max(re_worst, std::abs(std::real(v1b) - tr.potential_v1(x, t)));
        }
        rep.checks.push_back(chk_small("v1_imaginary_part", im_worst, 1e-10));
        rep.checks.push_back(chk_small("v1_route_agreement", re_worst, 1e-7));
    }

    {  // reality condition: d^3/dx^3 of 2 arg(u) vanishes
        const double t = t0 + 1.3;
        const Frame fr = basis.frame(t);
        const double dx = 0.02;
        const Grid1D g = centered_grid(fr, 6.0, dx, &tr, kappa);
        std::vector<double> phase(std::size_t(g.n_points));
        for (int i = 0; i < g.n_points; ++i)
            phase[std::size_t(i)] = std::arg(tr.u_function(g.x(i), t));
        // unwrap, then third derivative on a coarse stride
        for (std::size_t k = 1; k < phase.size(); ++k) {
            while (phase[k] - phase[k - 1] > kPi) phase[k] -= 2.0 * kPi;
            while (phase[k] - phase[k - 1] < -kPi) phase[k] += 2.0 * kPi;
        }
        const int s = 10;
        const double he = s * dx;
        double worst = 0.0;
        for (int i = 2 * s; i < g.n_points - 2 * s; ++i) {
            const auto at = [&](int j) { return 2.0 * phase[std::size_t(j)]; };
            const double d3 = (-at(i - 2 * s) + 2.0 * at(i - s) - 2.0 * at(i + s) +
                               at(i + 2 * s)) /
                              (2.0 * he * he * he);
            worst = std::max(worst, std::abs(d3));
        }
        rep.checks.push_back(chk_small("realness_third_derivative", worst, 1e-8));
    }

    {  // epsilon = 1/2, k_b = 0 collapses to the pure width deformation
        const DarbouxTransform rt(basis, darboux::DarbouxSpec{0.5, 1.0, 0.0});
        double worst = 0.0;
        for (double t : {t0 + 0.4, t0 + 2.9}) {
            const Frame fr = basis.frame(t);
            const double shift = 2.0 * hw / (fr.alpha * fr.alpha);
            for (int i = 0; i <= 40; ++i) {
                const double x = fr.x_mean + (-5.0 + 0.25 * i) * fr.alpha / kappa;
                const double d =
                    rt.potential_v1(x, t) - rt.potential_v0(x) - shift;
                worst = std::max(worst, std::abs(d));
            }
        }
        rep.checks.push_back(chk_small("reduction_constant_shift", worst, 1e-12));

        const double t = t0 + 0.9;
        const Frame fr = basis.frame(t);
        const Grid1D g = centered_grid(fr, 8.0, 0.002, &rt, kappa);
        const auto fam = basis.sample_phi_family(4, g, t);
        const cplx ph = std::exp(cplx{0.0, -fr.theta});
        double lworst = rt.apply_L(fam[0], darboux::LForm::Primitive).norm();
        for (int n = 1; n <= 4; ++n) {
            const auto lf = rt.apply_L(fam[std::size_t(n)], darboux::LForm::Primitive);
            const auto want = combine(fam[std::size_t(n - 1)], fam[std::size_t(n - 1)],
                                      2.0 * ph * std::sqrt(double(n)), 0.0);
            lworst = std::max(lworst, diff_norm(lf, want));
        }
        rep.checks.push_back(chk_small("reduction_ladder_action", lworst, 1e-8));
    }

    if (tr.spec().epsilon == -0.5) {
        // the deformation is localized: far out V1 - V0 -> -2 hbar omega0/alpha^2
        double worst = 0.0;
        for (double t : {t0 + 0.6, t0 + 1.3}) {
            const Frame fr = basis.frame(t);
            const double shift = 2.0 * hw / (fr.alpha * fr.alpha);
            for (int i = 0; i <= 20; ++i) {
                const double chi = 6.5 + 0.05 * i;
                for (double sgn : {-1.0, 1.0}) {
                    const double x = fr.x_mean + sgn * chi * fr.alpha / kappa;
                    const double d =
                        tr.potential_v1(x, t) - tr.potential_v0(x) + shift;
                    worst = std::max(worst, std::abs(d));
                }
            }
        }
        rep.checks.push_back(chk_small("deformation_locality", worst, 1e-10));
    }

    {  // missing state: annihilated by L^dagger, orthogonal to every L phi_n
        const double t = t0 + 1.9;
        const Frame fr = basis.frame(t);
        const Grid1D g = centered_grid(fr, 8.0 * fr.alpha / kappa + 2.0, 0.005,
                                       &tr, kappa);
        if (tr.missing_normalizable()) {
            const auto m = tr.sample_psi_n(0, g, t);
            rep.checks.push_back(chk_small(
                "missing_state_annihilation",
                tr.apply_L_dagger(m).norm() / std::max(m.norm(), 1e-30), 1e-6));
            double oworst = 0.0;
            const auto fam = basis.sample_phi_family(5, g, t);
            for (const auto& f : fam) {
                const auto lf = tr.apply_L(f, darboux::LForm::Ladder);
                const double ln = lf.norm();
                if (ln < 1e-30) continue;
                oworst = std::max(oworst,
                                  std::abs(inner_product(m, lf)) / ln);
            }
            rep.checks.push_back(
                chk_small("missing_state_orthogonality", oworst, 1e-7));
        } else {
            CheckResult r;
            r.name = "missing_state_annihilation";
            r.pass = false;
            r.note = "missing state not normalizable for this spec";
            rep.checks.push_back(r);
        }
    }

    {  // psi_n: orthonormal family with norms locked to 1 over time
        double gworst = 0.0;
        double nworst = 0.0;
        const double half0 = std::sqrt(13.0) + 9.0;
        for (double t : times3) {
            const Frame fr = basis.frame(t);
            const Grid1D g =
                centered_grid(fr, half0 * fr.alpha / kappa, 0.01, &tr, kappa);
            const auto fam = tr.sample_psi_family(5, g, t);
            std::vector<StateField> ortho;
            for (std::size_t k = tr.missing_normalizable() ? 0u : 1u;
                 k < fam.size(); ++k)
                ortho.push_back(fam[k]);
            gworst = std::max(gworst,
                              gram_matrix(ortho).deviation_from_identity);
            for (const auto& f : ortho)
                nworst = std::max(nworst, std::abs(f.norm() - 1.0));
        }
        rep.checks.push_back(chk_small("psi_gram_orthonormality", gworst, 1e-6));
        rep.checks.push_back(chk_small("psi_norm_drift", nworst, 1e-6));
    }

    {  // psi_2 solves the deformed Schroedinger equation
        const Frame fr0 = basis.frame(t0 + 1.1);
        const Grid1D g = centered_grid(fr0, 10.0, 0.01, &tr, kappa);
        auto state = [&](double x, double t) { return tr.psi_n(2, x, t); };
        auto pot = [&](double x, double t) { return tr.potential_v1(x, t); };
        const ResidualReport rr = schrodinger_residual(state, pot, g, t0 + 1.1,
                                                       5e-4, p.mass, p.hbar);
        rep.checks.push_back(
            chk_small("psi_schrodinger_residual", rr.rel_residual, 1e-5));
        rep.checks.push_back(chk_range("psi_schrodinger_order",
                                       rr.convergence_order_estimate, 1.7, 4.3));
    }

    if (at_rest) {
        {  // Rayleigh quotient of I_G on psi_n is time-independent
            auto op = [&](const StateField& f) { return tr.apply_invariant_IG(f); };
            double worst = 0.0;
            std::vector<int> ns = {1, 3};
            if (tr.missing_normalizable()) ns.insert(ns.begin(), 0);
            for (int n : ns) {
                std::vector<double> vals;
                for (double t : times3) {
                    const Frame fr = basis.frame(t);
                    const double half =
                        (std::sqrt(2.0 * n + 1.0) + 10.0) * fr.alpha / kappa;
                    const Grid1D g = centered_grid(fr, half, 0.01, &tr, kappa);
                    const auto f = tr.sample_psi_n(n, g, t);
                    vals.push_back(std::real(rayleigh_quotient(op, f)));
                }
                worst = std::max(worst, rel_spread(vals));
            }
            rep.checks.push_back(
                chk_small("invariant_IG_rayleigh_constancy", worst, 1e-5));
        }

        {  // removing the G term reduces I_G to I exactly
            const double t = t0 + 1.3;
            const Frame fr = basis.frame(t);
            const Grid1D g = centered_grid(fr, 10.0, 0.01, &tr, kappa);
            const auto f = tr.sample_psi_n(1, g, t);
            const auto ig = tr.apply_invariant_IG(f);
            const auto ionly = modes::apply_invariant_I(f, model);
            const double coef =
                -2.0 * p.hbar * p.hbar * fr.alpha * fr.alpha / (p.mass * p.mass) *
                p.hbar;  // I0 = hbar
            StateField gterm(g, t);
            for (int i = 0; i < g.n_points; ++i)
                gterm.values[std::size_t(i)] =
                    coef * tr.g_operator(g.x(i), t) * f.values[std::size_t(i)];
            const double d =
                diff_norm(ig, combine(ionly, gterm, 1.0, 1.0)) /
                std::max(ionly.norm(), 1e-30);
            rep.checks.push_back(chk_small("invariant_zero_g_reduction", d, 1e-12));
        }
    }

    return rep;
}

// ----------------------------------------------------------------- coherent

SuiteReport coherent_suite(const scenario::Scenario& sc) {
    SuiteReport rep;
    rep.suite = "coherent";
    const HermiteGaussBasis basis = sc.basis();
    const auto& p = basis.model().params();
    const double t0 = p.t0;
    const double kappa = basis.kappa();

    {  // A- phi_z = z phi_z
        double worst = 0.0;
        const std::vector<cplx> zs = {cplx{0.0, 0.8}, cplx{1.5, 0.5},
                                      cplx{2.5, -1.0}};
        for (cplx z : zs) {
            for (double t : {t0, t0 + 2.1}) {
                const Frame fr = basis.frame(t);
                const double half = (std::sqrt(2.0) * 3.0 + 9.0) * fr.alpha / kappa;
                const Grid1D g = centered_grid(fr, half, 0.005, nullptr, kappa);
                const auto f = coherent::sample_phi_z(basis, z, g, t);
                const auto low = modes::apply_A(Ladder::Lower, f, basis);
                worst = std::max(worst,
                                 diff_norm(low, combine(f, f, z, 0.0)));
            }
        }
        rep.checks.push_back(chk_small("phi_z_eigenrelation", worst, 1e-6));
    }

    {  // minimum uncertainty in the A quadratures
        const double t = t0 + 1.7;
        const cplx z{1.0, 0.5};
        const Frame fr = basis.frame(t);
        const double half = (std::sqrt(2.0) * std::abs(z) + 9.0) * fr.alpha / kappa;
        const Grid1D g = centered_grid(fr, half, 0.02, nullptr, kappa);
        const auto f = coherent::sample_phi_z(basis, z, g, t);
        const auto st = coherent::quadrature_stats(f, coherent::Channel::A, basis);
        rep.checks.push_back(
            chk_small("phi_z_uncertainty_product", std::abs(st.product - 0.5), 1e-6));
    }

    {  // exact minimum uncertainty in the B ladder algebra
        const auto cs = coherent::coherent_coeffs(cplx{2.0, -1.0});
        const auto st = coherent::quadrature_stats(cs, coherent::Channel::B);
        rep.checks.push_back(chk_small("tilde_uncertainty_product",
                                       std::abs(st.product - 0.5), 1e-12));
    }

    {  // truncation policy leaves only a negligible tail
        const auto cs = coherent::coherent_coeffs(cplx{3.0, -3.0});
        rep.checks.push_back(chk_small("coefficient_tail",
                                       coherent::truncation_tail(cs), 1e-14));
    }

    {  // resolution of identity on the span of phi_0..phi_8
        const int nmax = 8;
        const int nang = 24;
        const int nrad = 30;
        const double rmax = 6.0;
        std::vector<std::vector<cplx>> m(
            std::size_t(nmax + 1), std::vector<cplx>(std::size_t(nmax + 1), 0.0));
        const double dr = rmax / nrad;
        const double dphi = 2.0 * kPi / nang;
        for (int ir = 0; ir < nrad; ++ir) {
            const double r = (ir + 0.5) * dr;
            for (int ia = 0; ia < nang; ++ia) {
                const double ph = (ia + 0.5) * dphi;
                const cplx z = std::polar(r, ph);
                const double w = r * dr * dphi / kPi * std::exp(-r * r);
                cplx zp = 1.0;
                std::vector<cplx> zpow(std::size_t(nmax + 1));
                double fact = 1.0;
                for (int n = 0; n <= nmax; ++n) {
                    if (n > 0) {
                        zp *= z;
                        fact *= double(n);
                    }
                    zpow[std::size_t(n)] = zp / std::sqrt(fact);
                }
                for (int a = 0; a <= nmax; ++a)
                    for (int b = 0; b <= nmax; ++b)
                        m[std::size_t(a)][std::size_t(b)] +=
                            w * zpow[std::size_t(a)] * std::conj(zpow[std::size_t(b)]);
            }
        }
        double worst = 0.0;
        for (int a = 0; a <= nmax; ++a)
            for (int b = 0; b <= nmax; ++b) {
                const double want = a == b ? 1.0 : 0.0;
                worst = std::max(worst,
                                 std::abs(m[std::size_t(a)][std::size_t(b)] - want));
            }
        rep.checks.push_back(chk_small("overcompleteness_identity", worst, 5e-3));
    }

    if (sc.darboux) {
        const DarbouxTransform tr = sc.transform();
        const cplx z{0.0, 1.0};
        const coherent::CoherentState state(tr, z);

        {  // Poisson weights over the psi_n family are conserved
            double worst = 0.0;
            std::vector<double> base;
            for (double t : {t0, t0 + 3.0}) {
                const Frame fr = basis.frame(t);
                const Grid1D g =
                    centered_grid(fr, 14.0 * fr.alpha / kappa + 3.0, 0.01, &tr, kappa);
                const auto fam = tr.sample_psi_family(16, g, t);
                const auto tld = state.psi_tilde_z(g, t);
                std::vector<double> weights;
                for (const auto& f : fam) {
                    const cplx ip = inner_product(f, tld);
                    weights.push_back(std::norm(ip));
                }
                if (base.empty()) {
                    base = weights;
                } else {
                    for (std::size_t k = 0; k < base.size(); ++k)
                        worst = std::max(worst, std::abs(weights[k] - base[k]));
                }
            }
            rep.checks.push_back(
                chk_small("poisson_weight_time_independence", worst, 1e-8));
        }

        {  // |psi_tilde_z|^2 is NOT carried rigidly by the flow
            const auto a = state.psi_tilde_z(sc.grid, t0);
            const auto b = state.psi_tilde_z(sc.grid, t0 + 3.0);
            double l1 = 0.0;
            for (std::size_t k = 0; k < a.values.size(); ++k)
                l1 += std::abs(std::norm(a.values[k]) - std::norm(b.values[k]));
            l1 *= sc.grid.spacing();
            rep.checks.push_back(
                chk_large("tilde_profile_non_invariance", l1, 0.05,
                          "L1 distance of |psi~|^2 between the two times"));
        }

        {  // psi_z at z = i starts multi-peaked
            const auto f = state.sample_psi_z(sc.grid, t0);
            int maxima = 0;
            double peak = 0.0;
            std::vector<double> den(f.values.size());
            for (std::size_t k = 0; k < den.size(); ++k) {
                den[k] = std::norm(f.values[k]);
                peak = std::max(peak, den[k]);
            }
            for (std::size_t k = 1; k + 1 < den.size(); ++k)
                if (den[k] > den[k - 1] && den[k] > den[k + 1] &&
                    den[k] > 1e-4 * peak)
                    ++maxima;
            rep.checks.push_back(chk_large("psi_z_multiple_maxima",
                                           double(maxima), 1.5,
                                           "local maxima above 1e-4 of peak"));
        }
    }

    return rep;
}

}  // namespace

bool SuiteReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

SuiteReport run_suite(const scenario::Scenario& sc, const std::string& suite) {
    const auto start = std::chrono::steady_clock::now();
    SuiteReport rep;
    if (suite == "classical")
        rep = classical_suite(sc);
    else if (suite == "modes")
        rep = modes_suite(sc);
    else if (suite == "darboux")
        rep = darboux_suite(sc);
    else if (suite == "coherent")
        rep = coherent_suite(sc);
    else
        throw ConfigError("unknown verify suite '" + suite + "'");
    rep.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return rep;
}

std::vector<SuiteReport> run_suites(const scenario::Scenario& sc,
                                    const std::string& which) {
    std::vector<std::string> names;
    if (which == "all")
        names = {"classical", "modes", "darboux", "coherent"};
    else
        names = {which};
    std::vector<SuiteReport> out;
    out.reserve(names.size());
    for (const auto& n : names) {
        if ((n == "darboux") && !sc.darboux)
            throw ConfigError("suite '" + n + "' needs a darboux section");
        out.push_back(run_suite(sc, n));
    }
    return out;
}

std::string report_text(const std::vector<SuiteReport>& reports) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific;
    for (const auto& rep : reports) {
        std::size_t npass = 0;
        for (const auto& c : rep.checks) npass += c.pass ? 1u : 0u;
        os << "[suite " << rep.suite << "] " << npass << "/" << rep.checks.size()
           << " checks pass (" << std::fixed << rep.seconds << std::scientific
           << " s)\n";
        for (const auto& c : rep.checks) {
            os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name
               << "  measured=" << c.measured
               << (c.expect_large ? "  floor=" : "  bound=") << c.bound;
            if (!c.note.empty()) os << "  (" << c.note << ")";
            os << "\n";
        }
    }
    return os.str();
}

std::string report_json(const std::vector<SuiteReport>& reports) {
    nlohmann::json root = nlohmann::json::array();
    for (const auto& rep : reports) {
        nlohmann::json jr;
        jr["suite"] = rep.suite;
        jr["seconds"] = rep.seconds;
        jr["pass"] = rep.all_pass();
        jr["checks"] = nlohmann::json::array();
        for (const auto& c : rep.checks) {
            nlohmann::json jc;
            jc["name"] = c.name;
            jc["pass"] = c.pass;
            jc["measured"] = c.measured;
            jc["bound"] = c.bound;
            jc["expect_large"] = c.expect_large;
            if (!c.note.empty()) jc["note"] = c.note;
            jr["checks"].push_back(jc);
        }
        root.push_back(jr);
    }
    return root.dump(2);
}

}  // namespace dlab::verify

namespace dlab::scenario {

VerifyOutcome cmd_verify(const Scenario& sc, const std::string& suite) {
    const auto reports = dlab::verify::run_suites(sc, suite);
    VerifyOutcome out;
    out.pass = std::all_of(reports.begin(), reports.end(),
                           [](const auto& r) { return r.all_pass(); });
    out.text = dlab::verify::report_text(reports);
    out.json = dlab::verify::report_json(reports);
    return out;
}

}  // namespace dlab::scenario
