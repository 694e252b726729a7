#include "dlab/darboux.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "dlab/errors.hpp"
#include "dlab/specfun.hpp"

namespace dlab::darboux {

namespace {

constexpr double kHalfSqrtPi = 0.8862269254527580;  // sqrt(pi)/2
constexpr double kSqrtPi = 1.7724538509055160;

bool closed_form_branch(double eps) { return eps == -0.5 || eps == -1.5; }

/// Widest |chi| each branch can evaluate without overflow / support loss.
double branch_chi_limit(double eps) {
    if (closed_form_branch(eps)) return 36.0;
    return std::sqrt(specfun::kKummerMaxArgument);
}

struct RawFLog {
    double log_abs = 0.0;
    int sign = 1;
    double dlog = 0.0;
    double d2log = 0.0;
};

/// Log-space evaluation of F and its logarithmic derivatives. Valid for
/// any chi within the branch limit; sign == 0 flags an exact zero of F.
RawFLog flog_of(const DarbouxSpec& s, double chi) {
    RawFLog out;
    double x2 = chi * chi;
    if (s.epsilon == -0.5) {
        // F = e^{chi^2} G,  G = k_a + (sqrt(pi)/2) k_b erf(chi)
        const double G = s.k_a + kHalfSqrtPi * s.k_b * std::erf(chi);
        if (G == 0.0) {
            out.sign = 0;
            return out;
        }
        const double ke = s.k_b * std::exp(-x2);
        out.log_abs = x2 + std::log(std::abs(G));
        out.sign = (G > 0.0) ? 1 : -1;
        out.dlog = 2.0 * chi + ke / G;
        out.d2log = 2.0 - ke * (2.0 * chi * G + ke) / (G * G);
        return out;
    }
    if (s.epsilon == -1.5) {
        // F = k_a + chi e^{chi^2} B,  B = k_b + sqrt(pi) k_a erf(chi);
        // worked with the e^{-chi^2}-scaled pair for stability.
        const double B = s.k_b + kSqrtPi * s.k_a * std::erf(chi);
        const double Ft = s.k_a * std::exp(-x2) + chi * B;
        if (Ft == 0.0) {
            out.sign = 0;
            return out;
        }
        const double Fpt = (1.0 + 2.0 * x2) * B + 2.0 * chi * s.k_a * std::exp(-x2);
        out.log_abs = x2 + std::log(std::abs(Ft));
        out.sign = (Ft > 0.0) ? 1 : -1;
        out.dlog = Fpt / Ft;
        out.d2log = 2.0 * chi * out.dlog + 4.0 - out.dlog * out.dlog;
        return out;
    }
    // generic eigenvalue: F = k_a 1F1(a1;1/2;chi^2) + k_b chi 1F1(a2;3/2;chi^2)
    if (x2 > specfun::kKummerMaxArgument &&
        x2 < specfun::kKummerMaxArgument * (1.0 + 1e-12))
        x2 = specfun::kKummerMaxArgument;  // absorb rounding at the boundary
    const double a1 = 0.25 * (1.0 - 2.0 * s.epsilon);
    const double a2 = 0.25 * (3.0 - 2.0 * s.epsilon);
    // zero-coefficient terms are skipped, never evaluated, so terminating
    // reductions (a1 = 0 with k_b = 0) stay valid on arbitrarily wide grids
    const double m1 = s.k_a != 0.0 ? specfun::kummer(a1, 0.5, x2) : 0.0;
    const double m2 = s.k_b != 0.0 ? specfun::kummer(a2, 1.5, x2) : 0.0;
    const double F = s.k_a * m1 + s.k_b * chi * m2;
    if (F == 0.0) {
        out.sign = 0;
        return out;
    }
    // d/dchi 1F1(a;b;chi^2) = 2 chi (a/b) 1F1(a+1;b+1;chi^2)
    double Fp = 0.0;
    if (s.k_a * a1 != 0.0)
        Fp += 4.0 * s.k_a * a1 * chi * specfun::kummer(a1 + 1.0, 1.5, x2);
    if (s.k_b != 0.0)
        Fp += s.k_b * (m2 + (a2 != 0.0
                                 ? (4.0 / 3.0) * a2 * x2 *
                                       specfun::kummer(a2 + 1.0, 2.5, x2)
                                 : 0.0));
    out.log_abs = std::log(std::abs(F));
    out.sign = (F > 0.0) ? 1 : -1;
    out.dlog = Fp / F;
    out.d2log = 2.0 * chi * out.dlog - (2.0 * s.epsilon - 1.0) - out.dlog * out.dlog;
    return out;
}

}  // namespace

DarbouxTransform::FLog DarbouxTransform::f_log(double chi) const {
    const RawFLog r = flog_of(spec_, chi);
    if (r.sign == 0)
        throw OutOfWindow("F vanishes at chi = " + std::to_string(chi));
    return FLog{r.log_abs, r.sign, r.dlog, r.d2log};
}

FValue f_function(const DarbouxSpec& spec, double chi) {
    if (!closed_form_branch(spec.epsilon)) {
        if (chi * chi > specfun::kKummerMaxArgument * (1.0 + 1e-12))
            throw OutOfSupport("f_function: chi^2 = " + std::to_string(chi * chi) +
                               " beyond 1F1 support");
    } else if (std::abs(chi) > 26.0) {
        // e^{chi^2} F would overflow the return value beyond this point
        throw OutOfSupport("f_function: |chi| = " + std::to_string(std::abs(chi)) +
                           " beyond representable range");
    }
    const auto fl = flog_of(spec, chi);
    FValue v;
    v.F = double(fl.sign) * std::exp(fl.log_abs);
    v.dlog = fl.dlog;
    v.d2log = fl.d2log;
    return v;
}

NodelessReport certify_nodeless(const DarbouxSpec& spec, double chi_max) {
    NodelessReport rep;
    rep.chi_max = std::min(chi_max, branch_chi_limit(spec.epsilon));
    const double step = 1e-3;
    const double w = rep.chi_max;

    // log |e^{-chi^2/2} F| plus the sign of F
    auto logw = [&](double chi) {
        const auto fl = flog_of(spec, chi);
        return std::pair<double, int>(fl.log_abs - 0.5 * chi * chi, fl.sign);
    };

    auto [first_log, prev_sign] = logw(-w);
    if (prev_sign == 0) {
        rep.pass = false;
        rep.zero_location = -w;
        rep.chi_at_min = -w;
        return rep;
    }
    double min_log = first_log;
    double chi_min = -w;
    std::optional<double> zero;
    const long nsteps = std::lround(std::floor(2.0 * w / step));
    for (long i = 1; i <= nsteps && !zero; ++i) {
        const double chi = -w + double(i) * step;
        const auto [lg, sg] = logw(chi);
        if (sg == 0) {
            zero = chi;
            break;
        }
        if (lg < min_log) {
            min_log = lg;
            chi_min = chi;
        }
        if (sg != prev_sign) {
            // bisect the sign change of F down to 1e-12 in chi
            double lo = chi - step, hi = chi;
            const int lo_sign = prev_sign;
            for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
                const double mid = 0.5 * (lo + hi);
                const int ms = logw(mid).second;
                if (ms == 0) {
                    lo = hi = mid;
                    break;
                }
                if (ms == lo_sign)
                    lo = mid;
                else
                    hi = mid;
            }
            zero = 0.5 * (lo + hi);
        }
        prev_sign = sg;
    }
    if (zero) {
        rep.pass = false;
        rep.zero_location = *zero;
        rep.chi_at_min = *zero;
        rep.min_abs_value = 0.0;
    } else {
        rep.pass = true;
        rep.chi_at_min = chi_min;
        rep.min_abs_value = (min_log > 700.0) ? 1e304 : std::exp(min_log);
    }
    return rep;
}

NodelessReport certify_nodeless(const DarbouxTransform& model, double chi_max) {
    return certify_nodeless(model.spec(), chi_max);
}

DarbouxTransform::DarbouxTransform(HermiteGaussBasis basis, DarbouxSpec spec)
    : DarbouxTransform(std::move(basis), spec, Options{}) {}

DarbouxTransform::DarbouxTransform(HermiteGaussBasis basis, DarbouxSpec spec,
                                   Options opt)
    : basis_(std::move(basis)), spec_(spec), norm_grid_(opt.norm_grid) {
    if (spec_.k_a == 0.0 && spec_.k_b == 0.0)
        throw CertificationFailure("darboux: k_a = k_b = 0 gives F = 0");
    if (spec_.epsilon == -0.5 &&
        !(std::abs(spec_.k_a) > kHalfSqrtPi * std::abs(spec_.k_b)))
        throw CertificationFailure(
            "darboux: epsilon = -1/2 requires |k_a| > (sqrt(pi)/2)|k_b|");
    window_ = std::min(opt.chi_window, branch_chi_limit(spec_.epsilon));
    cert_ = certify_nodeless(spec_, window_);
    if (!cert_.pass)
        throw CertificationFailure(
            "darboux: e^{-chi^2/2} F crosses zero near chi = " +
            std::to_string(cert_.zero_location.value_or(0.0)));
    const auto& p = basis_.model().params();
    ell0_ = std::sqrt(p.hbar / (p.mass * p.omega0));
    sign_F_ = flog_of(spec_, 0.0).sign;
    build_norm_table();
}

FValue DarbouxTransform::f_at(double chi) const { return f_function(spec_, chi); }

double DarbouxTransform::dlog_f(double chi) const { return f_log(chi).dlog; }

double DarbouxTransform::chi_support() const {
    return branch_chi_limit(spec_.epsilon);
}

cplx DarbouxTransform::u_function(double x, double t) const {
    const auto fr = basis_.frame(t);
    const double chi = basis_.chi(fr, x);
    if (std::abs(chi) > branch_chi_limit(spec_.epsilon))
        throw OutOfWindow("u_function: |chi| beyond branch support");
    const auto fl = f_log(chi);
    const double amp = double(fl.sign) *
                       std::exp(-0.5 * chi * chi + fl.log_abs) /
                       std::sqrt(fr.alpha);
    const double phase = -spec_.epsilon * fr.theta + basis_.xi_phase(fr, x);
    return amp * std::polar(1.0, phase);
}

double DarbouxTransform::potential_v0(double x) const {
    const auto& p = basis_.model().params();
    return 0.5 * p.mass * p.omega0 * p.omega0 * x * x;
}

double DarbouxTransform::potential_v1(double x, double t) const {
    const auto& p = basis_.model().params();
    const auto fr = basis_.frame(t);
    const double chi = basis_.chi(fr, x);
    if (std::abs(chi) > branch_chi_limit(spec_.epsilon))
        throw OutOfWindow("potential_v1: |chi| beyond branch support");
    const auto fl = f_log(chi);
    const double shift = 2.0 * p.hbar * p.omega0 / (fr.alpha * fr.alpha);
    return potential_v0(x) + shift * (1.0 - fl.d2log);
}

std::vector<double> DarbouxTransform::sample_potential_v1(const Grid1D& grid,
                                                          double t) const {
    const auto& p = basis_.model().params();
    const auto fr = basis_.frame(t);
    const double shift = 2.0 * p.hbar * p.omega0 / (fr.alpha * fr.alpha);
    std::vector<double> out(std::size_t(grid.n_points));
    for (int i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        const double chi = basis_.chi(fr, x);
        if (std::abs(chi) > branch_chi_limit(spec_.epsilon))
            throw OutOfWindow("potential_v1: |chi| beyond branch support");
        out[std::size_t(i)] = potential_v0(x) + shift * (1.0 - f_log(chi).d2log);
    }
    return out;
}

cplx DarbouxTransform::beta_function(double x, double t) const {
    const auto fr = basis_.frame(t);
    const double chi = basis_.chi(fr, x);
    if (std::abs(chi) > branch_chi_limit(spec_.epsilon))
        throw OutOfWindow("beta_function: |chi| beyond branch support");
    const auto& p = basis_.model().params();
    const auto fl = f_log(chi);
    const double X = x - fr.x_mean;
    const cplx i{0.0, 1.0};
    return -i * fr.p_mean / p.hbar - 2.0 * i * fr.S * X -
           (basis_.kappa() / fr.alpha) * fl.dlog;
}

double DarbouxTransform::g_operator(double x, double t) const {
    const auto& p = basis_.model().params();
    return p.mass / (p.hbar * p.hbar) * (potential_v0(x) - potential_v1(x, t));
}

cplx DarbouxTransform::raw_psi(const modes::Frame& fr, int n, double x) const {
    const double chi = basis_.chi(fr, x);
    if (std::abs(chi) > branch_chi_limit(spec_.epsilon))
        throw OutOfWindow("psi_n: |chi| beyond branch support");
    const auto fl = f_log(chi);
    cplx v = -ell0_ * basis_.kappa() * fl.dlog * basis_.phi_n(fr, n - 1, x);
    if (n >= 2)
        v += 2.0 * std::polar(1.0, -fr.theta) * std::sqrt(double(n - 1)) *
             basis_.phi_n(fr, n - 2, x);
    return v;
}

cplx DarbouxTransform::raw_missing(const modes::Frame& fr, double x) const {
    const double chi = basis_.chi(fr, x);
    if (std::abs(chi) > branch_chi_limit(spec_.epsilon))
        throw OutOfWindow("missing_state: |chi| beyond branch support");
    const auto fl = f_log(chi);
    const double amp = double(fl.sign) *
                       std::exp(0.5 * chi * chi - fl.log_abs) /
                       std::sqrt(fr.alpha);
    const double phase = -spec_.epsilon * fr.theta + basis_.xi_phase(fr, x);
    return amp * std::polar(1.0, phase);
}

void DarbouxTransform::build_norm_table() {
    const auto& p = basis_.model().params();
    const double t0 = p.t0;
    const auto fr = basis_.frame(t0);

    Grid1D g = verify::widen_to_support(
        norm_grid_, t0,
        [&](double x, double) { return basis_.phi_n(fr, modes::kModeCap - 1, x); });

    // keep every abscissa inside the branch evaluation wall
    const double wall = 0.995 * branch_chi_limit(spec_.epsilon);
    const double halfw = wall * fr.alpha / basis_.kappa();
    const double lo_lim = fr.x_mean - halfw;
    const double hi_lim = fr.x_mean + halfw;
    if (g.x_min < lo_lim || g.x_max > hi_lim) {
        const double h = g.spacing();
        const double lo = std::max(g.x_min, lo_lim);
        const double hi = std::min(g.x_max, hi_lim);
        const int n = std::max(17, int(std::floor((hi - lo) / h)) + 1);
        g = Grid1D(lo, lo + double(n - 1) * h, n);
    }

    const auto fam = basis_.sample_phi_family(modes::kModeCap - 1, g, t0);

    std::vector<double> dl(std::size_t(g.n_points));
    for (int i = 0; i < g.n_points; ++i)
        dl[std::size_t(i)] = f_log(basis_.chi(fr, g.x(i))).dlog;

    norms_.assign(std::size_t(modes::kModeCap) + 1, 0.0);
    const cplx rot = 2.0 * std::polar(1.0, -fr.theta);
    for (int n = 1; n <= modes::kModeCap; ++n) {
        StateField raw(g, t0);
        for (int i = 0; i < g.n_points; ++i) {
            const std::size_t k = std::size_t(i);
            cplx v = -ell0_ * basis_.kappa() * dl[k] *
                     fam[std::size_t(n - 1)].values[k];
            if (n >= 2)
                v += rot * std::sqrt(double(n - 1)) *
                     fam[std::size_t(n - 2)].values[k];
            raw.values[k] = v;
        }
        norms_[std::size_t(n)] = raw.norm();
    }

    // Missing-state normalizability: its raw norm must be stable when the
    // chi window grows. A diverging tail shows up as norm growth between
    // the inner and outer window.
    const double h = norm_grid_.spacing();
    auto window_norm = [&](double w) {
        const double half = w * fr.alpha / basis_.kappa();
        const double lo = fr.x_mean - half;
        const double hi = fr.x_mean + half;
        const int n_pts = std::max(17, int(std::lround((hi - lo) / h)) + 1);
        Grid1D wg(lo, hi, n_pts);
        StateField f(wg, t0);
        for (int i = 0; i < n_pts; ++i)
            f.values[std::size_t(i)] = raw_missing(fr, wg.x(i));
        return f.norm();
    };
    const double w_in = std::max(window_ - 2.0, 0.5 * window_);
    const double n_in = window_norm(w_in);
    const double n_out = window_norm(window_);
    missing_ok_ = std::isfinite(n_out) &&
                  (n_out * n_out - n_in * n_in) <= 1e-8 * (n_in * n_in);
    norms_[0] = n_out;
}

double DarbouxTransform::norm_constant(int n) const {
    if (n < 0 || n > modes::kModeCap)
        throw DegreeTooLarge("norm_constant: index outside the mode cap");
    return norms_[std::size_t(n)];
}

cplx DarbouxTransform::missing_state(double x, double t) const {
    if (!missing_ok_)
        throw NotNormalizable(
            "missing state 1/(l u*) is not square-integrable for epsilon = " +
            std::to_string(spec_.epsilon));
    const auto fr = basis_.frame(t);
    return raw_missing(fr, x) / norms_[0];
}

cplx DarbouxTransform::psi_n(int n, double x, double t) const {
    if (n < 0 || n > modes::kModeCap)
        throw DegreeTooLarge("psi_n: index outside the mode cap");
    if (n == 0) return missing_state(x, t);
    const auto fr = basis_.frame(t);
    return raw_psi(fr, n, x) / norms_[std::size_t(n)];
}

StateField DarbouxTransform::sample_psi_n(int n, const Grid1D& grid, double t) const {
    if (n < 0 || n > modes::kModeCap)
        throw DegreeTooLarge("sample_psi_n: index outside the mode cap");
    const auto fr = basis_.frame(t);
    StateField out(grid, t);
    if (n == 0) {
        if (!missing_ok_)
            throw NotNormalizable("missing state is not square-integrable");
        for (int i = 0; i < grid.n_points; ++i)
            out.values[std::size_t(i)] = raw_missing(fr, grid.x(i)) / norms_[0];
        return out;
    }
    for (int i = 0; i < grid.n_points; ++i)
        out.values[std::size_t(i)] =
            raw_psi(fr, n, grid.x(i)) / norms_[std::size_t(n)];
    return out;
}

std::vector<StateField> DarbouxTransform::sample_psi_family(int n_max,
                                                            const Grid1D& grid,
                                                            double t) const {
    if (n_max < 0 || n_max > modes::kModeCap)
        throw DegreeTooLarge("sample_psi_family: n_max outside the mode cap");
    const auto fr = basis_.frame(t);
    const auto fam = basis_.sample_phi_family(std::max(0, n_max - 1), grid, t);
    std::vector<double> dl(std::size_t(grid.n_points));
    for (int i = 0; i < grid.n_points; ++i)
        dl[std::size_t(i)] = f_log(basis_.chi(fr, grid.x(i))).dlog;

    std::vector<StateField> out;
    out.reserve(std::size_t(n_max) + 1);
    const cplx rot = 2.0 * std::polar(1.0, -fr.theta);
    for (int n = 0; n <= n_max; ++n) {
        StateField f(grid, t);
        if (n == 0) {
            if (!missing_ok_)
                throw NotNormalizable("missing state is not square-integrable");
            for (int i = 0; i < grid.n_points; ++i)
                f.values[std::size_t(i)] = raw_missing(fr, grid.x(i)) / norms_[0];
        } else {
            for (int i = 0; i < grid.n_points; ++i) {
                const std::size_t k = std::size_t(i);
                cplx v = -ell0_ * basis_.kappa() * dl[k] *
                         fam[std::size_t(n - 1)].values[k];
                if (n >= 2)
                    v += rot * std::sqrt(double(n - 1)) *
                         fam[std::size_t(n - 2)].values[k];
                f.values[k] = v / norms_[std::size_t(n)];
            }
        }
        out.push_back(std::move(f));
    }
    return out;
}

StateField DarbouxTransform::apply_L(const StateField& field, LForm form) const {
    const auto fr = basis_.frame(field.time);
    if (form == LForm::Ladder) {
        // L = -l0 alpha d/dx[ln F] + 2 e^{-i theta} A-
        const StateField low = modes::apply_A(modes::Ladder::Lower, field, basis_);
        StateField out(field.grid, field.time);
        const cplx rot = 2.0 * std::polar(1.0, -fr.theta);
        for (int i = 0; i < field.grid.n_points; ++i) {
            const std::size_t k = std::size_t(i);
            const auto fl = f_log(basis_.chi(fr, field.grid.x(i)));
            out.values[k] = -ell0_ * basis_.kappa() * fl.dlog * field.values[k] +
                            rot * low.values[k];
        }
        return out;
    }
    verify::require_resolved(field);
    const StateField df = verify::deriv1(field);
    StateField out(field.grid, field.time);
    const double lt = ell0_ * fr.alpha;
    const auto& p = basis_.model().params();
    const cplx i{0.0, 1.0};
    for (int idx = 0; idx < field.grid.n_points; ++idx) {
        const std::size_t k = std::size_t(idx);
        const double x = field.grid.x(idx);
        const auto fl = f_log(basis_.chi(fr, x));
        const cplx beta = -i * fr.p_mean / p.hbar -
                          2.0 * i * fr.S * (x - fr.x_mean) -
                          (basis_.kappa() / fr.alpha) * fl.dlog;
        out.values[k] = lt * (df.values[k] + beta * field.values[k]);
    }
    return out;
}

StateField DarbouxTransform::apply_L_dagger(const StateField& field) const {
    verify::require_resolved(field);
    const auto fr = basis_.frame(field.time);
    const StateField df = verify::deriv1(field);
    StateField out(field.grid, field.time);
    const double lt = ell0_ * fr.alpha;
    const auto& p = basis_.model().params();
    const cplx i{0.0, 1.0};
    for (int idx = 0; idx < field.grid.n_points; ++idx) {
        const std::size_t k = std::size_t(idx);
        const double x = field.grid.x(idx);
        const auto fl = f_log(basis_.chi(fr, x));
        const cplx beta = -i * fr.p_mean / p.hbar -
                          2.0 * i * fr.S * (x - fr.x_mean) -
                          (basis_.kappa() / fr.alpha) * fl.dlog;
        out.values[k] = lt * (-df.values[k] + std::conj(beta) * field.values[k]);
    }
    return out;
}

StateField DarbouxTransform::apply_invariant_IG(const StateField& field,
                                                std::optional<double> I0) const {
    const auto& p = basis_.model().params();
    const double i0 = I0.value_or(p.hbar);
    StateField out = modes::apply_invariant_I(field, basis_.model(), i0);
    const double al = basis_.model().alpha(field.time);
    const double c4 = -2.0 * p.hbar * p.hbar * al * al / (p.mass * p.mass);
    for (int i = 0; i < field.grid.n_points; ++i) {
        const std::size_t k = std::size_t(i);
        out.values[k] +=
            i0 * c4 * g_operator(field.grid.x(i), field.time) * field.values[k];
    }
    return out;
}

ModeExpansion ladder_B(modes::Ladder direction, const ModeExpansion& expansion) {
    const int top = expansion.top_index();
    ModeExpansion out;
    if (direction == modes::Ladder::Raise) {
        if (top >= modes::kModeCap)
            throw CapExceeded("ladder_B: raise would exceed the mode cap");
        out.coeff.assign(std::size_t(std::max(top + 2, 1)), cplx{0.0, 0.0});
        for (int n = 0; n <= top; ++n)
            out.coeff[std::size_t(n + 1)] =
                std::sqrt(double(n + 1)) * expansion.coeff[std::size_t(n)];
        return out;
    }
    out.coeff.assign(std::max<std::size_t>(expansion.coeff.size(), 1),
                     cplx{0.0, 0.0});
    for (int n = 1; n < int(expansion.coeff.size()); ++n)
        out.coeff[std::size_t(n - 1)] =
            std::sqrt(double(n)) * expansion.coeff[std::size_t(n)];
    return out;
}

}  // namespace dlab::darboux
