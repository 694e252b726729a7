#include "dlab/oscillator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dlab/errors.hpp"

namespace dlab::classical {

double default_lambda(const OscillatorParams& p) {
    return p.mass * p.omega0 / p.hbar;
}

PhasePoint trajectory(const OscillatorParams& p, const TrajectorySpec& traj, double t) {
    const double u = p.omega0 * (t - p.t0);
    const double cu = std::cos(u);
    const double su = std::sin(u);
    return PhasePoint{
        traj.x0 * cu + traj.p0 * su / (p.mass * p.omega0),
        -p.mass * p.omega0 * traj.x0 * su + traj.p0 * cu,
    };
}

ValidatedModel validate(const OscillatorParams& params, const ErmakovSpec& spec) {
    if (!(params.mass > 0.0)) throw NonPositiveParameter("mass must be > 0");
    if (!(params.omega0 > 0.0)) throw NonPositiveParameter("omega0 must be > 0");
    if (!(params.hbar > 0.0)) throw NonPositiveParameter("hbar must be > 0");
    if (!(spec.a >= 0.0)) throw NonPositiveParameter("ermakov a must be >= 0");
    if (!(spec.c >= 0.0)) throw NonPositiveParameter("ermakov c must be >= 0");
    if (spec.lambda == 0.0) throw ZeroLambda("lambda must be nonzero");

    const double q = 2.0 * params.hbar * spec.lambda / (params.mass * params.omega0);
    const double disc = spec.a * spec.c - q * q;
    if (disc < 0.0)
        throw ErmakovConditionViolated(
            "a*c = " + std::to_string(spec.a * spec.c) +
            " below (2 hbar lambda/(m omega0))^2 = " + std::to_string(q * q));

    ValidatedModel m;
    m.params_ = params;
    m.a_ = spec.a;
    m.c_ = spec.c;
    m.lambda_ = spec.lambda;
    m.b_ = std::sqrt(disc);  // nonnegative root
    return m;
}

double ValidatedModel::alpha(double t) const {
    const double u = params_.omega0 * (t - params_.t0);
    const double cu = std::cos(u);
    const double su = std::sin(u);
    return std::sqrt(a_ * cu * cu + b_ * 2.0 * su * cu + c_ * su * su);
}

double ValidatedModel::alpha_dot(double t) const {
    // d(alpha^2)/dt = omega0 [(c-a) sin 2u + 2b cos 2u]
    const double u = params_.omega0 * (t - params_.t0);
    const double d2 = params_.omega0 * ((c_ - a_) * std::sin(2.0 * u) +
                                        2.0 * b_ * std::cos(2.0 * u));
    return 0.5 * d2 / alpha(t);
}

double ValidatedModel::alpha_ddot(double t) const {
    // d2(alpha^2)/dt2 = 2 omega0^2 [(c-a) cos 2u - 2b sin 2u]
    const double u = params_.omega0 * (t - params_.t0);
    const double dd2 = 2.0 * params_.omega0 * params_.omega0 *
                       ((c_ - a_) * std::cos(2.0 * u) - 2.0 * b_ * std::sin(2.0 * u));
    const double al = alpha(t);
    const double ad = alpha_dot(t);
    return (0.5 * dd2 - ad * ad) / al;
}

AlphaState alpha_state(const ValidatedModel& model, double t) {
    return AlphaState{model.alpha(t), model.alpha_dot(t)};
}

namespace {

double adaptive_simpson(const ValidatedModel& m, double lo, double hi,
                        double flo, double fmid, double fhi, double whole,
                        double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid);
    const double rm = 0.5 * (mid + hi);
    const double w0 = m.params().omega0;
    const double alo = m.alpha(lm);
    const double ahi = m.alpha(rm);
    const double flm = 2.0 * w0 / (alo * alo);
    const double frm = 2.0 * w0 / (ahi * ahi);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(m, lo, mid, flo, flm, fmid, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(m, mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth - 1);
}

}  // namespace

double theta(const ValidatedModel& model, double t) {
    const double t0 = model.params().t0;
    if (t == t0) return 0.0;
    const double w0 = model.params().omega0;
    auto f = [&](double tau) {
        const double al = model.alpha(tau);
        return 2.0 * w0 / (al * al);
    };
    // Split at half-period boundaries so each panel sees a smooth bump.
    const double period = std::numbers::pi / w0;
    const double span = t - t0;
    const int npanel = std::max(1, int(std::ceil(std::abs(span) / period)));
    double acc = 0.0;
    for (int i = 0; i < npanel; ++i) {
        const double lo = t0 + span * double(i) / double(npanel);
        const double hi = t0 + span * double(i + 1) / double(npanel);
        const double mid = 0.5 * (lo + hi);
        const double flo = f(lo), fmid = f(mid), fhi = f(hi);
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        acc += adaptive_simpson(model, lo, hi, flo, fmid, fhi, whole, 1e-13, 48);
    }
    return acc;
}

double theta_closed_form(const ValidatedModel& model, double t) {
    const auto& p = model.params();
    const double Lambda = 2.0 * p.hbar * model.lambda() / (p.mass * p.omega0);
    const double u = p.omega0 * (t - p.t0);
    const double principal =
        std::atan((model.c() * std::tan(u) + model.b()) / Lambda) -
        std::atan(model.b() / Lambda);
    return (2.0 / Lambda) * principal;
}

std::complex<double> s_complex(const ValidatedModel& model, double t) {
    const auto& p = model.params();
    const double al = model.alpha(t);
    const double sr = 0.5 * p.mass / p.hbar * model.alpha_dot(t) / al;
    const double si = model.lambda() / (al * al);
    return {sr, si};
}

double variance_x(const ValidatedModel& model, double t) {
    const auto& p = model.params();
    const double al = model.alpha(t);
    return p.hbar / (4.0 * p.mass * p.omega0) * al * al;
}

}  // namespace dlab::classical
