#include "dlab/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dlab/errors.hpp"
#include "dlab/numerics.hpp"

namespace dlab::coherent {

namespace {

constexpr double kTailBound = 1e-14;

/// phi_z with a prebuilt frame: c0 e^{-chi^2/2 + sqrt2 zt chi - zt^2/2 - |z|^2/2}
/// e^{i(xi - theta/2)} / sqrt(alpha),  zt = z e^{-i theta}.
cplx phi_z_at(const HermiteGaussBasis& basis, const modes::Frame& fr, cplx z,
              double x) {
    const auto& p = basis.model().params();
    const double c0 =
        std::pow(2.0 * p.mass * p.omega0 / (std::numbers::pi * p.hbar), 0.25);
    const double chi = basis.chi(fr, x);
    const cplx zt = z * std::polar(1.0, -fr.theta);
    const cplx expo = -0.5 * chi * chi + std::sqrt(2.0) * zt * chi -
                      0.5 * zt * zt - 0.5 * std::norm(z);
    const cplx phase{0.0, basis.xi_phase(fr, x) - 0.5 * fr.theta};
    return c0 / std::sqrt(fr.alpha) * std::exp(expo + phase);
}

/// Upper Poisson tail P(N > cap) at mean lam, summed forward so there is
/// no cancellation near 1.
double poisson_tail(double lam, int cap) {
    if (lam <= 0.0) return 0.0;
    const double n0 = double(cap + 1);
    double p = std::exp(-lam + n0 * std::log(lam) - std::lgamma(n0 + 1.0));
    double s = 0.0;
    for (int n = cap + 1; n < cap + 400 && p > 0.0; ++n) {
        s += p;
        p *= lam / double(n + 1);
        if (p < s * 1e-18) {
            s += p;
            break;
        }
    }
    return s;
}

/// Restrict a grid to |chi| <= wall, preserving its spacing.
Grid1D clamp_to_chi(const Grid1D& g, const modes::Frame& fr, double kappa,
                    double wall) {
    const double halfw = wall * fr.alpha / kappa;
    const double lo_lim = fr.x_mean - halfw;
    const double hi_lim = fr.x_mean + halfw;
    if (g.x_min >= lo_lim && g.x_max <= hi_lim) return g;
    const double h = g.spacing();
    const double lo = std::max(g.x_min, lo_lim);
    const double hi = std::min(g.x_max, hi_lim);
    const int n = std::max(17, int(std::floor((hi - lo) / h)) + 1);
    return Grid1D(lo, lo + double(n - 1) * h, n);
}

}  // namespace

int coherent_cap(cplx z) {
    const double n2 = std::norm(z);
    int want = int(std::ceil(n2 + 10.0 * std::sqrt(n2 + 1.0)));
    // n2 + 10 sqrt(n2+1) is only a floor: near ceil boundaries the Poisson
    // tail can still sit above the bound, so top up until it holds.
    while (want < modes::kModeCap && poisson_tail(n2, want) >= kTailBound)
        ++want;
    return std::min(modes::kModeCap, want);
}

double truncation_tail(const ModeExpansion& expansion) {
    std::vector<double> sq;
    sq.reserve(expansion.coeff.size());
    for (const auto& c : expansion.coeff) sq.push_back(std::norm(c));
    return std::max(0.0, 1.0 - verify::pairwise_sum(sq));
}

ModeExpansion coherent_coeffs(cplx z, std::optional<int> cap, bool clamped) {
    int c = cap.value_or(coherent_cap(z));
    if (c < 0) throw ConfigError("coherent_coeffs: negative cap");
    if (c > modes::kModeCap) {
        if (!clamped)
            throw CapExceeded("coherent_coeffs: cap " + std::to_string(c) +
                              " beyond the mode cap");
        c = modes::kModeCap;
    }
    ModeExpansion e;
    e.coeff.assign(std::size_t(c) + 1, cplx{0.0, 0.0});
    cplx cur = std::exp(cplx{-0.5 * std::norm(z), 0.0});
    e.coeff[0] = cur;
    for (int n = 1; n <= c; ++n) {
        cur *= z / std::sqrt(double(n));
        e.coeff[std::size_t(n)] = cur;
    }
    if (!clamped) {
        const double tail = truncation_tail(e);
        if (tail > kTailBound)
            throw CapTooSmall("coherent_coeffs: tail " + std::to_string(tail) +
                              " exceeds " + std::to_string(kTailBound) +
                              " at cap " + std::to_string(c));
    }
    return e;
}

cplx phi_z(const HermiteGaussBasis& basis, cplx z, double x, double t) {
    return phi_z_at(basis, basis.frame(t), z, x);
}

StateField sample_phi_z(const HermiteGaussBasis& basis, cplx z,
                        const Grid1D& grid, double t) {
    const auto fr = basis.frame(t);
    StateField out(grid, t);
    for (int i = 0; i < grid.n_points; ++i)
        out.values[std::size_t(i)] = phi_z_at(basis, fr, z, grid.x(i));
    return out;
}

CoherentState::CoherentState(const DarbouxTransform& model, cplx z, bool clamped)
    : model_(&model), z_(z), coeffs_(coherent_coeffs(z, std::nullopt, clamped)) {
    const auto& basis = model.basis();
    const auto& p = basis.model().params();
    const double t0 = p.t0;
    const auto fr = basis.frame(t0);

    Grid1D g = verify::widen_to_support(
        Grid1D{-20.0, 20.0, 2001}, t0,
        [&](double x, double) { return phi_z_at(basis, fr, z_, x); });
    g = clamp_to_chi(g, fr, basis.kappa(), 0.995 * model.chi_support());

    const cplx rot = std::polar(1.0, -fr.theta);
    StateField raw(g, t0);
    for (int i = 0; i < g.n_points; ++i) {
        const double x = g.x(i);
        const double chi = basis.chi(fr, x);
        const cplx factor = -model.ell0() * basis.kappa() * model.dlog_f(chi) +
                            2.0 * z_ * rot;
        raw.values[std::size_t(i)] = factor * phi_z_at(basis, fr, z_, x);
    }
    psi_norm_ = raw.norm();
    if (psi_norm_ <= 1e-12)
        throw ZeroNorm("psi_z has vanishing norm at t0");
}

cplx CoherentState::phi_z(double x, double t) const {
    return phi_z_at(model_->basis(), model_->basis().frame(t), z_, x);
}

StateField CoherentState::sample_phi_z(const Grid1D& grid, double t) const {
    return coherent::sample_phi_z(model_->basis(), z_, grid, t);
}

cplx CoherentState::psi_z(double x, double t) const {
    const auto& basis = model_->basis();
    const auto fr = basis.frame(t);
    const double chi = basis.chi(fr, x);
    const cplx factor = -model_->ell0() * basis.kappa() * model_->dlog_f(chi) +
                        2.0 * z_ * std::polar(1.0, -fr.theta);
    return factor * phi_z_at(basis, fr, z_, x) / psi_norm_;
}

StateField CoherentState::sample_psi_z(const Grid1D& grid, double t) const {
    const auto& basis = model_->basis();
    const auto fr = basis.frame(t);
    const cplx rot = std::polar(1.0, -fr.theta);
    StateField out(grid, t);
    for (int i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        const double chi = basis.chi(fr, x);
        const cplx factor = -model_->ell0() * basis.kappa() * model_->dlog_f(chi) +
                            2.0 * z_ * rot;
        out.values[std::size_t(i)] =
            factor * phi_z_at(basis, fr, z_, x) / psi_norm_;
    }
    return out;
}

StateField CoherentState::psi_tilde_z(const Grid1D& grid, double t) const {
    const int top = std::max(coeffs_.top_index(), 0);
    const auto fam = model_->sample_psi_family(top, grid, t);
    StateField out(grid, t);
    for (int n = 0; n <= top; ++n) {
        const cplx c = coeffs_.coeff[std::size_t(n)];
        if (c == cplx{0.0, 0.0}) continue;
        for (int i = 0; i < grid.n_points; ++i)
            out.values[std::size_t(i)] += c * fam[std::size_t(n)].values[std::size_t(i)];
    }
    return out;
}

cplx psi_z(const DarbouxTransform& model, cplx z, double x, double t) {
    return CoherentState(model, z).psi_z(x, t);
}

StateField sample_psi_z(const DarbouxTransform& model, cplx z,
                        const Grid1D& grid, double t) {
    return CoherentState(model, z).sample_psi_z(grid, t);
}

StateField psi_tilde_z(const DarbouxTransform& model, cplx z,
                       const Grid1D& grid, double t) {
    return CoherentState(model, z).psi_tilde_z(grid, t);
}

Quadratures quadrature_stats(const StateField& field, Channel which,
                             const HermiteGaussBasis& basis) {
    if (which != Channel::A)
        throw ConfigError("quadrature_stats: sampled fields use channel A");
    StateField f = field;
    f.normalize();
    const StateField low = modes::apply_A(modes::Ladder::Lower, f, basis);
    const StateField hig = modes::apply_A(modes::Ladder::Raise, f, basis);
    StateField qf(f.grid, f.time), pf(f.grid, f.time);
    const double r2 = 1.0 / std::sqrt(2.0);
    const cplx mi{0.0, -1.0};
    for (int i = 0; i < f.grid.n_points; ++i) {
        const std::size_t k = std::size_t(i);
        qf.values[k] = r2 * (low.values[k] + hig.values[k]);
        pf.values[k] = r2 * mi * (low.values[k] - hig.values[k]);
    }
    const auto rule = verify::QuadRule::Trapezoid;
    const double mq = std::real(verify::inner_product(f, qf, rule));
    const double mp = std::real(verify::inner_product(f, pf, rule));
    const double sq = std::real(verify::inner_product(qf, qf, rule));
    const double sp = std::real(verify::inner_product(pf, pf, rule));
    Quadratures out;
    out.dq = std::sqrt(std::max(0.0, sq - mq * mq));
    out.dp = std::sqrt(std::max(0.0, sp - mp * mp));
    out.product = out.dq * out.dp;
    return out;
}

Quadratures quadrature_stats(const ModeExpansion& expansion, Channel which) {
    if (which != Channel::B)
        throw ConfigError("quadrature_stats: coefficient vectors use channel B");
    const double nrm = expansion.norm();
    if (nrm <= 1e-12) throw ZeroNorm("quadrature_stats: zero-norm expansion");
    ModeExpansion c = expansion;
    for (auto& v : c.coeff) v /= nrm;

    const ModeExpansion low = darboux::ladder_B(modes::Ladder::Lower, c);
    const ModeExpansion hig = darboux::ladder_B(modes::Ladder::Raise, c);
    const std::size_t n = std::max({c.coeff.size(), low.coeff.size(),
                                    hig.coeff.size()});
    auto at = [](const ModeExpansion& e, std::size_t i) {
        return i < e.coeff.size() ? e.coeff[i] : cplx{0.0, 0.0};
    };
    const double r2 = 1.0 / std::sqrt(2.0);
    const cplx mi{0.0, -1.0};
    std::vector<cplx> qd(n), pd(n);
    for (std::size_t i = 0; i < n; ++i) {
        qd[i] = r2 * (at(low, i) + at(hig, i));
        pd[i] = r2 * mi * (at(low, i) - at(hig, i));
    }
    auto dot = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
        std::vector<cplx> terms(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            terms[i] = std::conj(a[i]) * b[i];
        return verify::pairwise_sum(terms);
    };
    std::vector<cplx> cv(n);
    for (std::size_t i = 0; i < n; ++i) cv[i] = at(c, i);
    const double mq = std::real(dot(cv, qd));
    const double mp = std::real(dot(cv, pd));
    const double sq = std::real(dot(qd, qd));
    const double sp = std::real(dot(pd, pd));
    Quadratures out;
    out.dq = std::sqrt(std::max(0.0, sq - mq * mq));
    out.dp = std::sqrt(std::max(0.0, sp - mp * mp));
    out.product = out.dq * out.dp;
    return out;
}

}  // namespace dlab::coherent
