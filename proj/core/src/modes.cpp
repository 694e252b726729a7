#include "dlab/modes.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dlab/errors.hpp"
#include "dlab/specfun.hpp"

namespace dlab::modes {

int ModeExpansion::top_index() const {
    for (int i = int(coeff.size()) - 1; i >= 0; --i)
        if (coeff[std::size_t(i)] != cplx{0.0, 0.0}) return i;
    return -1;
}

double ModeExpansion::norm() const {
    std::vector<double> sq(coeff.size());
    for (std::size_t i = 0; i < coeff.size(); ++i) sq[i] = std::norm(coeff[i]);
    return std::sqrt(verify::pairwise_sum(sq));
}

HermiteGaussBasis::HermiteGaussBasis(ValidatedModel model, TrajectorySpec traj)
    : model_(std::move(model)), traj_(traj) {
    const auto& p = model_.params();
    const double lam0 = classical::default_lambda(p);
    if (std::abs(model_.lambda() - lam0) > 1e-12 * lam0)
        throw ConfigError(
            "HermiteGaussBasis: mode formulas require lambda = m omega0/hbar");
    kappa_ = std::sqrt(2.0 * p.mass * p.omega0 / p.hbar);
}

Frame HermiteGaussBasis::frame(double t) const {
    Frame fr;
    fr.t = t;
    fr.alpha = model_.alpha(t);
    fr.alpha_dot = model_.alpha_dot(t);
    fr.theta = classical::theta(model_, t);
    const auto pp = classical::trajectory(model_.params(), traj_, t);
    fr.x_mean = pp.x_mean;
    fr.p_mean = pp.p_mean;
    fr.S = classical::s_complex(model_, t);
    return fr;
}

double HermiteGaussBasis::chi(const Frame& fr, double x) const {
    return kappa_ * (x - fr.x_mean) / fr.alpha;
}

double HermiteGaussBasis::xi_phase(const Frame& fr, double x) const {
    const auto& p = model_.params();
    const double X = x - fr.x_mean;
    return 0.5 * p.mass / p.hbar * (fr.alpha_dot / fr.alpha) * X * X +
           fr.p_mean * X / p.hbar + 0.5 * fr.p_mean * fr.x_mean / p.hbar;
}

namespace {

double log_weight(int n) {  // ln(2^n n!)
    return double(n) * std::numbers::ln2 + std::lgamma(double(n) + 1.0);
}

}  // namespace

cplx HermiteGaussBasis::phi_n(const Frame& fr, int n, double x) const {
    if (n < 0 || n > kModeCap)
        throw DegreeTooLarge("phi_n: index " + std::to_string(n) +
                             " outside [0, " + std::to_string(kModeCap) + "]");
    const auto& p = model_.params();
    const double c0 = std::pow(2.0 * p.mass * p.omega0 / (std::numbers::pi * p.hbar), 0.25);
    const double ch = chi(fr, x);
    const double amp = c0 * std::exp(-0.5 * log_weight(n) - 0.5 * ch * ch) /
                       std::sqrt(fr.alpha);
    const double phase = -(double(n) + 0.5) * fr.theta + xi_phase(fr, x);
    return amp * specfun::hermite(n, ch) * std::polar(1.0, phase);
}

StateField HermiteGaussBasis::sample_phi_n(int n, const Grid1D& grid, double t) const {
    const Frame fr = frame(t);
    StateField out(grid, t);
    for (int i = 0; i < grid.n_points; ++i)
        out.values[std::size_t(i)] = phi_n(fr, n, grid.x(i));
    return out;
}

std::vector<StateField> HermiteGaussBasis::sample_phi_family(int n_max,
                                                             const Grid1D& grid,
                                                             double t) const {
    if (n_max < 0 || n_max > kModeCap)
        throw DegreeTooLarge("sample_phi_family: n_max outside cap");
    const Frame fr = frame(t);
    const auto& p = model_.params();
    const double c0 = std::pow(2.0 * p.mass * p.omega0 / (std::numbers::pi * p.hbar), 0.25);
    std::vector<StateField> fam(std::size_t(n_max) + 1, StateField(grid, t));
    for (int i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        const double ch = chi(fr, x);
        const double gauss = std::exp(-0.5 * ch * ch) / std::sqrt(fr.alpha);
        const double xi = xi_phase(fr, x);
        double hm = 1.0, h = 2.0 * ch;  // H_0, H_1
        for (int n = 0; n <= n_max; ++n) {
            const double hn = (n == 0) ? 1.0 : (n == 1 ? h : 0.0);
            double hval = hn;
            if (n >= 2) {
                const double hp = 2.0 * ch * h - 2.0 * double(n - 1) * hm;
                hm = h;
                h = hp;
                hval = hp;
            }
            const double amp = c0 * std::exp(-0.5 * log_weight(n)) * gauss;
            const double phase = -(double(n) + 0.5) * fr.theta + xi;
            fam[std::size_t(n)].values[std::size_t(i)] =
                amp * hval * std::polar(1.0, phase);
        }
    }
    return fam;
}

StateField apply_A(Ladder direction, const StateField& field,
                   const HermiteGaussBasis& basis) {
    verify::require_resolved(field);
    const auto& p = basis.model().params();
    const Frame fr = basis.frame(field.time);
    const double lam = basis.model().lambda();
    const double scale = fr.alpha / std::sqrt(lam);
    const cplx S = (direction == Ladder::Lower) ? fr.S : std::conj(fr.S);
    const cplx front = (direction == Ladder::Lower)
                           ? cplx{0.0, 1.0} * std::polar(1.0, fr.theta)
                           : cplx{0.0, -1.0} * std::polar(1.0, -fr.theta);
    const StateField df = verify::deriv1(field);
    StateField out(field.grid, field.time);
    const cplx mi_h{0.0, -p.hbar};  // -i hbar
    for (int i = 0; i < field.grid.n_points; ++i) {
        const std::size_t k = std::size_t(i);
        const double x = field.grid.x(i);
        const cplx pf = mi_h * df.values[k] - fr.p_mean * field.values[k];
        out.values[k] = front * scale *
                        (pf / (2.0 * p.hbar) - S * (x - fr.x_mean) * field.values[k]);
    }
    return out;
}

StateField apply_invariant_I(const StateField& field, const ValidatedModel& model,
                             std::optional<double> I0) {
    verify::require_resolved(field);
    const auto& p = model.params();
    const double i0 = I0.value_or(p.hbar);
    const double al = model.alpha(field.time);
    const double ad = model.alpha_dot(field.time);
    const double m = p.mass;
    const double cpp = al * al / (m * m);
    const double cxp = -ad * al / m;
    const double cxx = ad * ad + 4.0 * p.omega0 * p.omega0 / (al * al);

    const StateField d1 = verify::deriv1(field);
    const StateField d2 = verify::deriv2(field);
    StateField out(field.grid, field.time);
    const cplx mi_h{0.0, -p.hbar};
    for (int i = 0; i < field.grid.n_points; ++i) {
        const std::size_t k = std::size_t(i);
        const double x = field.grid.x(i);
        const cplx p2 = -p.hbar * p.hbar * d2.values[k];
        // {x,p} f = -i hbar (2 x f' + f)
        const cplx anti = mi_h * (2.0 * x * d1.values[k] + field.values[k]);
        out.values[k] =
            i0 * (cpp * p2 + cxp * anti + cxx * x * x * field.values[k]);
    }
    return out;
}

}  // namespace dlab::modes
