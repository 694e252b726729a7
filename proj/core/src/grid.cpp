#include "dlab/grid.hpp"

#include <cmath>
#include <string>

namespace dlab::verify {

Grid1D::Grid1D(double lo, double hi, int n) : x_min(lo), x_max(hi), n_points(n) {
    if (!(x_min < x_max))
        throw GridMismatch("Grid1D: x_min must be < x_max");
    if (n_points < 16)
        throw GridMismatch("Grid1D: need at least 16 points, got " +
                           std::to_string(n_points));
}

std::vector<double> Grid1D::abscissae() const {
    std::vector<double> xs(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) xs[std::size_t(i)] = x(i);
    return xs;
}

StateField::StateField(Grid1D g, double t)
    : grid(g), values(std::size_t(g.n_points), cplx{0.0, 0.0}), time(t) {}

StateField::StateField(Grid1D g, std::vector<cplx> v, double t)
    : grid(g), values(std::move(v)), time(t) {
    if (values.size() != std::size_t(grid.n_points))
        throw GridMismatch("StateField: value count does not match grid");
}

double pairwise_sum(const double* data, std::size_t n) {
    if (n <= 32) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

cplx pairwise_sum(const cplx* data, std::size_t n) {
    if (n <= 32) {
        cplx s{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

double StateField::norm() const {
    if (norm_hint) return *norm_hint;
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) sq[i] = std::norm(values[i]);
    // trapezoid weights: half weight at the two ends
    sq.front() *= 0.5;
    sq.back() *= 0.5;
    const double n2 = pairwise_sum(sq) * grid.spacing();
    const double n1 = std::sqrt(std::max(0.0, n2));
    norm_hint = n1;
    return n1;
}

void StateField::normalize() {
    const double n1 = norm();
    if (n1 <= 1e-12) throw ZeroNorm("StateField::normalize: norm below 1e-12");
    for (auto& v : values) v /= n1;
    norm_hint = 1.0;
}

StateField StateField::sample(const Grid1D& g, double t,
                              const std::function<cplx(double)>& f) {
    StateField out(g, t);
    for (int i = 0; i < g.n_points; ++i)
        out.values[std::size_t(i)] = f(g.x(i));
    return out;
}

}  // namespace dlab::verify
