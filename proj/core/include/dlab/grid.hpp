#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "dlab/errors.hpp"

namespace dlab::verify {

using cplx = std::complex<double>;

/// Uniform one-dimensional grid. Spacing is exactly (x_max-x_min)/(n_points-1).
struct Grid1D {
    double x_min = -20.0;
    double x_max = 20.0;
    int n_points = 2001;

    Grid1D() = default;
    Grid1D(double lo, double hi, int n);

    double spacing() const { return (x_max - x_min) / double(n_points - 1); }
    double x(int i) const { return x_min + spacing() * double(i); }
    std::vector<double> abscissae() const;

    bool operator==(const Grid1D& o) const {
        return x_min == o.x_min && x_max == o.x_max && n_points == o.n_points;
    }
};

/// Sampled complex amplitude on a grid at a fixed time.
struct StateField {
    Grid1D grid;
    std::vector<cplx> values;
    double time = 0.0;
    /// Cached L2 norm; filled by norm() on first use or set by normalize().
    mutable std::optional<double> norm_hint;

    StateField() = default;
    StateField(Grid1D g, double t);
    StateField(Grid1D g, std::vector<cplx> v, double t);

    /// Trapezoid L2 norm, cached.
    double norm() const;
    /// Scales values to unit L2 norm. Throws ZeroNorm below 1e-12.
    void normalize();

    static StateField sample(const Grid1D& g, double t,
                             const std::function<cplx(double)>& f);
};

/// Deterministic pairwise summation (stable reduction order).
double pairwise_sum(const double* data, std::size_t n);
cplx pairwise_sum(const cplx* data, std::size_t n);

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.data(), v.size());
}
inline cplx pairwise_sum(const std::vector<cplx>& v) {
    return pairwise_sum(v.data(), v.size());
}

}  // namespace dlab::verify
