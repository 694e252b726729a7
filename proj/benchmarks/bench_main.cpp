// Micro-benchmarks for the hot paths: special functions, mode sampling,
// the Darboux application, and the coherent-state synthesis.

#include <benchmark/benchmark.h>

#include <complex>

#include "dlab/coherent.hpp"
#include "dlab/darboux.hpp"
#include "dlab/modes.hpp"
#include "dlab/numerics.hpp"
#include "dlab/oscillator.hpp"
#include "dlab/specfun.hpp"

using namespace dlab;
using verify::Grid1D;

namespace {

const classical::OscillatorParams kP{};
const classical::ErmakovSpec kE{1.0, 4.0, 0.5};
const darboux::DarbouxSpec kD{-0.5, 0.89, 1.0};

modes::HermiteGaussBasis make_basis() {
    return modes::HermiteGaussBasis(classical::validate(kP, kE), {0.0, 0.0});
}

void BM_hermite32(benchmark::State& state) {
    double x = 0.37;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::hermite(32, x));
        x += 1e-9;
    }
}
BENCHMARK(BM_hermite32);

void BM_kummer(benchmark::State& state) {
    double x = 4.2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::kummer(0.65, 1.5, x));
        x += 1e-9;
    }
}
BENCHMARK(BM_kummer);

void BM_theta_integral(benchmark::State& state) {
    const auto model = classical::validate(kP, kE);
    double t = 12.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(classical::theta(model, t));
        t += 1e-9;
    }
}
BENCHMARK(BM_theta_integral);

void BM_phi_family(benchmark::State& state) {
    const auto basis = make_basis();
    const Grid1D g{-20.0, 20.0, 2001};
    for (auto _ : state) {
        auto fam = basis.sample_phi_family(int(state.range(0)), g, 1.1);
        benchmark::DoNotOptimize(fam);
    }
}
BENCHMARK(BM_phi_family)->Arg(7)->Arg(31);

void BM_nodeless_certification(benchmark::State& state) {
    for (auto _ : state) {
        auto rep = darboux::certify_nodeless(kD, 8.0);
        benchmark::DoNotOptimize(rep);
    }
}
BENCHMARK(BM_nodeless_certification);

void BM_apply_L_primitive(benchmark::State& state) {
    const auto basis = make_basis();
    const darboux::DarbouxTransform tr(basis, kD);
    const Grid1D g{-12.0, 12.0, 4001};
    const auto f = basis.sample_phi_n(3, g, 0.9);
    for (auto _ : state) {
        auto lf = tr.apply_L(f, darboux::LForm::Primitive);
        benchmark::DoNotOptimize(lf);
    }
}
BENCHMARK(BM_apply_L_primitive);

void BM_psi_family(benchmark::State& state) {
    const auto basis = make_basis();
    const darboux::DarbouxTransform tr(basis, kD);
    const Grid1D g{-20.0, 20.0, 2001};
    for (auto _ : state) {
        auto fam = tr.sample_psi_family(7, g, 1.1);
        benchmark::DoNotOptimize(fam);
    }
}
BENCHMARK(BM_psi_family);

void BM_psi_tilde_z(benchmark::State& state) {
    const auto basis = make_basis();
    const darboux::DarbouxTransform tr(basis, kD);
    const coherent::CoherentState cs(tr, std::complex<double>{0.0, 1.0});
    const Grid1D g{-20.0, 20.0, 2001};
    for (auto _ : state) {
        auto f = cs.psi_tilde_z(g, 0.8);
        benchmark::DoNotOptimize(f);
    }
}
BENCHMARK(BM_psi_tilde_z);

void BM_inner_product(benchmark::State& state) {
    const auto basis = make_basis();
    const Grid1D g{-20.0, 20.0, 8001};
    const auto a = basis.sample_phi_n(2, g, 0.4);
    const auto b = basis.sample_phi_n(3, g, 0.4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify::inner_product(a, b));
    }
}
BENCHMARK(BM_inner_product);

}  // namespace

BENCHMARK_MAIN();
