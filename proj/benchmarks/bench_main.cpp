#include "vorwave/isp.hpp"
#include "vorwave/nonlinear.hpp"
#include "vorwave/spectrum.hpp"
#include "vorwave/stream.hpp"

#include <benchmark/benchmark.h>

using namespace vorwave;

namespace {

const WaveProblem& two_mode() {
    static const WaveProblem p = [] {
        WaveProblemOptions o;
        o.N = 2;
        o.b = 29.85;
        return make_wave_problem(o);
    }();
    return p;
}

void BM_SolveStream(benchmark::State& state) {
    StreamOptions opt;
    opt.nodes = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_stream(linear_model(29.85), 1.0, opt));
}
BENCHMARK(BM_SolveStream)->Arg(257)->Arg(512)->Arg(1025)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
    const auto s = linear_stream(29.85, 1.0);
    const auto m = linear_model(29.85);
    for (auto _ : state) benchmark::DoNotOptimize(sturm_liouville_spectrum(s, m, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Spectrum)->Arg(3)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_JacobianAnalytic(benchmark::State& state) {
    const auto ctx = make_isp_context(29.85, 1.0, 2);
    const auto basis = make_bump_basis(2, BumpLayout{0.1, 0.9, 0.0});
    for (auto _ : state) benchmark::DoNotOptimize(jacobian_analytic(ctx, basis));
}
BENCHMARK(BM_JacobianAnalytic)->Unit(benchmark::kMillisecond);

void BM_MapT(benchmark::State& state) {
    const auto ctx = make_isp_context(29.85, 1.0, 2);
    const auto basis = make_bump_basis(2, BumpLayout{0.1, 0.9, 0.0});
    for (auto _ : state) benchmark::DoNotOptimize(map_T({1e-3, -1e-3}, ctx, basis));
}
BENCHMARK(BM_MapT)->Unit(benchmark::kMillisecond);

void BM_AdaptedBasis(benchmark::State& state) {
    const auto ctx = make_isp_context(29.85, 1.0, 2);
    for (auto _ : state) benchmark::DoNotOptimize(adapted_basis(ctx));
}
BENCHMARK(BM_AdaptedBasis)->Unit(benchmark::kMillisecond);

void BM_ResidualOperator(benchmark::State& state) {
    const auto& p = two_mode();
    const auto& bg = p.background;
    const auto m = make_modal_state({1e-3, 1e-3}, p.pattern.mu_star, p.pattern.n, p.pattern.Lambda_star);
    const auto f = assemble_linear(m, bg.spectrum, bg.stream, p.x);
    for (auto _ : state) benchmark::DoNotOptimize(residual_operator(f.Phi, bg, p.x));
}
BENCHMARK(BM_ResidualOperator)->Unit(benchmark::kMillisecond);

void BM_SolveTilde(benchmark::State& state) {
    const auto& p = two_mode();
    const auto& bg = p.background;
    Eigen::MatrixXd V(p.x.size(), bg.stream.grid.n);
    for (int i = 0; i < p.x.size(); ++i) {
        for (int m = 0; m < bg.stream.grid.n; ++m)
            V(i, m) = std::sin(2.0 * bg.stream.z[m]) * std::cos(3 * p.x.alpha() * p.x.node(i));
        for (int j = 0; j < 2; ++j) V.row(i) -= bg.spectrum.project(j, V.row(i).transpose()) * bg.spectrum.phi[j].transpose();
    }
    Eigen::MatrixXd f;
    Eigen::VectorXd g;
    apply_linear(V, bg, p.x, f, g);
    for (auto _ : state) benchmark::DoNotOptimize(solve_tilde(f, g, bg, 2, p.x));
}
BENCHMARK(BM_SolveTilde)->Unit(benchmark::kMillisecond);

void BM_LyapunovSchmidt(benchmark::State& state) {
    const auto& p = two_mode();
    for (auto _ : state) benchmark::DoNotOptimize(lyapunov_schmidt_solve({1e-3, 1e-3}, p));
}
BENCHMARK(BM_LyapunovSchmidt)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
