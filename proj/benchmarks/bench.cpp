#include "bosegas/disorder.hpp"
#include "bosegas/fragments.hpp"
#include "bosegas/meanfield.hpp"
#include "bosegas/spectrum.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace bosegas;

void bm_synthesize_line(benchmark::State& state) {
    const Grid grid = Grid::line(static_cast<int>(state.range(0)), 0.25);
    const DisorderSpec spec = DisorderSpec::uncorrelated(1.0);
    std::uint64_t r = 0;
    for (auto _ : state) {
        Field u = synthesize(spec, grid, Seed{7, r++});
        benchmark::DoNotOptimize(u.values.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_synthesize_line)->Arg(1 << 11)->Arg(1 << 14)->Arg(1 << 17);

void bm_synthesize_box(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid grid = Grid::box(n, n, n, 0.25);
    const DisorderSpec spec = DisorderSpec::gaussian(1.0, 1.0);
    std::uint64_t r = 0;
    for (auto _ : state) {
        Field u = synthesize(spec, grid, Seed{7, r++});
        benchmark::DoNotOptimize(u.values.data());
    }
    state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(bm_synthesize_box)->Arg(16)->Arg(32)->Arg(48);

void bm_apply_hamiltonian(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid grid = Grid::box(n, n, n, 0.5);
    const Field u = synthesize(DisorderSpec::uncorrelated(1.0), grid, Seed{7, 0});
    const HamiltonianSpec h{grid, u.values, 1.0, 1.0};
    std::vector<double> in(grid.size(), 1.0), out(grid.size());
    for (auto _ : state) {
        apply_hamiltonian(h, in.data(), out.data());
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(bm_apply_hamiltonian)->Arg(16)->Arg(32)->Arg(64);

void bm_lowest_eigenpair(benchmark::State& state) {
    const Grid grid = Grid::line(static_cast<int>(state.range(0)), 0.25);
    const Field u = synthesize(DisorderSpec::uncorrelated(1.0), grid, Seed{7, 0});
    const HamiltonianSpec h{grid, u.values, 1.0, 1.0};
    EigenOptions opt;
    opt.tol = 1e-8;
    for (auto _ : state) {
        EigenSet set = lowest_eigenpairs(h, opt);
        benchmark::DoNotOptimize(set.energies.data());
    }
}
BENCHMARK(bm_lowest_eigenpair)->Arg(1 << 10)->Arg(1 << 12);

void bm_gpe_descent(benchmark::State& state) {
    const Grid grid = Grid::line(static_cast<int>(state.range(0)), 0.25);
    const Field u = synthesize(DisorderSpec::uncorrelated(1.0), grid, Seed{7, 0});
    GpeProblem prob;
    prob.grid = grid;
    prob.disorder = u.values;
    prob.coupling = 1.0;
    prob.particle_count = 0.1 * grid.volume();
    FlowOptions opts;
    opts.tol = 1e-6;
    for (auto _ : state) {
        GroundState st = solve_ground_state(prob, opts);
        benchmark::DoNotOptimize(st.energy);
    }
}
BENCHMARK(bm_gpe_descent)->Arg(256)->Arg(1024);

void bm_detect_fragments(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid grid = Grid::plane(n, n, 0.5);
    Field density(grid);
    const Field u = synthesize(DisorderSpec::gaussian(1.0, 2.0), grid, Seed{7, 0});
    for (std::size_t i = 0; i < density.size(); ++i)
        density[i] = std::max(0.0, 1.0 - u[i]);
    for (auto _ : state) {
        FragmentReport rep = detect_fragments(density, ThresholdPolicy::relative(0.3));
        benchmark::DoNotOptimize(rep.fragments.data());
    }
    state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(bm_detect_fragments)->Arg(64)->Arg(256);

} // namespace

BENCHMARK_MAIN();
