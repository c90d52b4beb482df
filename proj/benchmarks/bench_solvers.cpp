#include <benchmark/benchmark.h>

#include <random>

#include "ratefix/convergence.hpp"
#include "ratefix/iteration.hpp"
#include "ratefix/leslie_gower.hpp"
#include "ratefix/rating.hpp"

namespace {

ratefix::RatingProblem make_problem(std::size_t m, std::size_t n, std::size_t p) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.8, 1.2);
    std::size_t cells = m * n * p;
    std::vector<double> losses(cells), exposures(cells);
    for (double& v : losses) v = u(rng);
    for (double& v : exposures) v = u(rng);
    return ratefix::RatingProblem(ratefix::RiskTensor({m, n, p}, std::move(losses)),
                                  ratefix::RiskTensor({m, n, p}, std::move(exposures)), 0.7);
}

ratefix::LGModel make_lg(std::size_t d) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> growth(1.5, 3.0);
    std::vector<double> b(d);
    ratefix::Matrix c(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        b[i] = growth(rng);
        c.at(i, i) = 1.0;
        for (std::size_t j = 0; j < d; ++j)
            if (i != j) c.at(i, j) = 0.1 / static_cast<double>(d);
    }
    return ratefix::LGModel(std::move(b), std::move(c));
}

void BM_sweep(benchmark::State& state) {
    std::size_t s = static_cast<std::size_t>(state.range(0));
    ratefix::RatingProblem p = make_problem(s, s, s);
    ratefix::FactorState f = ratefix::FactorState::ones(p.dims());
    for (auto _ : state) benchmark::DoNotOptimize(ratefix::phi(p, f));
}
BENCHMARK(BM_sweep)->Arg(2)->Arg(5)->Arg(10);

void BM_iterate(benchmark::State& state) {
    std::size_t s = static_cast<std::size_t>(state.range(0));
    ratefix::RatingProblem p = make_problem(s, s, s);
    ratefix::FactorState f0 = ratefix::FactorState::ones(p.dims());
    for (auto _ : state) benchmark::DoNotOptimize(ratefix::iterate(p, f0));
}
BENCHMARK(BM_iterate)->Arg(2)->Arg(5);

void BM_jacobian(benchmark::State& state) {
    std::size_t s = static_cast<std::size_t>(state.range(0));
    ratefix::RatingProblem p = make_problem(s, s, s);
    ratefix::FactorState f = ratefix::FactorState::ones(p.dims());
    for (auto _ : state) benchmark::DoNotOptimize(ratefix::jacobian(p, f));
}
BENCHMARK(BM_jacobian)->Arg(2)->Arg(5)->Arg(10);

void BM_certify(benchmark::State& state) {
    std::size_t s = static_cast<std::size_t>(state.range(0));
    ratefix::RatingProblem p = make_problem(s, s, s);
    for (auto _ : state) benchmark::DoNotOptimize(ratefix::certify(p));
}
BENCHMARK(BM_certify)->Arg(2)->Arg(5)->Arg(10);

void BM_lg_iterate(benchmark::State& state) {
    std::size_t d = static_cast<std::size_t>(state.range(0));
    ratefix::LGModel m = make_lg(d);
    std::vector<double> x0(d, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(ratefix::iterate_lg(m, x0));
}
BENCHMARK(BM_lg_iterate)->Arg(2)->Arg(8)->Arg(32);

void BM_lg_solve(benchmark::State& state) {
    std::size_t d = static_cast<std::size_t>(state.range(0));
    ratefix::LGModel m = make_lg(d);
    for (auto _ : state) benchmark::DoNotOptimize(ratefix::solve_linear(m));
}
BENCHMARK(BM_lg_solve)->Arg(2)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
