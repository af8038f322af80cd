#include <benchmark/benchmark.h>

#include "mollified/arithmetic.hpp"
#include "mollified/characters.hpp"
#include "mollified/lfunction.hpp"
#include "mollified/mollifier.hpp"
#include "mollified/moments.hpp"
#include "mollified/optimizer.hpp"

using namespace mollified;

namespace {

void enumerate_family(benchmark::State& state) {
  const auto q = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(characters::enumerate_even_primitive(q));
}
BENCHMARK(enumerate_family)->Arg(101)->Arg(1009)->Arg(10007);

void single_formula(benchmark::State& state) {
  const auto q = static_cast<std::uint64_t>(state.range(0));
  const lfunction::LFunction L(characters::enumerate_even_primitive(q).front());
  for (auto _ : state) benchmark::DoNotOptimize(L(lfunction::cplx(0.5, 3.0)));
}
BENCHMARK(single_formula)->Arg(101)->Arg(1009)->Arg(10007);

void circle_kernel(benchmark::State& state) {
  const auto q = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(lfunction::CircleKernel(q, {}, lfunction::kDefaultRadius, moments::family_nodes(1)));
}
BENCHMARK(circle_kernel)->Arg(101)->Arg(1009)->Unit(benchmark::kMillisecond);

void central_derivative_from_kernel(benchmark::State& state) {
  const std::uint64_t q = 1009;
  const lfunction::CircleKernel kernel(q, {}, lfunction::kDefaultRadius, moments::family_nodes(1));
  const lfunction::LFunction L(characters::enumerate_even_primitive(q).front());
  for (auto _ : state) benchmark::DoNotOptimize(kernel.derivative(kernel.node_values(L), 1));
}
BENCHMARK(central_derivative_from_kernel);

void mollifier_value(benchmark::State& state) {
  const auto q = static_cast<std::uint64_t>(state.range(0));
  const auto chi = characters::enumerate_even_primitive(q).front();
  const auto spec = mollifier::optimal_P_truncated(1, 0.49, 9);
  for (auto _ : state) benchmark::DoNotOptimize(mollifier::mollifier_value(chi, spec));
}
BENCHMARK(mollifier_value)->Arg(1009)->Arg(10007);

void family_evaluation(benchmark::State& state) {
  const auto q = static_cast<std::uint64_t>(state.range(0));
  const auto spec = mollifier::optimal_P_truncated(1, 0.49, 9);
  moments::FamilyOptions options;
  options.jobs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(moments::evaluate_family(q, 1, spec, {}, options));
}
BENCHMARK(family_evaluation)->Arg(101)->Arg(499)->Unit(benchmark::kMillisecond);

void closed_form_optimum(benchmark::State& state) {
  unsigned k = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimizer::proportion_star(k, optimizer::kTableTheta));
    k = k % 100 + 1;
  }
}
BENCHMARK(closed_form_optimum);

void moebius_sieve(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(arithmetic::moebius_table(n));
}
BENCHMARK(moebius_sieve)->Arg(100000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
