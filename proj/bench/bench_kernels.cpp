// Serial reference loops against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <vector>

#include "fbsing/kernels.hpp"

using namespace fbsing;

namespace {

struct Fixture {
  PolarGrid grid;
  kernels::Stencil stencil;
  std::vector<double> u, out, d_r, d_t, f, df, ring;

  explicit Fixture(int n)
      : grid(build_sector_grid(SectorSpec{2}, n, n)),
        stencil(kernels::make_stencil(grid)),
        u(grid.size()),
        out(grid.size()),
        d_r(grid.size()),
        d_t(grid.size()),
        f(grid.size()),
        df(grid.size()),
        ring(n) {
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = std::sin(0.001 * k) - 0.02;
  }
};

Fixture& fixture(int n) {
  static std::vector<std::unique_ptr<Fixture>> cache;
  for (auto& p : cache)
    if (p->grid.n_r() == n) return *p;
  cache.push_back(std::make_unique<Fixture>(n));
  return *cache.back();
}

template <bool Omp>
void BM_stencil(benchmark::State& st) {
  Fixture& fx = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    if constexpr (Omp) kernels::omp::apply_stencil(fx.stencil, fx.u, fx.out);
    else kernels::serial::apply_stencil(fx.stencil, fx.u, fx.out);
    benchmark::DoNotOptimize(fx.out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(fx.u.size()));
}

template <bool Omp>
void BM_gradient(benchmark::State& st) {
  Fixture& fx = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    if constexpr (Omp) kernels::omp::gradient(fx.grid, fx.u, fx.d_r, fx.d_t);
    else kernels::serial::gradient(fx.grid, fx.u, fx.d_r, fx.d_t);
    benchmark::DoNotOptimize(fx.d_t.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(fx.u.size()));
}

template <bool Omp>
void BM_heaviside(benchmark::State& st) {
  Fixture& fx = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    if constexpr (Omp) kernels::omp::heaviside(0.05, fx.u, fx.f, fx.df);
    else kernels::serial::heaviside(0.05, fx.u, fx.f, fx.df);
    benchmark::DoNotOptimize(fx.df.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(fx.u.size()));
}

template <bool Omp>
void BM_ring_sums(benchmark::State& st) {
  Fixture& fx = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    if constexpr (Omp) kernels::omp::ring_sums(fx.grid, fx.u, fx.ring);
    else kernels::serial::ring_sums(fx.grid, fx.u, fx.ring);
    benchmark::DoNotOptimize(fx.ring.data());
  }
}

template <bool Omp>
void BM_sample_circle(benchmark::State& st) {
  Fixture& fx = fixture(static_cast<int>(st.range(0)));
  std::vector<double> samples(4 * fx.grid.disk_columns());
  for (auto _ : st) {
    if constexpr (Omp) kernels::omp::sample_circle(fx.grid, fx.u, 0.37, samples);
    else kernels::serial::sample_circle(fx.grid, fx.u, 0.37, samples);
    benchmark::DoNotOptimize(samples.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(samples.size()));
}

}  // namespace

#define FBSING_PAIR(fn)                                                       \
  BENCHMARK_TEMPLATE(fn, false)->Name(#fn "/serial")->Arg(256)->Arg(1024);    \
  BENCHMARK_TEMPLATE(fn, true)->Name(#fn "/omp")->Arg(256)->Arg(1024)

FBSING_PAIR(BM_stencil);
FBSING_PAIR(BM_gradient);
FBSING_PAIR(BM_heaviside);
FBSING_PAIR(BM_ring_sums);
FBSING_PAIR(BM_sample_circle);

BENCHMARK_MAIN();
