// Timing comparison of the serial reference kernels against their
// OpenMP-parallel counterparts.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "gsfpca/basis.hpp"
#include "gsfpca/experiments.hpp"
#include "gsfpca/parallel.hpp"
#include "gsfpca/simulate.hpp"

using namespace gsfpca;

namespace {

double time_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const std::string& name, double serial_ms, double parallel_ms) {
  std::printf("%-34s %10.1f ms %10.1f ms   x%.2f\n", name.c_str(), serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main() {
  std::printf("%-34s %13s %13s   %s\n", "kernel", "serial", "openmp", "speedup");
  std::printf("(threads available: %d)\n", thread_count());

  {
    const auto& e0 = default_ellipses();
    const std::int64_t res = 512 * 512;
    double ts = time_ms([&] { (void)phantom_serial(e0, res); });
    double tp = time_ms([&] { (void)phantom(e0, res); });
    report("phantom raster 512x512", ts, tp);
  }

  {
    const Grid grid = make_grid(1, 8192);
    const BasisSpec rec = wavelet_spec(512, 1, 4);
    const BasisSpec samp = fourier_spec(32, 1);
    const int old = thread_count();
    set_threads(1);
    double ts = time_ms([&] { (void)cross_gram_fast(rec, samp, grid); });
    set_threads(old);
    double tp = time_ms([&] { (void)cross_gram_fast(rec, samp, grid); });
    report("cross-gram 1D (p=512,q=32)", ts, tp);
  }

  {
    const Grid grid = make_grid(2, 65536);
    const BasisSpec rec = wavelet_spec(1024, 2, 4);
    const BasisSpec samp = fourier_spec(256, 2);
    const int old = thread_count();
    set_threads(1);
    double ts = time_ms([&] { (void)cross_gram_fast(rec, samp, grid); });
    set_threads(old);
    double tp = time_ms([&] { (void)cross_gram_fast(rec, samp, grid); });
    report("cross-gram 2D (p=1024,q=256)", ts, tp);
  }

  {
    const Grid grid = make_grid(1, 4096);
    const GenerativeModel1D model = make_model_1d(grid);
    const BasisSpec rec = wavelet_spec(256, 1, 4);
    NoiseSpec noise;
    noise.sigma_tilde = 0.01;
    noise.seed = 7;
    const int old = thread_count();
    set_threads(1);
    double ts = time_ms([&] {
      (void)make_training_set([&](std::mt19937_64& r) { return draw_1d(model, r); }, 512, rec,
                              grid, noise);
    });
    set_threads(old);
    double tp = time_ms([&] {
      (void)make_training_set([&](std::mt19937_64& r) { return draw_1d(model, r); }, 512, rec,
                              grid, noise);
    });
    report("training set (n=512,p=256)", ts, tp);
  }

  {
    const Grid grid = make_grid(1, 8192);
    const GenerativeModel1D model = make_model_1d(grid);
    ExperimentConfig cfg;
    cfg.p = 128;
    cfg.q = 12;
    cfg.n = 128;
    cfg.repetitions = 8;
    cfg.methods = {Method::kGsfpcaLs};
    const int old = thread_count();
    set_threads(1);
    double ts = time_ms(
        [&] { (void)run_case_1d(model, cfg.p, cfg.q, cfg.n, 10, 4, cfg.sigma, 0.01, cfg); });
    set_threads(old);
    double tp = time_ms(
        [&] { (void)run_case_1d(model, cfg.p, cfg.q, cfg.n, 10, 4, cfg.sigma, 0.01, cfg); });
    report("monte carlo case (8 reps)", ts, tp);
  }

  return 0;
}
