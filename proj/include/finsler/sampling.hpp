#pragma once
// Deterministic sample-point generation for numeric verification sweeps.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "finsler/fields.hpp"

namespace finsler {

struct SampleOptions {
  int samples = 50;
  std::uint64_t seed = 42;
  double box = 0.3;          // base points drawn from [-box, box]^n
  double margin = 0.05;      // reject y with alpha - beta <= margin * alpha
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  std::vector<double> box_point(int n, double box) {
    std::vector<double> x;
    for (int i = 0; i < n; ++i) x.push_back(uniform(-box, box));
    return x;
  }

  std::vector<double> sphere_direction(int n) {
    std::vector<double> y(static_cast<std::size_t>(n));
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (int i = 0; i < n; ++i) {
        y[static_cast<std::size_t>(i)] = normal();
        norm2 += y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
      }
    } while (norm2 < 1e-12);
    const double inv = 1.0 / std::sqrt(norm2);
    for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] *= inv;
    return y;
  }

 private:
  std::mt19937_64 rng_;
};

struct SamplePoint {
  std::vector<double> x;
  std::vector<double> y;
};

// Draws (x, y) pairs with y on the unit sphere, rejecting pairs where
// alpha - beta <= margin * alpha so the metric stays inside its domain.
inline std::vector<SamplePoint> draw_samples(const MetricField& metric, const OneFormField& oneform,
                                             const SampleOptions& opt) {
  Sampler sampler(opt.seed);
  std::vector<SamplePoint> out;
  const int n = metric.n;
  int guard = 0;
  while (static_cast<int>(out.size()) < opt.samples) {
    if (++guard > 1000 * opt.samples)
      throw std::runtime_error("sampling rejected too many points; domain too tight");
    SamplePoint p;
    p.x = sampler.box_point(n, opt.box);
    p.y = sampler.sphere_direction(n);
    const auto a = metric.values(p.x);
    const auto b = oneform.values(p.x);
    double a2 = 0.0, beta = 0.0;
    for (int i = 0; i < n; ++i) {
      beta += b[static_cast<std::size_t>(i)] * p.y[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j)
        a2 += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
              p.y[static_cast<std::size_t>(i)] * p.y[static_cast<std::size_t>(j)];
    }
    const double alpha = std::sqrt(a2);
    if (alpha - beta <= opt.margin * alpha) continue;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace finsler
