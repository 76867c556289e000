#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "bwt/potential.hpp"
#include "bwt/transfer.hpp"

namespace bwt::test {

// Independent oracle: slab propagators written out with real cos/cosh
// branches and multiplied in plain doubles.
struct Real2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
};

inline Real2 operator*(const Real2& x, const Real2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline Real2 real_slab(double w, double value, double E) {
  const double s = E - value;
  if (s > 0.0) {
    const double k = std::sqrt(s);
    return {std::cos(k * w), std::sin(k * w) / k, -k * std::sin(k * w), std::cos(k * w)};
  }
  if (s < 0.0) {
    const double g = std::sqrt(-s);
    return {std::cosh(g * w), std::sinh(g * w) / g, g * std::sinh(g * w), std::cosh(g * w)};
  }
  return {1.0, w, 0.0, 1.0};
}

inline Real2 real_chain(const SegmentChain& chain, double E) {
  Real2 m;
  for (const auto& s : chain.segments()) m = real_slab(s.width, s.value, E) * m;
  return m;
}

inline double rel_diff(double x, Complex y) {
  const double scale = std::max(std::abs(x), std::abs(y));
  return scale == 0.0 ? 0.0 : std::abs(Complex(x) - y) / scale;
}

inline double max_rel_diff(const Real2& o, const TransferMatrix& m) {
  return std::max({rel_diff(o.a, m.m11), rel_diff(o.b, m.m12), rel_diff(o.c, m.m21), rel_diff(o.d, m.m22)});
}

struct Sample {
  BWParams params;
  double k = 1.0;
};

// Random structures spanning both models, both signs of alpha, sigma in
// [0, 2] and several decades of eps and k.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  Sample next() {
    std::uniform_real_distribution<double> alpha(-40.0, 40.0), b(0.5, 5.0), sigma(0.0, 2.0), unit(0.0, 1.0);
    Sample s;
    s.params.model = unit(rng_) < 0.5 ? Model::Plus : Model::Minus;
    s.params.alpha = alpha(rng_);
    s.params.eps = std::pow(10.0, -2.0 + 2.0 * unit(rng_));
    s.params.c1 = b(rng_);
    s.params.c2 = 1.0;
    s.params.sigma = sigma(rng_);
    s.k = std::pow(10.0, -1.3 + 2.3 * unit(rng_));
    return s;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Draws samples whose product matrix stays below `limit` in every entry.
inline std::vector<Sample> bounded_samples(std::uint64_t seed, std::size_t count, double limit) {
  Sampler sampler(seed);
  std::vector<Sample> out;
  while (out.size() < count) {
    const Sample s = sampler.next();
    if (chain_matrix(realize(s.params), s.k * s.k).max_abs() < limit) out.push_back(s);
  }
  return out;
}

}  // namespace bwt::test
