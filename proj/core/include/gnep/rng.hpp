#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>

namespace gnep {

// Deterministic random source. Draws doubles directly from the mt19937_64
// bit stream instead of going through std:: distributions, whose output is
// implementation-defined; instance generation must reproduce byte-identical
// files from a seed.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 bits of mantissa.
  double unit() { return std::ldexp(static_cast<double>(engine_() >> 11), -53); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  // Box-Muller; deterministic given the seed.
  double gaussian() {
    double u1 = unit();
    while (u1 <= 1e-300) u1 = unit();
    const double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  Eigen::VectorXd uniform_vector(Eigen::Index n, double lo, double hi) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  Eigen::VectorXd gaussian_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gaussian();
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gnep
