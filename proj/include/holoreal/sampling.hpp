#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

#include "holoreal/algebra.hpp"

namespace holoreal
{

/// Seeded generator for all sampling in the library.
class Sampler
{
public:
  explicit Sampler(std::uint64_t seed) : engine_{seed} {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_(engine_); }
  Complex complex_normal() { return {normal(), normal()}; }

  std::array<double, 3> unit_vector()
  {
    for (;;)
    {
      const std::array<double, 3> v{normal(), normal(), normal()};
      const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      if (r > 1e-8)
      {
        return {v[0] / r, v[1] / r, v[2] / r};
      }
    }
  }

  /// Haar-random element of SU(2) from a unit quaternion.
  Mat2C su2()
  {
    std::array<double, 4> a{normal(), normal(), normal(), normal()};
    const double r = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]);
    for (double& c : a)
    {
      c /= r;
    }
    const auto& e = pauli_basis();
    return a[0] * Mat2C::identity() + a[1] * e.I + a[2] * e.J + a[3] * e.K;
  }

  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Halton low-discrepancy sequence, one coordinate per prime base.
inline double halton(std::uint64_t index, std::uint64_t base)
{
  double f = 1.0;
  double r = 0.0;
  while (index > 0)
  {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

inline constexpr std::array<std::uint64_t, 8> kHaltonBases{2, 3, 5, 7, 11, 13, 17, 19};

} // namespace holoreal
