#pragma once

#include <array>
#include <cmath>

#include "holoreal/orbit.hpp"
#include "holoreal/sampling.hpp"

namespace holoreal
{

/// (xi1, xi2) on CS^2 x CS^2.
struct ProductPoint
{
  OrbitPoint a{};
  OrbitPoint b{};

  bool is_member(double tol = 1e-10) const
  {
    return a.zeta == kZetaSphere && b.zeta == kZetaSphere && a.is_member(tol) && b.is_member(tol);
  }
};

/// (x1, y1, z1, x2, y2, z2)
using Coords6 = std::array<Complex, 6>;

inline Coords6 coords(const ProductPoint& pt) { return {pt.a.x, pt.a.y, pt.a.z, pt.b.x, pt.b.y, pt.b.z}; }

inline ProductPoint from_coords(const Coords6& c)
{
  return {{c[0], c[1], c[2], kZetaSphere}, {c[3], c[4], c[5], kZetaSphere}};
}

inline double distance(const ProductPoint& p, const ProductPoint& q)
{
  return std::hypot(distance(p.a, q.a), distance(p.b, q.b));
}

inline double max_imag(const ProductPoint& pt)
{
  double m = 0.0;
  for (const Complex& c : coords(pt))
  {
    m = std::max(m, std::abs(c.imag()));
  }
  return m;
}

inline double hermitian_norm_sq(const ProductPoint& pt) { return pt.a.hermitian_norm_sq() + pt.b.hermitian_norm_sq(); }

inline ProductPoint random_product_point(Sampler& rng, double spread = 1.0)
{
  return {random_sphere_point(rng, spread), random_sphere_point(rng, spread)};
}

} // namespace holoreal
