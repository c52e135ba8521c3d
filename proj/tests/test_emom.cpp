#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "holoreal/emom.hpp"

using namespace holoreal;

namespace
{

const Rank0Search& rank0(Form form)
{
  static const Rank0Search tstar = find_rank0(Form::TstarS2);
  static const Rank0Search compact = find_rank0(Form::S2xS2);
  return form == Form::TstarS2 ? tstar : compact;
}

const BoundaryTrace& boundary(Form form)
{
  static const BoundaryTrace tstar = trace_boundary(Form::TstarS2, rank0(Form::TstarS2));
  static const BoundaryTrace compact = trace_boundary(Form::S2xS2, rank0(Form::S2xS2));
  return form == Form::TstarS2 ? tstar : compact;
}

// Spherical pendulum relative equilibria: J = s - s^-3, H = (s^4 - 3)/(2 s^2), s >= 1.
std::vector<std::array<double, 2>> pendulum_curve(double s_max, int n = 30000)
{
  std::vector<std::array<double, 2>> out;
  for (int k = 0; k <= n; ++k)
  {
    const double s = 1.0 + (s_max - 1.0) * k / n;
    out.push_back({s - std::pow(s, -3.0), (std::pow(s, 4.0) - 3.0) / (2.0 * s * s)});
  }
  return out;
}

std::vector<std::array<double, 2>> restrict_j(const Polyline& line, double lo, double hi)
{
  std::vector<std::array<double, 2>> out;
  for (const BoundaryPoint& p : line.points)
  {
    if (p.J >= lo - 1e-12 && p.J <= hi + 1e-12)
    {
      out.push_back({p.J, p.H});
    }
  }
  return out;
}

ProductPoint compact_point(const std::array<double, 3>& n1, const std::array<double, 3>& n2)
{
  return {{n1[0], n1[1], n1[2], kZetaSphere}, {n2[0], n2[1], n2[2], kZetaSphere}};
}

} // namespace

TEST(EmomMap, RestPoints)
{
  const auto top = emom_map(Form::TstarS2, rest_top());
  const auto bottom = emom_map(Form::TstarS2, rest_bottom());
  EXPECT_NEAR(top[0], 0.0, 1e-15);
  EXPECT_NEAR(top[1], 1.0, 1e-12);
  EXPECT_NEAR(bottom[0], 0.0, 1e-15);
  EXPECT_NEAR(bottom[1], -1.0, 1e-12);
}

TEST(EmomMap, CalibratedEnergyIsUnitPendulum)
{
  Sampler rng{201};
  for (int k = 0; k < 200; ++k)
  {
    const OrbitPoint xi = random_sphere_point(rng, 1.5);
    const auto n = bundle_map(xi);
    const double l2 = xi.x.imag() * xi.x.imag() + xi.y.imag() * xi.y.imag() + xi.z.imag() * xi.z.imag();
    const auto v = emom_map(Form::TstarS2, conj_diagonal_point(xi));
    EXPECT_NEAR(v[0], xi.z.imag(), 1e-14);
    EXPECT_NEAR(v[1], 0.5 * l2 + n[2], 1e-10);
  }
}

TEST(EmomMap, CompactFormMatchesHolomorphicPair)
{
  Sampler rng{202};
  for (int k = 0; k < 200; ++k)
  {
    const ProductPoint pt = random_compact_start(rng, 0.0);
    const auto v = emom_map(Form::S2xS2, pt);
    EXPECT_NEAR(v[0], (kI * hamiltonian_J(pt)).real(), 1e-14);
    EXPECT_NEAR(v[1], hamiltonian_H(pt).real(), 1e-13);
  }
}

TEST(EmomMap, CoincidentPolesAreSingular)
{
  const ProductPoint pt = compact_point({0.0, 0.0, 1.0}, {0.0, 0.0, 1.0});
  EXPECT_NEAR(rotation_generator(pt).real(), 1.0, 1e-15);
  EXPECT_THROW((void)emom_map(Form::S2xS2, pt), SingularityError);
}

TEST(EmomMap, RejectsOffFormPoints)
{
  Sampler rng{203};
  const ProductPoint generic = random_product_point(rng);
  EXPECT_THROW((void)emom_map(Form::S2xS2, generic), DomainError);
  EXPECT_THROW((void)emom_map(Form::TstarS2, generic), DomainError);
  EXPECT_THROW((void)emom_map(Form::TstarS2, compact_point({1.0, 0.0, 0.0}, {0.0, 1.0, 0.0})), DomainError);
}

TEST(EmomMap, GradientsMatchFiniteDifferences)
{
  for (const Form form : {Form::TstarS2, Form::S2xS2})
  {
    for (std::uint64_t k = 1; k <= 50; ++k)
    {
      const Ambient x = detail::halton_point(form, k);
      const Gradients g = detail::evaluate(form, x).gradients;
      for (int j = 0; j < 6; ++j)
      {
        const double h = 1e-5;
        Ambient p = x;
        Ambient m = x;
        p[j] += h;
        m[j] -= h;
        const auto vp = detail::evaluate(form, p).values;
        const auto vm = detail::evaluate(form, m).values;
        EXPECT_NEAR(g(0, j), (vp[0] - vm[0]) / (2.0 * h), 1e-8);
        EXPECT_NEAR(g(1, j), (vp[1] - vm[1]) / (2.0 * h), 1e-7 * std::max(1.0, std::abs(g(1, j))));
      }
    }
  }
}

TEST(Rank, RestPointsAndGenericPoints)
{
  EXPECT_EQ(rank_at(Form::TstarS2, rest_top()), 0);
  EXPECT_EQ(rank_at(Form::TstarS2, rest_bottom()), 0);
  Sampler rng{204};
  for (int k = 0; k < 50; ++k)
  {
    EXPECT_EQ(rank_at(Form::TstarS2, random_pendulum_start(rng)), 2);
    EXPECT_EQ(rank_at(Form::S2xS2, random_compact_start(rng)), 2);
  }
  EXPECT_EQ(rank_at(Form::S2xS2, compact_point({0.0, 0.0, 1.0}, {0.0, 0.0, -1.0})), 0);
  EXPECT_EQ(rank_at(Form::S2xS2, compact_point({0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}), kRegularization), 0);
}

TEST(Rank, RelativeEquilibriumHasRankOne)
{
  // Uniform rotation with angular velocity s at height z = -1/s^2; L = n x p with p = s rho e_y.
  for (const double s : {1.3, 1.8, 2.4})
  {
    const double z = -1.0 / (s * s);
    const double rho = std::sqrt(1.0 - z * z);
    const double j = s - std::pow(s, -3.0);
    const ProductPoint pt = conj_diagonal_point(sphere_point_from_tangent({rho, 0.0, z}, {-z * s * rho, 0.0, s * rho * rho}));
    const auto v = emom_map(Form::TstarS2, pt);
    EXPECT_NEAR(v[0], j, 1e-12);
    EXPECT_NEAR(v[1], (std::pow(s, 4.0) - 3.0) / (2.0 * s * s), 1e-12);
    EXPECT_EQ(rank_at(Form::TstarS2, pt), 1);
  }
}

TEST(Rank0, PendulumHasTwoRestPoints)
{
  const Rank0Search& r = rank0(Form::TstarS2);
  ASSERT_EQ(r.points.size(), 2u);
  EXPECT_FALSE(r.budget_warning);
  EXPECT_NEAR(r.points[0].J_real, 0.0, 1e-6);
  EXPECT_NEAR(r.points[0].H_real, -1.0, 1e-6);
  EXPECT_NEAR(r.points[1].J_real, 0.0, 1e-6);
  EXPECT_NEAR(r.points[1].H_real, 1.0, 1e-6);
  for (const EMomSample& p : r.points)
  {
    EXPECT_EQ(rank_at(Form::TstarS2, p.location), 0);
  }
}

TEST(Rank0, CompactFormHasFourSymmetricPoints)
{
  const Rank0Search& r = rank0(Form::S2xS2);
  ASSERT_EQ(r.points.size(), 4u);
  EXPECT_FALSE(r.budget_warning);
  for (const EMomSample& p : r.points)
  {
    const bool mirrored = std::any_of(r.points.begin(), r.points.end(), [&](const EMomSample& q) {
      return std::abs(q.J_real + p.J_real) < 1e-6 && std::abs(q.H_real - p.H_real) < 1e-6;
    });
    EXPECT_TRUE(mirrored) << p.J_real << " " << p.H_real;
    EXPECT_EQ(p.rank, 0);
  }
  // Exactly one point on J = 0 above all others.
  const auto top = std::max_element(r.points.begin(), r.points.end(),
                                    [](const EMomSample& a, const EMomSample& b) { return a.H_real < b.H_real; });
  EXPECT_NEAR(top->J_real, 0.0, 1e-6);
  for (const EMomSample& p : r.points)
  {
    if (&p != &*top)
    {
      EXPECT_LT(p.H_real, top->H_real - 0.5);
    }
  }
  // Pole configurations by direct substitution: n1 = +-e_z, n2 = +-e_z.
  const std::vector<std::array<double, 2>> expected{{-1.0, -0.5}, {0.0, -0.5}, {0.0, 1.5}, {1.0, -0.5}};
  for (std::size_t k = 0; k < 4; ++k)
  {
    EXPECT_NEAR(r.points[k].J_real, expected[k][0], 1e-6);
    EXPECT_NEAR(r.points[k].H_real, expected[k][1], 1e-6);
  }
}

TEST(Rank0, StableUnderDoubledBudget)
{
  for (const Form form : {Form::TstarS2, Form::S2xS2})
  {
    const Rank0Search doubled = find_rank0(form, 1024, 5e-11);
    const Rank0Search& base = rank0(form);
    ASSERT_EQ(doubled.points.size(), base.points.size());
    for (std::size_t k = 0; k < base.points.size(); ++k)
    {
      EXPECT_NEAR(doubled.points[k].J_real, base.points[k].J_real, 1e-6);
      EXPECT_NEAR(doubled.points[k].H_real, base.points[k].H_real, 1e-6);
    }
  }
}

TEST(Boundary, PendulumMatchesRelativeEquilibria)
{
  const BoundaryTrace& b = boundary(Form::TstarS2);
  ASSERT_FALSE(b.stalled) << b.stall_message;
  const Polyline* lower = b.curve("lower");
  ASSERT_NE(lower, nullptr);
  const double s_max = 2.5;
  const auto oracle = pendulum_curve(s_max);
  const auto traced = restrict_j(*lower, 0.0, s_max - std::pow(s_max, -3.0));
  EXPECT_LT(hausdorff_distance(traced, oracle), 1e-6);
}

TEST(Boundary, PendulumSymmetricAndRankOne)
{
  const Polyline& lower = *boundary(Form::TstarS2).curve("lower");
  const auto v = vertices(lower);
  EXPECT_LT(hausdorff_distance(v, mirrored(v)), 1e-6);
  for (std::size_t k = 0; k < lower.points.size(); k += 250)
  {
    if (std::abs(lower.points[k].J) < 1e-9)
    {
      continue;
    }
    // Recover a point of the level set on the boundary and check its rank.
    const auto ext = detail::reseed(Form::TstarS2, lower.points[k].J, false, 8, 5000 + k);
    ASSERT_TRUE(ext.has_value());
    EXPECT_NEAR(ext->H, lower.points[k].H, 1e-9);
    EXPECT_LE(rank_at(Form::TstarS2, detail::to_product(Form::TstarS2, ext->x)), 1);
  }
}

TEST(Boundary, CompactFormClosedAndSymmetric)
{
  const BoundaryTrace& b = boundary(Form::S2xS2);
  ASSERT_FALSE(b.stalled);
  const Polyline* lower = b.curve("lower");
  const Polyline* upper = b.curve("upper");
  ASSERT_NE(lower, nullptr);
  ASSERT_NE(upper, nullptr);
  EXPECT_NEAR(lower->points.front().J, upper->points.front().J, 1e-12);
  EXPECT_NEAR(lower->points.front().H, upper->points.front().H, 1e-9);
  EXPECT_NEAR(lower->points.back().J, upper->points.back().J, 1e-12);
  EXPECT_NEAR(lower->points.back().H, upper->points.back().H, 1e-9);
  for (const Polyline* line : {lower, upper})
  {
    const auto v = vertices(*line);
    EXPECT_LT(hausdorff_distance(v, mirrored(v)), 1e-6);
    for (const BoundaryPoint& p : line->points)
    {
      EXPECT_TRUE(std::isfinite(p.H));
      EXPECT_LE(std::abs(p.H), 2.0);
    }
  }
}

TEST(Boundary, CompactLowerIsSingularCircle)
{
  for (const BoundaryPoint& p : boundary(Form::S2xS2).curve("lower")->points)
  {
    EXPECT_NEAR(p.H, -0.5 - std::sqrt(std::max(0.0, 1.0 - p.J * p.J)), 1e-9);
  }
}

TEST(Boundary, CompactUpperCriticalBranch)
{
  // Critical values of the compact form along the KKT branch through the top point, by symmetric reduction:
  // J = (1 - t^2)/sqrt(2t), H = (3t + 1 - 1/t)/2 for 0 < t <= 1, mirrored to J < 0.
  std::vector<std::array<double, 2>> oracle;
  for (int k = 0; k <= 40000; ++k)
  {
    const double t = 0.2 + 0.8 * k / 40000.0;
    oracle.push_back({(1.0 - t * t) / std::sqrt(2.0 * t), 0.5 * (3.0 * t + 1.0 - 1.0 / t)});
  }
  const Polyline& upper = *boundary(Form::S2xS2).curve("upper");
  std::size_t critical = 0;
  for (const BoundaryPoint& p : upper.points)
  {
    if (p.source == BoundarySource::Critical)
    {
      ++critical;
      EXPECT_LT(distance_to_polyline({std::abs(p.J), p.H}, oracle), 1e-6) << p.J;
      EXPECT_LT(std::abs(p.J), 0.95);
    }
    else
    {
      EXPECT_NEAR(p.H, -0.5 + std::sqrt(std::max(0.0, 1.0 - p.J * p.J)), 1e-9);
    }
  }
  EXPECT_GT(critical, upper.points.size() / 2);
}

TEST(Boundary, SingularLimitsAtEquator)
{
  const auto lim = singular_limits(0.0);
  EXPECT_NEAR(lim[0], -1.5, 1e-12);
  EXPECT_NEAR(lim[1], 0.5, 1e-12);
  const auto pole = singular_limits(1.0);
  EXPECT_NEAR(pole[0], -0.5, 1e-12);
  EXPECT_NEAR(pole[1], -0.5, 1e-12);
}

TEST(Image, InsideBoundaries)
{
  for (const Form form : {Form::TstarS2, Form::S2xS2})
  {
    const auto img = sample_image(form, 4000);
    ASSERT_EQ(img.size(), 4000u);
    for (const auto& p : img)
    {
      EXPECT_TRUE(encloses(boundary(form), p[0], p[1])) << to_string(form) << " " << p[0] << " " << p[1];
    }
  }
}

TEST(Image, PendulumUnboundedCompactBounded)
{
  const auto max_h = [](const std::vector<std::array<double, 2>>& img) {
    return std::max_element(img.begin(), img.end(), [](const auto& a, const auto& b) { return a[1] < b[1]; })->at(1);
  };
  EXPECT_GT(max_h(sample_image(Form::TstarS2, 2000, 4.0)), max_h(sample_image(Form::TstarS2, 2000, 2.0)) + 2.0);
  for (const auto& p : sample_image(Form::S2xS2, 4000))
  {
    EXPECT_LE(std::abs(p[0]), 1.0);
    EXPECT_LE(p[1], 1.5 + 1e-12);
    EXPECT_GE(p[1], -1.5 - 1e-12);
  }
}

TEST(Bifurcation, Bundle)
{
  BifurcationOptions opt;
  opt.image_samples = 100;
  const BifurcationData d = compute_bifurcation(Form::TstarS2, opt);
  EXPECT_EQ(d.rank0.points.size(), 2u);
  EXPECT_EQ(d.image_samples.size(), 100u);
  EXPECT_EQ(d.boundary.curves.size(), 1u);
  EXPECT_THROW((void)parse_form("torus"), DomainError);
  EXPECT_EQ(parse_form(to_string(Form::S2xS2)), Form::S2xS2);
}
