#include <array>
#include <cmath>

#include <gtest/gtest.h>

#include "holoreal/phase.hpp"
#include "holoreal/sampling.hpp"
#include "test_helpers.hpp"

using namespace holoreal;
using holoreal::testing::near;

namespace
{

PhasePoint random_phase(Sampler& rng)
{
  return {{rng.complex_normal(), rng.complex_normal()}, {rng.complex_normal(), rng.complex_normal()}};
}

Biquaternion random_biquaternion(Sampler& rng)
{
  return {rng.complex_normal(), rng.complex_normal(), rng.complex_normal(), rng.complex_normal()};
}

const Vec2C e1{1.0, 0.0};
const Vec2C e2{0.0, 1.0};
const Vec2C zero{0.0, 0.0};

// The three circle moments read off a single basis: mu_a from |q|^2-|p|^2 and the
// other two from 2 p^T q = mu_b + i mu_c with (a,b,c) cyclic.
std::array<Complex, 3> moments_through(const Biquaternion& b, Axis axis)
{
  const PhasePoint pt = biquat_to_phase(b, axis);
  const Complex a = kI * (norm_sq(pt.q) - norm_sq(pt.p));
  const Complex w = 2.0 * (pt.p[0] * pt.q[0] + pt.p[1] * pt.q[1]);
  const Complex next = kI * w.imag();
  const Complex last = -kI * w.real();
  switch (axis)
  {
    case Axis::I: return {a, next, last};
    case Axis::J: return {last, a, next};
    case Axis::K: return {next, last, a};
  }
  return {};
}

} // namespace

TEST(Omega, CanonicalPairing)
{
  EXPECT_TRUE(near(omega({e1, zero}, {zero, e1}), 1.0, 0.0));
}

TEST(Omega, Antisymmetric)
{
  Sampler rng{2};
  const PhasePoint v = random_phase(rng);
  const PhasePoint w = random_phase(rng);
  EXPECT_TRUE(near(omega(v, v), 0.0, 1e-15));
  EXPECT_TRUE(near(omega(v, w), -omega(w, v), 1e-14));
}

TEST(Omega, ExpandedByHand)
{
  // p2^T q1 - p1^T q2 = e1.e1 - (i e2).e2 = 1 - i
  const PhasePoint v1{e1, kI * e2};
  const PhasePoint v2{e2, e1};
  EXPECT_TRUE(near(omega(v1, v2), Complex{1.0, -1.0}, 0.0));
}

TEST(Gl1Action, Substitution)
{
  const PhasePoint pt{e1, e1};
  const PhasePoint moved = gl1_action(2.0, pt);
  EXPECT_TRUE(near(moved.q[0], 2.0, 0.0));
  EXPECT_TRUE(near(moved.p[0], 0.5, 0.0));
  const PhasePoint same = gl1_action(1.0, pt);
  EXPECT_EQ(distance(same, pt), 0.0);
}

TEST(Gl1Action, ZeroRejected) { EXPECT_THROW(gl1_action(0.0, PhasePoint{e1, e1}), DomainError); }

TEST(Gl1Action, PreservesOmega)
{
  Sampler rng{5};
  for (int k = 0; k < 200; ++k)
  {
    const Complex g = rng.complex_normal();
    const PhasePoint v = random_phase(rng);
    const PhasePoint w = random_phase(rng);
    EXPECT_TRUE(near(omega(gl1_action(g, v), gl1_action(g, w)), omega(v, w), 1e-12));
  }
}

TEST(Su2Action, Substitution)
{
  const PhasePoint pt{e1, e2};
  const PhasePoint moved = su2_action(pauli_basis().I, pt);
  EXPECT_TRUE(near(moved.q[0], kI, 0.0));
  EXPECT_TRUE(near(moved.q[1], 0.0, 0.0));
  EXPECT_TRUE(near(moved.p[0], 0.0, 0.0));
  EXPECT_TRUE(near(moved.p[1], kI, 0.0));
  EXPECT_EQ(distance(su2_action(Mat2C::identity(), pt), pt), 0.0);
}

TEST(Su2Action, NonUnitaryRejected)
{
  EXPECT_THROW(su2_action(Mat2C{2.0, 0.0, 0.0, 0.5}, PhasePoint{e1, e2}), DomainError);
}

TEST(Su2Action, PreservesFormNormsAndMoments)
{
  Sampler rng{8};
  for (int k = 0; k < 200; ++k)
  {
    const Mat2C g = rng.su2();
    const PhasePoint v = random_phase(rng);
    const PhasePoint w = random_phase(rng);
    const PhasePoint gv = su2_action(g, v);
    EXPECT_TRUE(near(omega(gv, su2_action(g, w)), omega(v, w), 1e-12));
    EXPECT_NEAR(norm_sq(gv.q), norm_sq(v.q), 1e-12);
    EXPECT_NEAR(norm_sq(gv.p), norm_sq(v.p), 1e-12);
    const auto before = mu123(phase_to_biquat(v, Axis::I));
    const auto after = mu123(phase_to_biquat(gv, Axis::I));
    for (int a = 0; a < 3; ++a)
    {
      EXPECT_TRUE(near(after[a], before[a], 1e-12));
    }
  }
}

TEST(MomentumP, OuterProducts)
{
  const Mat2C up = momentum_P({e1, e2});
  EXPECT_TRUE(near(up, Mat2C{0.0, 1.0, 0.0, 0.0}, 0.0));
  EXPECT_TRUE(near(momentum_P({e1, kI * e1}), Mat2C{kI, 0.0, 0.0, 0.0}, 0.0));
}

TEST(MomentumP, RankOneAndTrace)
{
  Sampler rng{13};
  for (int k = 0; k < 200; ++k)
  {
    const PhasePoint pt = random_phase(rng);
    const Mat2C m = momentum_P(pt);
    EXPECT_TRUE(near(m.det(), 0.0, 1e-13));
    EXPECT_TRUE(near(m.trace(), mu_trace(pt), 1e-14));
  }
}

TEST(MomentumP, Equivariance)
{
  Sampler rng{17};
  for (int k = 0; k < 200; ++k)
  {
    const PhasePoint pt = random_phase(rng);
    const Mat2C m = momentum_P(pt);
    EXPECT_TRUE(near(momentum_P(gl1_action(rng.complex_normal(), pt)), m, 1e-10));
    const Mat2C g = rng.su2();
    EXPECT_TRUE(near(momentum_P(su2_action(g, pt)), g * m * adjoint(g), 1e-10));
  }
}

TEST(MuTrace, Examples)
{
  EXPECT_TRUE(near(mu_trace({e1, kI * e1}), kI, 0.0));
  EXPECT_TRUE(near(mu_trace({e1, e2}), 0.0, 0.0));
}

TEST(BiquatToPhase, UnitOnFirstAxis)
{
  const PhasePoint pt = biquat_to_phase({1.0, 0.0, 0.0, 0.0}, Axis::I);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_TRUE(near(pt.q[0], s, 1e-16));
  EXPECT_TRUE(near(pt.q[1], 0.0, 0.0));
  EXPECT_TRUE(near(pt.p[0], 0.0, 0.0));
  EXPECT_TRUE(near(pt.p[1], -s, 1e-16));
}

TEST(BiquatToPhase, RoundTripAndNormOnEveryAxis)
{
  Sampler rng{19};
  for (int k = 0; k < 300; ++k)
  {
    const Biquaternion b = random_biquaternion(rng);
    for (Axis axis : kAxes)
    {
      const PhasePoint pt = biquat_to_phase(b, axis);
      const Biquaternion back = phase_to_biquat(pt, axis);
      EXPECT_LT((back - b).norm_sq(), 1e-28);
      EXPECT_NEAR(norm_sq(pt.q) + norm_sq(pt.p), b.norm_sq(), 1e-12);
    }
  }
}

TEST(BiquatToPhase, CircleActionIsPhaseRotation)
{
  // The circle acts by the complex scalar exp(i theta) on all four coefficients.
  Sampler rng{23};
  const Biquaternion b = random_biquaternion(rng);
  const Complex e = std::exp(kI * 0.7);
  for (Axis axis : kAxes)
  {
    const PhasePoint moved = biquat_to_phase(e * b, axis);
    const PhasePoint pt = biquat_to_phase(b, axis);
    EXPECT_LT(distance(moved, PhasePoint{e * pt.q, std::conj(e) * pt.p}), 1e-14) << to_string(axis);
  }
}

TEST(Mu123, PointOnFirstAxis)
{
  const Biquaternion b = phase_to_biquat({e1, zero}, Axis::I);
  const auto mu = mu123(b);
  EXPECT_TRUE(near(mu[0], kI, 1e-15));
  EXPECT_TRUE(near(mu[1], 0.0, 1e-15));
  EXPECT_TRUE(near(mu[2], 0.0, 1e-15));
  const auto zero_mu = mu123(Biquaternion{});
  for (const Complex m : zero_mu)
  {
    EXPECT_EQ(m, Complex{});
  }
}

TEST(Mu123, IndependentOfBasis)
{
  Sampler rng{29};
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k)
  {
    const Biquaternion b = random_biquaternion(rng);
    const auto direct = mu123(b);
    for (Axis axis : kAxes)
    {
      const auto through = moments_through(b, axis);
      for (int a = 0; a < 3; ++a)
      {
        worst = std::max(worst, std::abs(through[a] - direct[a]));
      }
    }
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Mu123, OtherCyclicOrderIsInconsistent)
{
  // Apply the first-axis formula to (u,z,v,w) for J instead of (u,w,z,v).
  Sampler rng{31};
  const Biquaternion b = random_biquaternion(rng);
  const PhasePoint wrong = biquat_to_phase(Biquaternion{b.u, b.z, b.v, b.w}, Axis::I);
  const Complex mu2_wrong = kI * (norm_sq(wrong.q) - norm_sq(wrong.p));
  const Complex w = 2.0 * mu_trace(biquat_to_phase(b, Axis::I));
  EXPECT_GT(std::abs(mu2_wrong - kI * w.imag()), 1e-3);
}

TEST(Mu123, HolomorphicMomentIsHalfTheComplexCombination)
{
  Sampler rng{37};
  const Biquaternion b = random_biquaternion(rng);
  const auto mu = mu123(b);
  EXPECT_TRUE(near(holomorphic_moment(b, Axis::I), 0.5 * (mu[1] + kI * mu[2]), 1e-12));
  EXPECT_TRUE(near(holomorphic_moment(b, Axis::J), 0.5 * (mu[2] + kI * mu[0]), 1e-12));
  EXPECT_TRUE(near(holomorphic_moment(b, Axis::K), 0.5 * (mu[0] + kI * mu[1]), 1e-12));
}

TEST(CanonicalBracket, CoordinatePairs)
{
  Sampler rng{41};
  const PhasePoint pt = random_phase(rng);
  const auto q0 = [](const auto& q, const auto&) { return q[0]; };
  const auto p0 = [](const auto&, const auto& p) { return p[0]; };
  const auto p1 = [](const auto&, const auto& p) { return p[1]; };
  EXPECT_TRUE(near(canonical_bracket(q0, p0, pt), 1.0, 1e-15));
  EXPECT_TRUE(near(canonical_bracket(q0, p1, pt), 0.0, 1e-15));
}

TEST(CanonicalBracket, HamiltonianFieldContractsOmega)
{
  Sampler rng{43};
  const auto f = [](const auto& q, const auto& p) { return q[0] * p[1] * q[1] + p[0] * p[0]; };
  for (int k = 0; k < 50; ++k)
  {
    const PhasePoint pt = random_phase(rng);
    const PhasePoint y = random_phase(rng);
    const PhasePoint x = phase_hamiltonian_field(f, pt);
    const PhaseGradient d = phase_gradient(f, pt);
    const Complex df_y = d[0] * y.q[0] + d[1] * y.q[1] + d[2] * y.p[0] + d[3] * y.p[1];
    EXPECT_TRUE(near(omega(x, y), df_y, 1e-12));
  }
}

namespace
{

template <class F>
Real8 real_gradient(F&& u, const PhasePoint& pt)
{
  const Real8 x = to_real(pt);
  const double h = 1e-6;
  Real8 g;
  for (int k = 0; k < 8; ++k)
  {
    Real8 xp = x;
    Real8 xm = x;
    xp[k] += h;
    xm[k] -= h;
    g[k] = (u(from_real(xp)) - u(from_real(xm))) / (2.0 * h);
  }
  return g;
}

template <class F>
Real8 rk4(F&& field, Real8 x, double t, int steps)
{
  const double h = t / steps;
  for (int s = 0; s < steps; ++s)
  {
    const Real8 k1 = field(x);
    const Real8 k2 = field(x + 0.5 * h * k1);
    const Real8 k3 = field(x + 0.5 * h * k2);
    const Real8 k4 = field(x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

} // namespace

TEST(Bihamiltonian, RealAndImaginaryPartsGenerateTheSameFlow)
{
  const auto f = [](const auto& q, const auto& p) { return q[0] * q[0] * p[1] + q[1] * p[0] * p[0]; };
  const auto re_f = [&](const PhasePoint& pt) { return f(pt.q, pt.p).real(); };
  const auto im_f = [&](const PhasePoint& pt) { return f(pt.q, pt.p).imag(); };
  Sampler rng{47};
  for (int k = 0; k < 20; ++k)
  {
    const PhasePoint pt = random_phase(rng);
    const Real8 x_re = real_hamiltonian_field(FormPart::Real, real_gradient(re_f, pt));
    const Real8 x_im = real_hamiltonian_field(FormPart::Imaginary, real_gradient(im_f, pt));
    const Real8 x_holo = to_real(phase_hamiltonian_field(f, pt));
    EXPECT_LT((x_re - x_holo).norm(), 1e-7 * std::max(1.0, x_holo.norm()));
    EXPECT_LT((x_im - x_holo).norm(), 1e-7 * std::max(1.0, x_holo.norm()));
  }

  const PhasePoint start = {{0.3, Complex{0.1, 0.2}}, {Complex{-0.4, 0.1}, 0.25}};
  const auto field_re = [&](const Real8& x) {
    return Real8(real_hamiltonian_field(FormPart::Real, real_gradient(re_f, from_real(x))));
  };
  const auto field_im = [&](const Real8& x) {
    return Real8(real_hamiltonian_field(FormPart::Imaginary, real_gradient(im_f, from_real(x))));
  };
  const Real8 end_re = rk4(field_re, to_real(start), 0.2, 200);
  const Real8 end_im = rk4(field_im, to_real(start), 0.2, 200);
  EXPECT_LT((end_re - end_im).norm(), 1e-8);
}
