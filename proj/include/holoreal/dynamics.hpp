#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "holoreal/orbit.hpp"
#include "holoreal/product.hpp"
#include "holoreal/realstruct.hpp"
#include "holoreal/report.hpp"
#include "holoreal/sampling.hpp"

namespace holoreal
{

inline constexpr double kSingularTolerance = 1e-8;

/// Raised where the radicand of H vanishes.
class SingularityError : public DomainError
{
public:
  SingularityError(const Coords6& where, double radicand_abs)
      : DomainError("H is singular: |radicand| = " + std::to_string(radicand_abs)), location{where},
        radicand{radicand_abs}
  {
  }

  Coords6 location;
  double radicand;
};

// ---------------------------------------------------------------------------
// The pendulum pair.
// ---------------------------------------------------------------------------

/// (x1+x2)^2 + (y1+y2)^2 + (z1-z2)^2
template <class T>
T radicand(const std::array<T, 6>& c)
{
  const T u = c[0] + c[3];
  const T v = c[1] + c[4];
  const T w = c[2] - c[5];
  return u * u + v * v + w * w;
}

/// H = (x1x2 + y1y2 - z1z2)/2 + (z1 - z2)/sqrt(radicand), principal branch.
template <class T>
T hamiltonian_H(const std::array<T, 6>& c)
{
  using std::sqrt;
  const T half(0.5);
  return half * (c[0] * c[3] + c[1] * c[4] - c[2] * c[5]) + (c[2] - c[5]) / sqrt(radicand(c));
}

/// J = (z1 + z2)/(2i)
template <class T>
T hamiltonian_J(const std::array<T, 6>& c)
{
  return (c[2] + c[5]) / T(2.0 * kI);
}

inline void check_radicand(const Coords6& c, double singular_tol)
{
  const double r = std::abs(radicand(c));
  if (r < singular_tol)
  {
    throw SingularityError(c, r);
  }
}

inline Complex hamiltonian_H(const ProductPoint& pt, double singular_tol = kSingularTolerance)
{
  const Coords6 c = coords(pt);
  check_radicand(c, singular_tol);
  return hamiltonian_H(c);
}

inline Complex hamiltonian_J(const ProductPoint& pt) { return hamiltonian_J(coords(pt)); }

/// i J = (z1 + z2)/2, real on S^2 x S^2; its flow is the diagonal z-rotation.
inline Complex rotation_generator(const ProductPoint& pt) { return 0.5 * (pt.a.z + pt.b.z); }

inline Coords6 gradient_H(const Coords6& c, double singular_tol = kSingularTolerance)
{
  check_radicand(c, singular_tol);
  const Complex u = c[0] + c[3];
  const Complex v = c[1] + c[4];
  const Complex w = c[2] - c[5];
  const Complex s = std::sqrt(u * u + v * v + w * w);
  const Complex k = w / (s * s * s);
  return {0.5 * c[3] - k * u, 0.5 * c[4] - k * v, -0.5 * c[5] + 1.0 / s - k * w,
          0.5 * c[0] - k * u, 0.5 * c[1] - k * v, -0.5 * c[2] - 1.0 / s + k * w};
}

inline Coords6 gradient_J(const Coords6&)
{
  const Complex d = 1.0 / (2.0 * kI);
  return {0.0, 0.0, d, 0.0, 0.0, d};
}

/// Complex-step gradient of a holomorphic f(std::array<Bicomplex, 6>) -> Bicomplex.
template <class F>
Coords6 complex_step_gradient6(F&& f, const Coords6& c)
{
  return complex_step_gradient<6>(std::forward<F>(f), c);
}

// ---------------------------------------------------------------------------
// Lie-Poisson structure on gl(2,C)* x gl(2,C)*, factorwise.
// ---------------------------------------------------------------------------

namespace detail
{

inline std::array<Complex, 3> cross(const std::array<Complex, 3>& a, const std::array<Complex, 3>& b)
{
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline std::array<Complex, 3> factor(const Coords6& c, std::size_t k) { return {c[3 * k], c[3 * k + 1], c[3 * k + 2]}; }

} // namespace detail

/// {f,g} = c (v1 . (df1 x dg1) + v2 . (df2 x dg2))
inline Complex product_bracket(const Coords6& df, const Coords6& dg, const Coords6& pt)
{
  Complex sum{};
  for (std::size_t k = 0; k < 2; ++k)
  {
    const auto w = detail::cross(detail::factor(df, k), detail::factor(dg, k));
    const auto v = detail::factor(pt, k);
    sum += v[0] * w[0] + v[1] * w[1] + v[2] * w[2];
  }
  return structure_constant() * sum;
}

/// Bracket of two holomorphic functions of the six coordinates via complex-step gradients.
template <class F, class G>
Complex product_bracket(F&& f, G&& g, const ProductPoint& pt)
{
  const Coords6 c = coords(pt);
  return product_bracket(complex_step_gradient6(f, c), complex_step_gradient6(g, c), c);
}

/// xdot = {x, f} = c (grad f x v) on each factor.
inline Coords6 hamiltonian_vector_field(const Coords6& df, const Coords6& pt)
{
  Coords6 out{};
  const Complex c = structure_constant();
  for (std::size_t k = 0; k < 2; ++k)
  {
    const auto w = detail::cross(detail::factor(df, k), detail::factor(pt, k));
    for (std::size_t j = 0; j < 3; ++j)
    {
      out[3 * k + j] = c * w[j];
    }
  }
  return out;
}

template <class F>
Coords6 hamiltonian_vector_field(F&& f, const ProductPoint& pt)
{
  const Coords6 c = coords(pt);
  return hamiltonian_vector_field(complex_step_gradient6(f, c), c);
}

/// x^2 + y^2 + z^2 - 1 on each factor.
inline std::array<Complex, 2> casimir_residuals(const Coords6& c)
{
  return {c[0] * c[0] + c[1] * c[1] + c[2] * c[2] - 1.0, c[3] * c[3] + c[4] * c[4] + c[5] * c[5] - 1.0};
}

/// One Newton step per factor towards x^2 + y^2 + z^2 = 1 along conj(grad).
inline Coords6 project_to_product(const Coords6& c)
{
  Coords6 out = c;
  const auto res = casimir_residuals(c);
  for (std::size_t k = 0; k < 2; ++k)
  {
    double g2 = 0.0;
    for (std::size_t j = 0; j < 3; ++j)
    {
      g2 += 4.0 * std::norm(c[3 * k + j]);
    }
    for (std::size_t j = 0; j < 3; ++j)
    {
      out[3 * k + j] -= res[k] * std::conj(2.0 * c[3 * k + j]) / g2;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Integrals as (value, gradient) pairs so that flows and checks can scale them.
// ---------------------------------------------------------------------------

struct Integral
{
  std::string name;
  std::function<Complex(const Coords6&)> value;
  std::function<Coords6(const Coords6&)> gradient;
};

inline Integral integral_H(double singular_tol = kSingularTolerance)
{
  return {"H",
          [singular_tol](const Coords6& c) {
            check_radicand(c, singular_tol);
            return hamiltonian_H(c);
          },
          [singular_tol](const Coords6& c) { return gradient_H(c, singular_tol); }};
}

inline Integral integral_J()
{
  return {"J", [](const Coords6& c) { return hamiltonian_J(c); }, [](const Coords6& c) { return gradient_J(c); }};
}

/// s * f
inline Integral scaled(Complex s, Integral f)
{
  std::string label = s == kI ? "i*" + f.name : "(" + std::to_string(s.real()) + "," + std::to_string(s.imag()) + ")*" + f.name;
  auto value = f.value;
  auto gradient = f.gradient;
  return {std::move(label), [s, value](const Coords6& c) { return s * value(c); },
          [s, gradient](const Coords6& c) {
            Coords6 g = gradient(c);
            for (Complex& e : g)
            {
              e *= s;
            }
            return g;
          }};
}

/// Generator of a real-time flow: H, or the rotation generator iJ.
enum class Generator
{
  H,
  J
};

inline std::string to_string(Generator g) { return g == Generator::H ? "H" : "J"; }

/// Integral whose real-time flow is used for a generator: H itself, iJ for J.
inline Integral flow_integral(Generator g, double singular_tol = kSingularTolerance)
{
  return g == Generator::H ? integral_H(singular_tol) : scaled(kI, integral_J());
}

// ---------------------------------------------------------------------------
// Flow.
// ---------------------------------------------------------------------------

struct FlowControls
{
  double atol{1e-10};
  double rtol{1e-10};
  double max_step{0.01};
  double min_step{1e-12};
  double singular_tol{kSingularTolerance};
  bool project{true};
};

struct DriftSample
{
  Complex H{};
  Complex J{};
  double casimir1{};
  double casimir2{};
  bool H_defined{true};
};

struct Trajectory
{
  std::vector<double> times;
  std::vector<ProductPoint> states;
  std::vector<DriftSample> drift;
  bool aborted{false};
  std::string abort_reason;
  std::size_t rejected_steps{};

  /// max |H(t) - H(0)| / max(1, |H(0)|)
  double drift_H() const { return relative_drift(&DriftSample::H); }

  /// i J is compensated by the constant i, so its relative drift is that of J.
  double drift_J() const { return relative_drift(&DriftSample::J); }

  double max_casimir() const
  {
    double m = 0.0;
    for (const DriftSample& d : drift)
    {
      m = std::max({m, d.casimir1, d.casimir2});
    }
    return m;
  }

  /// max over states of |A(state) - state|; max imaginary part for Sigma.
  double max_fixed_residual(ProductInvolution id) const
  {
    double m = 0.0;
    for (const ProductPoint& s : states)
    {
      m = std::max(m, distance(involute(id, s), s));
    }
    return m;
  }

private:
  double relative_drift(Complex DriftSample::*field) const
  {
    if (drift.empty() || !drift.front().H_defined)
    {
      return 0.0;
    }
    const Complex ref = drift.front().*field;
    double m = 0.0;
    for (const DriftSample& d : drift)
    {
      if (d.H_defined)
      {
        m = std::max(m, std::abs(d.*field - ref) / std::max(1.0, std::abs(ref)));
      }
    }
    return m;
  }
};

namespace detail
{

using FlowState = std::array<double, 12>;

inline FlowState to_state(const Coords6& c)
{
  FlowState s{};
  for (std::size_t k = 0; k < 6; ++k)
  {
    s[2 * k] = c[k].real();
    s[2 * k + 1] = c[k].imag();
  }
  return s;
}

inline Coords6 from_state(const FlowState& s)
{
  Coords6 c{};
  for (std::size_t k = 0; k < 6; ++k)
  {
    c[k] = {s[2 * k], s[2 * k + 1]};
  }
  return c;
}

inline DriftSample drift_sample(const Coords6& c, double singular_tol)
{
  DriftSample d;
  const auto cas = casimir_residuals(c);
  d.casimir1 = std::abs(cas[0]);
  d.casimir2 = std::abs(cas[1]);
  d.J = hamiltonian_J(c);
  if (std::abs(radicand(c)) < singular_tol)
  {
    d.H_defined = false;
  }
  else
  {
    d.H = hamiltonian_H(c);
  }
  return d;
}

} // namespace detail

/// Integrates xdot = {x, f} (f's gradient given) from start for signed time t_final.
inline Trajectory flow(const ProductPoint& start, const std::function<Coords6(const Coords6&)>& gradient,
                       double t_final, const FlowControls& controls = {})
{
  namespace odeint = boost::numeric::odeint;
  using detail::FlowState;

  Trajectory out;
  const auto record = [&](double t, const Coords6& c) {
    out.times.push_back(t);
    out.states.push_back(from_coords(c));
    out.drift.push_back(detail::drift_sample(c, controls.singular_tol));
  };

  Coords6 c = coords(start);
  record(0.0, c);

  const auto system = [&](const FlowState& x, FlowState& dxdt, double) {
    const Coords6 p = detail::from_state(x);
    dxdt = detail::to_state(hamiltonian_vector_field(gradient(p), p));
  };

  auto stepper = odeint::make_controlled(controls.atol, controls.rtol, odeint::runge_kutta_dopri5<FlowState>());
  const double direction = t_final < 0.0 ? -1.0 : 1.0;
  double t = 0.0;
  double dt = direction * std::min(controls.max_step, 1e-3);
  FlowState x = detail::to_state(c);

  try
  {
    while (direction * (t_final - t) > 1e-14 * std::max(1.0, std::abs(t_final)))
    {
      const double remaining = std::abs(t_final - t);
      dt = direction * std::min({std::abs(dt), controls.max_step, remaining});
      if (std::abs(dt) < controls.min_step && remaining > controls.min_step)
      {
        out.aborted = true;
        out.abort_reason = "step size underflow at t = " + std::to_string(t);
        return out;
      }
      if (stepper.try_step(system, x, t, dt) == odeint::fail)
      {
        ++out.rejected_steps;
        continue;
      }
      if (controls.project)
      {
        x = detail::to_state(project_to_product(detail::from_state(x)));
        stepper.reset();
      }
      record(t, detail::from_state(x));
    }
  }
  catch (const SingularityError& e)
  {
    out.aborted = true;
    out.abort_reason = std::string(e.what()) + " near t = " + std::to_string(t);
  }
  return out;
}

inline Trajectory flow(const ProductPoint& start, const Integral& f, double t_final, const FlowControls& controls = {})
{
  return flow(start, f.gradient, t_final, controls);
}

inline Trajectory flow(const ProductPoint& start, Generator g, double t_final, const FlowControls& controls = {})
{
  return flow(start, flow_integral(g, controls.singular_tol), t_final, controls);
}

/// Flow that preserves fix(id): f itself on fix(Sigma), i*f on fix(Upsilon).
inline Integral invariant_flow_integral(ProductInvolution id, Integral f)
{
  return id == ProductInvolution::Sigma ? std::move(f) : scaled(kI, std::move(f));
}

// ---------------------------------------------------------------------------
// Starting points.
// ---------------------------------------------------------------------------

/// (Re(iJ), Re H) on S^2 x S^2.
inline std::array<double, 2> compact_values(const ProductPoint& pt)
{
  return {rotation_generator(pt).real(), hamiltonian_H(pt).real()};
}

/// S^2 x S^2 point whose (iJ, H) lies outside the disk J^2 + (H + 1/2)^2 <= (1 + margin)^2.
inline ProductPoint random_compact_start(Sampler& rng, double margin = 0.05)
{
  for (;;)
  {
    const auto n1 = rng.unit_vector();
    const auto n2 = rng.unit_vector();
    const ProductPoint pt{sphere_point_from_tangent(n1, {0.0, 0.0, 0.0}), sphere_point_from_tangent(n2, {0.0, 0.0, 0.0})};
    if (std::abs(radicand(coords(pt))) < 1e-4)
    {
      continue;
    }
    const auto v = compact_values(pt);
    if (std::hypot(v[0], v[1] + 0.5) > 1.0 + margin)
    {
      return pt;
    }
  }
}

/// Point of fix(Upsilon) over a random CS^2 point.
inline ProductPoint random_pendulum_start(Sampler& rng, double spread = 1.0)
{
  return conj_diagonal_point(random_sphere_point(rng, spread));
}

// ---------------------------------------------------------------------------
// Invariance of fixed sets under flows.
// ---------------------------------------------------------------------------

struct InvarianceReport
{
  CheckReport derivative;
  CheckReport flow;

  bool invariant() const { return derivative.pass && flow.pass; }
};

/// (i) d Im f along fix(id) vanishes, (ii) short flows from fix(id) stay on it.
/// The flow is the real-time flow of f on fix(Sigma) and of i*f on fix(Upsilon).
inline InvarianceReport check_invariance(ProductInvolution id, const Integral& f, std::size_t samples, double t_short,
                                         std::uint64_t seed, double tol = 1e-8, bool negative_control = false)
{
  Sampler rng{seed};
  const Integral generator = invariant_flow_integral(id, f);
  double derivative = 0.0;
  double drift = 0.0;
  for (std::size_t k = 0; k < samples; ++k)
  {
    const ProductPoint pt = id == ProductInvolution::Sigma ? random_compact_start(rng) : random_pendulum_start(rng);
    const Coords6 c = coords(pt);
    Coords6 dir{};
    for (Complex& e : dir)
    {
      e = rng.complex_normal();
    }
    const double h = 1e-3;
    const auto im_f = [&](double s) {
      Coords6 moved = c;
      for (std::size_t j = 0; j < 6; ++j)
      {
        moved[j] += s * dir[j];
      }
      return f.value(coords(project_to_fixed(id, from_coords(moved)))).imag();
    };
    const double d = (-im_f(2.0 * h) + 8.0 * im_f(h) - 8.0 * im_f(-h) + im_f(-2.0 * h)) / (12.0 * h);
    derivative = std::max(derivative, std::abs(d));

    const Trajectory tr = flow(pt, generator, t_short);
    drift = std::max(drift, tr.aborted ? 1.0 : tr.max_fixed_residual(id));
  }
  const std::string label = name(id) + " with " + f.name;
  return {make_report(label, "invariance: d Im f along fixed set", samples, derivative, tol, negative_control),
          make_report(label, "invariance: short flows stay on fixed set", samples, drift, tol, negative_control)};
}

// ---------------------------------------------------------------------------
// Compatibility of (H, J) with Sigma and Upsilon.
// ---------------------------------------------------------------------------

inline std::array<Complex, 2> pendulum_moment(const ProductPoint& pt)
{
  return {hamiltonian_H(pt), hamiltonian_J(pt)};
}

/// (h, j) -> (conj h, -conj j) for Sigma, (conj h, conj j) for Upsilon.
inline std::array<Complex, 2> pendulum_rho_star(ProductInvolution id, const std::array<Complex, 2>& m)
{
  const double sign = id == ProductInvolution::Sigma ? -1.0 : 1.0;
  return {std::conj(m[0]), sign * std::conj(m[1])};
}

} // namespace holoreal
