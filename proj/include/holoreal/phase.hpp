#pragma once

#include <array>
#include <cmath>
#include <string_view>

#include <Eigen/Dense>

#include "holoreal/algebra.hpp"

namespace holoreal
{

/// A point (q, p) of C^2 + C^2. Also used for tangent vectors.
struct PhasePoint
{
  Vec2C q{};
  Vec2C p{};
};

inline PhasePoint operator+(const PhasePoint& a, const PhasePoint& b) { return {a.q + b.q, a.p + b.p}; }
inline PhasePoint operator-(const PhasePoint& a, const PhasePoint& b) { return {a.q - b.q, a.p - b.p}; }
inline PhasePoint operator*(Complex s, const PhasePoint& a) { return {s * a.q, s * a.p}; }

inline double distance(const PhasePoint& a, const PhasePoint& b)
{
  return std::sqrt(norm_sq(a.q - b.q) + norm_sq(a.p - b.p));
}

enum class Axis
{
  I,
  J,
  K
};

inline constexpr std::array<Axis, 3> kAxes{Axis::I, Axis::J, Axis::K};

constexpr std::string_view to_string(Axis a)
{
  switch (a)
  {
    case Axis::I: return "I";
    case Axis::J: return "J";
    case Axis::K: return "K";
  }
  return "?";
}

/// Omega((q1,p1),(q2,p2)) = p2^T q1 - p1^T q2
inline Complex omega(const PhasePoint& v1, const PhasePoint& v2) { return dot(v2.p, v1.q) - dot(v1.p, v2.q); }

inline PhasePoint gl1_action(Complex g, const PhasePoint& pt)
{
  if (g == Complex{})
  {
    throw DomainError("gl1_action: g must be nonzero");
  }
  return {g * pt.q, (1.0 / g) * pt.p};
}

inline bool is_special_unitary(const Mat2C& g, double tol = 1e-10)
{
  return max_abs(g * adjoint(g) - Mat2C::identity()) < tol && std::abs(g.det() - 1.0) < tol;
}

/// (gq, conj(g) p)
inline PhasePoint su2_action(const Mat2C& g, const PhasePoint& pt)
{
  if (!is_special_unitary(g))
  {
    throw DomainError("su2_action: g is not in SU(2)");
  }
  return {g * pt.q, conj(g) * pt.p};
}

/// P(q,p) = q p^T
inline Mat2C momentum_P(const PhasePoint& pt) { return outer(pt.q, pt.p); }

/// p^T q
inline Complex mu_trace(const PhasePoint& pt) { return dot(pt.p, pt.q); }

// ---------------------------------------------------------------------------
// Biquaternion identifications. The I-axis map is
//   q = (u+iv, w+iz)/sqrt2,  p = (conj(w)+i conj(z), -conj(u)-i conj(v))/sqrt2.
// The J- and K-axis maps apply it to the cyclic permutations (u,w,z,v) and
// (u,z,v,w); this is the order for which the three circle moments agree.
// ---------------------------------------------------------------------------

namespace detail
{

inline Biquaternion permute_to(const Biquaternion& b, Axis axis)
{
  switch (axis)
  {
    case Axis::I: return b;
    case Axis::J: return {b.u, b.w, b.z, b.v};
    case Axis::K: return {b.u, b.z, b.v, b.w};
  }
  return b;
}

inline Biquaternion permute_from(const Biquaternion& b, Axis axis)
{
  switch (axis)
  {
    case Axis::I: return b;
    case Axis::J: return {b.u, b.z, b.v, b.w};
    case Axis::K: return {b.u, b.w, b.z, b.v};
  }
  return b;
}

} // namespace detail

inline PhasePoint biquat_to_phase(const Biquaternion& b, Axis axis)
{
  const Biquaternion c = detail::permute_to(b, axis);
  const double s = 1.0 / std::sqrt(2.0);
  return {
      {s * (c.u + kI * c.v), s * (c.w + kI * c.z)},
      {s * (std::conj(c.w) + kI * std::conj(c.z)), s * (-std::conj(c.u) - kI * std::conj(c.v))},
  };
}

inline Biquaternion phase_to_biquat(const PhasePoint& pt, Axis axis)
{
  const double r = std::sqrt(2.0);
  const Complex u_plus = r * pt.q[0];             // u + iv
  const Complex u_minus = -r * std::conj(pt.p[1]); // u - iv
  const Complex w_plus = r * pt.q[1];             // w + iz
  const Complex w_minus = r * std::conj(pt.p[0]);  // w - iz
  const Biquaternion c{
      0.5 * (u_plus + u_minus),
      (u_plus - u_minus) / (2.0 * kI),
      0.5 * (w_plus + w_minus),
      (w_plus - w_minus) / (2.0 * kI),
  };
  return detail::permute_from(c, axis);
}

/// The SU(2) element h such that (gq, conj(g)p) in basis `from` reads (hq, conj(h)p) in basis `to`.
inline Mat2C transport_su2(const Mat2C& g, Axis from, Axis to)
{
  Mat2C h{};
  for (std::size_t k = 0; k < 2; ++k)
  {
    PhasePoint basis_point{};
    basis_point.q[k] = 1.0;
    const Biquaternion b = phase_to_biquat(basis_point, to);
    const PhasePoint moved = su2_action(g, biquat_to_phase(b, from));
    const PhasePoint image = biquat_to_phase(phase_to_biquat(moved, from), to);
    h(0, k) = image.q[0];
    h(1, k) = image.q[1];
  }
  return h;
}

/// i(|q|^2 - |p|^2) in the given basis.
inline Complex circle_moment(const PhasePoint& pt) { return kI * (norm_sq(pt.q) - norm_sq(pt.p)); }

/// (mu1, mu2, mu3): circle moments for the I, J and K complex structures.
inline std::array<Complex, 3> mu123(const Biquaternion& b)
{
  return {circle_moment(biquat_to_phase(b, Axis::I)), circle_moment(biquat_to_phase(b, Axis::J)),
          circle_moment(biquat_to_phase(b, Axis::K))};
}

/// p^T q in the basis of `axis`. Equals (mu_b + i mu_c)/2 for (a,b,c) cyclic.
inline Complex holomorphic_moment(const Biquaternion& b, Axis axis) { return mu_trace(biquat_to_phase(b, axis)); }

// ---------------------------------------------------------------------------
// Calculus on C^2 + C^2. Phase functions are generic callables
// f(q, p) with q, p of type Vec2<T> returning T for T in {Complex, Bicomplex}.
// ---------------------------------------------------------------------------

using PhaseGradient = std::array<Complex, 4>; // d/dq0, d/dq1, d/dp0, d/dp1

template <class F>
PhaseGradient phase_gradient(F&& f, const PhasePoint& pt)
{
  return complex_step_gradient<4>(
      [&](const std::array<Bicomplex, 4>& z) {
        return f(Vec2<Bicomplex>{z[0], z[1]}, Vec2<Bicomplex>{z[2], z[3]});
      },
      std::array<Complex, 4>{pt.q[0], pt.q[1], pt.p[0], pt.p[1]});
}

/// {F,G} = F_q . G_p - F_p . G_q
template <class F, class G>
Complex canonical_bracket(F&& f, G&& g, const PhasePoint& pt)
{
  const PhaseGradient df = phase_gradient(f, pt);
  const PhaseGradient dg = phase_gradient(g, pt);
  return df[0] * dg[2] + df[1] * dg[3] - df[2] * dg[0] - df[3] * dg[1];
}

/// X_F = (F_p, -F_q), so that Omega(X_F, Y) = dF(Y).
template <class F>
PhasePoint phase_hamiltonian_field(F&& f, const PhasePoint& pt)
{
  const PhaseGradient d = phase_gradient(f, pt);
  return {{d[2], d[3]}, {-d[0], -d[1]}};
}

// Real embedding: (Re q0, Im q0, Re q1, Im q1, Re p0, Im p0, Re p1, Im p1).

using Real8 = Eigen::Matrix<double, 8, 1>;
using Real8x8 = Eigen::Matrix<double, 8, 8>;

inline Real8 to_real(const PhasePoint& pt)
{
  Real8 x;
  x << pt.q[0].real(), pt.q[0].imag(), pt.q[1].real(), pt.q[1].imag(), pt.p[0].real(), pt.p[0].imag(),
      pt.p[1].real(), pt.p[1].imag();
  return x;
}

inline PhasePoint from_real(const Real8& x)
{
  return {{Complex{x[0], x[1]}, Complex{x[2], x[3]}}, {Complex{x[4], x[5]}, Complex{x[6], x[7]}}};
}

enum class FormPart
{
  Real,
  Imaginary
};

/// W with omega_part(X, Y) = X^T W Y in the real embedding.
inline Real8x8 real_symplectic_matrix(FormPart part)
{
  Real8x8 w;
  for (int a = 0; a < 8; ++a)
  {
    for (int b = 0; b < 8; ++b)
    {
      const Complex o = omega(from_real(Real8::Unit(a)), from_real(Real8::Unit(b)));
      w(a, b) = part == FormPart::Real ? o.real() : o.imag();
    }
  }
  return w;
}

/// Solves omega_part(X, .) = du for X.
inline Real8 real_hamiltonian_field(FormPart part, const Real8& real_gradient)
{
  return real_symplectic_matrix(part).transpose().fullPivLu().solve(real_gradient);
}

} // namespace holoreal
