#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "holoreal/algebra.hpp"
#include "holoreal/phase.hpp"
#include "holoreal/sampling.hpp"

namespace holoreal
{

inline constexpr Complex kZetaSphere = kI;        // CS^2: x^2+y^2+z^2 = 1
inline constexpr Complex kZetaImagSphere = -1.0;  // iCS^2: x^2+y^2+z^2 = -1

/// Point of the complex sphere x^2+y^2+z^2 = -zeta^2.
struct OrbitPoint
{
  Complex x{};
  Complex y{};
  Complex z{};
  Complex zeta{kZetaSphere};

  std::array<Complex, 3> coords() const { return {x, y, z}; }

  double membership_residual() const { return std::abs(x * x + y * y + z * z + zeta * zeta); }

  /// |x|^2+|y|^2+|z|^2
  double hermitian_norm_sq() const { return std::norm(x) + std::norm(y) + std::norm(z); }

  bool is_member(double tol = 1e-10) const
  {
    return membership_residual() < tol * std::max(1.0, hermitian_norm_sq());
  }
};

inline double distance(const OrbitPoint& a, const OrbitPoint& b)
{
  return std::sqrt(std::norm(a.x - b.x) + std::norm(a.y - b.y) + std::norm(a.z - b.z));
}

/// Point of T*CP^1 as (q, p) with |q| = 1 and p^T q = 0, modulo (e^{it}q, e^{-it}p).
struct CotangentPoint
{
  Vec2C q{};
  Vec2C p{};
};

/// xi = (t + x𝕀 + y𝕁 + z𝕂)/2 = 1/2 [[t+ix, y+iz], [-y+iz, t-ix]]
template <class T>
Mat2<T> sphere_matrix(const T& x, const T& y, const T& z, const T& t)
{
  const T half(0.5);
  const T i(kI);
  return {half * (t + i * x), half * (y + i * z), half * (-y + i * z), half * (t - i * x)};
}

/// Coordinate functions (x, y, z, t) of a 2x2 matrix, inverse of sphere_matrix.
template <class T>
std::array<T, 4> sphere_coords(const Mat2<T>& xi)
{
  const T i(kI);
  return {-i * (xi.a11 - xi.a22), xi.a12 - xi.a21, -i * (xi.a12 + xi.a21), xi.a11 + xi.a22};
}

inline Mat2C coords_to_matrix(const OrbitPoint& pt)
{
  if (!pt.is_member())
  {
    throw DomainError("coords_to_matrix: point is not on the complex sphere");
  }
  return sphere_matrix(pt.x, pt.y, pt.z, pt.zeta);
}

inline OrbitPoint matrix_to_coords(const Mat2C& xi, double tol = 1e-10)
{
  const auto c = sphere_coords(xi);
  const OrbitPoint pt{c[0], c[1], c[2], c[3]};
  if (std::abs(pt.zeta) < tol || !pt.is_member(tol))
  {
    throw DomainError("matrix_to_coords: matrix is not on a rank-one orbit with nonzero trace");
  }
  return pt;
}

// ---------------------------------------------------------------------------
// KKS bracket on gl(2,C)* identified with gl(2,C) by the trace pairing.
// Matrix functions are generic callables f(Mat2<T>) -> T.
// ---------------------------------------------------------------------------

/// G with df(D) = Tr(G D).
template <class F>
Mat2C matrix_gradient(F&& f, const Mat2C& xi)
{
  const auto d = complex_step_gradient<4>(
      [&](const std::array<Bicomplex, 4>& e) { return f(Mat2<Bicomplex>{e[0], e[1], e[2], e[3]}); },
      std::array<Complex, 4>{xi.a11, xi.a12, xi.a21, xi.a22});
  return {d[0], d[2], d[1], d[3]};
}

/// {f,g}(xi) = Tr(xi [grad f, grad g])
template <class F, class G>
Complex kks_bracket(F&& f, G&& g, const Mat2C& xi)
{
  return commutator_trace(xi, matrix_gradient(f, xi), matrix_gradient(g, xi));
}

/// Omega_KKS([A,xi],[B,xi]) = Tr(xi [A,B]).
inline Complex kks_form(const Mat2C& xi, const Mat2C& a, const Mat2C& b) { return commutator_trace(xi, a, b); }

/// A with [A, xi] = v, least-norm solution; v must be tangent to the orbit.
inline Mat2C orbit_generator(const Mat2C& xi, const Mat2C& v)
{
  Eigen::Matrix<Complex, 4, 4> ad;
  for (int k = 0; k < 4; ++k)
  {
    Mat2C e{};
    e(static_cast<std::size_t>(k / 2), static_cast<std::size_t>(k % 2)) = 1.0;
    const Mat2C c = e * xi - xi * e;
    ad.col(k) << c.a11, c.a12, c.a21, c.a22;
  }
  Eigen::Matrix<Complex, 4, 1> rhs;
  rhs << v.a11, v.a12, v.a21, v.a22;
  const Eigen::Matrix<Complex, 4, 1> a = ad.completeOrthogonalDecomposition().solve(rhs);
  return {a[0], a[1], a[2], a[3]};
}

/// c with {x,y} = c z, {y,z} = c x, {z,x} = c y on the complex sphere.
inline Complex structure_constant()
{
  static const Complex c = [] {
    const Mat2C xi = sphere_matrix<Complex>(0.0, 0.0, 1.0, kZetaSphere);
    const auto x = [](const auto& m) { return sphere_coords(m)[0]; };
    const auto y = [](const auto& m) { return sphere_coords(m)[1]; };
    return kks_bracket(x, y, xi);
  }();
  return c;
}

// ---------------------------------------------------------------------------
// Reductions.
// ---------------------------------------------------------------------------

inline CotangentPoint reduce_to_cotangent(const PhasePoint& pt, double tol = 1e-10)
{
  const double nq = norm(pt.q);
  if (nq < tol)
  {
    throw DomainError("reduce_to_cotangent: q = 0 is unstable");
  }
  if (std::abs(mu_trace(pt)) > tol * std::max(1.0, nq * norm(pt.p)))
  {
    throw DomainError("reduce_to_cotangent: p^T q must vanish");
  }
  return {(1.0 / nq) * pt.q, nq * pt.p};
}

/// Residual of the best circle phase matching b to a.
inline double cotangent_distance(const CotangentPoint& a, const CotangentPoint& b)
{
  const Complex overlap = std::conj(a.q[0]) * b.q[0] + std::conj(a.q[1]) * b.q[1];
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0};
  return std::sqrt(norm_sq(b.q - phase * a.q) + norm_sq(b.p - std::conj(phase) * a.p));
}

inline OrbitPoint reduce_to_sphere(const PhasePoint& pt, Complex zeta, double tol = 1e-10)
{
  if (std::abs(mu_trace(pt) - zeta) > tol * std::max(1.0, norm(pt.q) * norm(pt.p)))
  {
    throw DomainError("reduce_to_sphere: p^T q differs from zeta");
  }
  return matrix_to_coords(momentum_P(pt));
}

/// Raised when no point of the hyperkaehler level set lies over a matrix.
class LiftError : public DomainError
{
public:
  using DomainError::DomainError;
};

/// K-basis point (q,p) with q p^T = xi and |q| = |p|.
inline PhasePoint lift_to_level(const Mat2C& xi, double tol = 1e-9)
{
  const Vec2C col0{xi.a11, xi.a21};
  const Vec2C col1{xi.a12, xi.a22};
  const Vec2C q0 = norm_sq(col0) >= norm_sq(col1) ? col0 : col1;
  const std::size_t k = std::abs(q0[0]) >= std::abs(q0[1]) ? 0 : 1;
  if (std::abs(q0[k]) < tol)
  {
    throw LiftError("lift_to_level: zero matrix");
  }
  const Vec2C p0{xi(k, 0) / q0[k], xi(k, 1) / q0[k]};
  const double s = std::sqrt(norm(p0) / norm(q0));
  const PhasePoint pt{s * q0, (1.0 / s) * p0};
  if (max_abs(momentum_P(pt) - xi) > tol * std::max(1.0, norm(xi)))
  {
    throw LiftError("lift_to_level: matrix is not rank one");
  }
  return pt;
}

/// The I-basis representative of the point over xi, before normalisation.
inline PhasePoint phi_level_point(const OrbitPoint& pt)
{
  if (!pt.is_member() || std::abs(pt.zeta - kZetaSphere) > 1e-12)
  {
    throw DomainError("phi: point is not on CS^2");
  }
  const PhasePoint lifted = lift_to_level(coords_to_matrix(pt));
  return biquat_to_phase(phase_to_biquat(lifted, Axis::K), Axis::I);
}

/// CS^2 -> T*CP^1 through the K- and I-basis identifications of the biquaternions.
inline CotangentPoint phi(const OrbitPoint& pt) { return reduce_to_cotangent(phi_level_point(pt), 1e-9); }

/// |eta|^2 = 4 |q|^2 |p|^2
inline double su2_invariant(const CotangentPoint& pt) { return 4.0 * norm_sq(pt.q) * norm_sq(pt.p); }

/// Tr(xi^dagger xi)
inline double su2_invariant(const OrbitPoint& pt)
{
  const Mat2C xi = coords_to_matrix(pt);
  return (adjoint(xi) * xi).trace().real();
}

/// |eta|^2 = slope * (|x|^2+|y|^2+|z|^2) + intercept, fitted across phi.
struct KineticCalibration
{
  double slope{};
  double intercept{};
  double max_residual{};
  std::size_t samples{};
};

/// Random point of CS^2: x = sqrt(1+|L|^2) n + i L with n in S^2, L tangent at n.
inline OrbitPoint random_sphere_point(Sampler& rng, double spread = 1.0);

inline KineticCalibration fit_kinetic_calibration(std::size_t samples, std::uint64_t seed)
{
  Sampler rng{seed};
  Eigen::MatrixXd a(static_cast<Eigen::Index>(samples), 2);
  Eigen::VectorXd b(static_cast<Eigen::Index>(samples));
  for (std::size_t k = 0; k < samples; ++k)
  {
    const OrbitPoint pt = random_sphere_point(rng, 1.5);
    const auto row = static_cast<Eigen::Index>(k);
    a(row, 0) = pt.hermitian_norm_sq();
    a(row, 1) = 1.0;
    b(row) = su2_invariant(phi(pt));
  }
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(b);
  const double residual = (a * coef - b).cwiseAbs().maxCoeff();
  return {coef[0], coef[1], residual, samples};
}

inline constexpr std::uint64_t kCalibrationSeed = 20240601;

/// Fitted once from 1000 samples; read-only afterwards.
inline const KineticCalibration& kinetic_calibration()
{
  static const KineticCalibration cal = fit_kinetic_calibration(1000, kCalibrationSeed);
  return cal;
}

/// Re(x) / sqrt(1 + |Im x|^2)
inline std::array<double, 3> bundle_map(const OrbitPoint& pt)
{
  if (!pt.is_member() || std::abs(pt.zeta - kZetaSphere) > 1e-12)
  {
    throw DomainError("bundle_map: point is not on CS^2");
  }
  const double im2 = pt.x.imag() * pt.x.imag() + pt.y.imag() * pt.y.imag() + pt.z.imag() * pt.z.imag();
  const double s = 1.0 / std::sqrt(1.0 + im2);
  return {s * pt.x.real(), s * pt.y.real(), s * pt.z.real()};
}

/// CS^2 point over n in S^2 with imaginary part L (L orthogonal to n).
inline OrbitPoint sphere_point_from_tangent(const std::array<double, 3>& n, const std::array<double, 3>& l)
{
  const double s = std::sqrt(1.0 + l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
  return {Complex{s * n[0], l[0]}, Complex{s * n[1], l[1]}, Complex{s * n[2], l[2]}, kZetaSphere};
}

inline OrbitPoint random_sphere_point(Sampler& rng, double spread)
{
  const auto n = rng.unit_vector();
  std::array<double, 3> l{spread * rng.normal(), spread * rng.normal(), spread * rng.normal()};
  const double d = l[0] * n[0] + l[1] * n[1] + l[2] * n[2];
  for (int k = 0; k < 3; ++k)
  {
    l[k] -= d * n[k];
  }
  return sphere_point_from_tangent(n, l);
}

/// Random point of iCS^2 (x^2+y^2+z^2 = -1).
inline OrbitPoint random_imag_sphere_point(Sampler& rng, double spread = 1.0)
{
  const OrbitPoint p = random_sphere_point(rng, spread);
  return {kI * p.x, kI * p.y, kI * p.z, kZetaImagSphere};
}

/// xi -> g xi g^dagger
inline OrbitPoint adjoint_action(const Mat2C& g, const OrbitPoint& pt)
{
  return matrix_to_coords(g * coords_to_matrix(pt) * adjoint(g));
}

/// Rotation of (x,y,z) induced by the adjoint action of g in SU(2).
inline Eigen::Matrix3d rotation_of(const Mat2C& g)
{
  const auto& e = pauli_basis();
  const std::array<Mat2C, 3> units{e.I, e.J, e.K};
  Eigen::Matrix3d r;
  for (int a = 0; a < 3; ++a)
  {
    for (int b = 0; b < 3; ++b)
    {
      r(a, b) = (-0.5 * (units[a] * g * units[b] * adjoint(g)).trace()).real();
    }
  }
  return r;
}

/// g.(q,p) = (gq, conj(g) p) on representatives.
inline CotangentPoint su2_action(const Mat2C& g, const CotangentPoint& pt)
{
  const PhasePoint moved = su2_action(g, PhasePoint{pt.q, pt.p});
  return {moved.q, moved.p};
}

} // namespace holoreal
