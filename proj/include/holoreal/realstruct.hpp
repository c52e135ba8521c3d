#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "holoreal/algebra.hpp"
#include "holoreal/orbit.hpp"
#include "holoreal/phase.hpp"
#include "holoreal/product.hpp"
#include "holoreal/report.hpp"
#include "holoreal/sampling.hpp"

namespace holoreal
{

enum class Column
{
  R,
  S,
  T,
  U
};

inline constexpr std::array<Column, 4> kColumns{Column::R, Column::S, Column::T, Column::U};

constexpr std::string_view to_string(Column c)
{
  switch (c)
  {
    case Column::R: return "R";
    case Column::S: return "S";
    case Column::T: return "T";
    case Column::U: return "U";
  }
  return "?";
}

enum class Classification
{
  RealSymplectic,      // A*Omega = conj(Omega)
  ImaginarySymplectic, // A*Omega = -conj(Omega)
  ComplexLagrangian,   // complex-linear with A*Omega = -Omega
  None
};

constexpr std::string_view to_string(Classification c)
{
  switch (c)
  {
    case Classification::RealSymplectic: return "real-symplectic";
    case Classification::ImaginarySymplectic: return "imaginary-symplectic";
    case Classification::ComplexLagrangian: return "complex-Lagrangian";
    case Classification::None: return "none";
  }
  return "?";
}

enum class FixedSetLabel
{
  S2,
  H2H2,
  S1xR,
  CS1,
  iCS1,
  TstarRP1,
  CP1ZeroSection,
  FibrePair,
  S2xS2,
  ConjDiagonalCS2
};

constexpr std::string_view to_string(FixedSetLabel l)
{
  switch (l)
  {
    case FixedSetLabel::S2: return "S2";
    case FixedSetLabel::H2H2: return "H2+H2";
    case FixedSetLabel::S1xR: return "S1xR";
    case FixedSetLabel::CS1: return "CS1";
    case FixedSetLabel::iCS1: return "iCS1";
    case FixedSetLabel::TstarRP1: return "T*RP1";
    case FixedSetLabel::CP1ZeroSection: return "CP1-zero-section";
    case FixedSetLabel::FibrePair: return "fibre-pair";
    case FixedSetLabel::S2xS2: return "S2xS2";
    case FixedSetLabel::ConjDiagonalCS2: return "conj-diagonal-CS2";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Involution ids. Each carries its domain type.
// ---------------------------------------------------------------------------

/// A cell of the table as a map on C^2 + C^2 in the basis of `row`.
struct PhaseInvolution
{
  using domain = PhasePoint;
  Column column;
  Axis row;
};

/// A column of the table as one map on the biquaternions.
struct BiquaternionInvolution
{
  using domain = Biquaternion;
  Column column;
};

/// The descended map on gl(2,C) for a cell. Row I acts on the nilpotent cone (T*CP^1),
/// row J preserves iCS^2 and row K preserves CS^2.
struct ReducedInvolution
{
  using domain = Mat2C;
  Column column;
  Axis row;
};

enum class ProductInvolution
{
  Sigma,  // (S~ xi1, S~ xi2)
  Upsilon // (U~ xi2, U~ xi1)
};

enum class GroupRealForm
{
  Rho,   // conj(z)
  Sigma, // 1/conj(z)
  Tau    // 1/conj(z)
};

inline std::string name(const PhaseInvolution& id)
{
  return std::string(to_string(id.column)) + "/" + std::string(to_string(id.row));
}
inline std::string name(const BiquaternionInvolution& id) { return std::string(to_string(id.column)) + "/biquaternion"; }
inline std::string name(const ReducedInvolution& id)
{
  return std::string(to_string(id.column)) + "~/" + std::string(to_string(id.row));
}
inline std::string name(ProductInvolution id) { return id == ProductInvolution::Sigma ? "Sigma" : "Upsilon"; }
inline std::string name(GroupRealForm id)
{
  switch (id)
  {
    case GroupRealForm::Rho: return "rho";
    case GroupRealForm::Sigma: return "sigma";
    case GroupRealForm::Tau: return "tau";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// involute
// ---------------------------------------------------------------------------

inline PhasePoint involute(const PhaseInvolution& id, const PhasePoint& pt)
{
  const auto& e = pauli_basis();
  const Vec2C qb = conj(pt.q);
  const Vec2C pb = conj(pt.p);
  switch (id.row)
  {
    case Axis::I:
      switch (id.column)
      {
        case Column::R: return {-kI * (e.I * qb), kI * (e.I * pb)};
        case Column::S: return {pt.q, -pt.p};
        case Column::T: return {-kI * (e.K * pt.q), kI * (e.K * pt.p)};
        case Column::U: return {qb, pb};
      }
      break;
    case Axis::J:
      switch (id.column)
      {
        case Column::R: return {qb, pb};
        case Column::S: return {-pb, -qb};
        case Column::T: return {-kI * (e.J * pb), kI * (e.J * qb)};
        case Column::U: return {kI * (e.K * pt.p), kI * (e.K * pt.q)};
      }
      break;
    case Axis::K:
      switch (id.column)
      {
        case Column::R: return {kI * (e.K * pt.p), kI * (e.K * pt.q)};
        case Column::S: return {kI * pb, kI * qb};
        case Column::T: return {e.I * pb, e.I * qb};
        case Column::U: return {-kI * (e.I * qb), kI * (e.I * pb)};
      }
      break;
  }
  return pt;
}

/// The cell exactly as printed in the table; differs from involute at (R,I) and (U,J).
inline PhasePoint involute_as_printed(const PhaseInvolution& id, const PhasePoint& pt)
{
  const auto& e = pauli_basis();
  if (id.column == Column::R && id.row == Axis::I)
  {
    return {-kI * (e.K * conj(pt.q)), kI * (e.K * conj(pt.p))};
  }
  if (id.column == Column::U && id.row == Axis::J)
  {
    return {-kI * (e.K * pt.p), -kI * (e.K * pt.q)};
  }
  return involute(id, pt);
}

inline Biquaternion involute(const BiquaternionInvolution& id, const Biquaternion& b)
{
  return phase_to_biquat(involute(PhaseInvolution{id.column, Axis::I}, biquat_to_phase(b, Axis::I)), Axis::I);
}

inline Mat2C involute(const ReducedInvolution& id, const Mat2C& xi)
{
  const auto& e = pauli_basis();
  switch (id.row)
  {
    case Axis::I:
      switch (id.column)
      {
        case Column::R: return e.I * conj(xi) * e.I;
        case Column::S: return -xi;
        case Column::T: return e.K * xi * e.K;
        case Column::U: return conj(xi);
      }
      break;
    case Axis::J:
      switch (id.column)
      {
        case Column::R: return conj(xi);
        case Column::S: return adjoint(xi);
        case Column::T: return -(e.J * adjoint(xi) * e.J);
        case Column::U: return -(e.K * xi.transpose() * e.K);
      }
      break;
    case Axis::K:
      switch (id.column)
      {
        case Column::R: return -(e.K * xi.transpose() * e.K);
        case Column::S: return -adjoint(xi);
        case Column::T: return e.I * adjoint(xi) * e.I;
        case Column::U: return e.I * conj(xi) * e.I;
      }
      break;
  }
  return xi;
}

/// The complex sphere a reduced row lives on.
inline Complex reduced_zeta(Axis row)
{
  switch (row)
  {
    case Axis::J: return kZetaImagSphere;
    case Axis::K: return kZetaSphere;
    case Axis::I: break;
  }
  throw DomainError("reduced_zeta: row I reduces to T*CP^1, not a complex sphere");
}

/// Coordinate form of a reduced involution on its sphere.
inline OrbitPoint involute(const ReducedInvolution& id, const OrbitPoint& pt)
{
  if (pt.zeta != reduced_zeta(id.row))
  {
    throw DomainError("involute: point is not on the sphere of row " + std::string(to_string(id.row)));
  }
  const Mat2C image = involute(id, sphere_matrix(pt.x, pt.y, pt.z, pt.zeta));
  const auto c = sphere_coords(image);
  return {c[0], c[1], c[2], pt.zeta};
}

inline const ReducedInvolution kSTilde{Column::S, Axis::K};
inline const ReducedInvolution kUTilde{Column::U, Axis::K};

inline ProductPoint involute(ProductInvolution id, const ProductPoint& pt)
{
  if (pt.a.zeta != kZetaSphere || pt.b.zeta != kZetaSphere)
  {
    throw DomainError("involute: product involutions act on CS^2 x CS^2");
  }
  if (id == ProductInvolution::Sigma)
  {
    return {involute(kSTilde, pt.a), involute(kSTilde, pt.b)};
  }
  return {involute(kUTilde, pt.b), involute(kUTilde, pt.a)};
}

inline Complex involute(GroupRealForm id, Complex g)
{
  if (id == GroupRealForm::Rho)
  {
    return std::conj(g);
  }
  if (g == Complex{})
  {
    throw DomainError("involute: group real forms act on GL(1,C)");
  }
  return 1.0 / std::conj(g);
}

/// R, S, T on C^2 + C^2 with their descended maps R~, S~, T~.
inline PhaseInvolution rst_structure(Column c)
{
  switch (c)
  {
    case Column::R: return {Column::R, Axis::J};
    case Column::S: return {Column::S, Axis::K};
    case Column::T: return {Column::T, Axis::K};
    case Column::U: break;
  }
  throw DomainError("rst_structure: only R, S and T are listed");
}

inline ReducedInvolution rst_reduced(Column c)
{
  const PhaseInvolution p = rst_structure(c);
  return {p.column, p.row};
}

inline GroupRealForm rst_group_form(Column c)
{
  switch (c)
  {
    case Column::R: return GroupRealForm::Rho;
    case Column::S: return GroupRealForm::Sigma;
    case Column::T: return GroupRealForm::Tau;
    case Column::U: break;
  }
  throw DomainError("rst_group_form: only R, S and T are listed");
}

// ---------------------------------------------------------------------------
// The table as data.
// ---------------------------------------------------------------------------

struct CatalogueCell
{
  Column column;
  Axis row;
  std::string_view phase_formula;
  std::string_view printed_formula;
  std::string_view reduced_formula;
  std::string_view reduced_space;
  Classification claimed;
  std::optional<FixedSetLabel> fixed_set; // empty for the dot cells

  bool misprinted() const { return phase_formula != printed_formula; }
  PhaseInvolution phase() const { return {column, row}; }
  ReducedInvolution reduced() const { return {column, row}; }
};

inline const std::array<CatalogueCell, 12>& table_cells()
{
  using C = Classification;
  using L = FixedSetLabel;
  static const std::array<CatalogueCell, 12> cells{{
      {Column::R, Axis::I, "(-iI conj q, iI conj p)", "(-iK conj q, iK conj p)", "I conj(xi) I", "T*CP1",
       C::ImaginarySymplectic, std::nullopt},
      {Column::S, Axis::I, "(q, -p)", "(q, -p)", "-xi", "T*CP1", C::ComplexLagrangian, L::CP1ZeroSection},
      {Column::T, Axis::I, "(-iK q, iK p)", "(-iK q, iK p)", "K xi K", "T*CP1", C::ComplexLagrangian, L::FibrePair},
      {Column::U, Axis::I, "(conj q, conj p)", "(conj q, conj p)", "conj(xi)", "T*CP1", C::RealSymplectic,
       L::TstarRP1},
      {Column::R, Axis::J, "(conj q, conj p)", "(conj q, conj p)", "conj(xi)", "iCS2", C::RealSymplectic, L::S1xR},
      {Column::S, Axis::J, "(-conj p, -conj q)", "(-conj p, -conj q)", "xi^dagger", "iCS2",
       C::ImaginarySymplectic, std::nullopt},
      {Column::T, Axis::J, "(-iJ conj p, iJ conj q)", "(-iJ conj p, iJ conj q)", "-J xi^dagger J", "iCS2",
       C::ImaginarySymplectic, std::nullopt},
      {Column::U, Axis::J, "(iK p, iK q)", "(-iK p, -iK q)", "-K xi^T K", "iCS2", C::ComplexLagrangian, L::iCS1},
      {Column::R, Axis::K, "(iK p, iK q)", "(iK p, iK q)", "-K xi^T K", "CS2", C::ComplexLagrangian, L::CS1},
      {Column::S, Axis::K, "(i conj p, i conj q)", "(i conj p, i conj q)", "-xi^dagger", "CS2", C::RealSymplectic,
       L::S2},
      {Column::T, Axis::K, "(I conj p, I conj q)", "(I conj p, I conj q)", "I xi^dagger I", "CS2",
       C::RealSymplectic, L::H2H2},
      {Column::U, Axis::K, "(-iI conj q, iI conj p)", "(-iI conj q, iI conj p)", "I conj(xi) I", "CS2",
       C::ImaginarySymplectic, std::nullopt},
  }};
  return cells;
}

inline const CatalogueCell& table_cell(Column c, Axis row)
{
  for (const auto& cell : table_cells())
  {
    if (cell.column == c && cell.row == row)
    {
      return cell;
    }
  }
  throw DomainError("table_cell: no such cell");
}

// ---------------------------------------------------------------------------
// Flat coordinates, sampling and numerical differentials per domain.
// ---------------------------------------------------------------------------

using CVector = Eigen::VectorXcd;

namespace detail
{

inline CVector flatten(const PhasePoint& pt)
{
  CVector v(4);
  v << pt.q[0], pt.q[1], pt.p[0], pt.p[1];
  return v;
}
inline PhasePoint unflatten(const CVector& v, const PhasePoint&) { return {{v[0], v[1]}, {v[2], v[3]}}; }

inline CVector flatten(const Biquaternion& b)
{
  CVector v(4);
  v << b.u, b.v, b.w, b.z;
  return v;
}
inline Biquaternion unflatten(const CVector& v, const Biquaternion&) { return {v[0], v[1], v[2], v[3]}; }

inline CVector flatten(const Mat2C& m)
{
  CVector v(4);
  v << m.a11, m.a12, m.a21, m.a22;
  return v;
}
inline Mat2C unflatten(const CVector& v, const Mat2C&) { return {v[0], v[1], v[2], v[3]}; }

inline CVector flatten(const ProductPoint& pt)
{
  const Coords6 c = coords(pt);
  return Eigen::Map<const CVector>(c.data(), 6);
}
inline ProductPoint unflatten(const CVector& v, const ProductPoint&)
{
  return from_coords({v[0], v[1], v[2], v[3], v[4], v[5]});
}

inline CVector flatten(Complex z)
{
  CVector v(1);
  v << z;
  return v;
}
inline Complex unflatten(const CVector& v, Complex) { return v[0]; }

inline PhasePoint sample(const PhaseInvolution&, Sampler& rng)
{
  return {{rng.complex_normal(), rng.complex_normal()}, {rng.complex_normal(), rng.complex_normal()}};
}
inline Biquaternion sample(const BiquaternionInvolution&, Sampler& rng)
{
  return {rng.complex_normal(), rng.complex_normal(), rng.complex_normal(), rng.complex_normal()};
}
inline Mat2C sample(const ReducedInvolution&, Sampler& rng)
{
  return {rng.complex_normal(), rng.complex_normal(), rng.complex_normal(), rng.complex_normal()};
}
inline ProductPoint sample(ProductInvolution, Sampler& rng) { return random_product_point(rng); }
inline Complex sample(GroupRealForm, Sampler& rng)
{
  for (;;)
  {
    const Complex z = rng.complex_normal();
    if (std::abs(z) > 0.1)
    {
      return z;
    }
  }
}

} // namespace detail

/// Fourth-order central difference of involute(id, .) at pt along dir, step relative to |pt|.
template <class Id, class Point>
CVector differential(const Id& id, const Point& pt, const CVector& dir, double relative_step = 1e-3)
{
  const CVector x = detail::flatten(pt);
  const double h = relative_step * std::max(1e-2, x.cwiseAbs().maxCoeff());
  const auto at = [&](double s) { return detail::flatten(involute(id, detail::unflatten(x + s * dir, pt))); };
  return (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
}

namespace detail
{

inline CVector random_direction(Sampler& rng, Eigen::Index n)
{
  CVector v(n);
  for (Eigen::Index k = 0; k < n; ++k)
  {
    v[k] = rng.complex_normal();
  }
  return v;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Involutivity and (conjugate-)linearity.
// ---------------------------------------------------------------------------

template <class Id>
CheckReport check_involution(const Id& id, std::size_t samples, std::uint64_t seed, double tol = 1e-14)
{
  Sampler rng{seed};
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k)
  {
    const auto pt = detail::sample(id, rng);
    const CVector x = detail::flatten(pt);
    const CVector back = detail::flatten(involute(id, involute(id, pt)));
    worst = std::max(worst, (back - x).cwiseAbs().maxCoeff() / std::max(1.0, x.cwiseAbs().maxCoeff()));
  }
  return make_report(name(id), "involution", samples, worst, tol);
}

/// max |dA(iX) + i dA(X)| / |dA(X)|; zero for a conjugate-linear differential.
template <class Id>
double conjugate_linearity_residual(const Id& id, std::size_t samples, std::uint64_t seed, bool complex_linear = false)
{
  Sampler rng{seed};
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k)
  {
    const auto pt = detail::sample(id, rng);
    const CVector dir = detail::random_direction(rng, detail::flatten(pt).size());
    const CVector d1 = differential(id, pt, dir);
    const CVector di = differential(id, pt, Complex{0.0, 1.0} * dir);
    const CVector r = complex_linear ? CVector(di - kI * d1) : CVector(di + kI * d1);
    worst = std::max(worst, r.cwiseAbs().maxCoeff() / std::max(1.0, d1.cwiseAbs().maxCoeff()));
  }
  return worst;
}

template <class Id>
CheckReport check_conjugate_linear(const Id& id, std::size_t samples, std::uint64_t seed, double tol = 1e-10)
{
  return make_report(name(id), "conjugate-linear", samples, conjugate_linearity_residual(id, samples, seed), tol);
}

template <class Id>
CheckReport check_complex_linear(const Id& id, std::size_t samples, std::uint64_t seed, double tol = 1e-10)
{
  return make_report(name(id), "complex-linear", samples, conjugate_linearity_residual(id, samples, seed, true), tol);
}

// ---------------------------------------------------------------------------
// Consistency of a column across rows, and descent through P = q p^T.
// ---------------------------------------------------------------------------

/// The row map agrees with the biquaternion involution read in that row's basis.
inline CheckReport check_row_consistency(const PhaseInvolution& id, std::size_t samples, std::uint64_t seed,
                                         double tol = 1e-12)
{
  Sampler rng{seed};
  const BiquaternionInvolution whole{id.column};
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k)
  {
    const Biquaternion b = detail::sample(whole, rng);
    const PhasePoint lhs = biquat_to_phase(involute(whole, b), id.row);
    const PhasePoint rhs = involute(id, biquat_to_phase(b, id.row));
    worst = std::max(worst, distance(lhs, rhs) / std::max(1.0, std::sqrt(b.norm_sq())));
  }
  return make_report(name(id), "row-consistency", samples, worst, tol);
}

/// P(A(q,p)) = A~(P(q,p))
inline CheckReport check_descent(const PhaseInvolution& id, std::size_t samples, std::uint64_t seed,
                                 double tol = 1e-12)
{
  Sampler rng{seed};
  const ReducedInvolution reduced{id.column, id.row};
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k)
  {
    const PhasePoint pt = detail::sample(id, rng);
    const Mat2C lhs = momentum_P(involute(id, pt));
    const Mat2C rhs = involute(reduced, momentum_P(pt));
    worst = std::max(worst, max_abs(lhs - rhs) / std::max(1.0, max_abs(momentum_P(pt))));
  }
  return make_report(name(id), "descent", samples, worst, tol);
}

// ---------------------------------------------------------------------------
// Symplectic classification.
// ---------------------------------------------------------------------------

struct SymplecticReport
{
  std::string id;
  std::size_t samples{};
  double real_residual{};        // |A*Omega - conj Omega|
  double imaginary_residual{};   // |A*Omega + conj Omega|
  double lagrangian_residual{};  // |A*Omega + Omega| together with complex-linearity
  Classification classification{Classification::None};
};

namespace detail
{

struct FormResiduals
{
  double real{};
  double imaginary{};
  double lagrangian{};

  void update(Complex pulled, Complex original)
  {
    const double scale = std::max(1.0, std::abs(original));
    real = std::max(real, std::abs(pulled - std::conj(original)) / scale);
    imaginary = std::max(imaginary, std::abs(pulled + std::conj(original)) / scale);
    lagrangian = std::max(lagrangian, std::abs(pulled + original) / scale);
  }
};

inline SymplecticReport classify(std::string id, std::size_t samples, const FormResiduals& r, double linear_residual,
                                 double tol)
{
  SymplecticReport out{std::move(id), samples, r.real, r.imaginary, std::max(r.lagrangian, linear_residual),
                       Classification::None};
  if (out.real_residual <= tol)
  {
    out.classification = Classification::RealSymplectic;
  }
  else if (out.imaginary_residual <= tol)
  {
    out.classification = Classification::ImaginarySymplectic;
  }
  else if (out.lagrangian_residual <= tol)
  {
    out.classification = Classification::ComplexLagrangian;
  }
  return out;
}

/// Omega_KKS at xi on orbit tangents X, Y.
inline Complex kks_on_tangents(const Mat2C& xi, const Mat2C& x, const Mat2C& y)
{
  return kks_form(xi, orbit_generator(xi, x), orbit_generator(xi, y));
}

inline Mat2C random_tangent(const Mat2C& xi, Sampler& rng)
{
  const Mat2C a{rng.complex_normal(), rng.complex_normal(), rng.complex_normal(), rng.complex_normal()};
  return a * xi - xi * a;
}

inline OrbitPoint random_orbit_point(Axis row, Sampler& rng)
{
  return row == Axis::J ? random_imag_sphere_point(rng) : random_sphere_point(rng);
}

} // namespace detail

/// Pullback of the canonical Omega on C^2 + C^2.
inline SymplecticReport check_real_symplectic(const PhaseInvolution& id, std::size_t samples, std::uint64_t seed,
                                              double tol = 1e-10)
{
  Sampler rng{seed};
  detail::FormResiduals r;
  for (std::size_t k = 0; k < samples; ++k)
  {
    const PhasePoint pt = detail::sample(id, rng);
    const CVector x = detail::random_direction(rng, 4);
    const CVector y = detail::random_direction(rng, 4);
    const PhasePoint dx = detail::unflatten(differential(id, pt, x), pt);
    const PhasePoint dy = detail::unflatten(differential(id, pt, y), pt);
    r.update(omega(dx, dy), omega(detail::unflatten(x, pt), detail::unflatten(y, pt)));
  }
  return detail::classify(name(id), samples, r, conjugate_linearity_residual(id, samples, seed, true), tol);
}

/// Pullback of Omega_KKS on the reduced sphere of a J or K row.
inline SymplecticReport check_real_symplectic(const ReducedInvolution& id, std::size_t samples, std::uint64_t seed,
                                              double tol = 1e-10)
{
  const Complex zeta = reduced_zeta(id.row);
  Sampler rng{seed};
  detail::FormResiduals r;
  for (std::size_t k = 0; k < samples; ++k)
  {
    const OrbitPoint pt = detail::random_orbit_point(id.row, rng);
    const Mat2C xi = sphere_matrix(pt.x, pt.y, pt.z, zeta);
    const Mat2C image = involute(id, xi);
    const Mat2C x = detail::random_tangent(xi, rng);
    const Mat2C y = detail::random_tangent(xi, rng);
    const Mat2C dx = detail::unflatten(differential(id, xi, detail::flatten(x)), xi);
    const Mat2C dy = detail::unflatten(differential(id, xi, detail::flatten(y)), xi);
    r.update(detail::kks_on_tangents(image, dx, dy), detail::kks_on_tangents(xi, x, y));
  }
  return detail::classify(name(id), samples, r, conjugate_linearity_residual(id, samples, seed, true), tol);
}

/// Pullback of Omega_KKS + Omega_KKS on CS^2 x CS^2.
inline SymplecticReport check_real_symplectic(ProductInvolution id, std::size_t samples, std::uint64_t seed,
                                              double tol = 1e-10)
{
  Sampler rng{seed};
  detail::FormResiduals r;
  const auto as_matrices = [](const CVector& v) {
    return std::array<Mat2C, 2>{sphere_matrix<Complex>(v[0], v[1], v[2], 0.0),
                                sphere_matrix<Complex>(v[3], v[4], v[5], 0.0)};
  };
  const auto as_coords = [](const Mat2C& a, const Mat2C& b) {
    const auto ca = sphere_coords(a);
    const auto cb = sphere_coords(b);
    CVector v(6);
    v << ca[0], ca[1], ca[2], cb[0], cb[1], cb[2];
    return v;
  };
  for (std::size_t k = 0; k < samples; ++k)
  {
    const ProductPoint pt = random_product_point(rng);
    const ProductPoint image = involute(id, pt);
    const std::array<Mat2C, 2> xi{coords_to_matrix(pt.a), coords_to_matrix(pt.b)};
    const std::array<Mat2C, 2> eta{coords_to_matrix(image.a), coords_to_matrix(image.b)};
    const CVector x = as_coords(detail::random_tangent(xi[0], rng), detail::random_tangent(xi[1], rng));
    const CVector y = as_coords(detail::random_tangent(xi[0], rng), detail::random_tangent(xi[1], rng));
    const auto tx = as_matrices(x);
    const auto ty = as_matrices(y);
    const auto dx = as_matrices(differential(id, pt, x));
    const auto dy = as_matrices(differential(id, pt, y));
    const Complex original = detail::kks_on_tangents(xi[0], tx[0], ty[0]) + detail::kks_on_tangents(xi[1], tx[1], ty[1]);
    const Complex pulled = detail::kks_on_tangents(eta[0], dx[0], dy[0]) + detail::kks_on_tangents(eta[1], dx[1], dy[1]);
    r.update(pulled, original);
  }
  return detail::classify(name(id), samples, r, conjugate_linearity_residual(id, samples, seed, true), tol);
}

// ---------------------------------------------------------------------------
// Real-Poisson structures on gl(2,C)* with the KKS bracket.
// ---------------------------------------------------------------------------

/// Matrix A with L(X) = A conj(X) for a conjugate-linear map on flattened gl(2,C).
template <class Map>
Eigen::Matrix4cd antilinear_matrix(Map&& map)
{
  Eigen::Matrix4cd a;
  for (int k = 0; k < 4; ++k)
  {
    Mat2C e{};
    e(static_cast<std::size_t>(k / 2), static_cast<std::size_t>(k % 2)) = 1.0;
    a.col(k) = detail::flatten(map(e));
  }
  return a;
}

namespace detail
{

/// Covector on flattened gl(2,C) to the matrix G with <df, D> = Tr(G D).
inline Mat2C covector_to_gradient(const Eigen::Vector4cd& df) { return {df[0], df[2], df[1], df[3]}; }

} // namespace detail

/// max |pi_{L xi}(conj L* df, conj L* dg) - conj pi_xi(df, dg)| over random xi, df, dg.
template <class Map>
CheckReport check_real_poisson(std::string id, Map&& map, std::size_t samples, std::uint64_t seed, double tol = 1e-10,
                               bool negative_control = false)
{
  const Eigen::Matrix4cd a = antilinear_matrix(map);
  Sampler rng{seed};
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k)
  {
    const Mat2C xi{rng.complex_normal(), rng.complex_normal(), rng.complex_normal(), rng.complex_normal()};
    const Eigen::Vector4cd df = detail::random_direction(rng, 4);
    const Eigen::Vector4cd dg = detail::random_direction(rng, 4);
    const Complex original =
        commutator_trace(xi, detail::covector_to_gradient(df), detail::covector_to_gradient(dg));
    const Complex moved = commutator_trace(map(xi), detail::covector_to_gradient(conjugate_adjoint<4>(a, df)),
                                           detail::covector_to_gradient(conjugate_adjoint<4>(a, dg)));
    worst = std::max(worst, std::abs(moved - std::conj(original)) / std::max(1.0, std::abs(original)));
  }
  return make_report(std::move(id), negative_control ? "real-Poisson (negative control)" : "real-Poisson", samples,
                     worst, tol, negative_control);
}

inline CheckReport check_real_poisson(const ReducedInvolution& id, std::size_t samples, std::uint64_t seed,
                                      double tol = 1e-10)
{
  return check_real_poisson(name(id), [&](const Mat2C& xi) { return involute(id, xi); }, samples, seed, tol);
}

/// xi -> conj(xi)^T J: not a real-Poisson structure.
inline Mat2C wrong_involution(const Mat2C& xi) { return conj(xi).transpose() * pauli_basis().J; }

// ---------------------------------------------------------------------------
// Equivariance R(g.m) = rho(g).R(m) for the GL(1,C) action (g q, p / g).
// ---------------------------------------------------------------------------

inline CheckReport check_equivariance(const PhaseInvolution& id, GroupRealForm form, std::size_t samples,
                                      std::uint64_t seed, double tol = 1e-12, bool negative_control = false)
{
  Sampler rng{seed};
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k)
  {
    const PhasePoint m = detail::sample(id, rng);
    const Complex g = detail::sample(form, rng);
    const PhasePoint lhs = involute(id, gl1_action(g, m));
    const PhasePoint rhs = gl1_action(involute(form, g), involute(id, m));
    worst = std::max(worst, distance(lhs, rhs) / std::max(1.0, std::sqrt(norm_sq(lhs.q) + norm_sq(lhs.p))));
  }
  return make_report(name(id) + "," + name(form),
                     negative_control ? "equivariance (negative control)" : "equivariance", samples, worst, tol,
                     negative_control);
}

// ---------------------------------------------------------------------------
// Fixed sets.
// ---------------------------------------------------------------------------

namespace detail
{

inline double scale_of(const CVector& v) { return std::max(1.0, v.cwiseAbs().maxCoeff()); }

/// Newton steps v -= f(v) conj(grad f)/|grad f|^2 for f = v.v - target. Stays in the
/// fixed set of a coordinate involution because conj(v) does.
inline std::array<Complex, 3> newton_onto_quadric(std::array<Complex, 3> v, Complex target)
{
  for (int it = 0; it < 100; ++it)
  {
    const Complex f = v[0] * v[0] + v[1] * v[1] + v[2] * v[2] - target;
    if (std::abs(f) < 1e-15 * std::max(1.0, std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2])))
    {
      return v;
    }
    const double g2 = 4.0 * (std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
    if (g2 < 1e-24)
    {
      break;
    }
    for (Complex& c : v)
    {
      c -= f * 2.0 * std::conj(c) / g2;
    }
  }
  throw DomainError("project_to_fixed: projection onto the sphere did not converge");
}

inline OrbitPoint onto_sphere(const OrbitPoint& pt)
{
  const auto v = newton_onto_quadric({pt.x, pt.y, pt.z}, -pt.zeta * pt.zeta);
  return {v[0], v[1], v[2], pt.zeta};
}

} // namespace detail

inline bool is_fixed(const PhaseInvolution& id, const PhasePoint& pt, double tol = 1e-10)
{
  return distance(involute(id, pt), pt) <= tol * std::max(1.0, std::sqrt(norm_sq(pt.q) + norm_sq(pt.p)));
}

inline bool is_fixed(const ReducedInvolution& id, const OrbitPoint& pt, double tol = 1e-10)
{
  return pt.is_member(tol) && distance(involute(id, pt), pt) <= tol * std::max(1.0, std::sqrt(pt.hermitian_norm_sq()));
}

inline bool is_fixed(ProductInvolution id, const ProductPoint& pt, double tol = 1e-10)
{
  if (!pt.is_member(tol))
  {
    return false;
  }
  const double scale = std::max(1.0, std::sqrt(hermitian_norm_sq(pt)));
  if (id == ProductInvolution::Upsilon)
  {
    return distance(pt.b, involute(kUTilde, pt.a)) <= tol * scale;
  }
  return distance(involute(id, pt), pt) <= tol * scale;
}

inline bool is_fixed(GroupRealForm id, Complex g, double tol = 1e-10)
{
  return g != Complex{} && std::abs(involute(id, g) - g) <= tol * std::max(1.0, std::abs(g));
}

inline PhasePoint project_to_fixed(const PhaseInvolution& id, const PhasePoint& pt)
{
  return 0.5 * (pt + involute(id, pt));
}

inline OrbitPoint project_to_fixed(const ReducedInvolution& id, const OrbitPoint& pt)
{
  const OrbitPoint image = involute(id, pt);
  const OrbitPoint mean{0.5 * (pt.x + image.x), 0.5 * (pt.y + image.y), 0.5 * (pt.z + image.z), pt.zeta};
  return detail::onto_sphere(mean);
}

inline ProductPoint project_to_fixed(ProductInvolution id, const ProductPoint& pt)
{
  if (id == ProductInvolution::Sigma)
  {
    return {project_to_fixed(kSTilde, pt.a), project_to_fixed(kSTilde, pt.b)};
  }
  const OrbitPoint partner = involute(kUTilde, pt.b);
  const OrbitPoint mean{0.5 * (pt.a.x + partner.x), 0.5 * (pt.a.y + partner.y), 0.5 * (pt.a.z + partner.z),
                        kZetaSphere};
  const OrbitPoint a = detail::onto_sphere(mean);
  return {a, involute(kUTilde, a)};
}

inline Complex project_to_fixed(GroupRealForm id, Complex g)
{
  if (id == GroupRealForm::Rho)
  {
    return g.real();
  }
  if (g == Complex{})
  {
    throw DomainError("project_to_fixed: g must be nonzero");
  }
  return g / std::abs(g);
}

/// Point of fix(Upsilon) over xi in CS^2.
inline ProductPoint conj_diagonal_point(const OrbitPoint& xi) { return {xi, involute(kUTilde, xi)}; }

// ---------------------------------------------------------------------------
// Defining equations of the labelled fixed sets.
// ---------------------------------------------------------------------------

namespace detail
{

inline double real_part_residual(Complex c) { return std::abs(c.imag()); }
inline double imag_part_residual(Complex c) { return std::abs(c.real()); }

} // namespace detail

/// Residual of the real-variety equations of a label at an orbit point.
inline double label_residual(FixedSetLabel label, const OrbitPoint& pt)
{
  using detail::imag_part_residual;
  using detail::real_part_residual;
  const Complex sum = pt.x * pt.x + pt.y * pt.y + pt.z * pt.z;
  switch (label)
  {
    case FixedSetLabel::S2:
      return std::max({real_part_residual(pt.x), real_part_residual(pt.y), real_part_residual(pt.z),
                       std::abs(sum - 1.0)});
    case FixedSetLabel::H2H2:
      return std::max({real_part_residual(pt.x), imag_part_residual(pt.y), imag_part_residual(pt.z),
                       std::abs(sum - 1.0), std::max(0.0, 1.0 - std::abs(pt.x))});
    case FixedSetLabel::S1xR:
      return std::max({imag_part_residual(pt.x), real_part_residual(pt.y), imag_part_residual(pt.z),
                       std::abs(sum + 1.0)});
    case FixedSetLabel::CS1: return std::max(std::abs(pt.x), std::abs(sum - 1.0));
    case FixedSetLabel::iCS1: return std::max(std::abs(pt.x), std::abs(sum + 1.0));
    default: break;
  }
  throw DomainError("label_residual: label does not describe a set of sphere points");
}

/// Residual of the label equations at a point (q, p) of the level p^T q = 0 over T*CP^1.
inline double label_residual(FixedSetLabel label, const PhasePoint& pt)
{
  const double nq = norm(pt.q);
  switch (label)
  {
    case FixedSetLabel::CP1ZeroSection: return max_abs(momentum_P(pt));
    case FixedSetLabel::FibrePair:
    {
      const double plus = std::abs(pt.q[0] - pt.q[1]);
      const double minus = std::abs(pt.q[0] + pt.q[1]);
      return std::max(std::abs(mu_trace(pt)), std::min(plus, minus) / nq);
    }
    case FixedSetLabel::TstarRP1:
    {
      const Mat2C p = momentum_P(pt);
      const double complex_base = std::abs(pt.q[0] * std::conj(pt.q[1]) - pt.q[1] * std::conj(pt.q[0])) / (nq * nq);
      return std::max({std::abs(mu_trace(pt)), complex_base, max_abs(p - conj(p))});
    }
    default: break;
  }
  throw DomainError("label_residual: label does not describe a set of cotangent points");
}

inline double label_residual(FixedSetLabel label, const ProductPoint& pt)
{
  switch (label)
  {
    case FixedSetLabel::S2xS2:
      return std::max(label_residual(FixedSetLabel::S2, pt.a), label_residual(FixedSetLabel::S2, pt.b));
    case FixedSetLabel::ConjDiagonalCS2:
      return std::max({pt.a.membership_residual(), pt.b.membership_residual(),
                       distance(pt.b, involute(kUTilde, pt.a))});
    default: break;
  }
  throw DomainError("label_residual: label does not describe a set of product points");
}

namespace detail
{

/// Fixed point of a row-I cell on the level p^T q = 0.
inline PhasePoint fixed_level_point(const PhaseInvolution& id, Sampler& rng)
{
  const PhasePoint fixed = project_to_fixed(id, sample(id, rng));
  const Complex qq = dot(fixed.q, fixed.q);
  const Complex pq = mu_trace(fixed);
  if (std::abs(pq) == 0.0)
  {
    return fixed;
  }
  return {fixed.q, fixed.p - (pq / qq) * fixed.q};
}

} // namespace detail

/// Random fixed points of the cell's descended map satisfy its label's equations.
inline CheckReport check_fixed_set_label(const CatalogueCell& cell, std::size_t samples, std::uint64_t seed,
                                         double tol = 1e-10)
{
  if (!cell.fixed_set)
  {
    throw DomainError("check_fixed_set_label: cell has no fixed-set label");
  }
  Sampler rng{seed};
  double worst = 0.0;
  std::size_t taken = 0;
  for (std::size_t attempt = 0; taken < samples && attempt < 20 * samples; ++attempt)
  {
    try
    {
      if (cell.row == Axis::I)
      {
        const PhasePoint pt = detail::fixed_level_point(cell.phase(), rng);
        const PhasePoint image = involute(cell.phase(), pt);
        const double descended = cotangent_distance(reduce_to_cotangent(pt, 1e-8), reduce_to_cotangent(image, 1e-8));
        worst = std::max({worst, descended, label_residual(*cell.fixed_set, pt)});
      }
      else
      {
        const OrbitPoint pt = project_to_fixed(cell.reduced(), detail::random_orbit_point(cell.row, rng));
        worst = std::max({worst, distance(involute(cell.reduced(), pt), pt), label_residual(*cell.fixed_set, pt)});
      }
      ++taken;
    }
    catch (const DomainError&)
    {
    }
  }
  if (taken < samples)
  {
    worst = std::max(worst, 1.0);
  }
  return make_report(name(cell.reduced()), "fixed-set " + std::string(to_string(*cell.fixed_set)), taken, worst, tol);
}

// ---------------------------------------------------------------------------
// Momentum compatibility and realified integrals.
// ---------------------------------------------------------------------------

/// max |mu(A(pt)) - rho_star(mu(pt))| over the given points.
template <class Id, class Point, class Mu, class RhoStar>
CheckReport check_momentum_compat(const Id& id, Mu&& mu, RhoStar&& rho_star, std::span<const Point> points,
                                  double tol = 1e-10, std::string label = {})
{
  double worst = 0.0;
  for (const Point& pt : points)
  {
    const auto lhs = mu(involute(id, pt));
    const auto rhs = rho_star(mu(pt));
    for (std::size_t k = 0; k < lhs.size(); ++k)
    {
      worst = std::max(worst, std::abs(lhs[k] - rhs[k]) / std::max(1.0, std::abs(rhs[k])));
    }
  }
  return make_report(label.empty() ? name(id) : std::move(label), "momentum-compatibility", points.size(), worst, tol);
}

/// g = f + conj(f o A)
template <class Id, class F>
auto realify_integral(const Id& id, F f)
{
  return [id, f](const auto& pt) { return f(pt) + std::conj(f(involute(id, pt))); };
}

} // namespace holoreal
