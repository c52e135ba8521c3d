#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "holoreal/dynamics.hpp"
#include "holoreal/orbit.hpp"
#include "holoreal/product.hpp"
#include "holoreal/realstruct.hpp"
#include "holoreal/sampling.hpp"

namespace holoreal
{

/// The two real forms of the pendulum system.
enum class Form
{
  TstarS2, // fix(Upsilon), the conjugate diagonal over CS^2
  S2xS2    // fix(Sigma)
};

inline std::string to_string(Form f) { return f == Form::TstarS2 ? "tstar-s2" : "s2xs2"; }

inline Form parse_form(std::string_view s)
{
  if (s == "tstar-s2")
  {
    return Form::TstarS2;
  }
  if (s == "s2xs2")
  {
    return Form::S2xS2;
  }
  throw DomainError("unknown form: " + std::string(s));
}

inline FixedSetLabel label(Form f) { return f == Form::TstarS2 ? FixedSetLabel::ConjDiagonalCS2 : FixedSetLabel::S2xS2; }

inline constexpr double kRankThreshold = 1e-8;
inline constexpr double kRegularization = 1e-3;

struct EMomSample
{
  double J_real{};
  double H_real{};
  int rank{};
  ProductPoint location{};
};

// ---------------------------------------------------------------------------
// Ambient real coordinates: (Re xi, Im xi) for T*S^2, (n1, n2) for S^2 x S^2.
// ---------------------------------------------------------------------------

using Ambient = Eigen::Matrix<double, 6, 1>;
using Gradients = Eigen::Matrix<double, 2, 6>;

namespace detail
{

inline ProductPoint to_product(Form form, const Ambient& x)
{
  if (form == Form::TstarS2)
  {
    return conj_diagonal_point({Complex{x[0], x[3]}, Complex{x[1], x[4]}, Complex{x[2], x[5]}, kZetaSphere});
  }
  return {{x[0], x[1], x[2], kZetaSphere}, {x[3], x[4], x[5], kZetaSphere}};
}

inline Ambient to_ambient(Form form, const ProductPoint& pt)
{
  const ProductInvolution id = form == Form::TstarS2 ? ProductInvolution::Upsilon : ProductInvolution::Sigma;
  if (!is_fixed(id, pt, 1e-9))
  {
    throw DomainError("point is not on the " + to_string(form) + " form");
  }
  Ambient x;
  if (form == Form::TstarS2)
  {
    x << pt.a.x.real(), pt.a.y.real(), pt.a.z.real(), pt.a.x.imag(), pt.a.y.imag(), pt.a.z.imag();
  }
  else
  {
    x << pt.a.x.real(), pt.a.y.real(), pt.a.z.real(), pt.b.x.real(), pt.b.y.real(), pt.b.z.real();
  }
  return x;
}

/// Nearest on-form point; throws DomainError where the quadric Newton iteration fails.
inline Ambient retract(Form form, const Ambient& x)
{
  if (form == Form::S2xS2)
  {
    Ambient out = x;
    const double r1 = x.head<3>().norm();
    const double r2 = x.tail<3>().norm();
    if (r1 < 1e-12 || r2 < 1e-12)
    {
      throw DomainError("retract: zero factor");
    }
    out.head<3>() /= r1;
    out.tail<3>() /= r2;
    return out;
  }
  const OrbitPoint xi = onto_sphere({Complex{x[0], x[3]}, Complex{x[1], x[4]}, Complex{x[2], x[5]}, kZetaSphere});
  Ambient out;
  out << xi.x.real(), xi.y.real(), xi.z.real(), xi.x.imag(), xi.y.imag(), xi.z.imag();
  return out;
}

/// Gradients of the defining equations.
inline Gradients normals(Form form, const Ambient& x)
{
  Gradients n = Gradients::Zero();
  if (form == Form::S2xS2)
  {
    n.block<1, 3>(0, 0) = 2.0 * x.head<3>().transpose();
    n.block<1, 3>(1, 3) = 2.0 * x.tail<3>().transpose();
    return n;
  }
  // Re(xi.xi) = |R|^2 - |I|^2, Im(xi.xi) = 2 R.I
  n.block<1, 3>(0, 0) = 2.0 * x.head<3>().transpose();
  n.block<1, 3>(0, 3) = -2.0 * x.tail<3>().transpose();
  n.block<1, 3>(1, 0) = 2.0 * x.tail<3>().transpose();
  n.block<1, 3>(1, 3) = 2.0 * x.head<3>().transpose();
  return n;
}

/// Orthogonal projector onto the tangent space of the form.
inline Eigen::Matrix<double, 6, 6> tangent_projector(Form form, const Ambient& x)
{
  const Eigen::HouseholderQR<Eigen::Matrix<double, 6, 2>> qr(normals(form, x).transpose());
  const Eigen::Matrix<double, 6, 2> q = qr.householderQ() * Eigen::Matrix<double, 6, 2>::Identity();
  return Eigen::Matrix<double, 6, 6>::Identity() - q * q.transpose();
}

struct Evaluation
{
  std::array<double, 2> values{};
  Gradients gradients{Gradients::Zero()};
};

/// H with radicand r replaced by r + eps^2; eps = 0 is H itself and throws near the singular locus.
inline std::pair<double, Eigen::Matrix<double, 1, 6>> compact_H(const Ambient& x, double eps)
{
  const double u = x[0] + x[3];
  const double v = x[1] + x[4];
  const double w = x[2] - x[5];
  const double r = u * u + v * v + w * w;
  if (eps == 0.0 && r < kSingularTolerance)
  {
    throw SingularityError({x[0], x[1], x[2], x[3], x[4], x[5]}, r);
  }
  const double s = std::sqrt(r + eps * eps);
  const double k = w / (s * s * s);
  Eigen::Matrix<double, 1, 6> g;
  g << 0.5 * x[3] - k * u, 0.5 * x[4] - k * v, -0.5 * x[5] + 1.0 / s - k * w, 0.5 * x[0] - k * u,
      0.5 * x[1] - k * v, -0.5 * x[2] - 1.0 / s + k * w;
  return {0.5 * (x[0] * x[3] + x[1] * x[4] - x[2] * x[5]) + w / s, g};
}

/// (J, H) and their ambient gradients. T*S^2: (Im z, |eta|^2/8 + n_z); S^2 x S^2: ((z1+z2)/2, H).
inline Evaluation evaluate(Form form, const Ambient& x, double eps = 0.0)
{
  Evaluation e;
  if (form == Form::S2xS2)
  {
    const auto [h, dh] = compact_H(x, eps);
    e.values = {0.5 * (x[2] + x[5]), h};
    e.gradients(0, 2) = 0.5;
    e.gradients(0, 5) = 0.5;
    e.gradients.row(1) = dh;
    return e;
  }
  const KineticCalibration& cal = kinetic_calibration();
  const Eigen::Vector3d re = x.head<3>();
  const Eigen::Vector3d im = x.tail<3>();
  const double s = std::sqrt(1.0 + im.squaredNorm());
  e.values = {im[2], (cal.slope * x.squaredNorm() + cal.intercept) / 8.0 + re[2] / s};
  e.gradients(0, 5) = 1.0;
  e.gradients.row(1) = (cal.slope / 4.0) * x.transpose();
  e.gradients(1, 2) += 1.0 / s;
  e.gradients.block<1, 3>(1, 3) -= (re[2] / (s * s * s)) * im.transpose();
  return e;
}

/// Tangential Jacobian of (J, H).
inline Gradients tangential_jacobian(Form form, const Ambient& x, double eps = 0.0)
{
  return evaluate(form, x, eps).gradients * tangent_projector(form, x);
}

inline int rank_of(const Gradients& tangential, const Gradients& ambient)
{
  const double scale = std::max(1.0, Eigen::JacobiSVD<Gradients>(ambient).singularValues()[0]);
  const auto sv = Eigen::JacobiSVD<Gradients>(tangential).singularValues();
  return static_cast<int>((sv.array() > kRankThreshold * scale).count());
}

/// Least-squares functor with central numerical Jacobian for Eigen's Levenberg-Marquardt.
template <class Residual>
struct LmFunctor
{
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum
  {
    InputsAtCompileTime = Eigen::Dynamic,
    ValuesAtCompileTime = Eigen::Dynamic
  };

  Residual residual;
  int n_inputs;
  int n_values;

  int inputs() const { return n_inputs; }
  int values() const { return n_values; }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& out) const
  {
    out = residual(x);
    return 0;
  }
};

/// Minimizes |residual|^2 from x; returns the final residual norm.
template <class Residual>
double least_squares(Residual residual, Eigen::VectorXd& x, int n_values, int max_evaluations = 4000)
{
  using Functor = LmFunctor<Residual>;
  Functor f{std::move(residual), static_cast<int>(x.size()), n_values};
  Eigen::NumericalDiff<Functor, Eigen::Central> diff(f);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Functor, Eigen::Central>> lm(diff);
  lm.parameters.ftol = 1e-15;
  lm.parameters.xtol = 1e-15;
  lm.parameters.maxfev = max_evaluations;
  lm.minimize(x);
  Eigen::VectorXd out(n_values);
  f(x, out);
  return out.norm();
}

inline constexpr double kFailedResidual = 1e3;

/// Halton point of the form's natural parametrization; index starts at 1.
inline Ambient halton_point(Form form, std::uint64_t index, double radius = 2.0)
{
  const auto sphere = [](double u, double v) {
    const double z = 2.0 * u - 1.0;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * std::numbers::pi * v;
    return Eigen::Vector3d{rho * std::cos(phi), rho * std::sin(phi), z};
  };
  const double u0 = halton(index, kHaltonBases[0]);
  const double u1 = halton(index, kHaltonBases[1]);
  const double u2 = halton(index, kHaltonBases[2]);
  const double u3 = halton(index, kHaltonBases[3]);
  Ambient x;
  if (form == Form::S2xS2)
  {
    x << sphere(u0, u1), sphere(u2, u3);
    return x;
  }
  const Eigen::Vector3d n = sphere(u0, u1);
  const Eigen::Vector3d axis = std::abs(n[2]) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
  const Eigen::Vector3d e1 = n.cross(axis).normalized();
  const Eigen::Vector3d e2 = n.cross(e1);
  const double r = radius * std::sqrt(u2);
  const double psi = 2.0 * std::numbers::pi * u3;
  const Eigen::Vector3d l = r * (std::cos(psi) * e1 + std::sin(psi) * e2);
  x << std::sqrt(1.0 + r * r) * n, l;
  return x;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Energy-momentum map and rank.
// ---------------------------------------------------------------------------

/// (J_real, H_real): angular momentum and calibrated pendulum energy on T*S^2, (Re iJ, Re H) on S^2 x S^2.
inline std::array<double, 2> emom_map(Form form, const ProductPoint& pt)
{
  return detail::evaluate(form, detail::to_ambient(form, pt)).values;
}

/// Numerical rank of the tangential Jacobian of (J, H); eps > 0 regularizes H on S^2 x S^2.
inline int rank_at(Form form, const ProductPoint& pt, double eps = 0.0)
{
  const Ambient x = detail::to_ambient(form, pt);
  const detail::Evaluation e = detail::evaluate(form, x, eps);
  return detail::rank_of(e.gradients * detail::tangent_projector(form, x), e.gradients);
}

inline ProductPoint rest_top() { return conj_diagonal_point({0.0, 0.0, 1.0, kZetaSphere}); }
inline ProductPoint rest_bottom() { return conj_diagonal_point({0.0, 0.0, -1.0, kZetaSphere}); }

// ---------------------------------------------------------------------------
// Rank-0 search.
// ---------------------------------------------------------------------------

struct Rank0Search
{
  std::vector<EMomSample> points;
  std::size_t starts{};
  std::size_t converged{};
  bool budget_warning{false};
};

/// Multi-start minimization of the squared tangential gradients of J and H from Halton starts.
/// On S^2 x S^2 H is regularized with eps = kRegularization; reported H is the exact value or,
/// on the singular locus, its continuous limit.
inline Rank0Search find_rank0(Form form, std::size_t starts = 512, double tol = 1e-10)
{
  const double eps = form == Form::S2xS2 ? kRegularization : 0.0;
  const auto residual = [form, eps](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    try
    {
      const Ambient x = detail::retract(form, v);
      const Gradients t = detail::tangential_jacobian(form, x, eps);
      Eigen::VectorXd r(12);
      r << t.row(0).transpose(), t.row(1).transpose();
      return r;
    }
    catch (const DomainError&)
    {
      return Eigen::VectorXd::Constant(12, detail::kFailedResidual);
    }
  };

  Rank0Search out;
  out.starts = starts;
  std::vector<std::pair<Ambient, std::size_t>> found;
  for (std::size_t k = 0; k < starts; ++k)
  {
    Eigen::VectorXd v = detail::halton_point(form, k + 1);
    if (detail::least_squares(residual, v, 12) > tol)
    {
      continue;
    }
    Ambient x;
    try
    {
      x = detail::retract(form, v);
    }
    catch (const DomainError&)
    {
      continue;
    }
    ++out.converged;
    const bool known = std::any_of(found.begin(), found.end(), [&](const auto& f) { return (f.first - x).norm() < 1e-4; });
    if (!known)
    {
      found.emplace_back(x, k);
    }
  }

  for (const auto& [x, first] : found)
  {
    if (first >= starts - starts / 4)
    {
      out.budget_warning = true;
    }
    detail::Evaluation e;
    try
    {
      e = detail::evaluate(form, x);
    }
    catch (const SingularityError&)
    {
      e = detail::evaluate(form, x, eps);
    }
    const ProductPoint pt = detail::to_product(form, x);
    const int rank = detail::rank_of(e.gradients * detail::tangent_projector(form, x), e.gradients);
    if (rank == 0)
    {
      out.points.push_back({e.values[0], e.values[1], rank, pt});
    }
  }
  std::sort(out.points.begin(), out.points.end(), [](const EMomSample& a, const EMomSample& b) {
    return a.J_real != b.J_real ? a.J_real < b.J_real : a.H_real < b.H_real;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Boundary of the image.
// ---------------------------------------------------------------------------

enum class BoundarySource
{
  Critical,     // constrained extremum of H on a J-level set
  SingularLimit // directional limit of H at its singular locus
};

inline std::string to_string(BoundarySource s) { return s == BoundarySource::Critical ? "critical" : "singular-limit"; }

struct BoundaryPoint
{
  double J{};
  double H{};
  BoundarySource source{BoundarySource::Critical};
};

/// Polyline sorted by J.
struct Polyline
{
  std::string name;
  std::vector<BoundaryPoint> points;
};

struct BoundaryTrace
{
  std::vector<Polyline> curves;
  bool stalled{false};
  std::string stall_message;
  std::optional<BoundaryPoint> last_good;

  const Polyline* curve(std::string_view name) const
  {
    const auto it = std::find_if(curves.begin(), curves.end(), [&](const Polyline& c) { return c.name == name; });
    return it == curves.end() ? nullptr : &*it;
  }
};

struct TraceOptions
{
  double j_max{3.0};         // T*S^2 range |J| <= j_max
  double j_step{1e-3};       // T*S^2 continuation step
  std::size_t grid{4000};    // S^2 x S^2 Chebyshev grid in J
  std::size_t reseed_every{100};
  std::size_t reseed_starts{16};
};

namespace detail
{

struct LevelExtremum
{
  Ambient x;
  double lambda{};
  double H{};
};

/// KKT point of H on {J = j}: tangential (grad H - lambda grad J) = 0, J = j.
inline std::optional<LevelExtremum> level_extremum(Form form, const Ambient& x0, double lambda0, double j,
                                                   double tol = 1e-10)
{
  const auto residual = [form, j](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    Eigen::VectorXd r(7);
    try
    {
      const Ambient x = retract(form, v.head<6>());
      const Evaluation e = evaluate(form, x);
      const Eigen::Matrix<double, 6, 6> p = tangent_projector(form, x);
      r.head<6>() = p * (e.gradients.row(1) - v[6] * e.gradients.row(0)).transpose();
      r[6] = e.values[0] - j;
    }
    catch (const DomainError&)
    {
      r.setConstant(kFailedResidual);
    }
    return r;
  };
  Eigen::VectorXd v(7);
  v << x0, lambda0;
  if (least_squares(residual, v, 7, 2000) > tol)
  {
    return std::nullopt;
  }
  try
  {
    const Ambient x = retract(form, v.head<6>());
    return LevelExtremum{x, v[6], evaluate(form, x).values[1]};
  }
  catch (const DomainError&)
  {
    return std::nullopt;
  }
}

/// Moves x onto {J = j} by Newton steps along the tangential gradient of J.
inline std::optional<Ambient> onto_level(Form form, Ambient x, double j)
{
  for (int it = 0; it < 50; ++it)
  {
    try
    {
      x = retract(form, x);
      const Evaluation e = evaluate(form, x);
      const double f = e.values[0] - j;
      if (std::abs(f) < 1e-13)
      {
        return x;
      }
      const Eigen::Matrix<double, 6, 1> g = tangent_projector(form, x) * e.gradients.row(0).transpose();
      if (g.squaredNorm() < 1e-14)
      {
        return std::nullopt;
      }
      x -= f * g / g.squaredNorm();
    }
    catch (const DomainError&)
    {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

/// Extremal KKT value on {J = j} over Halton starts; maximize selects the largest.
inline std::optional<LevelExtremum> reseed(Form form, double j, bool maximize, std::size_t starts, std::uint64_t offset)
{
  std::optional<LevelExtremum> best;
  for (std::size_t k = 0; k < starts; ++k)
  {
    const auto x = onto_level(form, halton_point(form, offset + k + 1), j);
    if (!x)
    {
      continue;
    }
    const auto ext = level_extremum(form, *x, 0.0, j);
    if (ext && (!best || (maximize ? ext->H > best->H : ext->H < best->H)))
    {
      best = ext;
    }
  }
  return best;
}

inline Eigen::Matrix<double, 3, 2> sphere_tangent_basis(const Eigen::Vector3d& n)
{
  const Eigen::Vector3d axis = std::abs(n[2]) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
  const Eigen::Vector3d e1 = n.cross(axis).normalized();
  Eigen::Matrix<double, 3, 2> b;
  b << e1, n.cross(e1);
  return b;
}

} // namespace detail

/// Infimum and supremum of the limits of H at the singular locus of S^2 x S^2 within {J = j},
/// approached along directions tangent to the level set.
inline std::array<double, 2> singular_limits(double j)
{
  const double p = std::sqrt(std::max(0.0, 1.0 - j * j));
  const Eigen::Vector3d n1{p, 0.0, j};
  const Eigen::Vector3d n2{-p, 0.0, j};
  const double base = 0.5 * (n1[0] * n2[0] + n1[1] * n2[1] - n1[2] * n2[2]);

  Eigen::Matrix<double, 6, 4> tangent = Eigen::Matrix<double, 6, 4>::Zero();
  tangent.block<3, 2>(0, 0) = detail::sphere_tangent_basis(n1);
  tangent.block<3, 2>(3, 2) = detail::sphere_tangent_basis(n2);
  Eigen::Matrix<double, 1, 6> dj = Eigen::Matrix<double, 1, 6>::Zero();
  dj(2) = 0.5;
  dj(5) = 0.5;
  const Eigen::Matrix<double, 1, 4> c = dj * tangent;
  Eigen::JacobiSVD<Eigen::Matrix<double, 1, 4>> svd(c, Eigen::ComputeFullV);
  const int skip = svd.singularValues()[0] > 1e-12 ? 1 : 0;
  const Eigen::MatrixXd level = tangent * svd.matrixV().rightCols(4 - skip);

  // Radicand vector (x1+x2, y1+y2, z1-z2) and numerator z1-z2 are linear in the coordinates.
  Eigen::Matrix<double, 3, 6> lin = Eigen::Matrix<double, 3, 6>::Zero();
  lin(0, 0) = lin(0, 3) = 1.0;
  lin(1, 1) = lin(1, 4) = 1.0;
  lin(2, 2) = 1.0;
  lin(2, 5) = -1.0;
  const Eigen::MatrixXd b = lin * level;
  const Eigen::VectorXd a = b.row(2).transpose();
  const double spread = (b.completeOrthogonalDecomposition().pseudoInverse().transpose() * a).norm();
  return {base - spread, base + spread};
}

namespace detail
{

inline BoundaryTrace trace_tstar(const Rank0Search& rank0, const TraceOptions& opt)
{
  BoundaryTrace out;
  if (rank0.points.empty())
  {
    out.stalled = true;
    out.stall_message = "no rank-0 seed";
    return out;
  }
  const auto bottom = std::min_element(rank0.points.begin(), rank0.points.end(),
                                       [](const EMomSample& a, const EMomSample& b) { return a.H_real < b.H_real; });
  const Ambient seed = to_ambient(Form::TstarS2, bottom->location);

  Polyline lower{"lower", {}};
  std::vector<BoundaryPoint> negative;
  for (const double direction : {1.0, -1.0})
  {
    Ambient x = seed;
    double lambda = 0.0;
    double j = 0.0;
    std::vector<BoundaryPoint>& branch = direction > 0.0 ? lower.points : negative;
    if (direction > 0.0)
    {
      branch.push_back({bottom->J_real, bottom->H_real, BoundarySource::Critical});
    }
    const auto n_steps = static_cast<std::size_t>(std::llround(opt.j_max / opt.j_step));
    for (std::size_t k = 1; k <= n_steps; ++k)
    {
      const double target = direction * static_cast<double>(k) * opt.j_step;
      std::optional<LevelExtremum> ext;
      // Sub-steps from the last accepted point if the full step does not converge.
      for (int halvings = 0; halvings < 8 && !ext; ++halvings)
      {
        const int parts = 1 << halvings;
        Ambient xs = x;
        double ls = lambda;
        bool ok = true;
        for (int part = 1; part <= parts && ok; ++part)
        {
          const double jp = j + (target - j) * part / parts;
          const auto step = level_extremum(Form::TstarS2, xs, ls, jp);
          if (!step)
          {
            ok = false;
            break;
          }
          xs = step->x;
          ls = step->lambda;
          if (part == parts)
          {
            ext = step;
          }
        }
      }
      if (!ext)
      {
        ext = reseed(Form::TstarS2, target, false, opt.reseed_starts, 1000 + k);
      }
      if (!ext)
      {
        out.stalled = true;
        out.stall_message = "continuation stalled at J = " + std::to_string(target);
        out.last_good = branch.empty() ? std::nullopt : std::optional<BoundaryPoint>(branch.back());
        break;
      }
      x = ext->x;
      lambda = ext->lambda;
      j = target;
      branch.push_back({evaluate(Form::TstarS2, x).values[0], ext->H, BoundarySource::Critical});
    }
  }
  std::reverse(negative.begin(), negative.end());
  lower.points.insert(lower.points.begin(), negative.begin(), negative.end());
  out.curves.push_back(std::move(lower));
  return out;
}

inline BoundaryTrace trace_compact(const Rank0Search& rank0, const TraceOptions& opt)
{
  BoundaryTrace out;
  const std::size_t n = opt.grid;
  std::vector<double> js(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
  {
    js[k] = -std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  }
  js.front() = -1.0;
  js.back() = 1.0;

  // Critical extrema: continuation outward from J = 0 in both directions, warm started and reseeded.
  std::vector<std::optional<double>> crit_max(n + 1);
  std::vector<std::optional<double>> crit_min(n + 1);
  const std::size_t mid = n / 2;
  for (const bool maximize : {true, false})
  {
    auto& values = maximize ? crit_max : crit_min;
    std::optional<LevelExtremum> origin;
    if (!rank0.points.empty())
    {
      const auto pick = maximize ? std::max_element(rank0.points.begin(), rank0.points.end(),
                                                    [](const EMomSample& a, const EMomSample& b) { return a.H_real < b.H_real; })
                                 : rank0.points.end();
      if (pick != rank0.points.end() && std::abs(pick->J_real) < 1e-9)
      {
        origin = LevelExtremum{to_ambient(Form::S2xS2, pick->location), 0.0, pick->H_real};
      }
    }
    for (const int direction : {1, -1})
    {
      std::optional<LevelExtremum> current = origin;
      for (std::size_t step = 0;; ++step)
      {
        const auto idx = static_cast<std::ptrdiff_t>(mid) + direction * static_cast<std::ptrdiff_t>(step);
        if (idx <= 0 || idx >= static_cast<std::ptrdiff_t>(n))
        {
          break;
        }
        const double j = js[static_cast<std::size_t>(idx)];
        std::optional<LevelExtremum> next;
        if (current)
        {
          next = level_extremum(Form::S2xS2, current->x, current->lambda, j);
        }
        if ((current && !next) || step % opt.reseed_every == 0)
        {
          const auto fresh = reseed(Form::S2xS2, j, maximize, opt.reseed_starts, 1000 + step);
          if (fresh && (!next || (maximize ? fresh->H > next->H + 1e-9 : fresh->H < next->H - 1e-9)))
          {
            next = fresh;
          }
        }
        current = next;
        if (next)
        {
          values[static_cast<std::size_t>(idx)] = next->H;
        }
      }
    }
  }

  Polyline lower{"lower", {}};
  Polyline upper{"upper", {}};
  for (std::size_t k = 0; k <= n; ++k)
  {
    const auto lim = singular_limits(js[k]);
    BoundaryPoint lo{js[k], lim[0], BoundarySource::SingularLimit};
    BoundaryPoint hi{js[k], lim[1], BoundarySource::SingularLimit};
    if (crit_min[k] && *crit_min[k] < lo.H)
    {
      lo = {js[k], *crit_min[k], BoundarySource::Critical};
    }
    if (crit_max[k] && *crit_max[k] > hi.H)
    {
      hi = {js[k], *crit_max[k], BoundarySource::Critical};
    }
    lower.points.push_back(lo);
    upper.points.push_back(hi);
  }
  out.curves.push_back(std::move(lower));
  out.curves.push_back(std::move(upper));
  return out;
}

} // namespace detail

/// Lower boundary (T*S^2) or lower and upper boundaries (S^2 x S^2) of the image of (J, H).
inline BoundaryTrace trace_boundary(Form form, const Rank0Search& rank0, const TraceOptions& opt = {})
{
  return form == Form::TstarS2 ? detail::trace_tstar(rank0, opt) : detail::trace_compact(rank0, opt);
}

// ---------------------------------------------------------------------------
// Image samples and containment.
// ---------------------------------------------------------------------------

/// n Halton points of the form mapped through (J, H); T*S^2 momenta have |L| <= radius.
inline std::vector<std::array<double, 2>> sample_image(Form form, std::size_t n, double radius = 2.0)
{
  std::vector<std::array<double, 2>> out;
  out.reserve(n);
  for (std::uint64_t k = 1; out.size() < n; ++k)
  {
    const Ambient x = detail::halton_point(form, k, radius);
    try
    {
      out.push_back(detail::evaluate(form, x).values);
    }
    catch (const SingularityError&)
    {
    }
  }
  return out;
}

/// Piecewise linear value of a J-sorted polyline; nullopt outside its J range.
inline std::optional<double> interpolate(const Polyline& line, double j)
{
  const auto& p = line.points;
  if (p.empty() || j < p.front().J || j > p.back().J)
  {
    return std::nullopt;
  }
  const auto it = std::lower_bound(p.begin(), p.end(), j, [](const BoundaryPoint& b, double v) { return b.J < v; });
  if (it == p.begin())
  {
    return it->H;
  }
  const BoundaryPoint& b = *it;
  const BoundaryPoint& a = *(it - 1);
  const double t = b.J == a.J ? 0.0 : (j - a.J) / (b.J - a.J);
  return a.H + t * (b.H - a.H);
}

/// Whether (j, h) lies within margin of the region bounded by the traced curves.
inline bool encloses(const BoundaryTrace& trace, double j, double h, double margin = 1e-6)
{
  if (const Polyline* lower = trace.curve("lower"))
  {
    const auto lo = interpolate(*lower, j);
    if (!lo || h < *lo - margin)
    {
      return false;
    }
  }
  if (const Polyline* upper = trace.curve("upper"))
  {
    const auto hi = interpolate(*upper, j);
    if (!hi || h > *hi + margin)
    {
      return false;
    }
  }
  return true;
}

/// Distance from p to a polyline in the (J, H) plane.
inline double distance_to_polyline(const std::array<double, 2>& p, const std::vector<std::array<double, 2>>& line)
{
  if (line.size() == 1)
  {
    return std::hypot(p[0] - line[0][0], p[1] - line[0][1]);
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < line.size(); ++k)
  {
    const double dx = line[k + 1][0] - line[k][0];
    const double dy = line[k + 1][1] - line[k][1];
    const double len2 = dx * dx + dy * dy;
    const double t =
        len2 == 0.0 ? 0.0 : std::clamp(((p[0] - line[k][0]) * dx + (p[1] - line[k][1]) * dy) / len2, 0.0, 1.0);
    best = std::min(best, std::hypot(p[0] - line[k][0] - t * dx, p[1] - line[k][1] - t * dy));
  }
  return best;
}

/// Symmetric Hausdorff distance between two polylines.
inline double hausdorff_distance(const std::vector<std::array<double, 2>>& a, const std::vector<std::array<double, 2>>& b)
{
  double d = 0.0;
  for (const auto& p : a)
  {
    d = std::max(d, distance_to_polyline(p, b));
  }
  for (const auto& p : b)
  {
    d = std::max(d, distance_to_polyline(p, a));
  }
  return d;
}

inline std::vector<std::array<double, 2>> vertices(const Polyline& line)
{
  std::vector<std::array<double, 2>> out;
  out.reserve(line.points.size());
  for (const BoundaryPoint& p : line.points)
  {
    out.push_back({p.J, p.H});
  }
  return out;
}

/// (J, H) -> (-J, H)
inline std::vector<std::array<double, 2>> mirrored(std::vector<std::array<double, 2>> pts)
{
  for (auto& p : pts)
  {
    p[0] = -p[0];
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Bundled output.
// ---------------------------------------------------------------------------

struct BifurcationOptions
{
  std::size_t starts{512};
  std::size_t image_samples{4000};
  double image_radius{2.0};
  TraceOptions trace{};
};

struct BifurcationData
{
  Form form{Form::TstarS2};
  Rank0Search rank0;
  BoundaryTrace boundary;
  std::vector<std::array<double, 2>> image_samples;
};

inline BifurcationData compute_bifurcation(Form form, const BifurcationOptions& opt = {})
{
  BifurcationData out;
  out.form = form;
  out.rank0 = find_rank0(form, opt.starts);
  out.boundary = trace_boundary(form, out.rank0, opt.trace);
  out.image_samples = sample_image(form, opt.image_samples, opt.image_radius);
  return out;
}

} // namespace holoreal
