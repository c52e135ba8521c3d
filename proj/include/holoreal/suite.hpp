#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "holoreal/dynamics.hpp"
#include "holoreal/orbit.hpp"
#include "holoreal/realstruct.hpp"
#include "holoreal/report.hpp"

namespace holoreal
{

// ---------------------------------------------------------------------------
// Named tolerances. Every check in the suite reads its threshold by name so
// that --tol.<name> can override it.
// ---------------------------------------------------------------------------

using ToleranceMap = std::map<std::string, double, std::less<>>;

inline const ToleranceMap& default_tolerances()
{
  static const ToleranceMap tols{
      {"involution", 1e-14},     {"linearity", 1e-10},        {"consistency", 1e-12},
      {"descent", 1e-12},        {"classification", 1e-10},   {"fixed-set", 1e-10},
      {"equivariance", 1e-12},   {"real-poisson", 1e-10},     {"compat", 1e-10},
      {"commutation", 1e-10},    {"gradient", 1e-8},          {"momentum-poisson", 1e-9},
      {"phi-equivariance", 1e-9}, {"phi-pullback", 1e-6},     {"calibration", 1e-9},
      {"invariance", 1e-8},      {"conservation", 1e-6},      {"casimir", 1e-8},
  };
  return tols;
}

struct SuiteSettings
{
  std::uint64_t seed{20240601};
  std::size_t samples{200};
  std::size_t flow_samples{4};
  double t_short{1.0};
  double t_conservation{10.0};
  ToleranceMap tolerances{};

  double tol(std::string_view name) const
  {
    if (const auto it = tolerances.find(name); it != tolerances.end())
    {
      return it->second;
    }
    if (const auto it = default_tolerances().find(name); it != default_tolerances().end())
    {
      return it->second;
    }
    throw DomainError("unknown tolerance: " + std::string(name));
  }
};

struct SuiteEntry
{
  std::string group;
  std::string tolerance_name;
  CheckReport report;

  /// A failure that the default tolerance would have accepted.
  bool tolerance_induced() const
  {
    return !report.pass && !report.negative_control &&
           report.max_residual <= default_tolerances().find(tolerance_name)->second;
  }
};

// ---------------------------------------------------------------------------
// Checks that live above a single module.
// ---------------------------------------------------------------------------

namespace detail
{

inline Mat2C random_matrix(Sampler& rng)
{
  return {rng.complex_normal(), rng.complex_normal(), rng.complex_normal(), rng.complex_normal()};
}

inline PhasePoint random_phase_point(Sampler& rng)
{
  return {{rng.complex_normal(), rng.complex_normal()}, {rng.complex_normal(), rng.complex_normal()}};
}

// f(xi) = Tr(A xi) + Tr(B xi) Tr(C xi)
struct QuadraticObservable
{
  Mat2C a, b, c;

  template <class T>
  T operator()(const Mat2<T>& xi) const
  {
    const auto lift = [](const Mat2C& m) { return Mat2<T>{T(m.a11), T(m.a12), T(m.a21), T(m.a22)}; };
    return (lift(a) * xi).trace() + (lift(b) * xi).trace() * (lift(c) * xi).trace();
  }
};

inline QuadraticObservable random_observable(Sampler& rng)
{
  return {random_matrix(rng), random_matrix(rng), random_matrix(rng)};
}

inline double max_abs_diff(const Coords6& a, const Coords6& b)
{
  double m = 0.0;
  for (std::size_t k = 0; k < 6; ++k)
  {
    m = std::max(m, std::abs(a[k] - b[k]));
  }
  return m;
}

inline std::string fixed(double v, int digits = 6)
{
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << v;
  return os.str();
}

} // namespace detail

/// {H, J} at random points of CS^2 x CS^2 with gradients from the closed forms.
inline CheckReport check_commutation(std::size_t samples, std::uint64_t seed, double tol, bool complex_step)
{
  Sampler rng{seed};
  const auto h = [](const std::array<Bicomplex, 6>& c) { return hamiltonian_H(c); };
  const auto j = [](const std::array<Bicomplex, 6>& c) { return hamiltonian_J(c); };
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k)
  {
    const ProductPoint pt = random_product_point(rng, 0.8);
    const Coords6 c = coords(pt);
    const Complex b = complex_step ? product_bracket(h, j, pt) : product_bracket(gradient_H(c), gradient_J(c), c);
    worst = std::max(worst, std::abs(b));
  }
  return make_report("{H,J}", complex_step ? "commute (complex-step gradients)" : "commute (analytic gradients)",
                     samples, worst, tol);
}

/// Closed-form gradients of H and J against complex-step differentiation.
inline CheckReport check_gradients(std::size_t samples, std::uint64_t seed, double tol)
{
  Sampler rng{seed};
  const auto h = [](const std::array<Bicomplex, 6>& c) { return hamiltonian_H(c); };
  const auto j = [](const std::array<Bicomplex, 6>& c) { return hamiltonian_J(c); };
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k)
  {
    const Coords6 c = coords(random_product_point(rng, 0.8));
    const Coords6 gh = gradient_H(c);
    double scale = 1.0;
    for (const Complex& e : gh)
    {
      scale = std::max(scale, std::abs(e));
    }
    worst = std::max(worst, detail::max_abs_diff(gh, complex_step_gradient6(h, c)) / scale);
    worst = std::max(worst, detail::max_abs_diff(gradient_J(c), complex_step_gradient6(j, c)));
  }
  return make_report("grad H, grad J", "analytic vs complex-step", samples, worst, tol);
}

/// Canonical bracket of pulled-back quadratic observables against the KKS bracket.
inline CheckReport check_momentum_poisson(std::size_t samples, std::uint64_t seed, double tol)
{
  Sampler rng{seed};
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k)
  {
    const detail::QuadraticObservable f = detail::random_observable(rng);
    const detail::QuadraticObservable g = detail::random_observable(rng);
    const PhasePoint pt = detail::random_phase_point(rng);
    const auto fp = [&](const auto& q, const auto& p) { return f(outer(q, p)); };
    const auto gp = [&](const auto& q, const auto& p) { return g(outer(q, p)); };
    const Complex canonical = canonical_bracket(fp, gp, pt);
    const Complex kks = kks_bracket(f, g, momentum_P(pt));
    worst = std::max(worst, std::abs(canonical - kks) / std::max(1.0, std::abs(kks)));
  }
  return make_report("P = q p^T", "Poisson: canonical bracket of pullbacks = KKS", samples, worst, tol);
}

inline CheckReport check_phi_equivariance(std::size_t samples, std::uint64_t seed, double tol)
{
  Sampler rng{seed};
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k)
  {
    const OrbitPoint pt = random_sphere_point(rng, 1.0);
    const Mat2C g = rng.su2();
    const Mat2C h = transport_su2(g, Axis::K, Axis::I);
    worst = std::max(worst, cotangent_distance(phi(adjoint_action(g, pt)), su2_action(h, phi(pt))));
  }
  return make_report("phi", "SU(2)-equivariant", samples, worst, tol);
}

/// phi^* Re(Omega_can) = Im(Omega_KKS) by central differences along orbit curves.
inline CheckReport check_phi_pullback(std::size_t samples, std::uint64_t seed, double tol)
{
  Sampler rng{seed};
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k)
  {
    const OrbitPoint pt = random_sphere_point(rng, 0.8);
    const Mat2C xi = coords_to_matrix(pt);
    const Mat2C a = detail::random_matrix(rng);
    const Mat2C b = detail::random_matrix(rng);
    // Curve s -> exp(sA) xi exp(-sA) to second order.
    const auto derivative = [&](const Mat2C& gen) {
      const Mat2C x1 = gen * xi - xi * gen;
      const Mat2C x2 = gen * x1 - x1 * gen;
      const auto at = [&](double s) {
        const CotangentPoint c = phi(matrix_to_coords(xi + s * x1 + (0.5 * s * s) * x2));
        return PhasePoint{c.q, c.p};
      };
      return Complex(1.0 / (2.0 * h)) * (at(h) - at(-h));
    };
    const Complex lhs = omega(derivative(a), derivative(b));
    const Complex rhs = kks_form(xi, a, b);
    worst = std::max(worst, std::abs(lhs.real() - rhs.imag()));
  }
  return make_report("phi", "pullback: Re Omega_can = Im Omega_KKS", samples, worst, tol);
}

/// Affine fit of |eta|^2 against |x|^2+|y|^2+|z|^2; the coefficients go into the property text.
inline CheckReport check_calibration_fit(std::size_t samples, std::uint64_t seed, double tol)
{
  const KineticCalibration cal = fit_kinetic_calibration(samples, seed);
  const std::string property = "affine fit |eta|^2 = " + detail::fixed(cal.slope, 9) + " X " +
                               (cal.intercept < 0 ? "- " : "+ ") + detail::fixed(std::abs(cal.intercept), 9) +
                               " (unit identity: slope 1, intercept 0)";
  return make_report("kinetic calibration", property, samples, cal.max_residual, tol);
}

/// Relative drift of H and iJ and Casimir size along flows from fix(id).
inline std::vector<CheckReport> check_conservation(ProductInvolution id, std::size_t starts, double t_final,
                                                   std::uint64_t seed, double tol, double casimir_tol)
{
  Sampler rng{seed};
  const Integral generator = invariant_flow_integral(id, integral_H());
  double drift_h = 0.0;
  double drift_j = 0.0;
  double casimir = 0.0;
  for (std::size_t k = 0; k < starts; ++k)
  {
    const ProductPoint start = id == ProductInvolution::Sigma ? random_compact_start(rng) : random_pendulum_start(rng);
    const Trajectory tr = flow(start, generator, t_final);
    drift_h = std::max(drift_h, tr.aborted ? 1.0 : tr.drift_H());
    drift_j = std::max(drift_j, tr.aborted ? 1.0 : tr.drift_J());
    casimir = std::max(casimir, tr.aborted ? 1.0 : tr.max_casimir());
  }
  const std::string label = name(id) + " flow of " + generator.name;
  return {make_report(label, "conservation: H", starts, drift_h, tol),
          make_report(label, "conservation: J", starts, drift_j, tol),
          make_report(label, "conservation: Casimirs", starts, casimir, casimir_tol)};
}

/// Report the claimed class of a catalogue cell against the measured one.
inline CheckReport classification_report(const SymplecticReport& r, Classification claimed, double tol)
{
  double residual = r.real_residual;
  if (claimed == Classification::ImaginarySymplectic)
  {
    residual = r.imaginary_residual;
  }
  else if (claimed == Classification::ComplexLagrangian)
  {
    residual = r.lagrangian_residual;
  }
  CheckReport out = make_report(r.id, "classification " + std::string(to_string(claimed)) + " (measured " +
                                          std::string(to_string(r.classification)) + ")",
                                r.samples, residual, tol);
  out.pass = out.pass && r.classification == claimed;
  return out;
}

// ---------------------------------------------------------------------------
// The verification suite as named groups.
// ---------------------------------------------------------------------------

struct SuiteGroup
{
  std::string name;
  std::function<std::vector<SuiteEntry>(const SuiteSettings&)> run;
};

namespace detail
{

inline std::uint64_t group_seed(const SuiteSettings& s, std::uint64_t offset) { return s.seed + 7919 * offset; }

inline std::vector<SuiteEntry> tagged(std::string group, std::string tol_name, std::vector<CheckReport> reports)
{
  std::vector<SuiteEntry> out;
  for (CheckReport& r : reports)
  {
    out.push_back({group, tol_name, std::move(r)});
  }
  return out;
}

inline std::vector<SuiteEntry> involution_group(const SuiteSettings& s)
{
  const double tol = s.tol("involution");
  const std::uint64_t seed = group_seed(s, 1);
  std::vector<CheckReport> r;
  for (const CatalogueCell& cell : table_cells())
  {
    r.push_back(check_involution(cell.phase(), s.samples, seed, tol));
    r.push_back(check_involution(cell.reduced(), s.samples, seed + 1, tol));
  }
  for (const Column c : kColumns)
  {
    r.push_back(check_involution(BiquaternionInvolution{c}, s.samples, seed + 2, tol));
  }
  for (const ProductInvolution id : {ProductInvolution::Sigma, ProductInvolution::Upsilon})
  {
    r.push_back(check_involution(id, s.samples, seed + 3, tol));
  }
  for (const GroupRealForm g : {GroupRealForm::Rho, GroupRealForm::Sigma, GroupRealForm::Tau})
  {
    r.push_back(check_involution(g, s.samples, seed + 4, tol));
  }
  return tagged("involution", "involution", std::move(r));
}

/// Antilinear cells must be conjugate-linear; the complex-Lagrangian cells are complex-linear.
inline std::vector<SuiteEntry> linearity_group(const SuiteSettings& s)
{
  const double tol = s.tol("linearity");
  const std::uint64_t seed = group_seed(s, 2);
  std::vector<CheckReport> r;
  for (const CatalogueCell& cell : table_cells())
  {
    if (cell.claimed == Classification::ComplexLagrangian)
    {
      r.push_back(check_complex_linear(cell.phase(), s.samples, seed, tol));
      r.push_back(check_complex_linear(cell.reduced(), s.samples, seed + 1, tol));
    }
    else
    {
      r.push_back(check_conjugate_linear(cell.phase(), s.samples, seed, tol));
      r.push_back(check_conjugate_linear(cell.reduced(), s.samples, seed + 1, tol));
    }
  }
  for (const ProductInvolution id : {ProductInvolution::Sigma, ProductInvolution::Upsilon})
  {
    r.push_back(check_conjugate_linear(id, s.samples, seed + 2, tol));
  }
  for (const GroupRealForm g : {GroupRealForm::Rho, GroupRealForm::Sigma, GroupRealForm::Tau})
  {
    r.push_back(check_conjugate_linear(g, s.samples, seed + 3, tol));
  }
  return tagged("linearity", "linearity", std::move(r));
}

inline std::vector<SuiteEntry> consistency_group(const SuiteSettings& s)
{
  std::vector<CheckReport> r;
  for (const CatalogueCell& cell : table_cells())
  {
    r.push_back(check_row_consistency(cell.phase(), s.samples, group_seed(s, 3), s.tol("consistency")));
  }
  return tagged("consistency", "consistency", std::move(r));
}

inline std::vector<SuiteEntry> descent_group(const SuiteSettings& s)
{
  std::vector<CheckReport> r;
  for (const CatalogueCell& cell : table_cells())
  {
    r.push_back(check_descent(cell.phase(), s.samples, group_seed(s, 4), s.tol("descent")));
  }
  return tagged("descent", "descent", std::move(r));
}

inline std::vector<SuiteEntry> classification_group(const SuiteSettings& s)
{
  const double tol = s.tol("classification");
  const std::uint64_t seed = group_seed(s, 5);
  std::vector<CheckReport> r;
  for (const CatalogueCell& cell : table_cells())
  {
    r.push_back(classification_report(check_real_symplectic(cell.phase(), s.samples, seed, tol), cell.claimed, tol));
    if (cell.row != Axis::I)
    {
      r.push_back(
          classification_report(check_real_symplectic(cell.reduced(), s.samples, seed + 1, tol), cell.claimed, tol));
    }
  }
  for (const Column c : {Column::R, Column::S, Column::T})
  {
    r.push_back(classification_report(check_real_symplectic(rst_structure(c), s.samples, seed + 2, tol),
                                      Classification::RealSymplectic, tol));
  }
  r.push_back(classification_report(check_real_symplectic(kUTilde, s.samples, seed + 3, tol),
                                    Classification::ImaginarySymplectic, tol));
  r.push_back(classification_report(check_real_symplectic(ProductInvolution::Sigma, s.samples, seed + 4, tol),
                                    Classification::RealSymplectic, tol));
  r.push_back(classification_report(check_real_symplectic(ProductInvolution::Upsilon, s.samples, seed + 5, tol),
                                    Classification::ImaginarySymplectic, tol));
  return tagged("classification", "classification", std::move(r));
}

inline std::vector<SuiteEntry> fixed_set_group(const SuiteSettings& s)
{
  std::vector<CheckReport> r;
  for (const CatalogueCell& cell : table_cells())
  {
    if (cell.fixed_set)
    {
      r.push_back(check_fixed_set_label(cell, s.samples, group_seed(s, 6), s.tol("fixed-set")));
    }
  }
  return tagged("fixed-sets", "fixed-set", std::move(r));
}

inline std::vector<SuiteEntry> equivariance_group(const SuiteSettings& s)
{
  const double tol = s.tol("equivariance");
  const std::uint64_t seed = group_seed(s, 7);
  std::vector<CheckReport> r;
  for (const Column c : {Column::R, Column::S, Column::T})
  {
    r.push_back(check_equivariance(rst_structure(c), rst_group_form(c), s.samples, seed, tol));
  }
  const std::array<std::pair<Column, GroupRealForm>, 3> wrong{
      {{Column::S, GroupRealForm::Rho}, {Column::R, GroupRealForm::Sigma}, {Column::T, GroupRealForm::Rho}}};
  for (const auto& [c, g] : wrong)
  {
    r.push_back(check_equivariance(rst_structure(c), g, s.samples, seed + 1, tol, true));
  }
  return tagged("equivariance", "equivariance", std::move(r));
}

inline std::vector<SuiteEntry> real_poisson_group(const SuiteSettings& s)
{
  const double tol = s.tol("real-poisson");
  const std::uint64_t seed = group_seed(s, 8);
  std::vector<CheckReport> r;
  for (const Column c : {Column::R, Column::S, Column::T})
  {
    r.push_back(check_real_poisson(rst_reduced(c), s.samples, seed, tol));
  }
  r.push_back(check_real_poisson("conj-transpose-J", wrong_involution, s.samples, seed + 1, tol, true));
  return tagged("real-poisson", "real-poisson", std::move(r));
}

inline std::vector<SuiteEntry> compat_group(const SuiteSettings& s)
{
  const double tol = s.tol("compat");
  Sampler rng{group_seed(s, 9)};
  std::vector<ProductPoint> pts;
  for (std::size_t k = 0; k < s.samples; ++k)
  {
    pts.push_back(random_product_point(rng, 0.8));
  }
  std::vector<CheckReport> r;
  for (const ProductInvolution id : {ProductInvolution::Sigma, ProductInvolution::Upsilon})
  {
    const auto rho = [id](const std::array<Complex, 2>& m) { return pendulum_rho_star(id, m); };
    r.push_back(check_momentum_compat(id, pendulum_moment, rho, std::span<const ProductPoint>(pts), tol, "(H,J)"));
    const ProductInvolution other =
        id == ProductInvolution::Sigma ? ProductInvolution::Upsilon : ProductInvolution::Sigma;
    const auto wrong = [other](const std::array<Complex, 2>& m) { return pendulum_rho_star(other, m); };
    CheckReport neg =
        check_momentum_compat(id, pendulum_moment, wrong, std::span<const ProductPoint>(pts), tol, "(H,J) swapped");
    neg.negative_control = true;
    r.push_back(finish(neg));
  }
  return tagged("momentum-compat", "compat", std::move(r));
}

inline std::vector<SuiteEntry> commutation_group(const SuiteSettings& s)
{
  std::vector<SuiteEntry> out;
  out.push_back({"commutation", "commutation", check_commutation(s.samples, group_seed(s, 10), s.tol("commutation"), false)});
  out.push_back({"commutation", "commutation", check_commutation(s.samples, group_seed(s, 10), s.tol("commutation"), true)});
  out.push_back({"commutation", "gradient", check_gradients(s.samples, group_seed(s, 11), s.tol("gradient"))});
  return out;
}

inline std::vector<SuiteEntry> momentum_poisson_group(const SuiteSettings& s)
{
  return tagged("momentum-poisson", "momentum-poisson",
                {check_momentum_poisson(s.samples, group_seed(s, 12), s.tol("momentum-poisson"))});
}

inline std::vector<SuiteEntry> phi_group(const SuiteSettings& s)
{
  return {{"phi", "phi-equivariance", check_phi_equivariance(s.samples, group_seed(s, 13), s.tol("phi-equivariance"))},
          {"phi", "phi-pullback", check_phi_pullback(s.samples, group_seed(s, 14), s.tol("phi-pullback"))}};
}

inline std::vector<SuiteEntry> calibration_group(const SuiteSettings& s)
{
  return tagged("calibration", "calibration",
                {check_calibration_fit(std::max<std::size_t>(s.samples, 16), group_seed(s, 15), s.tol("calibration"))});
}

inline std::vector<SuiteEntry> invariance_group(const SuiteSettings& s)
{
  const double tol = s.tol("invariance");
  const std::uint64_t seed = group_seed(s, 16);
  std::vector<CheckReport> r;
  const auto add = [&](const InvarianceReport& rep) {
    r.push_back(rep.derivative);
    r.push_back(rep.flow);
  };
  add(check_invariance(ProductInvolution::Sigma, integral_H(), s.flow_samples, s.t_short, seed, tol));
  add(check_invariance(ProductInvolution::Upsilon, integral_H(), s.flow_samples, s.t_short, seed + 1, tol));
  add(check_invariance(ProductInvolution::Sigma, scaled(kI, integral_J()), s.flow_samples, s.t_short, seed + 2, tol));
  add(check_invariance(ProductInvolution::Sigma, scaled(kI, integral_H()), s.flow_samples, s.t_short, seed + 3, tol,
                       true));
  return tagged("invariance", "invariance", std::move(r));
}

inline std::vector<SuiteEntry> conservation_group(const SuiteSettings& s)
{
  std::vector<SuiteEntry> out;
  for (const ProductInvolution id : {ProductInvolution::Sigma, ProductInvolution::Upsilon})
  {
    const auto reports = check_conservation(id, s.flow_samples, s.t_conservation, group_seed(s, 17), s.tol("conservation"),
                                            s.tol("casimir"));
    out.push_back({"conservation", "conservation", reports[0]});
    out.push_back({"conservation", "conservation", reports[1]});
    out.push_back({"conservation", "casimir", reports[2]});
  }
  return out;
}

} // namespace detail

inline const std::vector<SuiteGroup>& suite_groups()
{
  static const std::vector<SuiteGroup> groups{
      {"involution", detail::involution_group},
      {"linearity", detail::linearity_group},
      {"consistency", detail::consistency_group},
      {"descent", detail::descent_group},
      {"classification", detail::classification_group},
      {"fixed-sets", detail::fixed_set_group},
      {"equivariance", detail::equivariance_group},
      {"real-poisson", detail::real_poisson_group},
      {"momentum-compat", detail::compat_group},
      {"commutation", detail::commutation_group},
      {"momentum-poisson", detail::momentum_poisson_group},
      {"phi", detail::phi_group},
      {"calibration", detail::calibration_group},
      {"invariance", detail::invariance_group},
      {"conservation", detail::conservation_group},
  };
  return groups;
}

// ---------------------------------------------------------------------------
// The catalogue with the residuals behind each cell.
// ---------------------------------------------------------------------------

struct CatalogueRow
{
  CatalogueCell cell;
  CheckReport involution;
  CheckReport linearity;
  CheckReport descent;
  SymplecticReport symplectic;
  std::optional<CheckReport> fixed_set;

  bool pass() const
  {
    return involution.pass && linearity.pass && descent.pass && symplectic.classification == cell.claimed &&
           (!fixed_set || fixed_set->pass);
  }
};

inline std::vector<CatalogueRow> verified_catalogue(const SuiteSettings& s)
{
  std::vector<CatalogueRow> rows;
  const std::uint64_t seed = detail::group_seed(s, 20);
  for (const CatalogueCell& cell : table_cells())
  {
    const bool brane = cell.claimed == Classification::ComplexLagrangian;
    CatalogueRow row{cell,
                     check_involution(cell.phase(), s.samples, seed, s.tol("involution")),
                     brane ? check_complex_linear(cell.phase(), s.samples, seed + 1, s.tol("linearity"))
                           : check_conjugate_linear(cell.phase(), s.samples, seed + 1, s.tol("linearity")),
                     check_descent(cell.phase(), s.samples, seed + 2, s.tol("descent")),
                     check_real_symplectic(cell.phase(), s.samples, seed + 3, s.tol("classification")),
                     std::nullopt};
    if (cell.fixed_set)
    {
      row.fixed_set = check_fixed_set_label(cell, s.samples, seed + 4, s.tol("fixed-set"));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Run the named groups in suite order; an empty selection runs everything.
inline std::vector<SuiteEntry> run_suite(const SuiteSettings& s, const std::vector<std::string>& only = {})
{
  for (const std::string& name : only)
  {
    const bool known = std::any_of(suite_groups().begin(), suite_groups().end(),
                                   [&](const SuiteGroup& g) { return g.name == name; });
    if (!known)
    {
      throw DomainError("unknown check group: " + name);
    }
  }
  std::vector<SuiteEntry> out;
  for (const SuiteGroup& g : suite_groups())
  {
    if (!only.empty() && std::find(only.begin(), only.end(), g.name) == only.end())
    {
      continue;
    }
    auto entries = g.run(s);
    out.insert(out.end(), std::make_move_iterator(entries.begin()), std::make_move_iterator(entries.end()));
  }
  return out;
}

} // namespace holoreal
