// Acceptance criteria: one PASS/FAIL line each. Exit status 0 iff every line passes.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "holoreal/dynamics.hpp"
#include "holoreal/emom.hpp"
#include "holoreal/realstruct.hpp"
#include "holoreal/suite.hpp"

using namespace holoreal;

namespace
{

struct Line
{
  bool pass{true};
  std::ostringstream detail;

  void require(bool ok, const std::string& what)
  {
    if (!ok)
    {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void print(const std::string& name, const Line& line, double seconds)
{
  std::printf("%s  %s:%s (%.1f s)\n", line.pass ? "PASS" : "FAIL", name.c_str(), line.detail.str().c_str(), seconds);
  std::fflush(stdout);
  failures += line.pass ? 0 : 1;
}

std::string sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// ---------------------------------------------------------------------------

void commutation()
{
  const auto t0 = Clock::now();
  Line line;
  const CheckReport analytic = check_commutation(1000, 901, 1e-10, false);
  const CheckReport stepped = check_commutation(1000, 901, 1e-10, true);
  const CheckReport gradients = check_gradients(1000, 902, 1e-8);
  line.detail << " max|{H,J}| analytic " << sci(analytic.max_residual) << ", complex-step " << sci(stepped.max_residual)
              << ", gradient gap " << sci(gradients.max_residual) << " at 1000 points";
  line.require(analytic.pass, "analytic bracket");
  line.require(stepped.pass, "complex-step bracket");
  line.require(gradients.pass, "gradient agreement");
  const double secs = seconds_since(t0);
  line.require(secs < 10.0, "runtime");
  print("Commutation", line, secs);
}

struct FlowStats
{
  double fixed_residual{};
  double drift_H{};
  double drift_J{};
  double casimir{};
  std::size_t aborted{};
};

FlowStats flow_batch(ProductInvolution id, std::size_t starts, double t_final, std::uint64_t seed)
{
  Sampler rng{seed};
  const Integral generator = invariant_flow_integral(id, integral_H());
  FlowStats s;
  for (std::size_t k = 0; k < starts; ++k)
  {
    const ProductPoint start = id == ProductInvolution::Sigma ? random_compact_start(rng) : random_pendulum_start(rng);
    const Trajectory tr = flow(start, generator, t_final);
    s.aborted += tr.aborted ? 1 : 0;
    s.fixed_residual = std::max(s.fixed_residual, tr.max_fixed_residual(id));
    s.drift_H = std::max(s.drift_H, tr.drift_H());
    s.drift_J = std::max(s.drift_J, tr.drift_J());
    s.casimir = std::max(s.casimir, tr.max_casimir());
  }
  return s;
}

void invariance_and_conservation()
{
  const auto t0 = Clock::now();
  const FlowStats sigma = flow_batch(ProductInvolution::Sigma, 20, 50.0, 903);
  const FlowStats upsilon = flow_batch(ProductInvolution::Upsilon, 20, 50.0, 904);
  const double secs = seconds_since(t0);

  Line inv;
  inv.detail << " 20 starts each to t=50; max residual S2xS2 (H) " << sci(sigma.fixed_residual)
             << ", fix(Upsilon) (i*H) " << sci(upsilon.fixed_residual);
  inv.require(sigma.aborted == 0 && upsilon.aborted == 0, "aborted flows");
  inv.require(sigma.fixed_residual < 1e-8, "S2xS2 residual");
  inv.require(upsilon.fixed_residual < 1e-8, "fix(Upsilon) residual");
  inv.require(secs < 60.0, "runtime");
  print("Real-form invariance", inv, secs);

  Line con;
  const double h = std::max(sigma.drift_H, upsilon.drift_H);
  const double j = std::max(sigma.drift_J, upsilon.drift_J);
  const double c = std::max(sigma.casimir, upsilon.casimir);
  con.detail << " relative drift H " << sci(h) << ", J " << sci(j) << ", Casimirs " << sci(c);
  con.require(sigma.aborted == 0 && upsilon.aborted == 0, "aborted flows");
  con.require(h < 1e-6, "H");
  con.require(j < 1e-6, "J");
  con.require(c < 1e-6, "Casimirs");
  print("Conservation", con, 0.0);
}

void catalogue()
{
  const auto t0 = Clock::now();
  Line line;
  std::vector<std::string> not_conjugate_linear;
  std::size_t labels = 0;
  for (const CatalogueCell& cell : table_cells())
  {
    const std::string id = std::string(to_string(cell.column)) + "," + std::string(to_string(cell.row));
    line.require(check_involution(cell.phase(), 500, 905).pass, "involutive " + id);
    line.require(check_involution(cell.reduced(), 500, 906).pass, "involutive reduced " + id);
    if (!check_conjugate_linear(cell.phase(), 200, 907).pass)
    {
      not_conjugate_linear.push_back(id);
    }
    line.require(check_descent(cell.phase(), 500, 908).pass, "descent " + id);
    line.require(check_real_symplectic(cell.phase(), 200, 909).classification == cell.claimed, "classification " + id);
    if (cell.fixed_set)
    {
      ++labels;
      line.require(check_fixed_set_label(cell, 200, 910).pass, "fixed set " + id);
    }
  }
  std::string cells;
  for (const std::string& c : not_conjugate_linear)
  {
    cells += (cells.empty() ? "" : " ") + std::string("(") + c + ")";
  }
  line.detail << " 12 cells, " << labels << " fixed-set labels";
  line.require(not_conjugate_linear.empty(), "conjugate-linear: " + cells + " are complex-linear");
  const double secs = seconds_since(t0);
  line.require(secs < 10.0, "runtime");
  print("Catalogue", line, secs);
}

void equivariance_and_compatibility()
{
  const auto t0 = Clock::now();
  Line line;
  double worst = 0.0;
  for (const Column c : {Column::R, Column::S, Column::T})
  {
    const CheckReport r = check_equivariance(rst_structure(c), rst_group_form(c), 500, 911, 1e-12);
    worst = std::max(worst, r.max_residual);
    line.require(r.pass, r.id);
  }
  double weakest_control = 1e300;
  const std::array<std::pair<Column, GroupRealForm>, 3> wrong{
      {{Column::S, GroupRealForm::Rho}, {Column::R, GroupRealForm::Sigma}, {Column::T, GroupRealForm::Rho}}};
  for (const auto& [c, g] : wrong)
  {
    const CheckReport r = check_equivariance(rst_structure(c), g, 200, 912, 1e-12, true);
    weakest_control = std::min(weakest_control, r.max_residual);
    line.require(r.pass, "negative control " + r.id);
  }

  Sampler rng{913};
  std::vector<ProductPoint> pts;
  for (int k = 0; k < 500; ++k)
  {
    pts.push_back(random_product_point(rng, 0.8));
  }
  double compat = 0.0;
  for (const ProductInvolution id : {ProductInvolution::Sigma, ProductInvolution::Upsilon})
  {
    const auto rho = [id](const std::array<Complex, 2>& m) { return pendulum_rho_star(id, m); };
    const CheckReport r = check_momentum_compat(id, pendulum_moment, rho, std::span<const ProductPoint>(pts), 1e-10);
    compat = std::max(compat, r.max_residual);
    line.require(r.pass, "compatibility " + name(id));
  }
  line.detail << " (R,rho),(S,sigma),(T,tau) " << sci(worst) << ", mismatched >= " << sci(weakest_control)
              << ", (H,J) with Sigma/Upsilon " << sci(compat);
  print("Equivariance and compatibility", line, seconds_since(t0));
}

void momentum_poisson()
{
  const auto t0 = Clock::now();
  Line line;
  const CheckReport r = check_momentum_poisson(500, 914, 1e-9);
  line.detail << " canonical vs KKS " << sci(r.max_residual) << " at 500 points";
  line.require(r.pass, "bracket agreement");
  print("Momentum map is Poisson", line, seconds_since(t0));
}

void phi_properties()
{
  const auto t0 = Clock::now();
  Line line;
  const CheckReport eq = check_phi_equivariance(200, 915, 1e-9);
  const CheckReport pull = check_phi_pullback(200, 916, 1e-6);
  const KineticCalibration cal = fit_kinetic_calibration(1000, 917);
  char fit[160];
  std::snprintf(fit, sizeof fit, "fit |eta|^2 = %.9f X %+.9f, residual %.2e (unit identity: slope 1, intercept 0)",
                cal.slope, cal.intercept, cal.max_residual);
  line.detail << " equivariance " << sci(eq.max_residual) << ", pullback " << sci(pull.max_residual) << "; " << fit;
  line.require(eq.pass, "equivariance");
  line.require(pull.pass, "pullback");
  line.require(cal.max_residual < 1e-9, "affine fit");
  print("Phi", line, seconds_since(t0));
}

// Relative equilibria of the unit pendulum, J(s) = s - s^-3, H(s) = (s^4 - 3)/(2 s^2).
std::vector<std::array<double, 2>> pendulum_oracle(double s_max, int n)
{
  std::vector<std::array<double, 2>> out;
  for (int k = 0; k <= n; ++k)
  {
    const double s = 1.0 + (s_max - 1.0) * k / n;
    out.push_back({s - std::pow(s, -3.0), (std::pow(s, 4.0) - 3.0) / (2.0 * s * s)});
  }
  return out;
}

void bifurcation_tstar()
{
  const auto t0 = Clock::now();
  Line line;
  const Rank0Search r = find_rank0(Form::TstarS2);
  line.require(r.points.size() == 2, "rank-0 count " + std::to_string(r.points.size()));
  if (r.points.size() == 2)
  {
    line.require(std::abs(r.points[0].J_real) < 1e-6 && std::abs(r.points[0].H_real + 1.0) < 1e-6, "(0,-1)");
    line.require(std::abs(r.points[1].J_real) < 1e-6 && std::abs(r.points[1].H_real - 1.0) < 1e-6, "(0,1)");
  }
  const BoundaryTrace b = trace_boundary(Form::TstarS2, r);
  line.require(!b.stalled, "continuation stalled");
  double hd = 1.0;
  if (const Polyline* lower = b.curve("lower"))
  {
    const double s_max = 2.5;
    const double j_max = s_max - std::pow(s_max, -3.0);
    std::vector<std::array<double, 2>> traced;
    for (const BoundaryPoint& p : lower->points)
    {
      if (p.J >= -1e-12 && p.J <= j_max + 1e-12)
      {
        traced.push_back({p.J, p.H});
      }
    }
    hd = hausdorff_distance(traced, pendulum_oracle(s_max, 30000));
  }
  line.require(hd < 1e-6, "Hausdorff distance");
  line.detail << " " << r.points.size() << " rank-0 points";
  for (const EMomSample& p : r.points)
  {
    line.detail << " (" << sci(p.J_real) << ", " << p.H_real << ")";
  }
  line.detail << "; Hausdorff to relative equilibria over s in [1,2.5] " << sci(hd);
  const double secs = seconds_since(t0);
  line.require(secs < 120.0, "runtime");
  print("Bifurcation T*S2", line, secs);
}

bool symmetric(const std::vector<EMomSample>& pts)
{
  return std::all_of(pts.begin(), pts.end(), [&](const EMomSample& p) {
    return std::any_of(pts.begin(), pts.end(), [&](const EMomSample& q) {
      return std::abs(q.J_real + p.J_real) < 1e-6 && std::abs(q.H_real - p.H_real) < 1e-6;
    });
  });
}

void bifurcation_compact()
{
  const auto t0 = Clock::now();
  Line line;
  const Rank0Search r = find_rank0(Form::S2xS2);
  line.require(r.points.size() == 4, "rank-0 count " + std::to_string(r.points.size()));
  line.require(symmetric(r.points), "rank-0 symmetry");

  const Rank0Search doubled = find_rank0(Form::S2xS2, 1024, 5e-11);
  bool stable = doubled.points.size() == r.points.size();
  for (std::size_t k = 0; stable && k < r.points.size(); ++k)
  {
    stable = std::abs(doubled.points[k].J_real - r.points[k].J_real) < 1e-6 &&
             std::abs(doubled.points[k].H_real - r.points[k].H_real) < 1e-6;
  }
  line.require(stable, "doubled budget");

  const BoundaryTrace b = trace_boundary(Form::S2xS2, r);
  line.require(!b.stalled, "continuation stalled");
  const Polyline* lower = b.curve("lower");
  const Polyline* upper = b.curve("upper");
  double mirror = 1.0;
  if (lower != nullptr && upper != nullptr && !lower->points.empty() && !upper->points.empty())
  {
    const auto gap = [](const BoundaryPoint& a, const BoundaryPoint& c) { return std::hypot(a.J - c.J, a.H - c.H); };
    line.require(gap(lower->points.front(), upper->points.front()) < 1e-6 &&
                     gap(lower->points.back(), upper->points.back()) < 1e-6,
                 "boundary closed");
    mirror = 0.0;
    for (const Polyline* l : {lower, upper})
    {
      const auto v = vertices(*l);
      mirror = std::max(mirror, hausdorff_distance(v, mirrored(v)));
    }
  }
  else
  {
    line.require(false, "boundary curves missing");
  }
  line.require(mirror < 1e-6, "boundary symmetry");

  // Compact image: samples of growing radius stay in one bounded box inside the boundary.
  double extent = 0.0;
  bool enclosed = true;
  for (const double radius : {2.0, 8.0})
  {
    for (const auto& p : sample_image(Form::S2xS2, 2000, radius))
    {
      extent = std::max({extent, std::abs(p[0]), std::abs(p[1])});
      enclosed = enclosed && encloses(b, p[0], p[1]);
    }
  }
  line.require(std::isfinite(extent) && extent <= 1.5 + 1e-9, "image bounded");
  line.require(enclosed, "image inside boundary");

  line.detail << " " << r.points.size() << " rank-0 points";
  for (const EMomSample& p : r.points)
  {
    line.detail << " (" << p.J_real << ", " << p.H_real << ")";
  }
  line.detail << "; boundary mirror gap " << sci(mirror) << ", image within |J|,|H| <= " << extent;
  print("Bifurcation S2xS2", line, seconds_since(t0));
}

} // namespace

int main()
{
  commutation();
  invariance_and_conservation();
  catalogue();
  equivariance_and_compatibility();
  momentum_poisson();
  phi_properties();
  bifurcation_tstar();
  bifurcation_compact();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
