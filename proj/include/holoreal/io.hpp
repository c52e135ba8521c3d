#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "holoreal/dynamics.hpp"
#include "holoreal/emom.hpp"
#include "holoreal/orbit.hpp"
#include "holoreal/suite.hpp"

namespace holoreal::io
{

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kVersion = "0.1.0";

/// 17 significant digits, '.' decimal regardless of locale.
inline std::string number(double v)
{
  if (std::isnan(v))
  {
    return "nan";
  }
  if (std::isinf(v))
  {
    return v > 0 ? "inf" : "-inf";
  }
  std::array<char, 40> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return {buf.data(), res.ptr};
}

/// Metadata carried by every output file.
struct RunInfo
{
  std::string command;
  std::uint64_t seed{};
  std::vector<std::pair<std::string, std::string>> extra{};
};

inline Json calibration_json()
{
  const KineticCalibration& cal = kinetic_calibration();
  Json j;
  j["slope"] = cal.slope;
  j["intercept"] = cal.intercept;
  j["max_residual"] = cal.max_residual;
  j["samples"] = cal.samples;
  return j;
}

inline Json run_json(const RunInfo& info)
{
  Json j;
  j["version"] = kVersion;
  j["command"] = info.command;
  j["seed"] = info.seed;
  j["calibration"] = calibration_json();
  j["structure_constant"] = {{"re", structure_constant().real()}, {"im", structure_constant().imag()}};
  for (const auto& [k, v] : info.extra)
  {
    j[k] = v;
  }
  return j;
}

/// '#'-prefixed header block; the column row follows it.
inline void write_csv_header(std::ostream& os, const RunInfo& info, const std::vector<std::string>& columns)
{
  const KineticCalibration& cal = kinetic_calibration();
  os << "# holoreal " << kVersion << '\n';
  os << "# command: " << info.command << '\n';
  os << "# seed: " << info.seed << '\n';
  os << "# calibration: |eta|^2 = " << number(cal.slope) << " * X " << (cal.intercept < 0 ? "- " : "+ ")
     << number(std::abs(cal.intercept)) << '\n';
  os << "# structure_constant: " << number(structure_constant().real()) << '\n';
  for (const auto& [k, v] : info.extra)
  {
    os << "# " << k << ": " << v << '\n';
  }
  for (std::size_t k = 0; k < columns.size(); ++k)
  {
    os << (k ? "," : "") << columns[k];
  }
  os << '\n';
}

inline void write_file(const std::filesystem::path& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Reports.
// ---------------------------------------------------------------------------

inline Json to_json(const CheckReport& r)
{
  Json j;
  j["id"] = r.id;
  j["property"] = r.property;
  j["samples"] = r.samples;
  j["max_residual"] = r.max_residual;
  j["pass"] = r.pass;
  j["tolerance"] = r.tolerance;
  j["negative_control"] = r.negative_control;
  return j;
}

inline Json to_json(const SuiteEntry& e)
{
  Json j = to_json(e.report);
  j["group"] = e.group;
  j["tolerance_name"] = e.tolerance_name;
  if (e.tolerance_induced())
  {
    j["failure"] = "tolerance-induced";
  }
  return j;
}

inline Json verify_json(const RunInfo& info, const std::vector<SuiteEntry>& entries)
{
  Json j;
  j["run"] = run_json(info);
  std::size_t failed = 0;
  Json checks = Json::array();
  for (const SuiteEntry& e : entries)
  {
    checks.push_back(to_json(e));
    failed += e.report.pass ? 0 : 1;
  }
  j["summary"] = {{"checks", entries.size()}, {"failed", failed}, {"pass", failed == 0}};
  j["checks"] = std::move(checks);
  return j;
}

inline std::string verify_csv(const RunInfo& info, const std::vector<SuiteEntry>& entries)
{
  std::ostringstream os;
  write_csv_header(os, info,
                   {"group", "id", "property", "samples", "max_residual", "tolerance", "negative_control", "pass",
                    "failure"});
  const auto quoted = [](const std::string& s) {
    std::string out = "\"";
    for (const char c : s)
    {
      out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
  };
  for (const SuiteEntry& e : entries)
  {
    const CheckReport& r = e.report;
    os << e.group << ',' << quoted(r.id) << ',' << quoted(r.property) << ',' << r.samples << ','
       << number(r.max_residual) << ',' << number(r.tolerance) << ',' << (r.negative_control ? 1 : 0) << ','
       << (r.pass ? 1 : 0) << ',' << (e.tolerance_induced() ? "tolerance-induced" : "") << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Trajectories.
// ---------------------------------------------------------------------------

inline std::vector<std::string> trajectory_columns(bool with_height)
{
  std::vector<std::string> cols{"t"};
  for (const char* c : {"x1", "y1", "z1", "x2", "y2", "z2"})
  {
    cols.push_back(std::string(c) + "_re");
    cols.push_back(std::string(c) + "_im");
  }
  for (const char* c : {"H_re", "H_im", "J_re", "J_im", "casimir1", "casimir2"})
  {
    cols.emplace_back(c);
  }
  if (with_height)
  {
    cols.emplace_back("height");
  }
  return cols;
}

/// Height of the pendulum bob: n_z of the bundle map of the first factor.
inline double pendulum_height(const ProductPoint& pt) { return bundle_map(pt.a)[2]; }

inline std::string trajectory_csv(const RunInfo& info, const Trajectory& tr, bool with_height)
{
  std::ostringstream os;
  write_csv_header(os, info, trajectory_columns(with_height));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < tr.states.size(); ++k)
  {
    os << number(tr.times[k]);
    for (const Complex& c : coords(tr.states[k]))
    {
      os << ',' << number(c.real()) << ',' << number(c.imag());
    }
    const DriftSample& d = tr.drift[k];
    os << ',' << number(d.H_defined ? d.H.real() : nan) << ',' << number(d.H_defined ? d.H.imag() : nan) << ','
       << number(d.J.real()) << ',' << number(d.J.imag()) << ',' << number(d.casimir1) << ',' << number(d.casimir2);
    if (with_height)
    {
      os << ',' << number(pendulum_height(tr.states[k]));
    }
    os << '\n';
  }
  return os.str();
}

inline Json controls_json(const FlowControls& c)
{
  return {{"atol", c.atol},         {"rtol", c.rtol},
          {"max_step", c.max_step}, {"min_step", c.min_step},
          {"singular_tol", c.singular_tol}, {"project", c.project}};
}

inline Json drift_json(const Trajectory& tr)
{
  Json j;
  j["steps"] = tr.states.empty() ? 0 : tr.states.size() - 1;
  j["rejected_steps"] = tr.rejected_steps;
  j["t_end"] = tr.times.empty() ? 0.0 : tr.times.back();
  j["drift_H"] = tr.drift_H();
  j["drift_J"] = tr.drift_J();
  j["max_casimir"] = tr.max_casimir();
  j["max_imag_residual"] = tr.max_fixed_residual(ProductInvolution::Sigma);
  j["max_upsilon_residual"] = tr.max_fixed_residual(ProductInvolution::Upsilon);
  j["endpoint_distance"] = tr.states.empty() ? 0.0 : distance(tr.states.front(), tr.states.back());
  j["aborted"] = tr.aborted;
  j["abort_reason"] = tr.abort_reason;
  return j;
}

inline Json trajectory_json(const RunInfo& info, const FlowControls& controls, const Trajectory& tr, bool with_samples)
{
  Json j;
  j["run"] = run_json(info);
  j["controls"] = controls_json(controls);
  j["drift"] = drift_json(tr);
  if (with_samples)
  {
    Json rows = Json::array();
    for (std::size_t k = 0; k < tr.states.size(); ++k)
    {
      Json row;
      row["t"] = tr.times[k];
      Json c = Json::array();
      for (const Complex& z : coords(tr.states[k]))
      {
        c.push_back({z.real(), z.imag()});
      }
      row["coords"] = std::move(c);
      const DriftSample& d = tr.drift[k];
      row["H"] = d.H_defined ? Json{d.H.real(), d.H.imag()} : Json(nullptr);
      row["J"] = {d.J.real(), d.J.imag()};
      row["casimir"] = {d.casimir1, d.casimir2};
      rows.push_back(std::move(row));
    }
    j["samples"] = std::move(rows);
  }
  return j;
}

// ---------------------------------------------------------------------------
// Bifurcation data.
// ---------------------------------------------------------------------------

inline std::string rank0_csv(const RunInfo& info, const Rank0Search& r)
{
  std::ostringstream os;
  write_csv_header(os, info, {"J", "H", "rank"});
  for (const EMomSample& p : r.points)
  {
    os << number(p.J_real) << ',' << number(p.H_real) << ',' << p.rank << '\n';
  }
  return os.str();
}

inline std::string boundary_csv(const RunInfo& info, const BoundaryTrace& b)
{
  std::ostringstream os;
  write_csv_header(os, info, {"curve", "J", "H", "source"});
  for (const Polyline& line : b.curves)
  {
    for (const BoundaryPoint& p : line.points)
    {
      os << line.name << ',' << number(p.J) << ',' << number(p.H) << ',' << to_string(p.source) << '\n';
    }
  }
  return os.str();
}

inline std::string image_csv(const RunInfo& info, const std::vector<std::array<double, 2>>& img)
{
  std::ostringstream os;
  write_csv_header(os, info, {"J", "H"});
  for (const auto& p : img)
  {
    os << number(p[0]) << ',' << number(p[1]) << '\n';
  }
  return os.str();
}

inline Json bifurcation_summary(const RunInfo& info, const BifurcationData& d)
{
  Json j;
  j["run"] = run_json(info);
  j["form"] = to_string(d.form);
  Json rank0 = Json::array();
  for (const EMomSample& p : d.rank0.points)
  {
    rank0.push_back({{"J", p.J_real}, {"H", p.H_real}, {"rank", p.rank}});
  }
  j["rank0"] = {{"points", std::move(rank0)},
                {"starts", d.rank0.starts},
                {"converged", d.rank0.converged},
                {"budget_warning", d.rank0.budget_warning}};
  Json curves = Json::array();
  for (const Polyline& line : d.boundary.curves)
  {
    Json c;
    c["name"] = line.name;
    c["points"] = line.points.size();
    if (!line.points.empty())
    {
      c["J_range"] = {line.points.front().J, line.points.back().J};
    }
    curves.push_back(std::move(c));
  }
  j["boundary"] = {{"curves", std::move(curves)},
                   {"stalled", d.boundary.stalled},
                   {"stall_message", d.boundary.stall_message}};
  if (d.boundary.last_good)
  {
    j["boundary"]["last_good"] = {{"J", d.boundary.last_good->J}, {"H", d.boundary.last_good->H}};
  }
  j["image"] = {{"samples", d.image_samples.size()}};
  j["files"] = {{"rank0", "rank0.csv: J,H,rank"},
                {"boundary", "boundary.csv: curve,J,H,source"},
                {"image", "image.csv: J,H"}};
  return j;
}

/// Full BifurcationData, polylines and samples included.
inline Json bifurcation_json(const RunInfo& info, const BifurcationData& d)
{
  Json j = bifurcation_summary(info, d);
  Json curves = Json::array();
  for (const Polyline& line : d.boundary.curves)
  {
    Json pts = Json::array();
    for (const BoundaryPoint& p : line.points)
    {
      pts.push_back({{"J", p.J}, {"H", p.H}, {"source", to_string(p.source)}});
    }
    curves.push_back({{"name", line.name}, {"points", std::move(pts)}});
  }
  j["boundary"]["curves"] = std::move(curves);
  Json img = Json::array();
  for (const auto& p : d.image_samples)
  {
    img.push_back({p[0], p[1]});
  }
  j["image"]["points"] = std::move(img);
  return j;
}

// ---------------------------------------------------------------------------
// Catalogue.
// ---------------------------------------------------------------------------

/// The table entry: the fixed-set label, or the dot of cells with no listed brane.
inline std::string table_entry(const CatalogueCell& cell)
{
  return cell.fixed_set ? std::string(to_string(*cell.fixed_set)) : "no-descended-involution";
}

inline Json to_json(const CatalogueRow& row)
{
  const CatalogueCell& c = row.cell;
  Json j;
  j["column"] = to_string(c.column);
  j["row"] = to_string(c.row);
  j["involution"] = c.phase_formula;
  j["printed"] = c.printed_formula;
  j["misprinted"] = c.misprinted();
  j["reduced_map"] = c.reduced_formula;
  j["reduced_space"] = c.reduced_space;
  j["table_entry"] = table_entry(c);
  j["classification"] = to_string(c.claimed);
  j["measured_classification"] = to_string(row.symplectic.classification);
  j["residuals"] = {{"involution", row.involution.max_residual},
                    {row.linearity.property, row.linearity.max_residual},
                    {"descent", row.descent.max_residual},
                    {"real_symplectic", row.symplectic.real_residual},
                    {"imaginary_symplectic", row.symplectic.imaginary_residual},
                    {"complex_lagrangian", row.symplectic.lagrangian_residual}};
  if (row.fixed_set)
  {
    j["residuals"]["fixed_set"] = row.fixed_set->max_residual;
  }
  j["pass"] = row.pass();
  return j;
}

inline Json catalogue_json(const RunInfo& info, const std::vector<CatalogueRow>& rows)
{
  Json j;
  j["run"] = run_json(info);
  Json cells = Json::array();
  for (const CatalogueRow& r : rows)
  {
    cells.push_back(to_json(r));
  }
  j["cells"] = std::move(cells);
  return j;
}

inline std::string catalogue_csv(const RunInfo& info, const std::vector<CatalogueRow>& rows)
{
  std::ostringstream os;
  write_csv_header(os, info,
                   {"column", "row", "involution", "reduced_map", "reduced_space", "table_entry", "classification",
                    "measured_classification", "misprinted", "involution_residual", "linearity", "linearity_residual",
                    "descent_residual", "real_residual", "imaginary_residual", "lagrangian_residual",
                    "fixed_set_residual", "pass"});
  for (const CatalogueRow& r : rows)
  {
    const CatalogueCell& c = r.cell;
    os << to_string(c.column) << ',' << to_string(c.row) << ",\"" << c.phase_formula << "\",\"" << c.reduced_formula
       << "\"," << c.reduced_space << ',' << table_entry(c) << ',' << to_string(c.claimed) << ','
       << to_string(r.symplectic.classification) << ',' << (c.misprinted() ? 1 : 0) << ','
       << number(r.involution.max_residual) << ',' << r.linearity.property << ',' << number(r.linearity.max_residual)
       << ',' << number(r.descent.max_residual) << ',' << number(r.symplectic.real_residual) << ','
       << number(r.symplectic.imaginary_residual) << ',' << number(r.symplectic.lagrangian_residual) << ','
       << (r.fixed_set ? number(r.fixed_set->max_residual) : std::string()) << ',' << (r.pass() ? 1 : 0) << '\n';
  }
  return os.str();
}

} // namespace holoreal::io
