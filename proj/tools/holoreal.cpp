#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holoreal/dynamics.hpp"
#include "holoreal/emom.hpp"
#include "holoreal/io.hpp"
#include "holoreal/suite.hpp"

namespace fs = std::filesystem;
using namespace holoreal;

namespace
{

enum ExitCode : int
{
  kOk = 0,
  kVerifyFailed = 1,
  kSingular = 2,
  kStall = 3,
  kUsage = 64,
};

class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig
{
  std::string command;
  std::uint64_t seed{20240601};
  ToleranceMap tolerances;
  std::optional<std::size_t> samples;
  fs::path out{"."};
  std::string format{"json"};
  std::vector<std::string> only;
  std::string form{"tstar-s2"};
  std::string start{"rest-top"};
  std::string hamiltonian{"H"};
  double t_final{10.0};
};

// --tol.<name> is not expressible as a CLI11 option, so it is pulled out first.
ToleranceMap extract_tolerances(std::vector<std::string>& args)
{
  ToleranceMap tols;
  std::vector<std::string> rest;
  for (std::size_t k = 0; k < args.size(); ++k)
  {
    const std::string& a = args[k];
    if (a.rfind("--tol.", 0) != 0)
    {
      rest.push_back(a);
      continue;
    }
    std::string key = a.substr(6);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos)
    {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    }
    else if (k + 1 < args.size())
    {
      value = args[++k];
    }
    else
    {
      throw UsageError("--tol." + key + " needs a value");
    }
    tols[key] = std::stod(value);
  }
  args = std::move(rest);
  return tols;
}

std::vector<std::string> split(const std::string& s, char sep)
{
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
  {
    if (!item.empty())
    {
      out.push_back(item);
    }
  }
  return out;
}

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
  {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::map<std::string, std::string> read_config(const fs::path& path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw UsageError("cannot read config " + path.string());
  }
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line))
  {
    line = trim(line);
    if (line.empty() || line[0] == '#')
    {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw UsageError("config line without '=': " + line);
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void check_tolerance_names(const ToleranceMap& tols)
{
  for (const auto& [k, v] : tols)
  {
    if (!default_tolerances().count(k))
    {
      throw UsageError("unknown tolerance name: " + k);
    }
  }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const RunConfig& cfg)
{
  SuiteSettings s;
  s.seed = cfg.seed;
  s.samples = cfg.samples.value_or(200);
  s.tolerances = cfg.tolerances;
  std::vector<SuiteEntry> entries;
  try
  {
    entries = run_suite(s, cfg.only);
  }
  catch (const DomainError& e)
  {
    throw UsageError(e.what());
  }

  io::RunInfo info{"verify", cfg.seed, {}};
  if (!cfg.only.empty())
  {
    std::string joined;
    for (const auto& g : cfg.only)
    {
      joined += (joined.empty() ? "" : ",") + g;
    }
    info.extra.emplace_back("only", joined);
  }
  io::write_file(cfg.out / "verify_report.json", io::dump(io::verify_json(info, entries)));
  if (cfg.format == "csv")
  {
    io::write_file(cfg.out / "verify_report.csv", io::verify_csv(info, entries));
  }

  std::size_t failed = 0;
  for (const SuiteEntry& e : entries)
  {
    if (e.report.pass)
    {
      continue;
    }
    ++failed;
    std::cerr << "FAIL [" << e.group << "] " << e.report.id << ": " << e.report.property
              << " residual=" << e.report.max_residual << " tol=" << e.report.tolerance
              << (e.tolerance_induced() ? " (tolerance-induced)" : "") << '\n';
  }
  std::cout << "verify: " << entries.size() << " checks, " << failed << " failed\n";
  return failed == 0 ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------------------
// flow
// ---------------------------------------------------------------------------

struct Start
{
  ProductPoint point;
  bool pendulum{false}; // on fix(Upsilon): flows in imaginary time, height column written
};

Start parse_start(const std::string& spec, std::uint64_t seed)
{
  Sampler rng{seed};
  if (spec == "rest-top")
  {
    return {rest_top(), true};
  }
  if (spec == "rest-bottom")
  {
    return {rest_bottom(), true};
  }
  if (spec == "tstar")
  {
    return {random_pendulum_start(rng), true};
  }
  if (spec == "s2xs2")
  {
    return {random_compact_start(rng), false};
  }
  if (spec == "generic")
  {
    return {random_product_point(rng, 0.8), false};
  }
  if (spec.rfind("coords:", 0) == 0)
  {
    const auto parts = split(spec.substr(7), ',');
    if (parts.size() != 12)
    {
      throw UsageError("coords: needs 12 numbers (Re, Im of x1,y1,z1,x2,y2,z2)");
    }
    Coords6 c{};
    for (std::size_t k = 0; k < 6; ++k)
    {
      c[k] = {std::stod(parts[2 * k]), std::stod(parts[2 * k + 1])};
    }
    for (const Complex r : casimir_residuals(c))
    {
      if (std::abs(r) > 1e-8)
      {
        throw UsageError("coords: point is not on CS^2 x CS^2");
      }
    }
    const ProductPoint pt = from_coords(c);
    const bool pendulum = is_fixed(ProductInvolution::Upsilon, pt) && !is_fixed(ProductInvolution::Sigma, pt);
    return {pt, pendulum};
  }
  throw UsageError("unknown start: " + spec);
}

int cmd_flow(const RunConfig& cfg)
{
  if (cfg.hamiltonian != "H" && cfg.hamiltonian != "J")
  {
    throw UsageError("--hamiltonian must be H or J");
  }
  const Start start = parse_start(cfg.start, cfg.seed);
  const Generator gen = cfg.hamiltonian == "H" ? Generator::H : Generator::J;
  const FlowControls controls;
  const Integral base = cfg.hamiltonian == "H" ? integral_H(controls.singular_tol) : integral_J();
  const Integral generator = start.pendulum ? invariant_flow_integral(ProductInvolution::Upsilon, base)
                                            : flow_integral(gen, controls.singular_tol);
  const Trajectory tr = flow(start.point, generator, cfg.t_final, controls);

  io::RunInfo info{"flow", cfg.seed, {}};
  info.extra.emplace_back("start", cfg.start);
  info.extra.emplace_back("generator", generator.name);
  info.extra.emplace_back("t_final", io::number(cfg.t_final));
  info.extra.emplace_back("controls", "atol=" + io::number(controls.atol) + " rtol=" + io::number(controls.rtol) +
                                          " max_step=" + io::number(controls.max_step));
  io::write_file(cfg.out / "trajectory.json",
                 io::dump(io::trajectory_json(info, controls, tr, cfg.format == "json")));
  if (cfg.format == "csv")
  {
    io::write_file(cfg.out / "trajectory.csv", io::trajectory_csv(info, tr, start.pendulum));
  }

  std::cout << "flow of " << generator.name << " from " << cfg.start << ": " << tr.states.size() - 1
            << " steps to t=" << tr.times.back() << '\n'
            << "  drift H " << tr.drift_H() << ", J " << tr.drift_J() << ", Casimir " << tr.max_casimir() << '\n'
            << "  max imaginary residual " << tr.max_fixed_residual(ProductInvolution::Sigma)
            << ", fix(Upsilon) residual " << tr.max_fixed_residual(ProductInvolution::Upsilon) << '\n'
            << "  endpoint distance " << distance(tr.states.front(), tr.states.back()) << '\n';
  if (tr.aborted)
  {
    std::cerr << "flow aborted: " << tr.abort_reason << '\n';
    return kSingular;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// bifurcation
// ---------------------------------------------------------------------------

int cmd_bifurcation(const RunConfig& cfg)
{
  Form form{};
  try
  {
    form = parse_form(cfg.form);
  }
  catch (const DomainError& e)
  {
    throw UsageError(e.what());
  }
  BifurcationOptions opt;
  opt.image_samples = cfg.samples.value_or(opt.image_samples);
  const BifurcationData d = compute_bifurcation(form, opt);

  io::RunInfo info{"bifurcation", cfg.seed, {{"form", to_string(form)}}};
  io::write_file(cfg.out / "rank0.csv", io::rank0_csv(info, d.rank0));
  io::write_file(cfg.out / "boundary.csv", io::boundary_csv(info, d.boundary));
  io::write_file(cfg.out / "image.csv", io::image_csv(info, d.image_samples));
  io::write_file(cfg.out / "summary.json", io::dump(io::bifurcation_summary(info, d)));
  if (cfg.format == "json")
  {
    io::write_file(cfg.out / "bifurcation.json", io::dump(io::bifurcation_json(info, d)));
  }

  std::cout << to_string(form) << ": " << d.rank0.points.size() << " rank-0 points\n";
  for (const EMomSample& p : d.rank0.points)
  {
    std::cout << "  (J, H) = (" << p.J_real << ", " << p.H_real << ")\n";
  }
  if (d.rank0.budget_warning)
  {
    std::cerr << "warning: a rank-0 point was first found late in the start budget\n";
  }
  if (d.boundary.stalled)
  {
    std::cerr << "continuation stalled: " << d.boundary.stall_message << '\n';
    return kStall;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

int cmd_table(const RunConfig& cfg)
{
  SuiteSettings s;
  s.seed = cfg.seed;
  s.samples = cfg.samples.value_or(200);
  s.tolerances = cfg.tolerances;
  const std::vector<CatalogueRow> rows = verified_catalogue(s);

  const io::RunInfo info{"table", cfg.seed, {}};
  if (cfg.format == "csv")
  {
    io::write_file(cfg.out / "table.csv", io::catalogue_csv(info, rows));
  }
  else
  {
    io::write_file(cfg.out / "table.json", io::dump(io::catalogue_json(info, rows)));
  }
  for (const CatalogueRow& r : rows)
  {
    std::cout << to_string(r.cell.column) << ' ' << to_string(r.cell.row) << "  " << io::table_entry(r.cell) << "  "
              << to_string(r.cell.claimed) << (r.pass() ? "" : "  (check failed)") << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------------------

// Config values apply only where the flag was not given on the command line.
void apply_config(const std::map<std::string, std::string>& kv, RunConfig& cfg,
                  const std::function<bool(const std::string&)>& given)
{
  for (const auto& [key, value] : kv)
  {
    if (key.rfind("tol.", 0) == 0)
    {
      cfg.tolerances.try_emplace(key.substr(4), std::stod(value));
      continue;
    }
    if (given("--" + key))
    {
      continue;
    }
    if (key == "seed")
    {
      cfg.seed = std::stoull(value);
    }
    else if (key == "samples")
    {
      cfg.samples = std::stoul(value);
    }
    else if (key == "out")
    {
      cfg.out = value;
    }
    else if (key == "format")
    {
      cfg.format = value;
    }
    else if (key == "only")
    {
      cfg.only = split(value, ',');
    }
    else if (key == "form")
    {
      cfg.form = value;
    }
    else if (key == "start")
    {
      cfg.start = value;
    }
    else if (key == "hamiltonian")
    {
      cfg.hamiltonian = value;
    }
    else if (key == "t-final")
    {
      cfg.t_final = std::stod(value);
    }
    else
    {
      throw UsageError("unknown config key: " + key);
    }
  }
}

int run(int argc, char** argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig cfg;
  cfg.tolerances = extract_tolerances(args);

  CLI::App app{"Real forms of the complexified spherical pendulum"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::size_t samples = 0;
  app.add_option("--seed", cfg.seed, "seed for all random sampling");
  app.add_option("--samples", samples, "samples per check (verify, table) or image samples (bifurcation)");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--config", config_path, "key=value file; flags take precedence");

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite, write verify_report.json");
  verify->add_option("--only", cfg.only, "check groups to run")->delimiter(',');
  CLI::App* flow_cmd = app.add_subcommand("flow", "integrate a Hamiltonian flow on CS^2 x CS^2");
  flow_cmd->add_option("--start", cfg.start, "rest-top, rest-bottom, tstar, s2xs2, generic or coords:<12 numbers>");
  flow_cmd->add_option("--hamiltonian", cfg.hamiltonian, "H or J")->check(CLI::IsMember({"H", "J"}));
  flow_cmd->add_option("--t-final", cfg.t_final, "final time (may be negative)");
  CLI::App* bif = app.add_subcommand("bifurcation", "rank-0 points, boundary and image of (J, H)");
  bif->add_option("--form", cfg.form, "tstar-s2 or s2xs2")->check(CLI::IsMember({"tstar-s2", "s2xs2"}));
  app.add_subcommand("table", "the involution catalogue with residuals");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try
  {
    app.parse(reversed);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (app.get_option("--samples")->count() > 0)
  {
    cfg.samples = samples;
  }
  if (!config_path.empty())
  {
    const auto given = [&](const std::string& flag) {
      const CLI::Option* opt = app.get_option_no_throw(flag);
      if (opt == nullptr)
      {
        opt = sub->get_option_no_throw(flag);
      }
      return opt != nullptr && opt->count() > 0;
    };
    apply_config(read_config(config_path), cfg, given);
  }
  check_tolerance_names(cfg.tolerances);
  if (cfg.format != "json" && cfg.format != "csv")
  {
    throw UsageError("--format must be json or csv");
  }

  cfg.command = sub->get_name();
  fs::create_directories(cfg.out);
  if (cfg.command == "verify")
  {
    return cmd_verify(cfg);
  }
  if (cfg.command == "flow")
  {
    return cmd_flow(cfg);
  }
  if (cfg.command == "bifurcation")
  {
    return cmd_bifurcation(cfg);
  }
  return cmd_table(cfg);
}

} // namespace

int main(int argc, char** argv)
{
  try
  {
    return run(argc, argv);
  }
  catch (const UsageError& e)
  {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  catch (const std::invalid_argument& e)
  {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
}
