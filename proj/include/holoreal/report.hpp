#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>

namespace holoreal
{

/// Outcome of one numerical identity check over a sample set.
struct CheckReport
{
  std::string id;
  std::string property;
  std::size_t samples{};
  double max_residual{};
  double tolerance{};
  bool negative_control{false};
  bool pass{false};
};

/// Sets pass: residual within tolerance, or outside it for a negative control.
inline CheckReport finish(CheckReport r)
{
  r.pass = r.negative_control ? r.max_residual > r.tolerance : r.max_residual <= r.tolerance;
  return r;
}

inline CheckReport make_report(std::string id, std::string property, std::size_t samples, double residual,
                               double tolerance, bool negative_control = false)
{
  return finish({std::move(id), std::move(property), samples, residual, tolerance, negative_control, false});
}

} // namespace holoreal
