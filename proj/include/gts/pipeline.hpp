#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "gts/core.hpp"
#include "gts/flow_solver.hpp"

namespace gts {

enum class Mode { Auto, Warped, LowSpread, Matching };

Mode parse_mode(const std::string& name);  // throws std::invalid_argument
const char* mode_name(Mode m);

// The tree and spanner are built at epsilon / kCalibration.
constexpr double kCalibration = 2;

struct SolveOptions {
  double epsilon = 0.25;
  Mode mode = Mode::Auto;
  int max_iterations = 1000;  // inner solver cap per tree; 0 keeps the greedy routing
  InnerSolver* inner = nullptr;
};

struct SolveReport {
  Mode mode = Mode::Auto;      // the pipeline that ran at the top level
  double internal_epsilon = 0;
  bool exact = false;          // small enough to solve exactly
  std::size_t trees = 0;       // the instance plus its contracted sub-instances
  std::size_t cells = 0;
  std::size_t edges = 0;
  int iterations = 0;
  bool certified = true;       // every flow solve met its gap target
  double flow_cost = 0;        // summed over trees
};

class UnsupportedInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// (1 + O(epsilon))-approximate transportation map, indices into inst.
TransportMap approximate_transport(const TransportInstance& inst, const SolveOptions& opt = {},
                                   SolveReport* report = nullptr);

TransportMap solve_low_spread(const TransportInstance& inst, double epsilon, SolveReport* report = nullptr);

// Supplies must all be +1 or -1 and the spread at most n^4. Every entry of
// the result is 1.
TransportMap solve_matching(const TransportInstance& inst, double epsilon, SolveReport* report = nullptr);

// Cancels cycles in a sum of maps and shortcuts it into one map with the same
// marginals and no greater cost.
TransportMap shortcut_maps(const TransportInstance& inst, const TransportMap& sum);

}  // namespace gts
