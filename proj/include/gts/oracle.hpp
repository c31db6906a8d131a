#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "gts/core.hpp"

namespace gts {

struct OracleLimits {
  std::size_t max_points = 500;
  std::size_t max_edges = 20000;
};

class OracleLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense transportation problem: supply[i] > 0 units at row i, demand[j] > 0 at
// column j, cost row-major. Returns the flow matrix row-major.
std::vector<double> solve_transport(const std::vector<double>& cost,
                                    const std::vector<double>& supply,
                                    const std::vector<double>& demand);

struct EmdResult {
  double cost = 0;
  TransportMap map;
};

EmdResult exact_emd(const TransportInstance& inst, const OracleLimits& limits = {});

struct GraphFlowResult {
  double cost = 0;
  FlowVector flow;
};

// Uncapacitated min-cost flow with divergence b (Af = b).
GraphFlowResult exact_graph_flow(const FlowGraph& g, const std::vector<double>& b,
                                 const OracleLimits& limits = {});

}  // namespace gts
