#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "gts/core.hpp"
#include "gts/dynamic_tree.hpp"

namespace gts {

enum class ForestKind { LinkCut, Naive };

// Cancels cycles in the support of f, one edge at a time, pushing flow around
// each cycle in the direction that does not raise the cost. The divergence is
// unchanged and the support of the result is a forest.
FlowVector acyclify(const FlowGraph& g, const FlowVector& f, ForestKind kind = ForestKind::LinkCut);

// Recomputes the flow on a forest support from the divergence b, so that
// A f = b holds up to the imbalance of each component, which lands on its
// smallest vertex.
FlowVector refit_forest_flow(const FlowGraph& g, const FlowVector& f, std::span<const double> b);

class RecoveryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortcuts a forest-supported flow with divergence b into a map between the
// vertices with b > 0 and b < 0. Entries use vertex ids.
TransportMap extract_map(const FlowGraph& g, const FlowVector& f, std::span<const double> b);

}  // namespace gts
