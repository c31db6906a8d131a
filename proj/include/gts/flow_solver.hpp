#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gts/preconditioner.hpp"

namespace gts {

struct SolverConfig {
  double epsilon = 0.25;        // target ratio between returned cost and the dual bound
  int max_iterations = 20000;   // inner iterations; 0 returns the greedy routing
  int check_every = 64;         // iterations between certificate checks
};

struct SolverStats {
  int iterations = 0;
  double cost = 0;           // cost of the returned flow
  double lower_bound = 0;    // certified lower bound on OPT
  bool certified = false;    // cost <= (1 + eps) lower_bound
  std::vector<double> history;  // best cost after each check, non-increasing
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<double> best)
      : std::runtime_error(what), best_flow(std::move(best)) {}
  std::vector<double> best_flow;
};

// Inner solver: an approximate minimizer of the cost subject to B A f = B b.
// Returns a flow that may leave a small residual.
class InnerSolver {
 public:
  virtual ~InnerSolver() = default;
  virtual std::vector<double> solve(const Preconditioner& p, std::span<const double> b,
                                    const SolverConfig& cfg, SolverStats& stats) = 0;
};

// Restarted primal-dual hybrid gradient on the preconditioned saddle problem
//   min_f sum_e w_e |f_e| + y^T (B A f - B b),
// touching the constraint matrix only through apply_BA and apply_BAt.
class PdhgSolver : public InnerSolver {
 public:
  std::vector<double> solve(const Preconditioner& p, std::span<const double> b,
                            const SolverConfig& cfg, SolverStats& stats) override;
};

// Flow over the preconditioner's edges with A f = b: inner solver, then the
// greedy routing of the leftover residual. Throws SolverError when the result
// is not feasible.
std::vector<double> solve_flow(const Preconditioner& p, std::span<const double> b,
                               const SolverConfig& cfg, SolverStats* stats = nullptr,
                               InnerSolver* inner = nullptr);

}  // namespace gts
