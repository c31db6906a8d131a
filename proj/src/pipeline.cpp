#include "gts/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "gts/blob_forest.hpp"
#include "gts/oracle.hpp"
#include "gts/preconditioner.hpp"
#include "gts/quadtree.hpp"
#include "gts/recovery.hpp"
#include "gts/spanner.hpp"

namespace gts {

Mode parse_mode(const std::string& name) {
  if (name == "auto") return Mode::Auto;
  if (name == "warped") return Mode::Warped;
  if (name == "low-spread") return Mode::LowSpread;
  if (name == "matching") return Mode::Matching;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Auto: return "auto";
    case Mode::Warped: return "warped";
    case Mode::LowSpread: return "low-spread";
    case Mode::Matching: return "matching";
  }
  return "?";
}

TransportMap shortcut_maps(const TransportInstance& inst, const TransportMap& sum) {
  FlowGraph g;
  g.d = inst.dim();
  g.coords = inst.coords();
  FlowVector f;
  for (const auto& e : sum.entries) {
    if (e.amount == 0 || e.i == e.j) continue;
    g.add_edge(static_cast<int>(e.i), static_cast<int>(e.j));
    f.push_back(e.amount);
  }
  const auto& b = inst.supplies();
  return extract_map(g, refit_forest_flow(g, acyclify(g, f), b), b);
}

namespace {

struct Context {
  SolveOptions opt;
  std::size_t n_original = 0;
  SolveReport* report = nullptr;
};

double n4(std::size_t n) { return std::pow(static_cast<double>(n), 4); }

TransportMap solve_tree(const TransportInstance& inst, bool uniform, const Context& ctx);

TransportMap solve_instance(const TransportInstance& inst, bool uniform, const Context& ctx) {
  SolveReport& rep = *ctx.report;
  ++rep.trees;
  const std::size_t n = inst.size();
  if (inst.trivial()) return {};
  rep.internal_epsilon = std::max(rep.internal_epsilon, effective_epsilon(ctx.opt.epsilon / kCalibration, n));
  // below 1/eps points an exact solve is within the time budget
  const OracleLimits limits;
  if (static_cast<double>(n) * ctx.opt.epsilon < kCalibration && n <= limits.max_points) {
    rep.exact = true;
    return exact_emd(inst, limits).map;
  }
  return solve_tree(inst, uniform, ctx);
}

TransportMap solve_tree(const TransportInstance& inst, bool uniform, const Context& ctx) {
  SolveReport& rep = *ctx.report;
  const std::size_t n = inst.size();
  const double eps = effective_epsilon(ctx.opt.epsilon / kCalibration, n);
  const double spread = uniform ? inst.spread() : 1;
  const auto tree = build_quadtree(inst.dim(), inst.coords(), inst.supplies(), eps, uniform, spread);

  // contracted clusters are solved on their own and folded in at the end
  TransportMap sum;
  for (const auto& rec : tree.contractions) {
    std::vector<double> coords;
    for (std::size_t p : rec.members) {
      const auto x = inst.point(p);
      coords.insert(coords.end(), x.begin(), x.end());
    }
    const TransportInstance sub(inst.dim(), std::move(coords), rec.sub_supply);
    for (const auto& e : solve_instance(sub, uniform, ctx).entries)
      sum.entries.push_back({rec.members[e.i], rec.members[e.j], e.amount});
  }

  const auto spanner = build_spanner(tree, inst.coords());
  rep.cells += tree.num_cells();
  rep.edges += spanner.graph.num_edges();
  const OracleLimits limits;
  TransportMap map;
  if (static_cast<double>(spanner.graph.num_edges()) > n4(n) && n <= limits.max_points) {
    rep.exact = true;
    // points are distinct, so the contracted instance keeps the same indices
    map = exact_emd(TransportInstance(inst.dim(), inst.coords(), tree.supply), limits).map;
  } else {
    const auto blobs = build_blob_forest(tree);
    const auto pre = make_preconditioner(tree, spanner, blobs, ctx.n_original, spread);
    const auto fp = pose_flow_problem(spanner, tree.supply);
    const std::span<const double> b_net(fp.b.data() + n, fp.b.size() - n);
    SolverConfig cfg;
    cfg.epsilon = ctx.opt.epsilon / 4;
    cfg.max_iterations = ctx.opt.max_iterations;
    SolverStats stats;
    const auto f_net = solve_flow(pre, b_net, cfg, &stats, ctx.opt.inner);
    rep.iterations += stats.iterations;
    rep.certified = rep.certified && stats.certified;
    rep.flow_cost += stats.cost;

    FlowVector f = fp.preroute;
    for (std::size_t k = 0; k < f_net.size(); ++k) f[pre.edge(static_cast<int>(k))] += f_net[k];
    std::vector<double> b(spanner.graph.num_vertices(), 0);
    std::copy(tree.supply.begin(), tree.supply.end(), b.begin());
    const auto& g = spanner.graph;
    map = extract_map(g, refit_forest_flow(g, acyclify(g, f), b), b);
  }
  if (sum.entries.empty()) return map;
  sum.entries.insert(sum.entries.end(), map.entries.begin(), map.entries.end());
  return shortcut_maps(inst, sum);
}

}  // namespace

TransportMap approximate_transport(const TransportInstance& inst, const SolveOptions& opt, SolveReport* report) {
  SolveReport local;
  SolveReport& rep = report ? *report : local;
  rep = SolveReport{};
  if (!(opt.epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  Context ctx{opt, inst.size(), &rep};
  const std::size_t n = inst.size();
  Mode mode = opt.mode;
  if (mode == Mode::Matching) {
    for (double s : inst.supplies())
      if (s != 1 && s != -1) throw UnsupportedInstance("matching mode needs every supply to be +1 or -1");
  }
  if (mode != Mode::Warped && mode != Mode::LowSpread && n >= 2) {
    const bool low = inst.spread() <= n4(n);
    if (mode == Mode::Matching && !low)
      throw UnsupportedInstance(
          "matching mode needs spread at most n^4; reducing the spread of a matching instance first is not supported");
    mode = low ? Mode::LowSpread : Mode::Warped;
  } else if (mode == Mode::Auto || mode == Mode::Matching) {
    mode = Mode::Warped;
  }
  rep.mode = mode;
  return solve_instance(inst, mode == Mode::LowSpread, ctx);
}

TransportMap solve_low_spread(const TransportInstance& inst, double epsilon, SolveReport* report) {
  SolveOptions opt;
  opt.epsilon = epsilon;
  opt.mode = Mode::LowSpread;
  return approximate_transport(inst, opt, report);
}

TransportMap solve_matching(const TransportInstance& inst, double epsilon, SolveReport* report) {
  SolveOptions opt;
  opt.epsilon = epsilon;
  opt.mode = Mode::Matching;
  return approximate_transport(inst, opt, report);
}

}  // namespace gts
