// Command-line driver: gen, solve, verify, bench.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gts/io.hpp"
#include "gts/oracle.hpp"
#include "gts/pipeline.hpp"

using namespace gts;

namespace {

enum Exit { Ok = 0, Usage = 1, Parse = 2, Diagnostic = 3 };

InstanceData load(const std::string& path) {
  if (path == "-") return read_instance(std::cin);
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_instance(in);
}

// writes to path, or to stdout for "" and "-"
template <class F>
void emit(const std::string& path, F&& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  body(out);
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Solved {
  TransportMap map;  // input indices
  double cost = 0;
  double seconds = 0;
  SolveReport report;
};

Solved run_solve(const InstanceData& data, const SolveOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const TransportInstance inst(data.d, data.coords, data.supplies);
  Solved s;
  s.map = to_input_indices(data, inst, approximate_transport(inst, opt, &s.report));
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.cost = total_cost(data.d, data.coords, s.map);
  return s;
}

int cmd_solve(const std::string& input, const std::string& output, const SolveOptions& opt) {
  const auto data = load(input);
  const auto s = run_solve(data, opt);
  if (!validate_map(data.supplies, s.map).empty()) {
    std::cerr << "error: solver output failed the feasibility check\n";
    return Diagnostic;
  }
  emit(output, [&](std::ostream& out) { write_map(out, s.map, s.cost); });
  std::ostream& log = output.empty() || output == "-" ? std::cerr : std::cout;
  const auto& r = s.report;
  log << "cost " << num(s.cost) << "\n"
      << "time " << s.seconds << " s\n"
      << "mode " << mode_name(r.mode) << (r.exact ? " (exact)" : "") << ", internal epsilon "
      << r.internal_epsilon << ", trees " << r.trees << ", cells " << r.cells << ", edges " << r.edges
      << ", iterations " << r.iterations << (r.certified ? ", certified" : ", not certified") << "\n";
  return Ok;
}

int cmd_gen(const GenOptions& g, const std::string& output) {
  const auto data = generate_instance(g);
  emit(output, [&](std::ostream& out) { write_instance(out, data); });
  return Ok;
}

int cmd_verify(const std::string& input, const std::string& map_path, std::size_t oracle_limit) {
  const auto data = load(input);
  TransportMap map;
  {
    std::ifstream in(map_path);
    if (!in) throw ParseError("cannot open " + map_path);
    map = read_map(in);
  }
  const auto violations = validate_map(data.supplies, map);
  static const char* kinds[] = {"row", "column", "negative", "index"};
  for (const auto& v : violations)
    std::cout << "violation " << kinds[v.kind] << ' ' << v.index << ' ' << num(v.magnitude) << '\n';
  std::cout << "violations " << violations.size() << '\n';
  bool indices_ok = true;
  for (const auto& e : map.entries) indices_ok = indices_ok && e.i < data.size() && e.j < data.size();
  if (indices_ok) {
    const double cost = total_cost(data.d, data.coords, map);
    std::cout << "cost " << num(cost) << '\n';
    const TransportInstance inst(data.d, data.coords, data.supplies);
    OracleLimits limits;
    limits.max_points = oracle_limit;
    try {
      const double opt = exact_emd(inst, limits).cost;
      std::cout << "oracle " << num(opt) << '\n' << "ratio " << num(opt > 0 ? cost / opt : 1) << '\n';
    } catch (const OracleLimitExceeded& e) {
      std::cout << "oracle skipped: " << e.what() << '\n';
    }
  }
  return violations.empty() ? Ok : Diagnostic;
}

int cmd_bench(const std::vector<std::size_t>& sizes, const GenOptions& base, const SolveOptions& opt,
              std::size_t oracle_limit, const std::string& output) {
  struct Row {
    std::size_t n = 0;
    double seconds = 0, cost = 0, ratio = 0;
    SolveReport report;
  };
  std::vector<Row> rows(sizes.size());
  unsigned threads = 1;
  if (const char* env = std::getenv("GTS_THREADS")) threads = static_cast<unsigned>(std::max(1, std::atoi(env)));
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::string err;
  auto worker = [&] {
    for (std::size_t k; (k = next++) < sizes.size();) {
      try {
        GenOptions g = base;
        g.n = sizes[k];
        g.seed = base.seed + k;
        const auto data = generate_instance(g);
        const auto s = run_solve(data, opt);
        Row& r = rows[k];
        r.n = sizes[k];
        r.seconds = s.seconds;
        r.cost = s.cost;
        r.report = s.report;
        if (data.size() <= oracle_limit) {
          OracleLimits limits;
          limits.max_points = oracle_limit;
          const double best = exact_emd(TransportInstance(data.d, data.coords, data.supplies), limits).cost;
          r.ratio = best > 0 ? s.cost / best : 1;
        }
      } catch (const std::exception& e) {
        std::lock_guard lock(err_mu);
        err = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (!err.empty()) {
    std::cerr << "error: " << err << '\n';
    return Diagnostic;
  }
  emit(output, [&](std::ostream& out) {
    out << "n,d,epsilon,mode,seconds,time_ratio,cells,edges,iterations,certified,cost,ratio\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const Row& r = rows[k];
      const double tr = k > 0 && rows[k - 1].seconds > 0 ? r.seconds / rows[k - 1].seconds : 0;
      out << r.n << ',' << base.d << ',' << opt.epsilon << ',' << mode_name(r.report.mode) << ',' << r.seconds << ','
          << tr << ',' << r.report.cells << ',' << r.report.edges << ',' << r.report.iterations << ','
          << (r.report.certified ? 1 : 0) << ',' << num(r.cost) << ',' << (r.ratio > 0 ? num(r.ratio) : "") << '\n';
    }
  });
  return Ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate geometric transportation"};
  app.require_subcommand(1);

  std::string input, output, map_path, mode = "auto";
  double epsilon = 0.25, spread = 0;
  std::uint64_t seed = 1;
  std::size_t n = 100, oracle_limit = 500;
  int d = 2, max_iterations = SolveOptions{}.max_iterations;
  bool integer_supplies = false;
  std::vector<std::size_t> sizes{1000, 2000, 4000};
  const std::vector<std::string> modes{"auto", "warped", "low-spread", "matching"};

  auto solve = app.add_subcommand("solve", "Solve an instance file");
  solve->add_option("--input", input, "Instance file, - for stdin")->required();
  solve->add_option("--output", output, "Map file; stdout if omitted");
  solve->add_option("--epsilon", epsilon, "Accuracy")->check(CLI::Range(1e-6, 1.0));
  solve->add_option("--mode", mode, "auto, warped, low-spread or matching")->check(CLI::IsMember(modes));
  solve->add_option("--max-iterations", max_iterations, "Inner solver cap per tree")->check(CLI::NonNegativeNumber);

  auto gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--n", n, "Points")->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  gen->add_option("--d", d, "Dimension")->check(CLI::Range(1, 16));
  gen->add_option("--spread", spread, "Target spread, 0 for plain uniform");
  gen->add_option("--seed", seed, "Random seed");
  gen->add_flag("--integer-supplies", integer_supplies, "Integer supplies");
  gen->add_option("--output", output, "Instance file; stdout if omitted");

  auto verify = app.add_subcommand("verify", "Check a map against an instance");
  verify->add_option("--input", input, "Instance file")->required();
  verify->add_option("--map", map_path, "Map file")->required();
  verify->add_option("--oracle-limit", oracle_limit, "Largest instance for the exact oracle");

  auto bench = app.add_subcommand("bench", "Time a ladder of random instances (CSV)");
  bench->add_option("--sizes", sizes, "Instance sizes")->delimiter(',');
  bench->add_option("--d", d, "Dimension")->check(CLI::Range(1, 16));
  bench->add_option("--epsilon", epsilon, "Accuracy")->check(CLI::Range(1e-6, 1.0));
  bench->add_option("--mode", mode, "auto, warped, low-spread or matching")->check(CLI::IsMember(modes));
  bench->add_option("--spread", spread, "Target spread, 0 for plain uniform");
  bench->add_option("--seed", seed, "Random seed");
  bench->add_flag("--integer-supplies", integer_supplies, "Integer supplies");
  bench->add_option("--oracle-limit", oracle_limit, "Largest size compared against the exact oracle");
  bench->add_option("--max-iterations", max_iterations, "Inner solver cap per tree")->check(CLI::NonNegativeNumber);
  bench->add_option("--output", output, "CSV file; stdout if omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return Usage;
  }

  SolveOptions opt;
  opt.epsilon = epsilon;
  opt.mode = parse_mode(mode);
  opt.max_iterations = max_iterations;
  GenOptions g;
  g.n = n;
  g.d = d;
  g.spread = spread;
  g.seed = seed;
  g.integer_supplies = integer_supplies;
  g.unit_supplies = opt.mode == Mode::Matching;

  try {
    if (*solve) return cmd_solve(input, output, opt);
    if (*gen) return cmd_gen(g, output);
    if (*verify) return cmd_verify(input, map_path, oracle_limit);
    if (*bench) return cmd_bench(sizes, g, opt, oracle_limit, output);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return Parse;
  } catch (const InvalidInstance& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return Parse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return *gen ? Usage : Diagnostic;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Diagnostic;
  }
  return Usage;
}
