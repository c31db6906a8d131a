#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "gts/core.hpp"

namespace gts {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An instance as read from a file: input order, coincident points kept apart.
struct InstanceData {
  int d = 1;
  std::vector<double> coords;
  std::vector<double> supplies;
  std::size_t size() const { return supplies.size(); }
};

// "n d" header, then n lines of d coordinates and a supply. Supplies must sum
// to zero within kFeasTol of their total mass.
InstanceData read_instance(std::istream& in);
void write_instance(std::ostream& out, const InstanceData& inst);

// "i j amount" lines sorted by (i, j), then "# cost <value>".
TransportMap read_map(std::istream& in);
void write_map(std::ostream& out, const TransportMap& map, double cost);

// Rewrites a map over inst (which merges coincident points) in terms of the
// original indices of data. Opposite supplies at one location are paired up
// at no cost.
TransportMap to_input_indices(const InstanceData& data, const TransportInstance& inst, const TransportMap& map);

struct GenOptions {
  std::size_t n = 100;
  int d = 2;
  double spread = 0;  // 0 for plain uniform points
  std::uint64_t seed = 1;
  bool integer_supplies = false;
  bool unit_supplies = false;  // alternating +1, -1; n must be even
};

// Random balanced instance in the unit cube. With a spread target the first
// two points sit at opposite corners, the third at distance sqrt(d)/spread
// from the first, and every other pair keeps at least that distance.
InstanceData generate_instance(const GenOptions& opt);

}  // namespace gts
