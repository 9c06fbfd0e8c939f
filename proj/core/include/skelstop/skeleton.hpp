#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "skelstop/rng.hpp"

namespace skelstop {

// Discrete skeleton of a d-dimensional Brownian motion at spatial
// resolution eps: each coordinate is observed only when it moves by
// +-eps from its last observed level, and the per-coordinate event
// streams are merged into one ordered grid.
//
// Storage is 0-based for 1-based event ranks: times[i], deltas[i],
// coords[i], signs[i] describe event i+1.  walks[j] has steps+1
// entries, walks[j][n] = value of coordinate j's walk after the first
// n merged events (walks[j][0] = 0); it changes only at events with
// coords[i] == j.
struct Skeleton {
  double eps = 0.0;
  int dim = 1;
  std::vector<double> times;          // merged event times, strictly increasing
  std::vector<double> deltas;         // times[i] - times[i-1] (> 0)
  std::vector<std::uint8_t> coords;   // coordinate that moved at each event
  std::vector<std::int8_t> signs;     // +-1, direction of that move
  std::vector<std::vector<double>> walks;

  std::size_t steps() const { return times.size(); }
};

struct SkeletonConfig {
  double eps = 0.0;      // > 0
  int dim = 1;           // >= 1
  std::size_t steps = 0; // number of merged events to generate
};

// History vector: the first `stage` (delta, coordinate-signed move)
// pairs of a skeleton, i.e. the information available after that many
// merged events.
struct HistoryVector {
  int stage = 0;
  std::vector<double> deltas;
  std::vector<std::uint8_t> coords;
  std::vector<std::int8_t> signs;
};

HistoryVector history_prefix(const Skeleton& s, int stage);

// Step budget e(eps, horizon, dim) = dim * ceil(horizon / eps^2).
// The ceiling is taken with a tiny snap-down so that values that are
// integers up to roundoff do not get bumped by one.
std::size_t num_steps(double eps, double horizon, int dim);

// One inter-event increment: (delta, sign) with delta = eps^2 * tau
// for a unit-interval exit time tau, sign fair and independent.
std::pair<double, int> sample_increment(double eps, RngStream& rng);

// Full skeleton; per-coordinate renewal streams are merged in time
// order.  Draw order is fixed (coordinate streams are advanced only
// when their event is consumed), so output is reproducible for a
// given RngStream state.
Skeleton build_skeleton(const SkeletonConfig& cfg, RngStream& rng);

// Deterministic-clock variant used by exact tree enumeration and
// tests: every delta is frozen at eps^2, signs/coords are given.
Skeleton deterministic_clock_skeleton(double eps, const std::vector<std::int8_t>& signs,
                                      const std::vector<std::uint8_t>& coords = {});

// Grid query at time t: number of events with times[i] <= t and the
// time of the last one (0 if none).
struct GridPosition {
  std::size_t count = 0;
  double last_time = 0.0;
};
GridPosition grid_query(const Skeleton& s, double t);

// Flat little-endian record dump: uint64 count, then per event
// (float64 delta, uint8 coordinate, int8 sign).  The loader rebuilds
// times and walks; dim and eps are caller-supplied since the record
// stream intentionally stores only the events.
void dump_skeleton(const Skeleton& s, std::ostream& out);
Skeleton load_skeleton(std::istream& in, double eps, int dim);

}  // namespace skelstop
