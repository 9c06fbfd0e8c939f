#pragma once

#include <cstdint>
#include <vector>

#include "skelstop/functionals.hpp"
#include "skelstop/regression.hpp"
#include "skelstop/skeleton.hpp"
#include "skelstop/state_models.hpp"

namespace skelstop {

// Ensemble of simulated paths laid out per stage for regression.
// Scalars at stage n (0..stages) are stored at i*(stages+1)+n; the
// grid increments (delta, sign) of event n (1..stages) at
// i*stages+(n-1).  Frame scalars are floats (regression inputs);
// rewards stay double.
struct PathTable {
  std::size_t n_paths = 0;
  std::size_t stages = 0;
  double eps = 0.0;
  double horizon = 0.0;
  std::vector<float> t, x, runmax;
  std::vector<float> delta, sign;
  std::vector<double> z;
  double z0 = 0.0;  // stage-0 reward, identical across paths

  void resize(std::size_t paths, std::size_t stages_);
  // Fills slot i from one simulated path; thread-safe for distinct i.
  void set_path(std::size_t i, const Skeleton& s, const StatePath& xp, const RewardPath& zp);
  double z_at(std::size_t i, std::size_t n) const { return z[i * (stages + 1) + n]; }
};

// Writes the stage-j regression features of path i (see BasisSpec for
// the layout).  scratch must hold 2*window doubles.
void table_features(const PathTable& tb, const BasisSpec& b, const std::vector<double>& knots,
                    std::size_t i, std::size_t j, double* scratch, double* out);

struct DPResult {
  double value = 0.0;
  std::vector<ContinuationModel> models;  // stages entries, stage 0 is the mean rule
  std::vector<std::size_t> tau_index;     // fitted stopping stage per path
  std::vector<std::uint8_t> stop_flags;   // i*stages+j, 1 if the rule stops at stage j
  std::size_t ridge_count = 0;
};

// Regression-based backward induction.  Stage j in [1, stages) fits
// realized future payoffs on stage-j features; a path stops at j when
// its reward is >= the clipped prediction (ties stop).  Stage 0 uses
// the plain sample mean as continuation value; the returned value is
// max(z0, that mean).
DPResult backward_induction(const PathTable& tb, const BasisSpec& basis);

// First stage at which the fitted rule stops path i (stages if never).
std::size_t stopping_time(const PathTable& tb, std::size_t i,
                          const std::vector<ContinuationModel>& models);

struct LowerBound {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

// Mean reward of the fitted rule over an independent table; a genuine
// lower-bound estimate since the rule is fixed before these paths.
LowerBound lower_bound_estimate(const PathTable& tb,
                                const std::vector<ContinuationModel>& models);

// Exact Snell envelope on the deterministic-clock sign tree: every
// delta is frozen at eps^2 and all 2^stages sign paths are enumerated
// (dim 1, stages <= 14).  Nodes at level j are indexed by the integer
// whose bit b (< j) is 1 iff move b+1 was +1; children of (j, idx) are
// (j+1, idx) and (j+1, idx | 1<<j).
//
// residual[j][idx] = max{ (E[S_{j+1}|node] - S_j)/eps^2, Z_j - S_j },
// which the computed envelope drives to exactly 0 at every node.
struct ExactDPResult {
  double value = 0.0;
  std::vector<double> times;                      // stage times, 0..stages
  std::vector<std::vector<double>> reward;        // [j][idx], j = 0..stages
  std::vector<std::vector<double>> snell;         // same shape
  std::vector<std::vector<double>> continuation;  // j = 0..stages-1
  std::vector<std::vector<double>> residual;      // j = 0..stages-1
  double max_residual = 0.0;
};

ExactDPResult exact_tree_dp(double eps, int stages, const PathFunctional& drift,
                            const PathFunctional& vol, const PathFunctional& reward,
                            double horizon, double x0);

}  // namespace skelstop
