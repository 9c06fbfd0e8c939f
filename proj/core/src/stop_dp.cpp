#include "skelstop/stop_dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace skelstop {

void PathTable::resize(std::size_t paths, std::size_t stages_) {
  n_paths = paths;
  stages = stages_;
  t.assign(paths * (stages_ + 1), 0.0f);
  x.assign(paths * (stages_ + 1), 0.0f);
  runmax.assign(paths * (stages_ + 1), 0.0f);
  delta.assign(paths * stages_, 0.0f);
  sign.assign(paths * stages_, 0.0f);
  z.assign(paths * (stages_ + 1), 0.0);
}

void PathTable::set_path(std::size_t i, const Skeleton& s, const StatePath& xp,
                         const RewardPath& zp) {
  if (s.steps() != stages || xp.stages() != stages || zp.values.size() != stages + 1)
    throw std::invalid_argument("PathTable::set_path: stage count mismatch");
  const std::size_t row = i * (stages + 1);
  double mx = xp.values[0];
  t[row] = 0.0f;
  x[row] = static_cast<float>(xp.values[0]);
  runmax[row] = static_cast<float>(mx);
  z[row] = zp.values[0];
  for (std::size_t n = 1; n <= stages; ++n) {
    mx = std::max(mx, xp.values[n]);
    t[row + n] = static_cast<float>(xp.times[n]);
    x[row + n] = static_cast<float>(xp.values[n]);
    runmax[row + n] = static_cast<float>(mx);
    z[row + n] = zp.values[n];
    delta[i * stages + n - 1] = static_cast<float>(s.deltas[n - 1]);
    sign[i * stages + n - 1] = static_cast<float>(s.signs[n - 1]);
  }
}

void table_features(const PathTable& tb, const BasisSpec& b, const std::vector<double>& knots,
                    std::size_t i, std::size_t j, double* scratch, double* out) {
  const std::size_t row = i * (tb.stages + 1);
  double* rd = scratch;
  double* rs = scratch + b.window;
  for (int w = 0; w < b.window; ++w) {
    const std::ptrdiff_t stage = static_cast<std::ptrdiff_t>(j) - w;
    if (stage >= 1) {
      rd[w] = tb.delta[i * tb.stages + static_cast<std::size_t>(stage) - 1];
      rs[w] = tb.sign[i * tb.stages + static_cast<std::size_t>(stage) - 1];
    } else {
      rd[w] = 0.0;
      rs[w] = 0.0;
    }
  }
  build_features(b, knots, tb.t[row + j], tb.x[row + j], tb.runmax[row + j], rd, rs, out);
}

namespace {

std::vector<double> stage_knots(const PathTable& tb, const BasisSpec& b, std::size_t j) {
  if (b.family != BasisFamily::PiecewiseLinear) return {};
  float lo = std::numeric_limits<float>::infinity();
  float hi = -std::numeric_limits<float>::infinity();
  for (std::size_t i = 0; i < tb.n_paths; ++i) {
    const float v = tb.x[i * (tb.stages + 1) + j];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::vector<double> q(static_cast<std::size_t>(b.degree));
  for (int m = 1; m <= b.degree; ++m)
    q[static_cast<std::size_t>(m - 1)] =
        static_cast<double>(lo) +
        (static_cast<double>(hi) - static_cast<double>(lo)) * m / (b.degree + 1.0);
  return q;
}

}  // namespace

DPResult backward_induction(const PathTable& tb, const BasisSpec& basis) {
  if (tb.n_paths == 0 || tb.stages == 0)
    throw std::invalid_argument("backward_induction: empty table");
  const std::size_t N = tb.n_paths;
  const std::size_t e = tb.stages;
  const std::size_t p = feature_count(basis);

  DPResult res;
  res.models.resize(e);
  res.tau_index.assign(N, e);
  res.stop_flags.assign(N * e, 0);

  // y[i] = reward at the current stopping stage of path i.
  std::vector<double> y(N);
  for (std::size_t i = 0; i < N; ++i) y[i] = tb.z_at(i, e);

  std::vector<double> design;
  std::vector<double> targets;
  std::vector<std::size_t> rows;
  std::vector<double> scratch(std::max<std::size_t>(1, 2 * static_cast<std::size_t>(basis.window)));
  std::vector<double> phi(p);

  for (std::size_t j = e; j-- > 1;) {
    std::vector<double> knots = stage_knots(tb, basis, j);

    rows.clear();
    if (basis.itm_filter) {
      for (std::size_t i = 0; i < N; ++i)
        if (tb.z_at(i, j) > 0.0) rows.push_back(i);
      // Too few in-the-money paths to identify the fit: use all rows.
      if (rows.size() < std::max<std::size_t>(2 * p, 16)) rows.clear();
    }
    const bool subset = !rows.empty();
    const std::size_t n_fit = subset ? rows.size() : N;

    design.assign(n_fit * p, 0.0);
    targets.resize(n_fit);
    for (std::size_t r = 0; r < n_fit; ++r) {
      const std::size_t i = subset ? rows[r] : r;
      table_features(tb, basis, knots, i, j, scratch.data(), design.data() + r * p);
      targets[r] = y[i];
    }
    ContinuationModel model =
        fit_continuation(design, targets, n_fit, basis, static_cast<int>(j), std::move(knots));
    if (model.ridged) ++res.ridge_count;

    for (std::size_t i = 0; i < N; ++i) {
      const double zij = tb.z_at(i, j);
      if (basis.itm_filter && !(zij > 0.0)) continue;
      table_features(tb, basis, model.knots, i, j, scratch.data(), phi.data());
      const double cont = model.predict(phi.data());
      if (zij >= cont) {
        res.tau_index[i] = j;
        y[i] = zij;
        res.stop_flags[i * e + j] = 1;
      }
    }
    res.models[j] = std::move(model);
  }

  // Stage 0: continuation is the plain sample mean of the current payoffs.
  double mean = 0.0;
  for (std::size_t i = 0; i < N; ++i) mean += y[i];
  mean /= static_cast<double>(N);

  ContinuationModel m0;
  m0.stage = 0;
  m0.basis = BasisSpec{BasisFamily::Constant, 1, 0, basis.clip_bound, false};
  m0.coeffs = {mean};
  res.models[0] = std::move(m0);

  if (tb.z0 >= mean) {
    res.value = tb.z0;
    for (std::size_t i = 0; i < N; ++i) {
      res.tau_index[i] = 0;
      res.stop_flags[i * e] = 1;
    }
  } else {
    res.value = mean;
  }
  return res;
}

std::size_t stopping_time(const PathTable& tb, std::size_t i,
                          const std::vector<ContinuationModel>& models) {
  if (models.size() != tb.stages)
    throw std::invalid_argument("stopping_time: need one model per stage");
  const double one = 1.0;
  if (tb.z0 >= models[0].predict(&one)) return 0;
  std::vector<double> scratch;
  std::vector<double> phi;
  for (std::size_t j = 1; j < tb.stages; ++j) {
    const auto& m = models[j];
    const double zij = tb.z_at(i, j);
    if (m.basis.itm_filter && !(zij > 0.0)) continue;
    scratch.resize(std::max<std::size_t>(1, 2 * static_cast<std::size_t>(m.basis.window)));
    phi.resize(feature_count(m.basis));
    table_features(tb, m.basis, m.knots, i, j, scratch.data(), phi.data());
    if (zij >= m.predict(phi.data())) return j;
  }
  return tb.stages;
}

LowerBound lower_bound_estimate(const PathTable& tb,
                                const std::vector<ContinuationModel>& models) {
  LowerBound lb;
  lb.n = tb.n_paths;
  if (tb.n_paths == 0) return lb;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < tb.n_paths; ++i) {
    const std::size_t j = stopping_time(tb, i, models);
    const double v = tb.z_at(i, j);
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(tb.n_paths);
  lb.mean = sum / n;
  const double var = std::max(0.0, sum2 / n - lb.mean * lb.mean);
  lb.se = std::sqrt(var / n);
  return lb;
}

ExactDPResult exact_tree_dp(double eps, int stages, const PathFunctional& drift,
                            const PathFunctional& vol, const PathFunctional& reward,
                            double horizon, double x0) {
  if (!(eps > 0.0)) throw std::domain_error("exact_tree_dp: eps must be > 0");
  if (stages < 1 || stages > 14)
    throw std::domain_error("exact_tree_dp: stages must lie in [1, 14]");
  if (!(horizon > 0.0)) throw std::domain_error("exact_tree_dp: horizon must be > 0");

  const int e = stages;
  ExactDPResult r;
  r.times.resize(static_cast<std::size_t>(e) + 1);
  for (int n = 0; n <= e; ++n) r.times[static_cast<std::size_t>(n)] = eps * eps * n;
  // Last in-horizon stage; rewards are frozen past it.
  int jstar = 0;
  for (int n = e; n >= 0; --n)
    if (r.times[static_cast<std::size_t>(n)] <= horizon) { jstar = n; break; }

  r.reward.resize(static_cast<std::size_t>(e) + 1);
  for (int j = 0; j <= e; ++j)
    r.reward[static_cast<std::size_t>(j)].assign(std::size_t{1} << j, 0.0);

  // DFS over sign paths, evaluating state and reward incrementally.
  std::vector<double> times(static_cast<std::size_t>(e) + 1, 0.0);
  std::vector<double> values(static_cast<std::size_t>(e) + 1, 0.0);
  values[0] = x0;
  {
    const PathView root(times.data(), values.data(), 0);
    r.reward[0][0] = reward(0.0, root);
  }
  struct Frame { int j; std::size_t idx; int sign; };
  std::vector<Frame> stack;
  std::vector<double> frozen(static_cast<std::size_t>(e) + 1, 0.0);
  frozen[0] = r.reward[0][0];
  stack.push_back({1, 0, -1});
  stack.push_back({1, 1, +1});
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const int j = f.j;
    const std::size_t n = static_cast<std::size_t>(j);
    const double t_prev = r.times[n - 1];
    const PathView sofar(times.data(), values.data(), n - 1);
    const double a = drift(t_prev, sofar);
    const double b = vol(t_prev, sofar);
    times[n] = r.times[n];
    values[n] = values[n - 1] + a * eps * eps + b * (f.sign > 0 ? eps : -eps);
    double zn;
    if (j <= jstar) {
      const PathView now(times.data(), values.data(), n);
      zn = reward(times[n], now);
    } else {
      zn = frozen[n - 1];
    }
    frozen[n] = zn;
    r.reward[n][f.idx] = zn;
    if (j < e) {
      stack.push_back({j + 1, f.idx, -1});
      stack.push_back({j + 1, f.idx | (std::size_t{1} << j), +1});
    }
  }

  r.snell.resize(static_cast<std::size_t>(e) + 1);
  r.snell[static_cast<std::size_t>(e)] = r.reward[static_cast<std::size_t>(e)];
  r.continuation.resize(static_cast<std::size_t>(e));
  r.residual.resize(static_cast<std::size_t>(e));
  const double inv_eps2 = 1.0 / (eps * eps);
  for (int j = e - 1; j >= 0; --j) {
    const std::size_t nj = std::size_t{1} << j;
    r.snell[static_cast<std::size_t>(j)].assign(nj, 0.0);
    r.continuation[static_cast<std::size_t>(j)].assign(nj, 0.0);
    r.residual[static_cast<std::size_t>(j)].assign(nj, 0.0);
    for (std::size_t idx = 0; idx < nj; ++idx) {
      const double s_dn = r.snell[static_cast<std::size_t>(j) + 1][idx];
      const double s_up = r.snell[static_cast<std::size_t>(j) + 1][idx | (std::size_t{1} << j)];
      const double cont = 0.5 * (s_dn + s_up);
      const double zn = r.reward[static_cast<std::size_t>(j)][idx];
      const double s = std::max(zn, cont);
      r.snell[static_cast<std::size_t>(j)][idx] = s;
      r.continuation[static_cast<std::size_t>(j)][idx] = cont;
      const double resid = std::max((cont - s) * inv_eps2, zn - s);
      r.residual[static_cast<std::size_t>(j)][idx] = resid;
      r.max_residual = std::max(r.max_residual, std::abs(resid));
    }
  }
  r.value = r.snell[0][0];
  return r;
}

}  // namespace skelstop
