#include "skelstop/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "skelstop/exit_time.hpp"

namespace skelstop {

HistoryVector history_prefix(const Skeleton& s, int stage) {
  if (stage < 0 || static_cast<std::size_t>(stage) > s.steps())
    throw std::domain_error("history_prefix: stage outside [0, steps]");
  HistoryVector h;
  h.stage = stage;
  h.deltas.assign(s.deltas.begin(), s.deltas.begin() + stage);
  h.coords.assign(s.coords.begin(), s.coords.begin() + stage);
  h.signs.assign(s.signs.begin(), s.signs.begin() + stage);
  return h;
}

std::size_t num_steps(double eps, double horizon, int dim) {
  if (!(eps > 0.0)) throw std::domain_error("num_steps: eps must be > 0");
  if (!(horizon > 0.0)) throw std::domain_error("num_steps: horizon must be > 0");
  if (dim < 1) throw std::domain_error("num_steps: dim must be >= 1");
  const double ratio = horizon / (eps * eps);
  // Snap values that are integral up to roundoff before the ceiling.
  const double snapped = std::ceil(ratio - 1e-9);
  return static_cast<std::size_t>(dim) * static_cast<std::size_t>(snapped);
}

std::pair<double, int> sample_increment(double eps, RngStream& rng) {
  if (!(eps > 0.0)) throw std::domain_error("sample_increment: eps must be > 0");
  const double tau = sample_unit_exit_time(rng);
  const int sign = rng.next_sign();
  return {eps * eps * tau, sign};
}

Skeleton build_skeleton(const SkeletonConfig& cfg, RngStream& rng) {
  if (!(cfg.eps > 0.0)) throw std::domain_error("build_skeleton: eps must be > 0");
  if (cfg.dim < 1) throw std::domain_error("build_skeleton: dim must be >= 1");

  Skeleton s;
  s.eps = cfg.eps;
  s.dim = cfg.dim;
  s.times.reserve(cfg.steps);
  s.deltas.reserve(cfg.steps);
  s.coords.reserve(cfg.steps);
  s.signs.reserve(cfg.steps);
  s.walks.assign(cfg.dim, std::vector<double>(cfg.steps + 1, 0.0));

  // Next pending event time per coordinate; level values in units of eps.
  std::vector<double> next_time(cfg.dim);
  std::vector<int> pending_sign(cfg.dim);
  std::vector<long long> level(cfg.dim, 0);
  for (int j = 0; j < cfg.dim; ++j) {
    auto [d, sg] = sample_increment(cfg.eps, rng);
    next_time[j] = d;
    pending_sign[j] = sg;
  }

  double prev_time = 0.0;
  for (std::size_t n = 0; n < cfg.steps; ++n) {
    int j = 0;
    for (int c = 1; c < cfg.dim; ++c)
      if (next_time[c] < next_time[j]) j = c;
    const double t = next_time[j];
    level[j] += pending_sign[j];

    s.times.push_back(t);
    s.deltas.push_back(t - prev_time);
    s.coords.push_back(static_cast<std::uint8_t>(j));
    s.signs.push_back(static_cast<std::int8_t>(pending_sign[j]));
    for (int c = 0; c < cfg.dim; ++c)
      s.walks[c][n + 1] = cfg.eps * static_cast<double>(level[c]);
    prev_time = t;

    auto [d, sg] = sample_increment(cfg.eps, rng);
    next_time[j] = t + d;
    pending_sign[j] = sg;
  }
  return s;
}

Skeleton deterministic_clock_skeleton(double eps, const std::vector<std::int8_t>& signs,
                                      const std::vector<std::uint8_t>& coords) {
  if (!(eps > 0.0)) throw std::domain_error("deterministic_clock_skeleton: eps must be > 0");
  if (!coords.empty() && coords.size() != signs.size())
    throw std::invalid_argument("deterministic_clock_skeleton: coords/signs size mismatch");
  int dim = 1;
  for (const auto c : coords) dim = std::max(dim, static_cast<int>(c) + 1);

  Skeleton s;
  s.eps = eps;
  s.dim = dim;
  const std::size_t n = signs.size();
  s.walks.assign(dim, std::vector<double>(n + 1, 0.0));
  std::vector<long long> level(dim, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const int j = coords.empty() ? 0 : coords[i];
    if (signs[i] != 1 && signs[i] != -1)
      throw std::invalid_argument("deterministic_clock_skeleton: signs must be +-1");
    level[j] += signs[i];
    s.times.push_back(eps * eps * static_cast<double>(i + 1));
    s.deltas.push_back(eps * eps);
    s.coords.push_back(static_cast<std::uint8_t>(j));
    s.signs.push_back(signs[i]);
    for (int c = 0; c < dim; ++c)
      s.walks[c][i + 1] = eps * static_cast<double>(level[c]);
  }
  return s;
}

GridPosition grid_query(const Skeleton& s, double t) {
  GridPosition g;
  const auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
  g.count = static_cast<std::size_t>(it - s.times.begin());
  g.last_time = g.count == 0 ? 0.0 : s.times[g.count - 1];
  return g;
}

namespace {

void put_u64_le(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64_le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void dump_skeleton(const Skeleton& s, std::ostream& out) {
  put_u64_le(out, static_cast<std::uint64_t>(s.steps()));
  for (std::size_t i = 0; i < s.steps(); ++i) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(double));
    std::memcpy(&bits, &s.deltas[i], 8);
    put_u64_le(out, bits);
    out.put(static_cast<char>(s.coords[i]));
    out.put(static_cast<char>(s.signs[i]));
  }
}

Skeleton load_skeleton(std::istream& in, double eps, int dim) {
  if (!(eps > 0.0)) throw std::domain_error("load_skeleton: eps must be > 0");
  if (dim < 1) throw std::domain_error("load_skeleton: dim must be >= 1");
  const std::uint64_t count = get_u64_le(in);
  Skeleton s;
  s.eps = eps;
  s.dim = dim;
  s.walks.assign(dim, std::vector<double>(count + 1, 0.0));
  std::vector<long long> level(dim, 0);
  double t = 0.0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t bits = get_u64_le(in);
    double delta;
    std::memcpy(&delta, &bits, 8);
    const int coord = static_cast<unsigned char>(in.get());
    const int sign = static_cast<std::int8_t>(static_cast<char>(in.get()));
    if (!in) throw std::runtime_error("load_skeleton: truncated record stream");
    if (!(delta > 0.0)) throw std::runtime_error("load_skeleton: nonpositive delta");
    if (coord >= dim) throw std::runtime_error("load_skeleton: coordinate out of range");
    if (sign != 1 && sign != -1) throw std::runtime_error("load_skeleton: bad sign byte");
    t += delta;
    level[coord] += sign;
    s.times.push_back(t);
    s.deltas.push_back(delta);
    s.coords.push_back(static_cast<std::uint8_t>(coord));
    s.signs.push_back(static_cast<std::int8_t>(sign));
    for (int c = 0; c < dim; ++c)
      s.walks[c][i + 1] = eps * static_cast<double>(level[c]);
  }
  return s;
}

}  // namespace skelstop
