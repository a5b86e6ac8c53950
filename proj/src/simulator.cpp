#include "prophet/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "prophet/errors.hpp"
#include "prophet/numeric.hpp"

namespace prophet {

namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();
constexpr double kZ = 1.96;

}  // namespace

ArrivalSampler::ArrivalSampler(const BuiltScheme& scheme) : s_(&scheme) {
  for (std::size_t k = 0; k < scheme.laws.size(); ++k) {
    double total = scheme.laws[k].total_mass;
    double mass = std::min(total, 1.0);
    mass_.push_back(mass);
    atom_.push_back(1.0 - mass);
    const auto& tau = scheme.table.tau_g[k];
    min_tau_.push_back(*std::min_element(tau.begin(), tau.end()));
  }
}

std::pair<double, double> ArrivalSampler::position(std::size_t k, double u) const {
  if (u < atom_[k] || mass_[k] <= 0) return {kNever, kNever};
  const auto& cum = s_->laws[k].cumulative;
  const auto& tau = s_->table.tau_g[k];
  double target = (u - atom_[k]) / mass_[k] * s_->laws[k].total_mass;
  auto it = std::upper_bound(cum.begin(), cum.end(), target);
  std::size_t r = std::size_t(it - cum.begin());
  if (r == 0) r = 1;
  if (r >= cum.size()) r = cum.size() - 1;
  double w = cum[r] - cum[r - 1];
  double frac = w > 0 ? std::clamp((target - cum[r - 1]) / w, 0.0, 1.0) : 1.0;
  double pos = double(r - 1) + frac;
  double thr = tau[r - 1] + frac * (tau[r] - tau[r - 1]);
  return {pos, thr};
}

double ArrivalSampler::time_at(double pos) const {
  if (!std::isfinite(pos)) return 1.0;
  const auto& t = s_->table.t;
  std::size_t i = std::min(std::size_t(pos), t.size() - 1);
  if (i + 1 >= t.size()) return t.back();
  double f = pos - double(i);
  return t[i] + f * (t[i + 1] - t[i]);
}

GameOutcome play(const BuiltScheme& scheme, const std::vector<double>& values,
                 const std::vector<double>& positions, const std::vector<double>& thresholds) {
  (void)scheme;
  GameOutcome out;
  double best_pos = kNever;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.max_value = std::max(out.max_value, values[i]);
    if (!std::isfinite(positions[i])) continue;  // arrives at t = 1: rejected
    if (values[i] > thresholds[i] && positions[i] < best_pos) {
      best_pos = positions[i];
      out.accepted_item = i;
    }
  }
  if (out.accepted_item) out.reward = values[*out.accepted_item];
  return out;
}

namespace {

struct ItemView {
  std::size_t group;
  const ValueDistribution* dist;
};

std::vector<ItemView> item_views(const BuiltScheme& s) {
  std::vector<ItemView> v;
  for (std::size_t i = 0; i < s.inst.num_items(); ++i) {
    std::size_t g = s.inst.group_of(i);
    v.push_back({g, &s.inst.group(g).dist});
  }
  return v;
}

GameOutcome run_game_impl(const std::vector<ItemView>& items, const ArrivalSampler& sampler,
                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  GameOutcome out;
  double best_pos = kNever;
  for (std::size_t i = 0; i < items.size(); ++i) {
    double v = items[i].dist->quantile(U(rng));
    double u = U(rng);
    out.max_value = std::max(out.max_value, v);
    if (!(v > sampler.min_threshold(items[i].group))) continue;
    auto [pos, thr] = sampler.position(items[i].group, u);
    if (!std::isfinite(pos)) continue;
    if (v > thr && pos < best_pos) {
      best_pos = pos;
      out.accepted_item = i;
      out.reward = v;
    }
  }
  return out;
}

struct ChunkStats {
  std::vector<std::uint64_t> alg, mx;
  std::vector<std::uint64_t> accept;
  std::uint64_t none = 0;
  double s_alg = 0, s_alg2 = 0, s_max = 0, s_max2 = 0, s_gap = 0, s_gap2 = 0;
};

}  // namespace

GameOutcome run_game(const BuiltScheme& scheme, const ArrivalSampler& sampler, std::mt19937_64& rng) {
  return run_game_impl(item_views(scheme), sampler, rng);
}

GameOutcome run_game(const BuiltScheme& scheme, std::mt19937_64& rng) {
  ArrivalSampler sampler(scheme);
  return run_game(scheme, sampler, rng);
}

std::vector<double> default_x_grid(const Instance& inst, std::size_t points) {
  std::vector<double> xs;
  double lo = inst.lower(), hi = inst.upper();
  for (std::size_t k = 1; k <= points; ++k) xs.push_back(lo + (hi - lo) * double(k) / double(points + 1));
  return xs;
}

SimulationReport estimate_asd(const BuiltScheme& scheme, const SimulationConfig& cfg) {
  if (cfg.trials < 1) throw InvalidInput("trials must be >= 1");
  if (cfg.chunk < 1) throw InvalidInput("chunk must be >= 1");
  std::vector<double> xs = cfg.x_grid.empty() ? default_x_grid(scheme.inst) : cfg.x_grid;
  if (!std::is_sorted(xs.begin(), xs.end())) throw InvalidInput("x_grid must be sorted");
  const double gamma = scheme.params.gamma;
  const std::size_t n = scheme.inst.num_items();
  ArrivalSampler sampler(scheme);
  auto items = item_views(scheme);

  std::uint64_t nchunks = (cfg.trials + cfg.chunk - 1) / cfg.chunk;
  std::vector<ChunkStats> chunks(nchunks);
  auto work = [&](unsigned w, unsigned W) {
    for (std::uint64_t c = w; c < nchunks; c += W) {
      ChunkStats& cs = chunks[c];
      cs.alg.assign(xs.size(), 0);
      cs.mx.assign(xs.size(), 0);
      cs.accept.assign(n, 0);
      std::mt19937_64 rng(stream_seed(cfg.seed, c));
      std::uint64_t m = std::min(cfg.chunk, cfg.trials - c * cfg.chunk);
      for (std::uint64_t k = 0; k < m; ++k) {
        GameOutcome g = run_game_impl(items, sampler, rng);
        if (g.accepted_item) {
          cs.accept[*g.accepted_item]++;
        } else {
          cs.none++;
        }
        for (std::size_t j = 0; j < xs.size(); ++j) {
          if (g.reward > xs[j]) cs.alg[j]++;
          if (g.max_value > xs[j]) cs.mx[j]++;
        }
        double gap = g.reward - gamma * g.max_value;
        cs.s_alg += g.reward;
        cs.s_alg2 += g.reward * g.reward;
        cs.s_max += g.max_value;
        cs.s_max2 += g.max_value * g.max_value;
        cs.s_gap += gap;
        cs.s_gap2 += gap * gap;
      }
    }
  };
  unsigned W = std::max(1u, cfg.workers);
  if (W == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> th;
    for (unsigned w = 0; w < W; ++w) th.emplace_back(work, w, W);
    for (auto& t : th) t.join();
  }

  // Reduce in chunk order so results do not depend on the worker count.
  ChunkStats tot;
  tot.alg.assign(xs.size(), 0);
  tot.mx.assign(xs.size(), 0);
  tot.accept.assign(n, 0);
  for (const auto& cs : chunks) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      tot.alg[j] += cs.alg[j];
      tot.mx[j] += cs.mx[j];
    }
    for (std::size_t i = 0; i < n; ++i) tot.accept[i] += cs.accept[i];
    tot.none += cs.none;
    tot.s_alg += cs.s_alg;
    tot.s_alg2 += cs.s_alg2;
    tot.s_max += cs.s_max;
    tot.s_max2 += cs.s_max2;
    tot.s_gap += cs.s_gap;
    tot.s_gap2 += cs.s_gap2;
  }

  SimulationReport rep;
  const double N = double(cfg.trials);
  auto mean_ci = [&](double s, double s2, double& mean, double& ci) {
    mean = s / N;
    double var = std::max(0.0, s2 / N - mean * mean);
    ci = kZ * std::sqrt(var / N);
  };
  auto prop_ci = [&](double p) { return kZ * std::sqrt(std::max(0.0, p * (1 - p)) / N); };
  for (std::size_t j = 0; j < xs.size(); ++j) {
    ProbeStats ps;
    ps.x = xs[j];
    ps.alg_count = tot.alg[j];
    ps.max_count = tot.mx[j];
    ps.p_alg = double(ps.alg_count) / N;
    ps.p_max = double(ps.max_count) / N;
    ps.ci_alg = prop_ci(ps.p_alg);
    ps.ci_max = prop_ci(ps.p_max);
    if (ps.max_count > 0) ps.ratio = ps.p_alg / ps.p_max;
    // D = 1{ALG > x} - gamma 1{max > x}; ALG > x implies max > x.
    ps.diff = ps.p_alg - gamma * ps.p_max;
    double ed2 = (1 - gamma) * (1 - gamma) * ps.p_alg + gamma * gamma * (ps.p_max - ps.p_alg);
    ps.ci_diff = kZ * std::sqrt(std::max(0.0, ed2 - ps.diff * ps.diff) / N);
    rep.probes.push_back(ps);
  }
  mean_ci(tot.s_alg, tot.s_alg2, rep.e_alg, rep.ci_alg);
  mean_ci(tot.s_max, tot.s_max2, rep.e_max, rep.ci_max);
  mean_ci(tot.s_gap, tot.s_gap2, rep.e_gap, rep.ci_gap);
  rep.accept_counts = tot.accept;
  for (auto c : tot.accept) {
    double p = double(c) / N;
    rep.accept_prob.push_back(p);
    rep.accept_ci.push_back(prop_ci(p));
  }
  rep.no_accept = tot.none;
  rep.seed = cfg.seed;
  rep.trials = cfg.trials;
  rep.workers = W;
  rep.scheme_id = scheme.id;
  rep.gamma = gamma;
  return rep;
}

}  // namespace prophet
