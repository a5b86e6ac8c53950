#include "prophet/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "prophet/errors.hpp"
#include "prophet/numeric.hpp"

namespace prophet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidInput(msg);
}

}  // namespace

std::string to_string(DistKind k) {
  switch (k) {
    case DistKind::Uniform:
      return "uniform";
    case DistKind::FiniteSupport:
      return "finite";
    case DistKind::PiecewiseLinearCdf:
      return "piecewise_linear";
    case DistKind::Power:
      return "power";
  }
  return "unknown";
}

ValueDistribution ValueDistribution::uniform(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "uniform requires lo < hi");
  require(lo >= 0, "values must be non-negative");
  ValueDistribution d;
  d.kind_ = DistKind::Uniform;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

ValueDistribution ValueDistribution::power(double lo, double hi, double exponent) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "power requires lo < hi");
  require(lo >= 0, "values must be non-negative");
  require(exponent > 0 && std::isfinite(exponent), "power requires exponent > 0");
  ValueDistribution d;
  d.kind_ = DistKind::Power;
  d.lo_ = lo;
  d.hi_ = hi;
  d.exponent_ = exponent;
  return d;
}

ValueDistribution ValueDistribution::finite(std::vector<std::pair<double, double>> points) {
  require(!points.empty(), "finite support needs at least one point");
  std::map<double, double> merged;
  double total = 0;
  for (auto [v, p] : points) {
    require(std::isfinite(v) && v >= 0, "values must be finite and non-negative");
    require(p >= 0 && std::isfinite(p), "probabilities must be non-negative");
    merged[v] += p;
    total += p;
  }
  require(std::fabs(total - 1.0) <= 1e-12, "probabilities must sum to 1");
  ValueDistribution d;
  d.kind_ = DistKind::FiniteSupport;
  for (auto [v, p] : merged) {
    if (p > 0) d.pts_.emplace_back(v, p);
  }
  require(!d.pts_.empty(), "finite support has no positive mass");
  d.lo_ = d.pts_.front().first;
  d.hi_ = d.pts_.back().first;
  return d;
}

ValueDistribution ValueDistribution::piecewise_linear(std::vector<std::pair<double, double>> knots) {
  require(knots.size() >= 2, "piecewise linear cdf needs at least two knots");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    auto [v, c] = knots[i];
    require(std::isfinite(v) && v >= 0, "knot values must be finite and non-negative");
    require(c >= 0 && c <= 1, "knot cdf must lie in [0,1]");
    if (i > 0) {
      require(v >= knots[i - 1].first && c >= knots[i - 1].second, "knots must be non-decreasing");
    }
  }
  require(std::fabs(knots.back().second - 1.0) <= 1e-12, "cdf must end at 1");
  knots.back().second = 1.0;
  require(knots.back().first > knots.front().first, "knots must span a positive interval");
  ValueDistribution d;
  d.kind_ = DistKind::PiecewiseLinearCdf;
  d.pts_ = std::move(knots);
  d.lo_ = d.pts_.front().first;
  d.hi_ = d.pts_.back().first;
  return d;
}

bool ValueDistribution::continuous() const {
  switch (kind_) {
    case DistKind::Uniform:
    case DistKind::Power:
      return true;
    case DistKind::FiniteSupport:
      return false;
    case DistKind::PiecewiseLinearCdf:
      if (pts_.front().second > 0) return false;
      for (std::size_t i = 1; i < pts_.size(); ++i) {
        if (pts_[i].first == pts_[i - 1].first && pts_[i].second > pts_[i - 1].second) return false;
      }
      return true;
  }
  return true;
}

double ValueDistribution::cdf(double x) const {
  switch (kind_) {
    case DistKind::Uniform:
      if (x <= lo_) return 0.0;
      if (x >= hi_) return 1.0;
      return (x - lo_) / (hi_ - lo_);
    case DistKind::Power:
      if (x <= lo_) return 0.0;
      if (x >= hi_) return 1.0;
      return std::exp(exponent_ * std::log((x - lo_) / (hi_ - lo_)));
    case DistKind::FiniteSupport: {
      double s = 0;
      for (auto [v, p] : pts_) {
        if (v <= x) s += p;
      }
      return std::min(1.0, s);
    }
    case DistKind::PiecewiseLinearCdf: {
      if (x < pts_.front().first) return 0.0;
      if (x >= pts_.back().first) return 1.0;
      // last knot with value <= x
      auto it = std::upper_bound(pts_.begin(), pts_.end(), x,
                                 [](double a, const std::pair<double, double>& k) { return a < k.first; });
      auto right = it;
      auto left = std::prev(it);
      double w = right->first - left->first;
      if (w <= 0) return left->second;
      return left->second + (right->second - left->second) * (x - left->first) / w;
    }
  }
  return 0.0;
}

double ValueDistribution::survival(double x) const {
  switch (kind_) {
    case DistKind::Uniform:
      if (x <= lo_) return 1.0;
      if (x >= hi_) return 0.0;
      return (hi_ - x) / (hi_ - lo_);
    case DistKind::Power:
      if (x <= lo_) return 1.0;
      if (x >= hi_) return 0.0;
      return -std::expm1(exponent_ * std::log((x - lo_) / (hi_ - lo_)));
    case DistKind::FiniteSupport: {
      double s = 0;
      for (auto [v, p] : pts_) {
        if (v > x) s += p;
      }
      return std::min(1.0, s);
    }
    case DistKind::PiecewiseLinearCdf: {
      if (x < pts_.front().first) return 1.0;
      if (x >= pts_.back().first) return 0.0;
      auto it = std::upper_bound(pts_.begin(), pts_.end(), x,
                                 [](double a, const std::pair<double, double>& k) { return a < k.first; });
      auto right = it;
      auto left = std::prev(it);
      double w = right->first - left->first;
      double sl = 1.0 - left->second, sr = 1.0 - right->second;
      if (w <= 0) return sl;
      return sl + (sr - sl) * (x - left->first) / w;
    }
  }
  return 0.0;
}

double ValueDistribution::log_cdf(double x) const {
  if (kind_ == DistKind::Power) {
    if (x <= lo_) return -kInf;
    if (x >= hi_) return 0.0;
    return exponent_ * std::log((x - lo_) / (hi_ - lo_));
  }
  double s = survival(x);
  if (s >= 1.0) return -kInf;
  return std::log1p(-s);
}

double ValueDistribution::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  switch (kind_) {
    case DistKind::Uniform:
      return lo_ + u * (hi_ - lo_);
    case DistKind::Power:
      if (u <= 0) return lo_;
      return lo_ + (hi_ - lo_) * std::exp(std::log(u) / exponent_);
    case DistKind::FiniteSupport: {
      double c = 0;
      for (auto [v, p] : pts_) {
        c += p;
        if (u <= c) return v;
      }
      return pts_.back().first;
    }
    case DistKind::PiecewiseLinearCdf: {
      if (u <= pts_.front().second) return pts_.front().first;
      for (std::size_t i = 1; i < pts_.size(); ++i) {
        if (u <= pts_[i].second) {
          double c0 = pts_[i - 1].second, c1 = pts_[i].second;
          if (c1 <= c0) return pts_[i].first;
          return pts_[i - 1].first + (pts_[i].first - pts_[i - 1].first) * (u - c0) / (c1 - c0);
        }
      }
      return pts_.back().first;
    }
  }
  return lo_;
}

double ValueDistribution::mean() const {
  switch (kind_) {
    case DistKind::Uniform:
      return 0.5 * (lo_ + hi_);
    case DistKind::Power:
      return lo_ + (hi_ - lo_) * exponent_ / (exponent_ + 1.0);
    case DistKind::FiniteSupport: {
      double m = 0;
      for (auto [v, p] : pts_) m += v * p;
      return m;
    }
    case DistKind::PiecewiseLinearCdf: {
      double m = pts_.front().first * pts_.front().second;
      for (std::size_t i = 1; i < pts_.size(); ++i) {
        double dc = pts_[i].second - pts_[i - 1].second;
        m += dc * 0.5 * (pts_[i].first + pts_[i - 1].first);
      }
      return m;
    }
  }
  return 0.0;
}

ValueDistribution ValueDistribution::smoothed(double width) const {
  if (continuous() || width <= 0) return *this;
  // Atoms and the continuous remainder.
  std::vector<std::pair<double, double>> atoms;
  std::vector<std::pair<double, double>> cont;  // continuous part as (value, cdf) knots
  if (kind_ == DistKind::FiniteSupport) {
    atoms = pts_;
  } else {
    double jumped = 0;
    if (pts_.front().second > 0) {
      atoms.emplace_back(pts_.front().first, pts_.front().second);
      jumped += pts_.front().second;
    }
    cont.emplace_back(pts_.front().first, 0.0);
    for (std::size_t i = 1; i < pts_.size(); ++i) {
      if (pts_[i].first == pts_[i - 1].first) {
        double d = pts_[i].second - pts_[i - 1].second;
        if (d > 0) {
          atoms.emplace_back(pts_[i].first, d);
          jumped += d;
        }
      } else {
        cont.emplace_back(pts_[i].first, pts_[i].second - jumped);
      }
    }
  }
  auto cont_cdf = [&](double x) {
    if (cont.empty() || x <= cont.front().first) return 0.0;
    if (x >= cont.back().first) return cont.back().second;
    for (std::size_t i = 1; i < cont.size(); ++i) {
      if (x <= cont[i].first) {
        double w = cont[i].first - cont[i - 1].first;
        return cont[i - 1].second + (cont[i].second - cont[i - 1].second) * (x - cont[i - 1].first) / w;
      }
    }
    return cont.back().second;
  };
  std::set<double> breaks;
  for (auto [v, c] : cont) breaks.insert(v);
  for (auto [v, p] : atoms) {
    breaks.insert(v);
    breaks.insert(v + width);
  }
  std::vector<std::pair<double, double>> knots;
  for (double x : breaks) {
    double c = cont_cdf(x);
    for (auto [v, p] : atoms) {
      if (x >= v + width) c += p;
      else if (x > v) c += p * std::clamp((x - v) / width, 0.0, 1.0);
    }
    knots.emplace_back(x, std::min(1.0, c));
  }
  knots.back().second = 1.0;
  return piecewise_linear(std::move(knots));
}

double Instance::default_smoothing(const std::vector<ItemGroup>& groups) {
  double lo = kInf, hi = -kInf;
  for (const auto& g : groups) {
    lo = std::min(lo, g.dist.lower());
    hi = std::max(hi, g.dist.upper());
  }
  double span = hi - lo;
  return 1e-6 * (span > 0 ? span : 1.0);
}

Instance::Instance(std::vector<ItemGroup> groups, double smoothing_width) {
  std::size_t n = 0;
  for (const auto& g : groups) {
    require(g.count >= 1, "item group count must be >= 1");
    n += g.count;
  }
  require(n >= 2, "an instance needs at least two items");
  smoothing_width_ = smoothing_width < 0 ? default_smoothing(groups) : smoothing_width;
  lo_ = kInf;
  hi_ = -kInf;
  max_lo_ = -kInf;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    auto& g = groups[gi];
    g.dist = g.dist.smoothed(smoothing_width_);
    first_item_.push_back(group_of_.size());
    for (std::size_t k = 0; k < g.count; ++k) group_of_.push_back(gi);
    lo_ = std::min(lo_, g.dist.lower());
    hi_ = std::max(hi_, g.dist.upper());
    max_lo_ = std::max(max_lo_, g.dist.lower());
  }
  groups_ = std::move(groups);
}

Instance Instance::from_items(const std::vector<ValueDistribution>& items, double smoothing_width) {
  std::vector<ItemGroup> g;
  for (const auto& d : items) g.push_back({d, 1});
  return Instance(std::move(g), smoothing_width);
}

double Instance::log_max_cdf(double x, std::optional<std::size_t> skip) const {
  double s = 0;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    double m = double(groups_[g].count) - ((skip && *skip == g) ? 1.0 : 0.0);
    if (m <= 0) continue;
    double l = groups_[g].dist.log_cdf(x);
    if (l == -kInf) return -kInf;
    s += m * l;
  }
  return s;
}

double Instance::max_exceed_prob(double x, std::optional<std::size_t> exclude) const {
  std::optional<std::size_t> skip;
  if (exclude) skip = group_of(*exclude);
  return std::clamp(-std::expm1(log_max_cdf(x, skip)), 0.0, 1.0);
}

double Instance::others_exceed_prob(std::size_t g, double x) const {
  return std::clamp(-std::expm1(log_max_cdf(x, g)), 0.0, 1.0);
}

double Instance::threshold_tau(double t, double tol_value, double tol_prob) const {
  if (!(t >= 0 && t <= 1)) throw DomainError("threshold_tau: t must lie in [0,1]");
  if (t <= 0) return hi_;
  if (t >= 1) return lo_;
  // invariant: S(a) > t >= S(b)
  double a = lo_, b = hi_;
  if (max_exceed_prob(a) <= t) return a;
  // Bisect to adjacent doubles so that a genuine jump can be told apart
  // from a steep continuous stretch; the result is within tol_value anyway.
  (void)tol_value;
  for (;;) {
    double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    if (max_exceed_prob(m) > t) {
      a = m;
    } else {
      b = m;
    }
  }
  double sa = max_exceed_prob(a), sb = max_exceed_prob(b);
  if (sa > t + tol_prob && sb < t - tol_prob) {
    throw NonInvertible("max-CDF jumps across level t=" + std::to_string(t) + " near value " +
                        std::to_string(b) + " (survival " + std::to_string(sa) + " -> " +
                        std::to_string(sb) + "); increase smoothing_width");
  }
  return b;
}

Instance Instance::split_item(std::size_t item) const {
  std::size_t g = group_of(item);
  std::size_t k = item - first_item_[g];
  std::vector<ItemGroup> out;
  for (std::size_t h = 0; h < groups_.size(); ++h) {
    if (h != g) {
      out.push_back(groups_[h]);
      continue;
    }
    std::size_t m = groups_[h].count;
    if (k > 0) out.push_back({groups_[h].dist, k});
    out.push_back({groups_[h].dist, 1});
    if (m - k - 1 > 0) out.push_back({groups_[h].dist, m - k - 1});
  }
  // Distributions are already smoothed; keep the recorded width without re-smoothing.
  Instance r(std::move(out), 0.0);
  r.smoothing_width_ = smoothing_width_;
  return r;
}

TimeGrid TimeGrid::make(std::size_t uniform, int geometric_levels) {
  if (uniform < 1) throw InvalidInput("grid needs at least one uniform cell");
  std::set<double> s;
  for (std::size_t j = 0; j <= uniform; ++j) s.insert(double(j) / double(uniform));
  for (int k = 1; k <= geometric_levels; ++k) {
    double d = std::pow(10.0, -k);
    s.insert(d);
    s.insert(1.0 - d);
  }
  TimeGrid g;
  g.nodes.assign(s.begin(), s.end());
  return g;
}

}  // namespace prophet
