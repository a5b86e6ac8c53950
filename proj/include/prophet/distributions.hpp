#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace prophet {

enum class DistKind { Uniform, FiniteSupport, PiecewiseLinearCdf, Power };

std::string to_string(DistKind k);

// One item's value law. Supports are bounded and non-negative.
class ValueDistribution {
 public:
  static ValueDistribution uniform(double lo, double hi);
  static ValueDistribution finite(std::vector<std::pair<double, double>> points);
  // knots are (value, cdf); first cdf is the mass at or below the first value.
  static ValueDistribution piecewise_linear(std::vector<std::pair<double, double>> knots);
  // F(x) = ((x - lo) / (hi - lo))^exponent on [lo, hi].
  static ValueDistribution power(double lo, double hi, double exponent);

  DistKind kind() const { return kind_; }
  double lower() const { return lo_; }
  double upper() const { return hi_; }
  bool continuous() const;

  double cdf(double x) const;
  double survival(double x) const;
  // log F(x); -inf where F(x) = 0.
  double log_cdf(double x) const;
  double quantile(double u) const;
  double mean() const;

  template <class Rng>
  double sample(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return quantile(u(rng));
  }

  // Replace every atom v by a uniform on [v, v + width]. No-op for continuous laws.
  ValueDistribution smoothed(double width) const;

  const std::vector<std::pair<double, double>>& points() const { return pts_; }
  double exponent() const { return exponent_; }

 private:
  DistKind kind_ = DistKind::Uniform;
  double lo_ = 0.0;
  double hi_ = 1.0;
  double exponent_ = 1.0;
  // FiniteSupport: (value, prob). PiecewiseLinearCdf: (value, cdf).
  std::vector<std::pair<double, double>> pts_;
};

// `count` independent copies of the same law.
struct ItemGroup {
  ValueDistribution dist;
  std::size_t count = 1;
};

class Instance {
 public:
  Instance() = default;
  Instance(std::vector<ItemGroup> groups, double smoothing_width = -1.0);
  static Instance from_items(const std::vector<ValueDistribution>& items, double smoothing_width = -1.0);

  std::size_t num_items() const { return group_of_.size(); }
  std::size_t num_groups() const { return groups_.size(); }
  const ItemGroup& group(std::size_t g) const { return groups_[g]; }
  const std::vector<ItemGroup>& groups() const { return groups_; }
  std::size_t group_of(std::size_t item) const { return group_of_.at(item); }
  std::size_t first_item(std::size_t g) const { return first_item_.at(g); }
  const ValueDistribution& item(std::size_t i) const { return groups_[group_of(i)].dist; }
  double smoothing_width() const { return smoothing_width_; }

  double lower() const { return lo_; }        // min of item lower ends
  double upper() const { return hi_; }        // max of item upper ends
  double max_lower() const { return max_lo_; }

  // P[max over items (optionally excluding one) > x].
  double max_exceed_prob(double x, std::optional<std::size_t> exclude = std::nullopt) const;
  // P[max over all items except one member of group g > x].
  double others_exceed_prob(std::size_t g, double x) const;

  // Generalized inverse of max_exceed_prob. Throws NonInvertible when the
  // survival function jumps across t.
  double threshold_tau(double t, double tol_value = 1e-10, double tol_prob = 1e-9) const;

  // Move `item` into its own group, keeping item order.
  Instance split_item(std::size_t item) const;

  // Default smoothing width: 1e-6 of the joint support span.
  static double default_smoothing(const std::vector<ItemGroup>& groups);

 private:
  double log_max_cdf(double x, std::optional<std::size_t> skip_group_member) const;

  std::vector<ItemGroup> groups_;
  std::vector<std::size_t> group_of_;
  std::vector<std::size_t> first_item_;
  double smoothing_width_ = 0.0;
  double lo_ = 0.0, hi_ = 0.0, max_lo_ = 0.0;
};

struct TimeGrid {
  std::vector<double> nodes;

  // `uniform` equal cells plus geometric refinement 10^-k and 1 - 10^-k.
  static TimeGrid make(std::size_t uniform = 4096, int geometric_levels = 12);
  std::size_t resolution() const { return nodes.size(); }
};

struct SweepOptions {
  TimeGrid grid = TimeGrid::make();
  double tol_value = 1e-10;
  double tol_prob = 1e-9;
  double tol_q = 2.5e-4;   // max change of any tracked q between rows
  double tol_pq = 1e-8;    // max |dp * dq| between rows
  double tol_curve = 1e-12;  // max estimated trapezoid error of int p dq per row
  std::size_t max_rows = std::size_t(1) << 21;
};

// Rows ordered by decreasing common threshold. Per-group columns hold the
// (possibly item-specific) threshold and the barred level functions.
struct LevelTable {
  std::vector<double> t;
  std::vector<double> tau;
  std::vector<std::vector<double>> tau_g;  // [group][row]
  std::vector<std::vector<double>> p;      // [group][row]
  std::vector<std::vector<double>> q;      // [group][row]
  std::vector<bool> base;                  // row came from a TimeGrid node

  std::size_t rows() const { return t.size(); }
  std::size_t groups() const { return p.size(); }
};

// Level functions of the common threshold.
LevelTable level_functions(const Instance& inst, const SweepOptions& opt = {});

// Value of the level functions at time t (linear interpolation in the table).
struct LevelPoint {
  double tau;
  std::vector<double> p, q;
};
LevelPoint level_at(const LevelTable& table, double t);

}  // namespace prophet
