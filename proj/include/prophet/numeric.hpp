#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "prophet/errors.hpp"

namespace prophet {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Root {
  double x = 0.0;
  double lo = 0.0;  // f(lo) and f(hi) have opposite signs (or one is zero)
  double hi = 0.0;
  int iterations = 0;
};

// Bisection with an up-front sign-change check.
template <class F>
Root bisect(F&& f, double lo, double hi, double tol, const std::string& what, int max_iter = 400) {
  double flo = f(lo);
  double fhi = f(hi);
  if (std::isnan(flo) || std::isnan(fhi) || ((flo > 0) == (fhi > 0) && flo != 0 && fhi != 0)) {
    throw BracketFailure(what + ": no sign change on [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "] (f=" + std::to_string(flo) + ", " +
                         std::to_string(fhi) + ")");
  }
  Root r;
  if (flo == 0) {
    r.x = r.lo = r.hi = lo;
    return r;
  }
  if (fhi == 0) {
    r.x = r.lo = r.hi = hi;
    return r;
  }
  bool lo_positive = flo > 0;
  int it = 0;
  while (hi - lo > tol && it < max_iter) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double fm = f(mid);
    if (fm == 0) {
      lo = hi = mid;
      break;
    }
    if ((fm > 0) == lo_positive) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++it;
  }
  r.lo = lo;
  r.hi = hi;
  r.x = 0.5 * (lo + hi);
  r.iterations = it;
  return r;
}

// Adaptive Gauss-Kronrod (boost).
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12, double* error = nullptr) {
  if (a == b) return 0.0;
  double err = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      std::forward<F>(f), a, b, 12, tol, &err);
  if (error) *error = err;
  return v;
}

// Single 31-point Kronrod pass, for short intervals with smooth integrands.
template <class F>
double integrate_fixed(F&& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(std::forward<F>(f), a, b, 0, 0.0);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for stream `index` derived from a master seed.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace prophet
