#pragma once

#include <cmath>

#include "prophet/numeric.hpp"

namespace oracle {

// Two IID Uniform(0,1) under the common threshold: int f = sqrt(G) asin(sqrt(G)).
inline double iid_uniform_mass(double gamma) { return std::sqrt(gamma) * std::asin(std::sqrt(gamma)); }

// Items A ~ U(0,1), B ~ U(0,2) under the common threshold, parametrised by
// s in [0, 1.5]: t = s on [0, 1/2], then tau = 1.5 - s with t = 1 - tau^2 / 2.
struct UniformPair {
  double gamma;

  struct State {
    double t, p[2], q[2], dq[2];
  };

  static State at(double s) {
    State st{};
    if (s <= 0.5) {
      st.t = s;
      st.p[0] = 0;
      st.p[1] = s;
      st.q[0] = s;
      st.q[1] = 0;
      st.dq[0] = 1;
      st.dq[1] = 0;
    } else {
      double tau = 1.5 - s;
      st.t = 1 - tau * tau / 2;
      st.p[0] = 1 - tau;
      st.p[1] = 1 - tau / 2;
      st.q[0] = st.p[1];
      st.q[1] = st.p[0];
      st.dq[0] = 0.5;
      st.dq[1] = 1;
    }
    return st;
  }

  double g(double s) const {
    auto st = at(s);
    return gamma * ((1 - st.q[0]) * st.p[0] + (1 - st.q[1]) * st.p[1] - st.t) + 1;
  }

  // int_0^s p_i q_i' / g
  double exponent(int i, double s) const {
    auto f = [&](double u) {
      auto st = at(u);
      return st.p[i] * st.dq[i] / g(u);
    };
    if (s <= 0.5) return prophet::integrate(f, 0, s, 1e-13);
    return prophet::integrate(f, 0, 0.5, 1e-13) + prophet::integrate(f, 0.5, s, 1e-13);
  }

  double density(int i, double s) const {
    auto st = at(s);
    return gamma * st.dq[i] / g(s) * std::exp(-gamma * exponent(i, s));
  }

  template <class F>
  static double split(F&& f) {
    return prophet::integrate(f, 0, 0.5, 1e-11) + prophet::integrate(f, 0.5, 1.5, 1e-11);
  }

  double mass(int i) const {
    return split([&](double s) { return density(i, s); });
  }

  // P[i accepted] = int p_i f_i (1 - int_0^s p_j f_j), with 1 - int p_j f_j = exp(-G E_j).
  double acceptance(int i) const {
    int j = 1 - i;
    return split([&](double s) {
      auto st = at(s);
      return st.p[i] * density(i, s) * std::exp(-gamma * exponent(j, s));
    });
  }
};

}  // namespace oracle
