#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stltube/net/network.hpp"

namespace stltube::net {

Network build_power_ring(int n_areas, const PowerAreaParams& p, int horizon) {
  if (n_areas < 3) throw std::invalid_argument("build_power_ring: needs at least 3 areas");
  if (horizon < 1) throw std::invalid_argument("build_power_ring: horizon must be positive");
  const double two_pi = 2.0 * std::numbers::pi;
  const int deg = 2;  // ring neighbors

  Mat A(2, 2);
  A << 1.0, p.dt * two_pi,
      -p.dt * p.K_p * p.K_s * deg / (two_pi * p.T_p), 1.0 - p.dt / p.T_p;
  Mat B(2, 1);
  B << 0.0, p.dt * p.K_p / p.T_p;
  Mat Aij = Mat::Zero(2, 2);
  Aij(1, 0) = p.dt * p.K_p * p.K_s / (two_pi * p.T_p);

  Vec wgen(2);
  wgen << 0.0, p.dt * p.K_p * p.omega_bound / p.T_p;
  Mat Wg = p.omega_bound > 0.0 ? Mat(wgen) : Mat(2, 0);
  Zonotope W(Vec::Zero(2), Wg);

  Vec xlo = Vec::Constant(2, -p.x_bound), xhi = Vec::Constant(2, p.x_bound);
  Vec ulo = Vec::Constant(1, -p.u_bound), uhi = Vec::Constant(1, p.u_bound);
  Vec x0(2);
  x0 << 0.1, 0.1;

  Network net;
  net.horizon = horizon;
  net.subs.resize(n_areas);
  for (int i = 0; i < n_areas; ++i) {
    Subsystem& s = net.subs[i];
    s.n = 2;
    s.m = 1;
    s.A.assign(horizon, A);
    s.B.assign(horizon, B);
    s.X.assign(horizon + 1, HPolytope::from_box(xlo, xhi));
    s.U.assign(horizon, HPolytope::from_box(ulo, uhi));
    s.W.assign(horizon, W);
    s.x_init = x0;
    int prev = (i + n_areas - 1) % n_areas;
    int next = (i + 1) % n_areas;
    s.couplings[prev].A = std::vector<Mat>(horizon, Aij);
    s.couplings[next].A = std::vector<Mat>(horizon, Aij);
  }
  return net;
}

}  // namespace stltube::net
