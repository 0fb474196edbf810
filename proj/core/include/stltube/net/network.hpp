#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stltube/linalg.hpp"
#include "stltube/sets/polytope.hpp"
#include "stltube/sets/zonotope.hpp"
#include "stltube/stl/formula.hpp"

namespace stltube::net {

/* Directed coupling from subsystem j into i; absent matrices contribute
 * nothing (and no generator columns to assumed disturbance sets). */
struct Coupling {
  std::optional<std::vector<Mat>> A;  // per step t = 0..h-1
  std::optional<std::vector<Mat>> B;
};

struct Subsystem {
  int n = 0;
  int m = 0;
  std::vector<Mat> A;               // t = 0..h-1
  std::vector<Mat> B;               // t = 0..h-1
  std::map<int, Coupling> couplings;
  std::vector<HPolytope> X;         // t = 0..h
  std::vector<HPolytope> U;         // t = 0..h-1
  std::vector<Zonotope> W;          // t = 0..h-1
  Vec x_init;
};

struct Network {
  std::vector<Subsystem> subs;
  int horizon = 0;

  int size() const { return static_cast<int>(subs.size()); }
  stl::Signature signature() const;
};

struct PowerAreaParams {
  double K_p = 110.0;
  double K_s = 0.5;
  double T_p = 25.0;
  double dt = 0.1;
  double omega_bound = 0.001;
  double u_bound = 0.1;
  double x_bound = 10.0;  // generous default state box
};

/* Forward-Euler discretized load-frequency ring; states per area are
 * [phase angle deviation, frequency deviation]. */
Network build_power_ring(int n_areas, const PowerAreaParams& p, int horizon);

struct Aggregate {
  std::vector<Mat> A;  // t = 0..h-1, block structure with couplings off-diagonal
  std::vector<Mat> B;
  std::vector<HPolytope> X;  // cartesian products
  std::vector<HPolytope> U;
  std::vector<Zonotope> W;
  Vec x_init;
  std::vector<int> x_off, u_off;  // block offsets per subsystem
  int n = 0, m = 0;
  int horizon = 0;
};

Aggregate aggregate(const Network& net);

/* Invariant checks; empty result means well-formed. */
std::vector<std::string> validate(const Network& net);

/* One step of the true coupled dynamics. */
std::vector<Vec> step_network(const Network& net, const std::vector<Vec>& x,
                              const std::vector<Vec>& u, const std::vector<Vec>& w, int t);
Vec step_aggregate(const Aggregate& agg, const Vec& x, const Vec& u, const Vec& w, int t);

/* Forward interval reachability per subsystem (state boxes per t = 0..h,
 * intersected with the hulls of X); used for big-M bounds. */
struct ReachBounds {
  std::vector<std::vector<IntervalBox>> x;  // [i][t]
  std::vector<std::vector<IntervalBox>> u;  // [i][t] hulls of U
};
ReachBounds reach_intervals(const Network& net);

/* Componentwise bounds of an H-polytope via support LPs. */
IntervalBox polytope_hull(const HPolytope& P);

}  // namespace stltube::net
