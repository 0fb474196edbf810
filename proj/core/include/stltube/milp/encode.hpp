#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stltube/net/network.hpp"
#include "stltube/opt/model.hpp"
#include "stltube/stl/formula.hpp"

namespace stltube::milp {

struct EncodingOptions {
  double eps_strict = 1e-6;
  double big_m_margin = 1.1;              // headroom on computed interval bounds
  std::optional<double> big_m_override;   // refused when below the computed bound
  double rho_cap = kInf;                  // optional cap on the robustness variable
};

struct PredicateInstance {
  const stl::Formula* node = nullptr;
  std::string path;  // stable tree path, e.g. "0/1"
  int t = 0;
  int z_var = -1;
  double big_m = 0.0;
  double y_lo = 0.0, y_hi = 0.0;  // interval bounds of p(s(t)) - c over the domain
};

/* Signal variable ids for the aggregate nominal program. */
struct SignalVars {
  std::vector<std::vector<std::vector<int>>> x;  // [i][t][component], t = 0..h
  std::vector<std::vector<std::vector<int>>> u;  // [i][t][component], t = 0..h-1
};

struct EncodingContext {
  SignalVars signals;
  int rho_var = -1;
  double rho_lo = 0.0, rho_hi = 0.0;
  std::vector<PredicateInstance> predicates;
  std::map<std::pair<const stl::Formula*, int>, int> zmap;
  std::map<const stl::Formula*, std::string> paths;
  const net::ReachBounds* reach = nullptr;
  EncodingOptions opts;
};

/* Assign stable tree paths to every node of f. */
void index_paths(const stl::FormulaPtr& f, std::map<const stl::Formula*, std::string>& out,
                 const std::string& prefix = "0");

/* Interval bounds of the robustness of (f, t) over the reach domain. */
std::pair<double, double> robustness_interval(const stl::FormulaPtr& f, int t,
                                              const net::ReachBounds& rb,
                                              const net::Network& net);

/* Declare signal variables with reach bounds and dynamics equalities of the
 * aggregate nominal system; pins x(0) to the initial states. */
SignalVars declare_nominal_signals(opt::OptModel& m, const net::Network& net,
                                   const net::ReachBounds& rb);

/* Recursive translation of the formula into big-M and combination rows.
 * Returns the z variable of (f, t); predicates get binary z's, everything
 * else continuous [0,1] variables.  f must be negation-free and bounded. */
int encode_formula(const stl::FormulaPtr& f, int t, EncodingContext& ctx, opt::OptModel& m,
                   const net::Network& net);

}  // namespace stltube::milp
