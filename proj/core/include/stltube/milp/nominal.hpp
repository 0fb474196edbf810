#pragma once

#include <set>

#include "stltube/milp/encode.hpp"

namespace stltube::milp {

struct NominalOptions {
  double cost_weight_x = 0.0;  // L1 deviation weights of the user cost J
  double cost_weight_u = 0.0;
  double rho_reward = 1.0;     // direct robustness reward in the objective
  double violation_scale = 1e3;  // penalty scale on max(0, -rho)
  EncodingOptions enc;
  opt::SolveOptions solver;
};

struct ActiveEntry {
  std::string path;
  int t = 0;

  friend auto operator<=>(const ActiveEntry&, const ActiveEntry&) = default;
};

struct ActiveSet {
  std::vector<ActiveEntry> entries;
  double rho_star = 0.0;
};

struct NominalPlan {
  stl::FormulaPtr formula;  // negation-free form used for the encoding
  stl::Trajectory traj;
  double rho_star = 0.0;      // monitored robustness of the plan
  double rho_var_value = 0.0;  // robustness variable at the solver's incumbent
  ActiveSet active;
  opt::SolveStatus status = opt::SolveStatus::IterationLimit;
  bool active_from_monitor = false;
  long nodes = 0;
  long iterations = 0;
};

/* Maximally robust nominal synthesis over the aggregate system (one MILP).
 * The objective maximizes rho_reward * rho - 2*violation_scale*max(0,-rho)
 * minus the weighted L1 deviation cost; with zero weights this is a pure
 * robustness maximization. */
NominalPlan synth_nominal(const net::Network& net, const stl::FormulaPtr& f,
                          const NominalOptions& opts = {});

/* Active predicate instances of the plan; verified by replaying the Boolean
 * combination rules bottom-up (the root must evaluate to true). */
ActiveSet extract_active(const NominalPlan& plan);

/* Boolean replay of f at time t with predicate truth given by set membership. */
bool replay_active(const stl::FormulaPtr& f, int t,
                   const std::set<std::pair<std::string, int>>& active,
                   const std::map<const stl::Formula*, std::string>& paths);

}  // namespace stltube::milp
