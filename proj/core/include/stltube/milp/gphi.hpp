#pragma once

#include <functional>

#include "stltube/milp/nominal.hpp"
#include "stltube/sets/containment.hpp"

namespace stltube::milp {

/* Joint (state; input) tube zonotope of subsystem i at time t; states occupy
 * rows 0..state_rows-1, inputs follow.  Providers must throw when an input
 * row is requested past the final control step. */
struct TubeSlice {
  ModelZono zono;
  int state_rows = 0;
};
using TubeProvider = std::function<TubeSlice(int subsystem, int t, bool needs_input)>;

struct GPhiHandles {
  std::vector<int> rows;  // one per active predicate instance
};

/* Linear family forcing every tube point to satisfy each active predicate
 * with margin rho_hat:  -p(c_z) + sum_j p'_j <= -(rho_hat + bound),
 * p'_j >= +-p(G_z)_j.  Predicates spanning several subsystems concatenate
 * the (independently parameterized) per-subsystem generators. */
GPhiHandles build_containment_constraints(opt::OptModel& m, const stl::FormulaPtr& formula,
                                          const ActiveSet& active, double rho_hat,
                                          const TubeProvider& tube_of, int subsystem_filter = -1);

}  // namespace stltube::milp
