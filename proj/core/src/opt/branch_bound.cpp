#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "simplex_impl.hpp"

namespace stltube::opt {

using detail::Basis;
using detail::EngineResult;
using detail::StandardForm;

namespace {

struct Node {
  std::vector<std::pair<int, int>> fixings;  // (binary var, 0/1)
  Basis warm;
  bool has_warm = false;
};

}  // namespace

Solution solve_milp(const OptModel& model, const SolveOptions& opts) {
  auto sf = StandardForm::build(model);
  std::vector<int> binaries;
  for (int j = 0; j < model.num_vars(); ++j)
    if (model.var(j).kind == VarKind::Binary) binaries.push_back(j);
  if (binaries.empty()) throw std::invalid_argument("solve_milp: no binary variables; use solve_lp");

  const double sense = sf.maximize ? -1.0 : 1.0;

  std::vector<double> lo0(sf.lo.begin(), sf.lo.begin() + sf.n);
  std::vector<double> up0(sf.up.begin(), sf.up.begin() + sf.n);

  double inc_obj = kInf;  // internal min sense
  Vec inc_x;
  bool have_inc = false;
  long nodes = 0, total_iters = 0;
  bool stopped = false;

  std::vector<Node> stack;
  stack.push_back({});

  while (!stack.empty()) {
    if (nodes >= opts.node_limit) {
      stopped = true;
      break;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    ++nodes;

    std::vector<double> lo = lo0, up = up0;
    for (auto [v, b] : node.fixings) {
      lo[v] = b;
      up[v] = b;
    }

    Basis out;
    EngineResult er;
    try {
      er = detail::run_simplex(sf, opts, &lo, &up, node.has_warm ? &node.warm : nullptr, &out);
    } catch (const detail::SimplexError&) {
      if (!node.has_warm) throw;
      er = detail::run_simplex(sf, opts, &lo, &up, nullptr, &out);  // cold retry
    }
    total_iters += er.iterations;

    if (er.status == SolveStatus::Infeasible) continue;
    if (er.status == SolveStatus::Unbounded) {
      Solution sol;
      sol.status = SolveStatus::Unbounded;
      sol.nodes = nodes;
      sol.iterations = total_iters;
      return sol;
    }
    if (er.status == SolveStatus::IterationLimit) {
      stopped = true;
      break;
    }

    // best-bound pruning against the incumbent
    if (have_inc && er.obj_internal >= inc_obj - 1e-9 * (1.0 + std::abs(inc_obj))) continue;

    // most fractional binary
    int branch_var = -1;
    double best_frac = opts.int_tol;
    for (int v : binaries) {
      double f = std::min(std::max(er.x[v], 0.0), std::max(1.0 - er.x[v], 0.0));
      if (f > best_frac) {
        best_frac = f;
        branch_var = v;
      }
    }

    if (branch_var < 0) {
      if (er.obj_internal < inc_obj) {
        inc_obj = er.obj_internal;
        inc_x = er.x;
        have_inc = true;
      }
      continue;
    }

    int preferred = er.x[branch_var] >= 0.5 ? 1 : 0;
    Node far, near;
    far.fixings = node.fixings;
    far.fixings.emplace_back(branch_var, 1 - preferred);
    far.warm = out;
    far.has_warm = true;
    near.fixings = std::move(node.fixings);
    near.fixings.emplace_back(branch_var, preferred);
    near.warm = std::move(out);
    near.has_warm = true;
    stack.push_back(std::move(far));
    stack.push_back(std::move(near));  // explored first (depth-first dive)
  }

  Solution sol;
  sol.nodes = nodes;
  sol.iterations = total_iters;
  if (!have_inc) {
    sol.status = stopped ? SolveStatus::IterationLimit : SolveStatus::Infeasible;
    return sol;
  }
  sol.status = stopped ? SolveStatus::IterationLimit : SolveStatus::Optimal;
  sol.objective = sense * inc_obj + sf.c0;
  sol.x.resize(sf.n);
  for (int j = 0; j < sf.n; ++j) sol.x[j] = inc_x[j];
  // round binaries that are integral within tolerance
  for (int v : binaries) sol.x[v] = std::round(sol.x[v]);
  return sol;
}

}  // namespace stltube::opt
