#include "stltube/milp/nominal.hpp"

#include <cmath>
#include <stdexcept>

namespace stltube::milp {

using opt::LinExpr;
using opt::OptModel;
using opt::RowSense;
using stl::FormulaPtr;
using stl::NodeType;

bool replay_active(const FormulaPtr& f, int t,
                   const std::set<std::pair<std::string, int>>& active,
                   const std::map<const stl::Formula*, std::string>& paths) {
  switch (f->type) {
    case NodeType::Pred:
      return active.count({paths.at(f.get()), t}) > 0;
    case NodeType::Not:
      throw std::invalid_argument("replay_active: negation-free formulas only");
    case NodeType::And: {
      for (const auto& c : f->children)
        if (!replay_active(c, t, active, paths)) return false;
      return true;
    }
    case NodeType::Or: {
      for (const auto& c : f->children)
        if (replay_active(c, t, active, paths)) return true;
      return false;
    }
    case NodeType::Always: {
      for (int tp = t + f->a; tp <= t + f->b; ++tp)
        if (!replay_active(f->children[0], tp, active, paths)) return false;
      return true;
    }
    case NodeType::Eventually: {
      for (int tp = t + f->a; tp <= t + f->b; ++tp)
        if (replay_active(f->children[0], tp, active, paths)) return true;
      return false;
    }
    case NodeType::Until: {
      for (int tp = t + f->a; tp <= t + f->b; ++tp) {
        if (!replay_active(f->children[1], tp, active, paths)) continue;
        bool ok = true;
        for (int ts = t; ts <= tp; ++ts)
          if (!replay_active(f->children[0], ts, active, paths)) {
            ok = false;
            break;
          }
        if (ok) return true;
      }
      return false;
    }
  }
  throw std::logic_error("replay_active: unreachable");
}

namespace {

double pred_signal_value(const stl::Predicate& p, const stl::Trajectory& s, int t) {
  double v = -p.bound;
  for (const auto& [var, coef] : p.terms) v += coef * s.value(var, t);
  return v;
}

/* Collect every predicate instance (node, t) reachable from (f, 0). */
void collect_instances(const FormulaPtr& f, int t,
                       std::set<std::pair<const stl::Formula*, int>>& out) {
  switch (f->type) {
    case NodeType::Pred:
      out.insert({f.get(), t});
      return;
    case NodeType::Not:
      collect_instances(f->children[0], t, out);
      return;
    case NodeType::And:
    case NodeType::Or:
      for (const auto& c : f->children) collect_instances(c, t, out);
      return;
    case NodeType::Always:
    case NodeType::Eventually:
      for (int tp = t + f->a; tp <= t + f->b; ++tp) collect_instances(f->children[0], tp, out);
      return;
    case NodeType::Until:
      for (int tp = t + f->a; tp <= t + f->b; ++tp) {
        collect_instances(f->children[1], tp, out);
        for (int ts = t; ts <= tp; ++ts) collect_instances(f->children[0], ts, out);
      }
      return;
  }
}

ActiveSet threshold_active_set(const FormulaPtr& f, const stl::Trajectory& traj, double rho,
                               const std::map<const stl::Formula*, std::string>& paths) {
  std::set<std::pair<const stl::Formula*, int>> inst;
  collect_instances(f, 0, inst);
  ActiveSet as;
  as.rho_star = rho;
  for (const auto& [node, t] : inst) {
    if (pred_signal_value(node->pred, traj, t) >= rho - 1e-9)
      as.entries.push_back({paths.at(node), t});
  }
  return as;
}

}  // namespace

NominalPlan synth_nominal(const net::Network& net, const stl::FormulaPtr& f_in,
                          const NominalOptions& opts) {
  auto f = stl::normalize_negation_free(f_in);
  const int hf = stl::horizon(f);
  if (hf > net.horizon)
    throw std::invalid_argument("synth_nominal: network horizon " +
                                std::to_string(net.horizon) + " below formula horizon " +
                                std::to_string(hf));

  auto rb = net::reach_intervals(net);

  OptModel m;
  EncodingContext ctx;
  ctx.reach = &rb;
  ctx.opts = opts.enc;
  index_paths(f, ctx.paths);

  auto [rlo, rhi] = robustness_interval(f, 0, rb, net);
  ctx.rho_lo = rlo - 1.0;  // slack below the structural lower bound
  ctx.rho_hi = std::min(rhi + 1e-9, opts.enc.rho_cap);
  ctx.rho_var = m.add_var(ctx.rho_lo, ctx.rho_hi);

  ctx.signals = declare_nominal_signals(m, net, rb);
  int z_root = encode_formula(f, 0, ctx, m, net);
  m.set_bounds(z_root, 1.0, 1.0);

  // objective: rho_reward * rho - 2M * max(0, -rho) - J_L1
  int viol = m.add_var(0.0, kInf);
  m.add_row(LinExpr::var(viol) + LinExpr::var(ctx.rho_var), RowSense::GE, 0.0,
            {"objective", -1, -1});
  LinExpr obj = LinExpr::var(ctx.rho_var, opts.rho_reward) +
                LinExpr::var(viol, -2.0 * opts.violation_scale);
  if (opts.cost_weight_x > 0 || opts.cost_weight_u > 0) {
    for (int i = 0; i < net.size(); ++i) {
      for (int t = 0; t <= net.horizon; ++t)
        for (int k = 0; k < net.subs[i].n; ++k) {
          if (opts.cost_weight_x <= 0) break;
          int a = m.add_var(0.0, kInf);
          m.add_row(LinExpr::var(ctx.signals.x[i][t][k]) - LinExpr::var(a), RowSense::LE, 0.0);
          m.add_row(-1.0 * LinExpr::var(ctx.signals.x[i][t][k]) - LinExpr::var(a), RowSense::LE,
                    0.0);
          obj += LinExpr::var(a, -opts.cost_weight_x);
        }
      for (int t = 0; t < net.horizon; ++t)
        for (int k = 0; k < net.subs[i].m; ++k) {
          if (opts.cost_weight_u <= 0) break;
          int a = m.add_var(0.0, kInf);
          m.add_row(LinExpr::var(ctx.signals.u[i][t][k]) - LinExpr::var(a), RowSense::LE, 0.0);
          m.add_row(-1.0 * LinExpr::var(ctx.signals.u[i][t][k]) - LinExpr::var(a), RowSense::LE,
                    0.0);
          obj += LinExpr::var(a, -opts.cost_weight_u);
        }
    }
  }
  m.set_objective(opt::ObjSense::Maximize, obj);
  m.freeze();

  auto sol = opt::solve_milp(m, opts.solver);

  NominalPlan plan;
  plan.formula = f;
  plan.status = sol.status;
  plan.nodes = sol.nodes;
  plan.iterations = sol.iterations;
  if (sol.status != opt::SolveStatus::Optimal && sol.x.size() == 0) {
    // no incumbent at all
    return plan;
  }

  plan.traj.horizon = net.horizon;
  plan.traj.x.resize(net.size());
  plan.traj.u.resize(net.size());
  for (int i = 0; i < net.size(); ++i) {
    for (int t = 0; t <= net.horizon; ++t) {
      Vec xv(net.subs[i].n);
      for (int k = 0; k < net.subs[i].n; ++k) xv[k] = sol.x[ctx.signals.x[i][t][k]];
      plan.traj.x[i].push_back(xv);
    }
    for (int t = 0; t < net.horizon; ++t) {
      Vec uv(net.subs[i].m);
      for (int k = 0; k < net.subs[i].m; ++k) uv[k] = sol.x[ctx.signals.u[i][t][k]];
      plan.traj.u[i].push_back(uv);
    }
  }

  plan.rho_var_value = sol.x[ctx.rho_var];
  double rho_mon = stl::robustness(f, plan.traj, 0);

  if (sol.status == opt::SolveStatus::Optimal &&
      std::abs(rho_mon - plan.rho_var_value) <= 1e-5) {
    plan.rho_star = plan.rho_var_value;
    plan.active.rho_star = plan.rho_star;
    for (const auto& pi : ctx.predicates)
      if (sol.x[pi.z_var] > 0.5) plan.active.entries.push_back({pi.path, pi.t});
  } else {
    // incumbent not proven optimal (or a robustness cap was active): derive
    // the witness from the monitor threshold instead of the z snapshot
    plan.rho_star = rho_mon;
    plan.active = threshold_active_set(f, plan.traj, rho_mon, ctx.paths);
    plan.active_from_monitor = true;
  }
  // sufficiency re-check: the active snapshot must satisfy the formula
  std::set<std::pair<std::string, int>> act;
  for (const auto& e : plan.active.entries) act.insert({e.path, e.t});
  if (!replay_active(f, 0, act, ctx.paths))
    throw std::logic_error("synth_nominal: active-set replay failed (encoding bug)");
  return plan;
}

ActiveSet extract_active(const NominalPlan& plan) {
  std::map<const stl::Formula*, std::string> paths;
  index_paths(plan.formula, paths);
  std::set<std::pair<std::string, int>> act;
  for (const auto& e : plan.active.entries) act.insert({e.path, e.t});
  if (!replay_active(plan.formula, 0, act, paths))
    throw std::logic_error("extract_active: replay failed");
  return plan.active;
}

}  // namespace stltube::milp
