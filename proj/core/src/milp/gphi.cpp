#include "stltube/milp/gphi.hpp"

#include <map>
#include <set>
#include <stdexcept>

namespace stltube::milp {

using opt::LinExpr;
using opt::OptModel;
using opt::RowSense;

GPhiHandles build_containment_constraints(OptModel& m, const stl::FormulaPtr& formula,
                                          const ActiveSet& active, double rho_hat,
                                          const TubeProvider& tube_of, int subsystem_filter) {
  std::map<const stl::Formula*, std::string> paths;
  index_paths(formula, paths);
  std::map<std::string, const stl::Formula*> by_path;
  for (const auto& [node, p] : paths) by_path[p] = node;

  GPhiHandles out;
  for (const auto& entry : active.entries) {
    auto it = by_path.find(entry.path);
    if (it == by_path.end())
      throw std::invalid_argument("build_containment_constraints: unknown path " + entry.path);
    const stl::Formula* node = it->second;
    if (node->type != stl::NodeType::Pred)
      throw std::invalid_argument("build_containment_constraints: path is not a predicate");
    const auto& pred = node->pred;

    std::set<int> subsystems;
    bool needs_input = false;
    for (const auto& [v, c] : pred.terms) {
      subsystems.insert(v.subsystem);
      needs_input |= v.kind == stl::SignalKind::Input;
    }
    if (subsystem_filter >= 0 &&
        (subsystems.size() != 1 || *subsystems.begin() != subsystem_filter))
      throw std::invalid_argument(
          "build_containment_constraints: active predicate outside this subsystem's tube");

    LinExpr row;  // -p(c_z) + sum p'_j <= -(rho_hat + bound)
    for (int i : subsystems) {
      TubeSlice ts = tube_of(i, entry.t, needs_input);
      auto row_of = [&](const stl::VarRef& v) {
        int r = v.kind == stl::SignalKind::State ? v.component : ts.state_rows + v.component;
        if (r >= ts.zono.dim())
          throw std::invalid_argument("build_containment_constraints: component out of range");
        return r;
      };
      for (const auto& [v, c] : pred.terms) {
        if (v.subsystem != i) continue;
        row -= c * ts.zono.center[row_of(v)];
      }
      for (int j = 0; j < ts.zono.cols(); ++j) {
        LinExpr pg;
        for (const auto& [v, c] : pred.terms) {
          if (v.subsystem != i) continue;
          pg += c * ts.zono.gens[j][row_of(v)];
        }
        int aux = m.add_var(0.0, kInf);
        m.add_row(pg - LinExpr::var(aux), RowSense::LE, 0.0, {"gphi_abs", i, entry.t});
        m.add_row(-1.0 * pg - LinExpr::var(aux), RowSense::LE, 0.0, {"gphi_abs", i, entry.t});
        row += LinExpr::var(aux);
      }
    }
    int rid = m.add_row(row, RowSense::LE, -(rho_hat + pred.bound),
                        {"gphi", subsystems.size() == 1 ? *subsystems.begin() : -1, entry.t});
    out.rows.push_back(rid);
  }
  return out;
}

}  // namespace stltube::milp
