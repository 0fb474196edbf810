#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "stltube/linalg.hpp"

namespace stltube::opt {

enum class VarKind { Continuous, Binary };
enum class RowSense { LE, GE, EQ };
enum class ObjSense { Minimize, Maximize };

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LinTerm {
  int var;
  double coef;
};

/* Affine expression sum coef_k * x_k + constant, used to assemble models. */
class LinExpr {
 public:
  LinExpr() = default;
  LinExpr(double c) : constant(c) {}  // NOLINT: implicit by design
  static LinExpr var(int v, double coef = 1.0) {
    LinExpr e;
    e.terms.push_back({v, coef});
    return e;
  }

  LinExpr& operator+=(const LinExpr& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    constant += o.constant;
    return *this;
  }
  LinExpr& operator-=(const LinExpr& o) {
    for (const auto& t : o.terms) terms.push_back({t.var, -t.coef});
    constant -= o.constant;
    return *this;
  }
  LinExpr& operator*=(double s) {
    for (auto& t : terms) t.coef *= s;
    constant *= s;
    return *this;
  }

  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(double s, LinExpr a) { return a *= s; }
  friend LinExpr operator*(LinExpr a, double s) { return a *= s; }
  friend LinExpr operator-(LinExpr a) { return a *= -1.0; }

  bool is_constant() const { return terms.empty(); }

  std::vector<LinTerm> terms;
  double constant = 0.0;
};

struct RowTag {
  std::string family;
  int subsystem = -1;
  int t = -1;
};

struct VarInfo {
  double lo = -kInf;
  double up = kInf;
  VarKind kind = VarKind::Continuous;
  std::string name;
};

struct RowInfo {
  std::vector<LinTerm> terms;  // merged, sorted by var
  RowSense sense = RowSense::LE;
  double rhs = 0.0;
  RowTag tag;
};

/* Sensitivity hook: rhs of `row` depends on external parameter `param`
 * with linear coefficient `coef`.  Used for dual-based subgradients. */
struct RhsSensitivity {
  int row;
  int param;
  double coef;
};

/*
 * Linear / mixed-binary constraint system.  Single writer during assembly,
 * frozen before solving; solvers never mutate a frozen model.
 */
class OptModel {
 public:
  int add_var(double lo, double up, VarKind kind = VarKind::Continuous, std::string name = {});
  int add_row(const LinExpr& e, RowSense sense, double rhs, RowTag tag = {});
  void set_bounds(int var, double lo, double up);
  void set_objective(ObjSense sense, const LinExpr& e);

  void freeze();
  bool frozen() const { return frozen_; }

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_binaries() const { return num_binaries_; }

  const VarInfo& var(int j) const { return vars_[j]; }
  const RowInfo& row(int i) const { return rows_[i]; }
  const std::vector<VarInfo>& vars() const { return vars_; }
  const std::vector<RowInfo>& rows() const { return rows_; }
  ObjSense objective_sense() const { return obj_sense_; }
  const std::vector<double>& objective_coefs() const { return obj_; }
  double objective_constant() const { return obj_const_; }

  void add_rhs_sensitivity(int row, int param, double coef);
  const std::vector<RhsSensitivity>& rhs_sensitivities() const { return rhs_sens_; }

 private:
  std::vector<VarInfo> vars_;
  std::vector<RowInfo> rows_;
  std::vector<double> obj_;  // dense per-variable, user sense
  double obj_const_ = 0.0;
  ObjSense obj_sense_ = ObjSense::Minimize;
  std::vector<RhsSensitivity> rhs_sens_;
  int num_binaries_ = 0;
  bool frozen_ = false;
};

struct SolveOptions {
  long max_iters = 0;        // 0: defaults to 50*(rows+cols)
  long node_limit = 1000000;  // branch-and-bound nodes
  double feas_tol = 1e-7;
  double int_tol = 1e-6;
  double pivot_tol = 1e-10;
  bool bland_only = false;   // pure Bland pricing (anti-cycling rule used throughout)
};

struct Solution {
  SolveStatus status = SolveStatus::IterationLimit;
  double objective = std::nan("");
  double dual_objective = std::nan("");
  Vec x;      // per variable
  Vec duals;  // per row, user-sense shadow prices (empty for MILP)
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double compl_slack_residual = 0.0;
  double duality_gap_rel = 0.0;
  long iterations = 0;
  long nodes = 0;

  bool optimal() const { return status == SolveStatus::Optimal; }
};

Solution solve_lp(const OptModel& m, const SolveOptions& opts = {});
Solution solve_milp(const OptModel& m, const SolveOptions& opts = {});

/* Track worst-case optimality certificates across all LP solves in this
 * process; the acceptance suite asserts on these. */
struct SolverStats {
  static double max_duality_gap();
  static double max_primal_residual();
  static double max_dual_residual();
  static void reset();
};

}  // namespace stltube::opt
