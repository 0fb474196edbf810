#pragma once

#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "stltube/opt/model.hpp"

namespace stltube::opt::detail {

/* Structural columns in compressed sparse column form. */
struct Csc {
  int m = 0;
  int n = 0;
  std::vector<int> ptr;  // size n+1
  std::vector<int> ind;
  std::vector<double> val;
};

/*
 * Computational form: min c'x s.t. Ax + s = b, column bounds on x and s.
 * Columns 0..n-1 are structural, n..n+m-1 are row slacks whose bounds encode
 * the row sense (LE: [0,inf), GE: (-inf,0], EQ: [0,0]).
 */
struct StandardForm {
  Csc A;
  Vec b;
  Vec c;  // structural costs, internal minimize
  double c0 = 0.0;
  bool maximize = false;  // user sense of the original model
  std::vector<double> lo, up;  // size n+m
  int m = 0, n = 0;

  static StandardForm build(const OptModel& model);
};

enum class VStat : unsigned char { Basic, AtLower, AtUpper, FreeNB };

struct Basis {
  std::vector<int> basic;   // size m
  std::vector<VStat> stat;  // size n+m
  bool valid() const { return !basic.empty() || stat.empty(); }
};

struct EngineResult {
  SolveStatus status = SolveStatus::IterationLimit;
  Vec x;  // size n+m
  Vec y;  // size m internal row duals (minimize sense)
  Vec d;  // size n+m internal reduced costs
  double obj_internal = 0.0;
  double dual_obj_internal = 0.0;
  long iterations = 0;
};

class SimplexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/*
 * Two-phase primal simplex on the bounded computational form.  Phase one
 * minimizes total bound infeasibility of the basic variables (no artificial
 * columns needed; the slack basis is always available).  Pricing is Dantzig
 * with an automatic switch to Bland's anti-cycling rule when the objective
 * stalls; `bland_only` forces Bland throughout.  The basis inverse is kept
 * as an Eigen SparseLU factorization plus product-form eta updates with
 * periodic refactorization.
 */
class SimplexEngine {
 public:
  SimplexEngine(const StandardForm& sf, const SolveOptions& opts);

  /* Replace structural bounds (branch-and-bound node fixings). */
  void set_structural_bounds(const std::vector<double>& lo, const std::vector<double>& up);

  EngineResult solve(const Basis* warm = nullptr);
  Basis final_basis() const { return {basic_, stat_}; }

 private:
  void initial_basis(const Basis* warm);
  void factorize();
  void compute_basic_values();
  void ftran(Vec& v) const;
  void btran(Vec& v) const;
  int violation_sign(int j) const;
  double infeasibility() const;
  bool any_infeasible() const;
  void phase_costs(Vec& cb, bool phase1) const;
  double reduced_cost(int j, const Vec& y, bool phase1) const;
  Vec column_dense(int j) const;
  double phase_objective(bool phase1) const;

  const StandardForm& sf_;
  SolveOptions opts_;
  std::vector<double> lo_, up_;  // working bounds (n+m)
  int m_, n_, total_;

  std::vector<int> basic_;
  std::vector<int> basic_pos_;  // var -> position in basis or -1
  std::vector<VStat> stat_;
  Vec x_;

  Eigen::SparseMatrix<double> bmat_;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  struct Eta {
    int r;
    Vec w;
  };
  std::vector<Eta> etas_;
  int pivots_since_factor_ = 0;
  bool fresh_ = false;  // basic values freshly recomputed from a factorization
};

EngineResult run_simplex(const StandardForm& sf, const SolveOptions& opts,
                         const std::vector<double>* lo_override,
                         const std::vector<double>* up_override, const Basis* warm,
                         Basis* out_basis);

Solution finish_lp_solution(const OptModel& model, const StandardForm& sf,
                            const EngineResult& er);

}  // namespace stltube::opt::detail
