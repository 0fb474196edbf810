#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "stltube/opt/lp_file.hpp"
#include "stltube/opt/model.hpp"

using namespace stltube;
using namespace stltube::opt;

TEST_CASE("lp: trivial bound problem with dual on the binding row") {
  OptModel m;
  int x = m.add_var(0.0, kInf);
  int r = m.add_row(LinExpr::var(x), RowSense::LE, 1.0);
  m.set_objective(ObjSense::Maximize, LinExpr::var(x));
  m.freeze();
  auto s = solve_lp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(1.0));
  CHECK(s.x[x] == doctest::Approx(1.0));
  CHECK(s.duals[r] == doctest::Approx(1.0));
  CHECK(s.duality_gap_rel < 1e-9);
}

TEST_CASE("lp: infeasible and unbounded detection") {
  {
    OptModel m;
    int x = m.add_var(0.0, kInf);
    m.add_row(LinExpr::var(x), RowSense::LE, -1.0);
    m.set_objective(ObjSense::Minimize, LinExpr(0.0));
    m.freeze();
    CHECK(solve_lp(m).status == SolveStatus::Infeasible);
  }
  {
    OptModel m;
    int x = m.add_var(0.0, kInf);
    m.add_row(LinExpr::var(x), RowSense::GE, 1.0);
    m.set_objective(ObjSense::Maximize, LinExpr::var(x));
    m.freeze();
    CHECK(solve_lp(m).status == SolveStatus::Unbounded);
  }
}

TEST_CASE("lp: equality rows and free variables") {
  OptModel m;
  int x = m.add_var(-kInf, kInf);
  int y = m.add_var(0.0, 4.0);
  m.add_row(LinExpr::var(x) + LinExpr::var(y), RowSense::EQ, 3.0);
  m.add_row(LinExpr::var(x) - LinExpr::var(y), RowSense::LE, 1.0);
  m.set_objective(ObjSense::Minimize, -1.0 * LinExpr::var(x) - 2.0 * LinExpr::var(y));
  m.freeze();
  auto s = solve_lp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.x[x] == doctest::Approx(-1.0));
  CHECK(s.x[y] == doctest::Approx(4.0));
  CHECK(s.objective == doctest::Approx(-7.0));
  CHECK(s.duality_gap_rel < 1e-9);
}

namespace {

struct RandomLp {
  OptModel model;
  int n = 0;
  int m_eq = 0;
  Mat A;
  Vec b, c;
};

/* Random standard-form LP: max c'x s.t. Ax = b, x >= 0, with a bounded
 * feasible set by construction (one row is a simplex constraint). */
RandomLp random_std_lp(std::mt19937_64& rng, int max_n = 20, int max_m = 7) {
  std::uniform_int_distribution<int> nd(3, max_n);
  RandomLp out;
  out.n = nd(rng);
  std::uniform_int_distribution<int> md(1, std::min(max_m, out.n - 1));
  out.m_eq = md(rng) + 1;  // + simplex row
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> upos(0.0, 2.0);

  out.A.resize(out.m_eq, out.n);
  for (int i = 0; i + 1 < out.m_eq; ++i)
    for (int j = 0; j < out.n; ++j) out.A(i, j) = u(rng);
  out.A.row(out.m_eq - 1).setOnes();

  Vec x0(out.n);
  for (int j = 0; j < out.n; ++j) x0[j] = upos(rng);
  out.b = out.A * x0;

  out.c.resize(out.n);
  for (int j = 0; j < out.n; ++j) out.c[j] = u(rng);

  for (int j = 0; j < out.n; ++j) out.model.add_var(0.0, kInf);
  for (int i = 0; i < out.m_eq; ++i) {
    LinExpr e;
    for (int j = 0; j < out.n; ++j) e += LinExpr::var(j, out.A(i, j));
    out.model.add_row(e, RowSense::EQ, out.b[i]);
  }
  LinExpr obj;
  for (int j = 0; j < out.n; ++j) obj += LinExpr::var(j, out.c[j]);
  out.model.set_objective(ObjSense::Maximize, obj);
  out.model.freeze();
  return out;
}

/* Exhaustive basic-solution (vertex) enumeration oracle. */
double vertex_enum_max(const RandomLp& lp) {
  const int n = lp.n, m = lp.m_eq;
  std::vector<int> comb(m);
  for (int i = 0; i < m; ++i) comb[i] = i;
  double best = -kInf;
  while (true) {
    Mat B(m, m);
    for (int k = 0; k < m; ++k) B.col(k) = lp.A.col(comb[k]);
    Eigen::FullPivLU<Mat> lu(B);
    if (lu.rank() == m) {
      Vec xb = lu.solve(lp.b);
      if ((xb.array() >= -1e-9).all() && (B * xb - lp.b).cwiseAbs().maxCoeff() < 1e-7) {
        double obj = 0.0;
        for (int k = 0; k < m; ++k) obj += lp.c[comb[k]] * xb[k];
        best = std::max(best, obj);
      }
    }
    // next combination
    int i = m - 1;
    while (i >= 0 && comb[i] == n - m + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int k = i + 1; k < m; ++k) comb[k] = comb[k - 1] + 1;
  }
  return best;
}

}  // namespace

TEST_CASE("lp: 100 random instances match vertex enumeration, duality certified") {
  std::mt19937_64 rng(20240915);
  for (int inst = 0; inst < 100; ++inst) {
    auto lp = random_std_lp(rng);
    auto s = solve_lp(lp.model);
    REQUIRE(s.status == SolveStatus::Optimal);
    double oracle = vertex_enum_max(lp);
    CHECK(std::abs(s.objective - oracle) < 1e-6 * (1.0 + std::abs(oracle)));
    CHECK(s.duality_gap_rel < 1e-6);
    CHECK(s.primal_residual < 1e-6);
    CHECK(s.dual_residual < 1e-6);
    CHECK(s.compl_slack_residual < 1e-6);
  }
}

TEST_CASE("lp: determinism across repeated solves") {
  std::mt19937_64 rng(5);
  auto lp = random_std_lp(rng);
  auto s1 = solve_lp(lp.model);
  auto s2 = solve_lp(lp.model);
  CHECK(s1.objective == s2.objective);
  CHECK((s1.x - s2.x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("milp: constraint forces binary rounding down") {
  OptModel m;
  int z = m.add_var(0.0, 1.0, VarKind::Binary);
  m.add_row(LinExpr::var(z), RowSense::LE, 0.5);
  m.set_objective(ObjSense::Maximize, LinExpr::var(z));
  m.freeze();
  auto s = solve_milp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(0.0));
  CHECK(s.x[z] == doctest::Approx(0.0));
}

TEST_CASE("milp: 5-item knapsack equals exhaustive enumeration") {
  const double v[5] = {3, 7, 2, 9, 5};
  const double w[5] = {2, 4, 1, 5, 3};
  const double W = 8;
  OptModel m;
  LinExpr weight, value;
  for (int i = 0; i < 5; ++i) {
    int z = m.add_var(0, 1, VarKind::Binary);
    weight += LinExpr::var(z, w[i]);
    value += LinExpr::var(z, v[i]);
  }
  m.add_row(weight, RowSense::LE, W);
  m.set_objective(ObjSense::Maximize, value);
  m.freeze();
  auto s = solve_milp(m);
  REQUIRE(s.status == SolveStatus::Optimal);

  double best = 0;
  for (int mask = 0; mask < 32; ++mask) {
    double tw = 0, tv = 0;
    for (int i = 0; i < 5; ++i)
      if (mask >> i & 1) {
        tw += w[i];
        tv += v[i];
      }
    if (tw <= W) best = std::max(best, tv);
  }
  CHECK(s.objective == doctest::Approx(best));
}

TEST_CASE("milp: big-M indicator pair pins rho to the signal value") {
  // y = 5, M = 1e4; maximize rho with z forced to 1 and rho <= 5 from the pair
  OptModel m;
  int rho = m.add_var(-kInf, 5.0);
  int z = m.add_var(1.0, 1.0, VarKind::Binary);
  const double y = 5.0, M = 1e4, eps = 1e-6;
  // y + M(1-z) >= rho   <=>  rho + M z <= y + M
  m.add_row(LinExpr::var(rho) + LinExpr::var(z, M), RowSense::LE, y + M);
  // y - M z <= rho - eps  <=>  -rho - M z <= -y - eps
  m.add_row(-1.0 * LinExpr::var(rho) - LinExpr::var(z, M), RowSense::LE, -y - eps);
  m.set_objective(ObjSense::Maximize, LinExpr::var(rho));
  m.freeze();
  auto s = solve_milp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(5.0));
}

namespace {

struct RandomMilp {
  OptModel model;
  int nb = 0;
  int nc = 0;
};

RandomMilp random_milp(std::mt19937_64& rng, int max_bin = 12) {
  std::uniform_int_distribution<int> bd(2, max_bin);
  std::uniform_int_distribution<int> cd(0, 3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  RandomMilp out;
  out.nb = bd(rng);
  out.nc = cd(rng);
  for (int i = 0; i < out.nb; ++i) out.model.add_var(0, 1, VarKind::Binary);
  for (int i = 0; i < out.nc; ++i) out.model.add_var(-5.0, 5.0);
  int rows = 2 + static_cast<int>(rng() % 4);
  for (int r = 0; r < rows; ++r) {
    LinExpr e;
    for (int j = 0; j < out.nb + out.nc; ++j)
      if (rng() % 2) e += LinExpr::var(j, u(rng));
    double rhs = std::abs(u(rng)) + 0.5;
    out.model.add_row(e, RowSense::LE, rhs);
  }
  LinExpr obj;
  for (int j = 0; j < out.nb + out.nc; ++j) obj += LinExpr::var(j, u(rng));
  out.model.set_objective(ObjSense::Maximize, obj);
  out.model.freeze();
  return out;
}

/* Exhaustive oracle: enumerate all binary assignments, LP over the rest. */
double exhaustive_milp_max(const RandomMilp& rm) {
  double best = -kInf;
  for (int mask = 0; mask < (1 << rm.nb); ++mask) {
    OptModel m;
    for (int i = 0; i < rm.nb; ++i) {
      double v = (mask >> i) & 1;
      m.add_var(v, v);
    }
    for (int i = 0; i < rm.nc; ++i) m.add_var(-5.0, 5.0);
    for (int r = 0; r < rm.model.num_rows(); ++r) {
      LinExpr e;
      for (const auto& t : rm.model.row(r).terms) e += LinExpr::var(t.var, t.coef);
      m.add_row(e, rm.model.row(r).sense, rm.model.row(r).rhs);
    }
    LinExpr obj;
    for (int j = 0; j < rm.model.num_vars(); ++j)
      obj += LinExpr::var(j, rm.model.objective_coefs()[j]);
    m.set_objective(ObjSense::Maximize, obj);
    m.freeze();
    auto s = solve_lp(m);
    if (s.status == SolveStatus::Optimal) best = std::max(best, s.objective);
  }
  return best;
}

}  // namespace

TEST_CASE("milp: random instances equal exhaustive enumeration (<= 12 binaries)") {
  std::mt19937_64 rng(777);
  for (int inst = 0; inst < 25; ++inst) {
    auto rm = random_milp(rng);
    auto s = solve_milp(rm.model);
    double oracle = exhaustive_milp_max(rm);
    if (!std::isfinite(oracle)) {
      CHECK(s.status == SolveStatus::Infeasible);
      continue;
    }
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(std::abs(s.objective - oracle) < 1e-8 * (1.0 + std::abs(oracle)));
  }
}

TEST_CASE("lp file: golden single-variable export") {
  OptModel m;
  m.add_var(0.0, 2.0);
  m.add_row(LinExpr::var(0), RowSense::LE, 1.5);
  m.set_objective(ObjSense::Maximize, LinExpr::var(0));
  m.freeze();
  std::ostringstream os;
  export_lp(m, os);
  const std::string expected =
      "\\ stltube model: 1 vars, 1 rows\n"
      "Maximize\n"
      " obj: + 1 x0\n"
      "Subject To\n"
      " c0: + 1 x0 <= 1.5\n"
      "Bounds\n"
      " 0 <= x0 <= 2\n"
      "End\n";
  CHECK(os.str() == expected);
}

TEST_CASE("lp file: binaries section present and round-trip is exact") {
  std::mt19937_64 rng(4242);
  for (int inst = 0; inst < 20; ++inst) {
    auto rm = random_milp(rng, 6);
    std::ostringstream os;
    export_lp(rm.model, os);
    CHECK(os.str().find("Binaries") != std::string::npos);
    std::istringstream is(os.str());
    OptModel back = import_lp(is);
    REQUIRE(back.num_vars() == rm.model.num_vars());
    REQUIRE(back.num_rows() == rm.model.num_rows());
    for (int j = 0; j < back.num_vars(); ++j) {
      CHECK(back.var(j).lo == rm.model.var(j).lo);
      CHECK(back.var(j).up == rm.model.var(j).up);
      CHECK((back.var(j).kind == VarKind::Binary) == (rm.model.var(j).kind == VarKind::Binary));
    }
    for (int i = 0; i < back.num_rows(); ++i) {
      const auto& a = back.row(i);
      const auto& b = rm.model.row(i);
      CHECK(a.sense == b.sense);
      CHECK(a.rhs == b.rhs);
      REQUIRE(a.terms.size() == b.terms.size());
      for (size_t k = 0; k < a.terms.size(); ++k) {
        CHECK(a.terms[k].var == b.terms[k].var);
        CHECK(a.terms[k].coef == b.terms[k].coef);
      }
    }
    for (int j = 0; j < back.num_vars(); ++j)
      CHECK(back.objective_coefs()[j] == rm.model.objective_coefs()[j]);
  }
}

TEST_CASE("lp: iteration limit reported") {
  std::mt19937_64 rng(11);
  auto lp = random_std_lp(rng, 20, 7);
  SolveOptions o;
  o.max_iters = 1;
  auto s = solve_lp(lp.model, o);
  CHECK(s.status == SolveStatus::IterationLimit);
}
