#include "simplex_impl.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

namespace stltube::opt {

namespace {
std::atomic<double> g_max_gap{0.0};
std::atomic<double> g_max_primal{0.0};
std::atomic<double> g_max_dual{0.0};

void atomic_max(std::atomic<double>& a, double v) {
  double cur = a.load();
  while (v > cur && !a.compare_exchange_weak(cur, v)) {
  }
}
}  // namespace

double SolverStats::max_duality_gap() { return g_max_gap.load(); }
double SolverStats::max_primal_residual() { return g_max_primal.load(); }
double SolverStats::max_dual_residual() { return g_max_dual.load(); }
void SolverStats::reset() {
  g_max_gap = 0.0;
  g_max_primal = 0.0;
  g_max_dual = 0.0;
}

namespace detail {

StandardForm StandardForm::build(const OptModel& model) {
  if (!model.frozen()) throw std::logic_error("solve: model must be frozen");
  StandardForm sf;
  sf.m = model.num_rows();
  sf.n = model.num_vars();
  sf.maximize = model.objective_sense() == ObjSense::Maximize;
  sf.c0 = model.objective_constant();

  sf.A.m = sf.m;
  sf.A.n = sf.n;
  sf.A.ptr.assign(sf.n + 1, 0);

  // count terms per column
  for (int i = 0; i < sf.m; ++i)
    for (const auto& t : model.row(i).terms) sf.A.ptr[t.var + 1]++;
  for (int j = 0; j < sf.n; ++j) sf.A.ptr[j + 1] += sf.A.ptr[j];
  sf.A.ind.resize(sf.A.ptr[sf.n]);
  sf.A.val.resize(sf.A.ptr[sf.n]);
  std::vector<int> fill(sf.n, 0);
  for (int i = 0; i < sf.m; ++i) {
    for (const auto& t : model.row(i).terms) {
      int p = sf.A.ptr[t.var] + fill[t.var]++;
      sf.A.ind[p] = i;
      sf.A.val[p] = t.coef;
    }
  }

  sf.b.resize(sf.m);
  sf.lo.resize(sf.n + sf.m);
  sf.up.resize(sf.n + sf.m);
  for (int j = 0; j < sf.n; ++j) {
    sf.lo[j] = model.var(j).lo;
    sf.up[j] = model.var(j).up;
  }
  for (int i = 0; i < sf.m; ++i) {
    sf.b[i] = model.row(i).rhs;
    switch (model.row(i).sense) {
      case RowSense::LE:
        sf.lo[sf.n + i] = 0.0;
        sf.up[sf.n + i] = kInf;
        break;
      case RowSense::GE:
        sf.lo[sf.n + i] = -kInf;
        sf.up[sf.n + i] = 0.0;
        break;
      case RowSense::EQ:
        sf.lo[sf.n + i] = 0.0;
        sf.up[sf.n + i] = 0.0;
        break;
    }
  }

  sf.c.resize(sf.n);
  const auto& oc = model.objective_coefs();
  for (int j = 0; j < sf.n; ++j) sf.c[j] = sf.maximize ? -oc[j] : oc[j];
  return sf;
}

SimplexEngine::SimplexEngine(const StandardForm& sf, const SolveOptions& opts)
    : sf_(sf), opts_(opts), lo_(sf.lo), up_(sf.up), m_(sf.m), n_(sf.n), total_(sf.n + sf.m) {}

void SimplexEngine::set_structural_bounds(const std::vector<double>& lo,
                                          const std::vector<double>& up) {
  for (int j = 0; j < n_; ++j) {
    lo_[j] = lo[j];
    up_[j] = up[j];
  }
}

Vec SimplexEngine::column_dense(int j) const {
  Vec v = Vec::Zero(m_);
  if (j < n_) {
    for (int p = sf_.A.ptr[j]; p < sf_.A.ptr[j + 1]; ++p) v[sf_.A.ind[p]] = sf_.A.val[p];
  } else {
    v[j - n_] = 1.0;
  }
  return v;
}

void SimplexEngine::initial_basis(const Basis* warm) {
  basic_.resize(m_);
  stat_.assign(total_, VStat::AtLower);
  if (warm && static_cast<int>(warm->basic.size()) == m_ &&
      static_cast<int>(warm->stat.size()) == total_) {
    basic_ = warm->basic;
    stat_ = warm->stat;
  } else {
    for (int i = 0; i < m_; ++i) basic_[i] = n_ + i;
    for (int j = 0; j < total_; ++j) {
      if (std::isfinite(lo_[j]))
        stat_[j] = VStat::AtLower;
      else if (std::isfinite(up_[j]))
        stat_[j] = VStat::AtUpper;
      else
        stat_[j] = VStat::FreeNB;
    }
    for (int i = 0; i < m_; ++i) stat_[n_ + i] = VStat::Basic;
  }
  basic_pos_.assign(total_, -1);
  for (int i = 0; i < m_; ++i) {
    stat_[basic_[i]] = VStat::Basic;
    basic_pos_[basic_[i]] = i;
  }
  // nonbasic statuses must reference finite bounds
  for (int j = 0; j < total_; ++j) {
    if (stat_[j] == VStat::AtLower && !std::isfinite(lo_[j]))
      stat_[j] = std::isfinite(up_[j]) ? VStat::AtUpper : VStat::FreeNB;
    else if (stat_[j] == VStat::AtUpper && !std::isfinite(up_[j]))
      stat_[j] = std::isfinite(lo_[j]) ? VStat::AtLower : VStat::FreeNB;
  }
}

void SimplexEngine::factorize() {
  etas_.clear();
  pivots_since_factor_ = 0;
  if (m_ == 0) return;
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < m_; ++i) {
    int j = basic_[i];
    if (j < n_) {
      for (int p = sf_.A.ptr[j]; p < sf_.A.ptr[j + 1]; ++p)
        trips.emplace_back(sf_.A.ind[p], i, sf_.A.val[p]);
    } else {
      trips.emplace_back(j - n_, i, 1.0);
    }
  }
  bmat_.resize(m_, m_);
  bmat_.setFromTriplets(trips.begin(), trips.end());
  bmat_.makeCompressed();
  lu_.analyzePattern(bmat_);
  lu_.factorize(bmat_);
  if (lu_.info() != Eigen::Success)
    throw SimplexError("simplex: basis factorization failed (numerically singular basis)");
}

void SimplexEngine::compute_basic_values() {
  x_.resize(total_);
  for (int j = 0; j < total_; ++j) {
    switch (stat_[j]) {
      case VStat::AtLower:
        x_[j] = lo_[j];
        break;
      case VStat::AtUpper:
        x_[j] = up_[j];
        break;
      case VStat::FreeNB:
        x_[j] = 0.0;
        break;
      case VStat::Basic:
        x_[j] = 0.0;
        break;
    }
  }
  if (m_ == 0) return;
  Vec rhs = sf_.b;
  for (int j = 0; j < total_; ++j) {
    if (stat_[j] == VStat::Basic || x_[j] == 0.0) continue;
    if (j < n_) {
      for (int p = sf_.A.ptr[j]; p < sf_.A.ptr[j + 1]; ++p)
        rhs[sf_.A.ind[p]] -= sf_.A.val[p] * x_[j];
    } else {
      rhs[j - n_] -= x_[j];
    }
  }
  Vec xb = lu_.solve(rhs);
  for (const auto& e : etas_) {
    double t = xb[e.r] / e.w[e.r];
    xb -= t * e.w;
    xb[e.r] = t;
  }
  for (int i = 0; i < m_; ++i) x_[basic_[i]] = xb[i];
}

void SimplexEngine::ftran(Vec& v) const {
  if (m_ == 0) return;
  v = lu_.solve(v);
  for (const auto& e : etas_) {
    double t = v[e.r] / e.w[e.r];
    v -= t * e.w;
    v[e.r] = t;
  }
}

void SimplexEngine::btran(Vec& v) const {
  if (m_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = (it->w.dot(v) - v[it->r]) / it->w[it->r];
    v[it->r] -= s;
  }
  v = lu_.adjoint().solve(v);
}

int SimplexEngine::violation_sign(int j) const {
  double tol = opts_.feas_tol * (1.0 + std::abs(x_[j]));
  if (x_[j] < lo_[j] - tol) return -1;
  if (x_[j] > up_[j] + tol) return +1;
  return 0;
}

double SimplexEngine::infeasibility() const {
  double sum = 0.0;
  for (int i = 0; i < m_; ++i) {
    int j = basic_[i];
    if (violation_sign(j) < 0) sum += lo_[j] - x_[j];
    if (violation_sign(j) > 0) sum += x_[j] - up_[j];
  }
  return sum;
}

bool SimplexEngine::any_infeasible() const {
  for (int i = 0; i < m_; ++i)
    if (violation_sign(basic_[i]) != 0) return true;
  return false;
}

void SimplexEngine::phase_costs(Vec& cb, bool phase1) const {
  cb.resize(m_);
  for (int i = 0; i < m_; ++i) {
    int j = basic_[i];
    if (phase1) {
      cb[i] = static_cast<double>(violation_sign(j));
    } else {
      cb[i] = j < n_ ? sf_.c[j] : 0.0;
    }
  }
}

double SimplexEngine::reduced_cost(int j, const Vec& y, bool phase1) const {
  double c = phase1 ? 0.0 : (j < n_ ? sf_.c[j] : 0.0);
  if (j < n_) {
    double dot = 0.0;
    for (int p = sf_.A.ptr[j]; p < sf_.A.ptr[j + 1]; ++p) dot += sf_.A.val[p] * y[sf_.A.ind[p]];
    return c - dot;
  }
  return c - y[j - n_];
}

double SimplexEngine::phase_objective(bool phase1) const {
  if (phase1) return infeasibility();
  double obj = 0.0;
  for (int j = 0; j < n_; ++j)
    if (x_[j] != 0.0) obj += sf_.c[j] * x_[j];
  return obj;
}

EngineResult SimplexEngine::solve(const Basis* warm) {
  initial_basis(warm);
  try {
    factorize();
  } catch (const SimplexError&) {
    if (!warm) throw;
    initial_basis(nullptr);  // fall back to the slack basis
    factorize();
  }
  compute_basic_values();
  fresh_ = true;

  const long max_iters = opts_.max_iters > 0 ? opts_.max_iters : 50L * (m_ + n_);
  const double d_tol = 1e-9;
  bool bland = opts_.bland_only;
  long stall = 0;
  double last_obj = kInf;
  bool last_phase1 = true;

  EngineResult res;
  long iter = 0;
  for (;; ++iter) {
    if (iter >= max_iters) {
      res.status = SolveStatus::IterationLimit;
      break;
    }
    if (pivots_since_factor_ >= 64) {
      factorize();
      compute_basic_values();
      fresh_ = true;
    }

    bool phase1 = any_infeasible();

    double obj = phase_objective(phase1);
#ifdef STLTUBE_SIMPLEX_TRACE
    if (iter % 1 == 0)
      std::fprintf(stderr, "it %ld ph%d obj %.12g infeas %.3g bland %d fresh %d\n", iter,
                   phase1 ? 1 : 2, obj, infeasibility(), bland ? 1 : 0, fresh_ ? 1 : 0);
#endif
    if (!opts_.bland_only) {
      if (phase1 == last_phase1 && obj >= last_obj - 1e-12 * (1.0 + std::abs(last_obj))) {
        if (++stall > 100) bland = true;
      } else {
        stall = 0;
        bland = false;
      }
      last_obj = obj;
      last_phase1 = phase1;
    }

    Vec cb;
    phase_costs(cb, phase1);
    Vec y = cb;
    btran(y);

    // entering variable
    int q = -1;
    int sigma = 0;
    double best_score = d_tol;
    for (int j = 0; j < total_; ++j) {
      if (stat_[j] == VStat::Basic) continue;
      if (lo_[j] == up_[j]) continue;  // fixed
      double d = reduced_cost(j, y, phase1);
      int sgn = 0;
      if (stat_[j] == VStat::AtLower) {
        if (d < -d_tol) sgn = +1;
      } else if (stat_[j] == VStat::AtUpper) {
        if (d > d_tol) sgn = -1;
      } else {  // free at zero
        if (d < -d_tol)
          sgn = +1;
        else if (d > d_tol)
          sgn = -1;
      }
      if (sgn == 0) continue;
      if (bland) {
        q = j;
        sigma = sgn;
        break;
      }
      double score = std::abs(d);
      if (score > best_score) {
        best_score = score;
        q = j;
        sigma = sgn;
      }
    }

    if (q < 0) {
      // confirm the verdict on freshly recomputed basic values
      if (!fresh_) {
        factorize();
        compute_basic_values();
        fresh_ = true;
        continue;
      }
      res.status = phase1 ? SolveStatus::Infeasible : SolveStatus::Optimal;
      break;
    }

    Vec w = column_dense(q);
    ftran(w);

    // ratio test
    double flip_delta = kInf;
    if (std::isfinite(lo_[q]) && std::isfinite(up_[q])) flip_delta = up_[q] - lo_[q];

    struct Cand {
      int pos;
      double delta;
      double absw;
      double land;
    };
    std::vector<Cand> cands;
    cands.reserve(16);
    double min_pivot_delta = kInf;
    for (int i = 0; i < m_; ++i) {
      double wi = w[i];
      double aw = std::abs(wi);
      if (aw < opts_.pivot_tol) continue;
      double rate = -sigma * wi;
      int bj = basic_[i];
      double v = x_[bj];
      double vtol = opts_.feas_tol * (1.0 + std::abs(v));
      double delta = std::nan("");
      double land = 0.0;
      if (v < lo_[bj] - vtol) {
        if (rate > 0) {
          delta = (lo_[bj] - v) / rate;
          land = lo_[bj];
        }
      } else if (v > up_[bj] + vtol) {
        if (rate < 0) {
          delta = (up_[bj] - v) / rate;
          land = up_[bj];
        }
      } else if (rate > 0 && std::isfinite(up_[bj])) {
        delta = (up_[bj] - v) / rate;
        land = up_[bj];
      } else if (rate < 0 && std::isfinite(lo_[bj])) {
        delta = (v - lo_[bj]) / (-rate);
        land = lo_[bj];
      }
      if (std::isnan(delta)) continue;  // no blocking event in this direction
      if (delta < 0.0) delta = 0.0;     // absorb drift on degenerate events
      cands.push_back({i, delta, aw, land});
      min_pivot_delta = std::min(min_pivot_delta, delta);
    }

    if (!std::isfinite(min_pivot_delta) && !std::isfinite(flip_delta)) {
      if (phase1)
        throw SimplexError("simplex: unbounded phase-1 ray (numerical failure)");
      res.status = SolveStatus::Unbounded;
      break;
    }

    const double tie = 1e-12 + 1e-12 * std::min(min_pivot_delta, flip_delta);
    if (flip_delta < min_pivot_delta - tie) {
      // entering variable hits its opposite bound before any basic blocks
      x_[q] = stat_[q] == VStat::AtLower ? up_[q] : lo_[q];
      stat_[q] = stat_[q] == VStat::AtLower ? VStat::AtUpper : VStat::AtLower;
      for (int i = 0; i < m_; ++i)
        if (w[i] != 0.0) x_[basic_[i]] -= sigma * flip_delta * w[i];
      fresh_ = false;
      continue;
    }

    // choose the leaving row among candidates near the minimum step:
    // largest pivot magnitude normally, lowest variable index under Bland
    int pick = -1;
    double land = 0.0, delta = 0.0;
    if (bland) {
      int best_var = total_;
      for (const auto& cd : cands) {
        if (cd.delta > min_pivot_delta + tie) continue;
        if (basic_[cd.pos] < best_var) {
          best_var = basic_[cd.pos];
          pick = cd.pos;
          land = cd.land;
          delta = cd.delta;
        }
      }
    } else {
      double pick_absw = 0.0;
      for (const auto& cd : cands) {
        if (cd.delta > min_pivot_delta + tie) continue;
        if (cd.absw > pick_absw) {
          pick_absw = cd.absw;
          pick = cd.pos;
          land = cd.land;
          delta = cd.delta;
        }
      }
    }
    if (pick < 0) throw SimplexError("simplex: ratio test failed to select a pivot");
    int bl = basic_[pick];
    double xq_new = (stat_[q] == VStat::AtLower   ? lo_[q]
                     : stat_[q] == VStat::AtUpper ? up_[q]
                                                  : 0.0) +
                    sigma * delta;
    for (int i = 0; i < m_; ++i)
      if (w[i] != 0.0) x_[basic_[i]] -= sigma * delta * w[i];
    x_[bl] = land;  // absorb roundoff at the leaving bound
    x_[q] = xq_new;

    stat_[bl] = (land == lo_[bl]) ? VStat::AtLower : VStat::AtUpper;
    stat_[q] = VStat::Basic;
    basic_[pick] = q;
    basic_pos_[bl] = -1;
    basic_pos_[q] = pick;

    etas_.push_back({pick, w});
    ++pivots_since_factor_;
    fresh_ = false;
  }

  res.iterations = iter;
  res.x = x_;

  // final duals and reduced costs against the phase-2 objective
  Vec cb;
  phase_costs(cb, false);
  res.y = cb;
  btran(res.y);
  res.d.resize(total_);
  for (int j = 0; j < total_; ++j)
    res.d[j] = stat_[j] == VStat::Basic ? 0.0 : reduced_cost(j, res.y, false);

  res.obj_internal = phase_objective(false);
  double dual_obj = m_ > 0 ? res.y.dot(sf_.b) : 0.0;
  for (int j = 0; j < total_; ++j) {
    if (stat_[j] == VStat::Basic || x_[j] == 0.0) continue;
    dual_obj += res.d[j] * x_[j];
  }
  res.dual_obj_internal = dual_obj;
  return res;
}

Solution finish_lp_solution(const OptModel& model, const StandardForm& sf,
                            const EngineResult& er) {
  Solution sol;
  sol.status = er.status;
  sol.iterations = er.iterations;
  const double sense = sf.maximize ? -1.0 : 1.0;

  sol.x.resize(sf.n);
  for (int j = 0; j < sf.n; ++j) sol.x[j] = er.x[j];
  sol.duals.resize(sf.m);
  for (int i = 0; i < sf.m; ++i) sol.duals[i] = sense * er.y[i];

  sol.objective = sense * er.obj_internal + sf.c0;
  sol.dual_objective = sense * er.dual_obj_internal + sf.c0;

  if (er.status != SolveStatus::Optimal) return sol;

  // primal residual: row activity and bound violations
  double pres = 0.0;
  for (int i = 0; i < sf.m; ++i) {
    double act = 0.0;
    for (const auto& t : model.row(i).terms) act += t.coef * sol.x[t.var];
    double viol = 0.0;
    switch (model.row(i).sense) {
      case RowSense::LE: viol = act - model.row(i).rhs; break;
      case RowSense::GE: viol = model.row(i).rhs - act; break;
      case RowSense::EQ: viol = std::abs(act - model.row(i).rhs); break;
    }
    pres = std::max(pres, viol / (1.0 + std::abs(model.row(i).rhs)));
  }
  for (int j = 0; j < sf.n; ++j) {
    double scale = 1.0 + std::abs(sol.x[j]);
    if (std::isfinite(model.var(j).lo)) pres = std::max(pres, (model.var(j).lo - sol.x[j]) / scale);
    if (std::isfinite(model.var(j).up)) pres = std::max(pres, (sol.x[j] - model.var(j).up) / scale);
  }
  sol.primal_residual = std::max(pres, 0.0);

  // dual feasibility and complementary slackness (internal min sense)
  double dres = 0.0, cs = 0.0;
  for (int j = 0; j < sf.n + sf.m; ++j) {
    double d = er.d[j];
    double xv = er.x[j];
    double lo = j < sf.n ? model.var(j).lo : sf.lo[j];
    double up = j < sf.n ? model.var(j).up : sf.up[j];
    double dist_lo = std::isfinite(lo) ? std::abs(xv - lo) : kInf;
    double dist_up = std::isfinite(up) ? std::abs(xv - up) : kInf;
    if (d > 0) {
      // must be at lower to be optimal
      dres = std::max(dres, std::isfinite(lo) ? 0.0 : d);
      cs = std::max(cs, std::min(d, 1.0) * std::min(dist_lo, 1e6));
    } else if (d < 0) {
      dres = std::max(dres, std::isfinite(up) ? 0.0 : -d);
      cs = std::max(cs, std::min(-d, 1.0) * std::min(dist_up, 1e6));
    }
  }
  sol.dual_residual = dres;
  sol.compl_slack_residual = cs;
  sol.duality_gap_rel =
      std::abs(sol.objective - sol.dual_objective) / (1.0 + std::abs(sol.objective));

  atomic_max(g_max_gap, sol.duality_gap_rel);
  atomic_max(g_max_primal, sol.primal_residual);
  atomic_max(g_max_dual, sol.dual_residual);
  return sol;
}

EngineResult run_simplex(const StandardForm& sf, const SolveOptions& opts,
                         const std::vector<double>* lo_override,
                         const std::vector<double>* up_override, const Basis* warm,
                         Basis* out_basis) {
  SimplexEngine eng(sf, opts);
  if (lo_override && up_override) eng.set_structural_bounds(*lo_override, *up_override);
  EngineResult er = eng.solve(warm);
  if (out_basis) *out_basis = eng.final_basis();
  return er;
}

}  // namespace detail

Solution solve_lp(const OptModel& m, const SolveOptions& opts) {
  if (m.num_binaries() > 0)
    throw std::invalid_argument("solve_lp: model contains binaries; use solve_milp");
  auto sf = detail::StandardForm::build(m);
  auto er = detail::run_simplex(sf, opts, nullptr, nullptr, nullptr, nullptr);
  return detail::finish_lp_solution(m, sf, er);
}

}  // namespace stltube::opt
