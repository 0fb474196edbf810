#include "stltube/milp/encode.hpp"

#include <algorithm>
#include <stdexcept>

namespace stltube::milp {

using opt::LinExpr;
using opt::OptModel;
using opt::RowSense;
using opt::RowTag;
using stl::FormulaPtr;
using stl::NodeType;

void index_paths(const FormulaPtr& f, std::map<const stl::Formula*, std::string>& out,
                 const std::string& prefix) {
  out[f.get()] = prefix;
  for (size_t k = 0; k < f->children.size(); ++k)
    index_paths(f->children[k], out, prefix + "/" + std::to_string(k));
}

namespace {

std::pair<double, double> pred_interval(const stl::Predicate& p, int t,
                                        const net::ReachBounds& rb) {
  double lo = -p.bound, hi = -p.bound;
  for (const auto& [v, c] : p.terms) {
    const IntervalBox& box = v.kind == stl::SignalKind::State ? rb.x[v.subsystem][t]
                                                              : rb.u[v.subsystem][t];
    double a = c * box.lo[v.component];
    double b = c * box.hi[v.component];
    lo += std::min(a, b);
    hi += std::max(a, b);
  }
  return {lo, hi};
}

}  // namespace

std::pair<double, double> robustness_interval(const FormulaPtr& f, int t,
                                              const net::ReachBounds& rb,
                                              const net::Network& net) {
  switch (f->type) {
    case NodeType::Pred:
      return pred_interval(f->pred, t, rb);
    case NodeType::Not: {
      auto [lo, hi] = robustness_interval(f->children[0], t, rb, net);
      return {-hi, -lo};
    }
    case NodeType::And: {
      double lo = kInf, hi = kInf;
      for (const auto& c : f->children) {
        auto [l, h] = robustness_interval(c, t, rb, net);
        lo = std::min(lo, l);
        hi = std::min(hi, h);
      }
      return {lo, hi};
    }
    case NodeType::Or: {
      double lo = -kInf, hi = -kInf;
      for (const auto& c : f->children) {
        auto [l, h] = robustness_interval(c, t, rb, net);
        lo = std::max(lo, l);
        hi = std::max(hi, h);
      }
      return {lo, hi};
    }
    case NodeType::Always: {
      double lo = kInf, hi = kInf;
      for (int tp = t + f->a; tp <= t + f->b; ++tp) {
        auto [l, h] = robustness_interval(f->children[0], tp, rb, net);
        lo = std::min(lo, l);
        hi = std::min(hi, h);
      }
      return {lo, hi};
    }
    case NodeType::Eventually: {
      double lo = -kInf, hi = -kInf;
      for (int tp = t + f->a; tp <= t + f->b; ++tp) {
        auto [l, h] = robustness_interval(f->children[0], tp, rb, net);
        lo = std::max(lo, l);
        hi = std::max(hi, h);
      }
      return {lo, hi};
    }
    case NodeType::Until: {
      double lo = -kInf, hi = -kInf;
      double plo = kInf, phi = kInf;
      for (int tp = t; tp <= t + f->b; ++tp) {
        auto [l1, h1] = robustness_interval(f->children[0], tp, rb, net);
        plo = std::min(plo, l1);
        phi = std::min(phi, h1);
        if (tp < t + f->a) continue;
        auto [l2, h2] = robustness_interval(f->children[1], tp, rb, net);
        lo = std::max(lo, std::min(plo, l2));
        hi = std::max(hi, std::min(phi, h2));
      }
      return {lo, hi};
    }
  }
  throw std::logic_error("robustness_interval: unreachable");
}

SignalVars declare_nominal_signals(OptModel& m, const net::Network& net,
                                   const net::ReachBounds& rb) {
  SignalVars sv;
  const int eta = net.size();
  const int h = net.horizon;
  sv.x.resize(eta);
  sv.u.resize(eta);
  for (int i = 0; i < eta; ++i) {
    const auto& s = net.subs[i];
    sv.x[i].resize(h + 1);
    for (int t = 0; t <= h; ++t) {
      for (int k = 0; k < s.n; ++k) {
        double lo = t == 0 ? s.x_init[k] : rb.x[i][t].lo[k];
        double hi = t == 0 ? s.x_init[k] : rb.x[i][t].hi[k];
        sv.x[i][t].push_back(m.add_var(lo, hi));
      }
      // polytopic state bounds (redundant for the default boxes but exact in general)
      if (t > 0) {
        for (int r = 0; r < s.X[t].rows(); ++r) {
          LinExpr e;
          for (int k = 0; k < s.n; ++k)
            if (s.X[t].H()(r, k) != 0.0) e += LinExpr::var(sv.x[i][t][k], s.X[t].H()(r, k));
          m.add_row(e, RowSense::LE, s.X[t].h()[r], {"state_bounds", i, t});
        }
      }
    }
    sv.u[i].resize(h);
    for (int t = 0; t < h; ++t) {
      for (int k = 0; k < s.m; ++k)
        sv.u[i][t].push_back(m.add_var(rb.u[i][t].lo[k], rb.u[i][t].hi[k]));
      for (int r = 0; r < s.U[t].rows(); ++r) {
        LinExpr e;
        for (int k = 0; k < s.m; ++k)
          if (s.U[t].H()(r, k) != 0.0) e += LinExpr::var(sv.u[i][t][k], s.U[t].H()(r, k));
        m.add_row(e, RowSense::LE, s.U[t].h()[r], {"input_bounds", i, t});
      }
    }
  }
  // nominal dynamics: x(t+1) = A x(t) + B u(t) + couplings + W center
  for (int t = 0; t < h; ++t) {
    for (int i = 0; i < eta; ++i) {
      const auto& s = net.subs[i];
      for (int k = 0; k < s.n; ++k) {
        LinExpr e = LinExpr::var(sv.x[i][t + 1][k]);
        for (int d = 0; d < s.n; ++d)
          if (s.A[t](k, d) != 0.0) e += LinExpr::var(sv.x[i][t][d], -s.A[t](k, d));
        for (int d = 0; d < s.m; ++d)
          if (s.B[t](k, d) != 0.0) e += LinExpr::var(sv.u[i][t][d], -s.B[t](k, d));
        for (const auto& [j, c] : s.couplings) {
          if (c.A)
            for (int d = 0; d < net.subs[j].n; ++d)
              if ((*c.A)[t](k, d) != 0.0) e += LinExpr::var(sv.x[j][t][d], -(*c.A)[t](k, d));
          if (c.B)
            for (int d = 0; d < net.subs[j].m; ++d)
              if ((*c.B)[t](k, d) != 0.0) e += LinExpr::var(sv.u[j][t][d], -(*c.B)[t](k, d));
        }
        m.add_row(e, RowSense::EQ, s.W[t].center()[k], {"dynamics", i, t});
      }
    }
  }
  return sv;
}

int encode_formula(const FormulaPtr& f, int t, EncodingContext& ctx, OptModel& m,
                   const net::Network& net) {
  auto key = std::make_pair(f.get(), t);
  if (auto it = ctx.zmap.find(key); it != ctx.zmap.end()) return it->second;

  auto conjunction = [&](const std::vector<int>& zs) {
    int z = m.add_var(0.0, 1.0);
    LinExpr lower = LinExpr::var(z);  // z >= sum z_i - (n-1)
    for (int zi : zs) lower += LinExpr::var(zi, -1.0);
    m.add_row(lower, RowSense::GE, 1.0 - static_cast<double>(zs.size()), {"stl_comb", -1, t});
    for (int zi : zs)
      m.add_row(LinExpr::var(z) - LinExpr::var(zi), RowSense::LE, 0.0, {"stl_comb", -1, t});
    return z;
  };
  auto disjunction = [&](const std::vector<int>& zs) {
    int z = m.add_var(0.0, 1.0);
    LinExpr upper = LinExpr::var(z);  // z <= sum z_i
    for (int zi : zs) upper += LinExpr::var(zi, -1.0);
    m.add_row(upper, RowSense::LE, 0.0, {"stl_comb", -1, t});
    for (int zi : zs)
      m.add_row(LinExpr::var(z) - LinExpr::var(zi), RowSense::GE, 0.0, {"stl_comb", -1, t});
    return z;
  };

  int result = -1;
  switch (f->type) {
    case NodeType::Not:
      throw std::invalid_argument("encode_formula: formula must be negation-free");
    case NodeType::Pred: {
      const auto& p = f->pred;
      // inputs end one step before states do
      for (const auto& [v, c] : p.terms)
        if (v.kind == stl::SignalKind::Input &&
            t >= static_cast<int>(ctx.signals.u[v.subsystem].size()))
          throw std::invalid_argument("encode_formula: input predicate beyond horizon");
      auto [ylo, yhi] = pred_interval(p, t, *ctx.reach);
      double need_a = ctx.rho_hi - ylo;                     // z = 0 branch of the lower pair
      double need_b = yhi - ctx.rho_lo + ctx.opts.eps_strict;  // z = 1 branch of the strict pair
      double need = std::max({need_a, need_b, 1e-6});
      double M = ctx.opts.big_m_margin * need;
      if (ctx.opts.big_m_override) {
        if (*ctx.opts.big_m_override < need)
          throw std::invalid_argument(
              "encode_formula: configured big-M is below the interval-hull bound " +
              std::to_string(need));
        M = *ctx.opts.big_m_override;
      }
      int z = m.add_var(0.0, 1.0, opt::VarKind::Binary);
      LinExpr y(-p.bound);
      for (const auto& [v, c] : p.terms) {
        int var = v.kind == stl::SignalKind::State ? ctx.signals.x[v.subsystem][t][v.component]
                                                   : ctx.signals.u[v.subsystem][t][v.component];
        y += LinExpr::var(var, c);
      }
      // y + M(1 - z) >= rho
      m.add_row(LinExpr::var(ctx.rho_var) - y + LinExpr::var(z, M), RowSense::LE, M,
                {"stl_bigm", -1, t});
      // y - M z <= rho - eps  (strict half realized with eps slack)
      m.add_row(y - LinExpr::var(z, M) - LinExpr::var(ctx.rho_var), RowSense::LE,
                -ctx.opts.eps_strict, {"stl_bigm", -1, t});
      ctx.predicates.push_back({f.get(), ctx.paths.at(f.get()), t, z, M, ylo, yhi});
      result = z;
      break;
    }
    case NodeType::And: {
      std::vector<int> zs;
      for (const auto& c : f->children) zs.push_back(encode_formula(c, t, ctx, m, net));
      result = conjunction(zs);
      break;
    }
    case NodeType::Or: {
      std::vector<int> zs;
      for (const auto& c : f->children) zs.push_back(encode_formula(c, t, ctx, m, net));
      result = disjunction(zs);
      break;
    }
    case NodeType::Always: {
      std::vector<int> zs;
      for (int tp = t + f->a; tp <= t + f->b; ++tp)
        zs.push_back(encode_formula(f->children[0], tp, ctx, m, net));
      result = zs.size() == 1 ? zs[0] : conjunction(zs);
      break;
    }
    case NodeType::Eventually: {
      std::vector<int> zs;
      for (int tp = t + f->a; tp <= t + f->b; ++tp)
        zs.push_back(encode_formula(f->children[0], tp, ctx, m, net));
      result = zs.size() == 1 ? zs[0] : disjunction(zs);
      break;
    }
    case NodeType::Until: {
      std::vector<int> disj;
      for (int tp = t + f->a; tp <= t + f->b; ++tp) {
        std::vector<int> conj;
        conj.push_back(encode_formula(f->children[1], tp, ctx, m, net));
        for (int ts = t; ts <= tp; ++ts)
          conj.push_back(encode_formula(f->children[0], ts, ctx, m, net));
        disj.push_back(conjunction(conj));
      }
      result = disj.size() == 1 ? disj[0] : disjunction(disj);
      break;
    }
  }
  ctx.zmap[key] = result;
  return result;
}

}  // namespace stltube::milp
