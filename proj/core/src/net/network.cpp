#include "stltube/net/network.hpp"

#include <sstream>
#include <stdexcept>

#include "stltube/opt/model.hpp"
#include "stltube/sets/containment.hpp"

namespace stltube::net {

stl::Signature Network::signature() const {
  stl::Signature sig;
  sig.reserve(subs.size());
  for (const auto& s : subs) sig.push_back({s.n, s.m});
  return sig;
}

Aggregate aggregate(const Network& net) {
  Aggregate agg;
  agg.horizon = net.horizon;
  const int eta = net.size();
  agg.x_off.resize(eta);
  agg.u_off.resize(eta);
  for (int i = 0; i < eta; ++i) {
    agg.x_off[i] = agg.n;
    agg.u_off[i] = agg.m;
    agg.n += net.subs[i].n;
    agg.m += net.subs[i].m;
  }
  agg.x_init.resize(agg.n);
  for (int i = 0; i < eta; ++i) agg.x_init.segment(agg.x_off[i], net.subs[i].n) = net.subs[i].x_init;

  for (int t = 0; t < net.horizon; ++t) {
    Mat A = Mat::Zero(agg.n, agg.n);
    Mat B = Mat::Zero(agg.n, agg.m);
    for (int i = 0; i < eta; ++i) {
      const auto& s = net.subs[i];
      A.block(agg.x_off[i], agg.x_off[i], s.n, s.n) = s.A[t];
      B.block(agg.x_off[i], agg.u_off[i], s.n, s.m) = s.B[t];
      for (const auto& [j, c] : s.couplings) {
        if (c.A) A.block(agg.x_off[i], agg.x_off[j], s.n, net.subs[j].n) = (*c.A)[t];
        if (c.B) B.block(agg.x_off[i], agg.u_off[j], s.n, net.subs[j].m) = (*c.B)[t];
      }
    }
    agg.A.push_back(std::move(A));
    agg.B.push_back(std::move(B));
  }

  auto stack_polytopes = [&](auto pick, int total, const std::vector<int>& off, int count) {
    std::vector<HPolytope> out;
    for (int t = 0; t < count; ++t) {
      int rows = 0;
      for (int i = 0; i < eta; ++i) rows += pick(i, t).rows();
      Mat H = Mat::Zero(rows, total);
      Vec h(rows);
      int r = 0;
      for (int i = 0; i < eta; ++i) {
        const HPolytope& P = pick(i, t);
        H.block(r, off[i], P.rows(), P.dim()) = P.H();
        h.segment(r, P.rows()) = P.h();
        r += P.rows();
      }
      out.emplace_back(std::move(H), std::move(h));
    }
    return out;
  };
  agg.X = stack_polytopes([&](int i, int t) -> const HPolytope& { return net.subs[i].X[t]; },
                          agg.n, agg.x_off, net.horizon + 1);
  agg.U = stack_polytopes([&](int i, int t) -> const HPolytope& { return net.subs[i].U[t]; },
                          agg.m, agg.u_off, net.horizon);

  for (int t = 0; t < net.horizon; ++t) {
    Vec c(agg.n);
    int cols = 0;
    for (int i = 0; i < eta; ++i) cols += net.subs[i].W[t].num_generators();
    Mat G = Mat::Zero(agg.n, cols);
    int gc = 0;
    for (int i = 0; i < eta; ++i) {
      const auto& w = net.subs[i].W[t];
      c.segment(agg.x_off[i], net.subs[i].n) = w.center();
      G.block(agg.x_off[i], gc, net.subs[i].n, w.num_generators()) = w.generators();
      gc += w.num_generators();
    }
    agg.W.emplace_back(std::move(c), std::move(G));
  }
  return agg;
}

std::vector<std::string> validate(const Network& net) {
  std::vector<std::string> out;
  auto err = [&](const std::string& s) { out.push_back(s); };
  const int h = net.horizon;
  if (h < 1) err("horizon must be at least 1");
  for (int i = 0; i < net.size(); ++i) {
    const auto& s = net.subs[i];
    std::string who = "subsystem " + std::to_string(i);
    if (s.n < 1 || s.m < 0) err(who + ": bad dimensions");
    if (s.x_init.size() != s.n) err(who + ": x_init dimension mismatch");
    auto check_seq = [&](const auto& seq, int want, const std::string& name) {
      if (static_cast<int>(seq.size()) != want)
        err(who + ": " + name + " must cover " + std::to_string(want) + " steps, has " +
            std::to_string(seq.size()));
    };
    check_seq(s.A, h, "A");
    check_seq(s.B, h, "B");
    check_seq(s.X, h + 1, "X");
    check_seq(s.U, h, "U");
    check_seq(s.W, h, "W");
    for (int t = 0; t < static_cast<int>(s.A.size()); ++t)
      if (s.A[t].rows() != s.n || s.A[t].cols() != s.n)
        err(who + ": A shape mismatch at t=" + std::to_string(t));
    for (int t = 0; t < static_cast<int>(s.B.size()); ++t)
      if (s.B[t].rows() != s.n || s.B[t].cols() != s.m)
        err(who + ": B shape mismatch at t=" + std::to_string(t));
    for (int t = 0; t < static_cast<int>(s.W.size()); ++t)
      if (s.W[t].dim() != s.n) err(who + ": W dimension mismatch at t=" + std::to_string(t));
    for (const auto& [j, c] : s.couplings) {
      if (j < 0 || j >= net.size() || j == i) {
        err(who + ": coupling references invalid subsystem " + std::to_string(j));
        continue;
      }
      if (c.A) {
        if (static_cast<int>(c.A->size()) != h)
          err(who + ": coupling A(" + std::to_string(j) + ") must cover the horizon");
        for (int t = 0; t < static_cast<int>(c.A->size()); ++t)
          if ((*c.A)[t].rows() != s.n || (*c.A)[t].cols() != net.subs[j].n)
            err(who + ": coupling A shape mismatch at (i,j,t)=(" + std::to_string(i) + "," +
                std::to_string(j) + "," + std::to_string(t) + ")");
      }
      if (c.B) {
        if (static_cast<int>(c.B->size()) != h)
          err(who + ": coupling B(" + std::to_string(j) + ") must cover the horizon");
        for (int t = 0; t < static_cast<int>(c.B->size()); ++t)
          if ((*c.B)[t].rows() != s.n || (*c.B)[t].cols() != net.subs[j].m)
            err(who + ": coupling B shape mismatch at (i,j,t)=(" + std::to_string(i) + "," +
                std::to_string(j) + "," + std::to_string(t) + ")");
      }
    }
    if (!s.X.empty() && s.x_init.size() == s.n && !s.X[0].contains(s.x_init, 1e-9))
      err(who + ": x_init outside X(0)");
  }
  return out;
}

std::vector<Vec> step_network(const Network& net, const std::vector<Vec>& x,
                              const std::vector<Vec>& u, const std::vector<Vec>& w, int t) {
  std::vector<Vec> next(net.size());
  for (int i = 0; i < net.size(); ++i) {
    const auto& s = net.subs[i];
    Vec v = s.A[t] * x[i] + s.B[t] * u[i] + w[i];
    for (const auto& [j, c] : s.couplings) {
      if (c.A) v += (*c.A)[t] * x[j];
      if (c.B) v += (*c.B)[t] * u[j];
    }
    next[i] = v;
  }
  return next;
}

Vec step_aggregate(const Aggregate& agg, const Vec& x, const Vec& u, const Vec& w, int t) {
  return agg.A[t] * x + agg.B[t] * u + w;
}

IntervalBox polytope_hull(const HPolytope& P) {
  using namespace stltube::opt;
  IntervalBox box;
  box.lo = Vec::Constant(P.dim(), -kInf);
  box.hi = Vec::Constant(P.dim(), kInf);
  for (int k = 0; k < P.dim(); ++k) {
    for (int dir = 0; dir < 2; ++dir) {
      OptModel m;
      for (int d = 0; d < P.dim(); ++d) m.add_var(-kInf, kInf);
      for (int r = 0; r < P.rows(); ++r) {
        LinExpr e;
        for (int d = 0; d < P.dim(); ++d)
          if (P.H()(r, d) != 0.0) e += LinExpr::var(d, P.H()(r, d));
        m.add_row(e, RowSense::LE, P.h()[r]);
      }
      m.set_objective(dir == 0 ? ObjSense::Minimize : ObjSense::Maximize, LinExpr::var(k));
      m.freeze();
      auto s = solve_lp(m);
      if (s.status == SolveStatus::Optimal) {
        if (dir == 0)
          box.lo[k] = s.objective;
        else
          box.hi[k] = s.objective;
      } else if (s.status == SolveStatus::Infeasible) {
        throw std::runtime_error("polytope_hull: empty polytope");
      }
    }
  }
  return box;
}

ReachBounds reach_intervals(const Network& net) {
  ReachBounds rb;
  const int eta = net.size();
  rb.x.resize(eta);
  rb.u.resize(eta);
  std::vector<std::vector<IntervalBox>> xhull(eta), uhull(eta);
  for (int i = 0; i < eta; ++i) {
    for (int t = 0; t <= net.horizon; ++t) xhull[i].push_back(polytope_hull(net.subs[i].X[t]));
    for (int t = 0; t < net.horizon; ++t) rb.u[i].push_back(polytope_hull(net.subs[i].U[t]));
  }
  for (int i = 0; i < eta; ++i)
    rb.x[i].push_back(IntervalBox::point(net.subs[i].x_init).intersect(xhull[i][0]));
  for (int t = 0; t < net.horizon; ++t) {
    for (int i = 0; i < eta; ++i) {
      const auto& s = net.subs[i];
      IntervalBox nxt = rb.x[i][t].affine(s.A[t], Vec::Zero(s.n));
      nxt = nxt.sum(rb.u[i][t].affine(s.B[t], Vec::Zero(s.n)));
      for (const auto& [j, c] : s.couplings) {
        if (c.A) nxt = nxt.sum(rb.x[j][t].affine((*c.A)[t], Vec::Zero(s.n)));
        if (c.B) nxt = nxt.sum(rb.u[j][t].affine((*c.B)[t], Vec::Zero(s.n)));
      }
      auto [wlo, whi] = interval_hull(s.W[t]);
      nxt = nxt.sum(IntervalBox{wlo, whi});
      rb.x[i].push_back(nxt.intersect(xhull[i][t + 1]));
    }
  }
  return rb;
}

}  // namespace stltube::net
