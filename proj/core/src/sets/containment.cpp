#include "stltube/sets/containment.hpp"

#include <cmath>
#include <stdexcept>

namespace stltube {

using opt::LinExpr;
using opt::OptModel;
using opt::RowSense;
using opt::RowTag;

ModelZono ModelZono::constant(const Zonotope& z) {
  ModelZono mz;
  mz.center.reserve(z.dim());
  for (int k = 0; k < z.dim(); ++k) mz.center.emplace_back(z.center()[k]);
  mz.gens.resize(z.num_generators());
  for (int j = 0; j < z.num_generators(); ++j) {
    mz.gens[j].reserve(z.dim());
    for (int k = 0; k < z.dim(); ++k) mz.gens[j].emplace_back(z.generators()(k, j));
  }
  return mz;
}

ContainHandles encode_zono_in_template(OptModel& m, const ModelZono& inner,
                                       const std::vector<opt::LinExpr>& outer_center,
                                       const Mat& outer_G,
                                       const std::vector<opt::LinExpr>& scales,
                                       const opt::LinExpr* inflate, RowTag tag) {
  const int n = inner.dim();
  const int q = inner.cols();
  const int f = static_cast<int>(outer_G.cols());
  if (static_cast<int>(outer_center.size()) != n || (f > 0 && outer_G.rows() != n))
    throw std::invalid_argument("encode_zono_in_template: dimension mismatch");
  if (static_cast<int>(scales.size()) != f)
    throw std::invalid_argument("encode_zono_in_template: one scale per template column");

  ContainHandles h;
  h.dim = n;
  h.inner_cols = q;
  h.outer_cols = f;
  h.ident_rows = inflate ? n : 0;
  const int rows = f + h.ident_rows;

  h.gamma_pos.assign(rows, std::vector<int>(q));
  h.gamma_neg.assign(rows, std::vector<int>(q));
  h.beta_pos.resize(rows);
  h.beta_neg.resize(rows);
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < q; ++j) {
      h.gamma_pos[r][j] = m.add_var(0.0, kInf);
      h.gamma_neg[r][j] = m.add_var(0.0, kInf);
    }
    h.beta_pos[r] = m.add_var(0.0, kInf);
    h.beta_neg[r] = m.add_var(0.0, kInf);
  }

  // generator matching: inner.G[:,j] = [outer_G, I] * gamma'[:,j]
  for (int j = 0; j < q; ++j) {
    for (int k = 0; k < n; ++k) {
      LinExpr e;
      for (int r = 0; r < f; ++r) {
        double g = outer_G(k, r);
        if (g != 0.0) {
          e += LinExpr::var(h.gamma_pos[r][j], g);
          e += LinExpr::var(h.gamma_neg[r][j], -g);
        }
      }
      if (inflate) {
        e += LinExpr::var(h.gamma_pos[f + k][j]);
        e += LinExpr::var(h.gamma_neg[f + k][j], -1.0);
      }
      e -= inner.gens[j][k];
      m.add_row(e, RowSense::EQ, 0.0, tag);
    }
  }

  // center matching: outer_center - inner.center = [outer_G, I] * beta'
  for (int k = 0; k < n; ++k) {
    LinExpr e;
    for (int r = 0; r < f; ++r) {
      double g = outer_G(k, r);
      if (g != 0.0) {
        e += LinExpr::var(h.beta_pos[r], g);
        e += LinExpr::var(h.beta_neg[r], -g);
      }
    }
    if (inflate) {
      e += LinExpr::var(h.beta_pos[f + k]);
      e += LinExpr::var(h.beta_neg[f + k], -1.0);
    }
    e -= outer_center[k];
    e += inner.center[k];
    m.add_row(e, RowSense::EQ, 0.0, tag);
  }

  // row norms: sum_j |gamma'_rj| + |beta'_r| <= scale_r (template rows)
  //            <= inflate (identity rows)
  for (int r = 0; r < rows; ++r) {
    LinExpr e;
    for (int j = 0; j < q; ++j) {
      e += LinExpr::var(h.gamma_pos[r][j]);
      e += LinExpr::var(h.gamma_neg[r][j]);
    }
    e += LinExpr::var(h.beta_pos[r]);
    e += LinExpr::var(h.beta_neg[r]);
    if (r < f)
      e -= scales[r];
    else
      e -= *inflate;
    m.add_row(e, RowSense::LE, 0.0, tag);
  }
  return h;
}

ContainHandles encode_zono_in_zono(OptModel& m, const ModelZono& inner, const Zonotope& outer,
                                   const opt::LinExpr* inflate, RowTag tag) {
  if (inner.dim() != outer.dim())
    throw std::invalid_argument("encode_zono_in_zono: dimension mismatch");
  std::vector<LinExpr> oc;
  oc.reserve(outer.dim());
  for (int k = 0; k < outer.dim(); ++k) oc.emplace_back(outer.center()[k]);
  std::vector<LinExpr> ones(outer.num_generators(), LinExpr(1.0));
  return encode_zono_in_template(m, inner, oc, outer.generators(), ones, inflate, tag);
}

void encode_zono_in_polytope(OptModel& m, const ModelZono& inner, const HPolytope& outer,
                             const opt::LinExpr* inflate, RowTag tag) {
  const int n = inner.dim();
  if (outer.dim() != n) throw std::invalid_argument("encode_zono_in_polytope: dimension mismatch");
  const int q = inner.cols();
  for (int k = 0; k < outer.rows(); ++k) {
    LinExpr support;
    for (int d = 0; d < n; ++d)
      if (outer.H()(k, d) != 0.0) support += outer.H()(k, d) * inner.center[d];
    for (int j = 0; j < q; ++j) {
      LinExpr hg;
      for (int d = 0; d < n; ++d)
        if (outer.H()(k, d) != 0.0) hg += outer.H()(k, d) * inner.gens[j][d];
      int a = m.add_var(0.0, kInf);
      m.add_row(hg - LinExpr::var(a), RowSense::LE, 0.0, tag);
      m.add_row(-1.0 * hg - LinExpr::var(a), RowSense::LE, 0.0, tag);
      support += LinExpr::var(a);
    }
    if (inflate) support -= outer.H().row(k).cwiseAbs().sum() * (*inflate);
    m.add_row(support, RowSense::LE, outer.h()[k], tag);
  }
}

double directed_hausdorff(const Zonotope& target, const Zonotope& z) {
  if (target.dim() != z.dim()) throw std::invalid_argument("directed_hausdorff: dimension mismatch");
  OptModel m;
  int d = m.add_var(0.0, kInf);
  LinExpr dv = LinExpr::var(d);
  encode_zono_in_zono(m, ModelZono::constant(z), target, &dv);
  m.set_objective(opt::ObjSense::Minimize, dv);
  m.freeze();
  auto s = opt::solve_lp(m);
  if (s.status != opt::SolveStatus::Optimal)
    throw std::runtime_error("directed_hausdorff: LP failed");
  return std::max(0.0, s.objective);
}

double directed_hausdorff(const HPolytope& target, const Zonotope& z) {
  if (target.dim() != z.dim()) throw std::invalid_argument("directed_hausdorff: dimension mismatch");
  // support functions are exact here: d = max_k (H_k c + sum_j |H_k g_j| - h_k) / ||H_k||_1
  double d = 0.0;
  for (int k = 0; k < target.rows(); ++k) {
    double excess = target.H().row(k).dot(z.center()) +
                    (target.H().row(k) * z.generators()).cwiseAbs().sum() - target.h()[k];
    double denom = target.H().row(k).cwiseAbs().sum();
    if (denom <= 0.0) continue;
    d = std::max(d, excess / denom);
  }
  return d;
}

bool contains_point(const Zonotope& z, const Vec& x, double tol) {
  if (z.dim() != x.size()) throw std::invalid_argument("contains_point: dimension mismatch");
  if (z.num_generators() == 0)
    return (z.center() - x).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + x.cwiseAbs().maxCoeff());
  auto b = min_inf_norm_solve(z.generators(), x - z.center());
  return b.has_value() && b->cwiseAbs().maxCoeff() <= 1.0 + tol;
}

std::optional<Vec> min_inf_norm_solve(const Mat& G, const Vec& rhs) {
  const int n = static_cast<int>(G.rows());
  const int q = static_cast<int>(G.cols());
  if (rhs.size() != n) throw std::invalid_argument("min_inf_norm_solve: dimension mismatch");
  OptModel m;
  int t = m.add_var(0.0, kInf);
  std::vector<int> b(q);
  for (int j = 0; j < q; ++j) b[j] = m.add_var(-kInf, kInf);
  for (int k = 0; k < n; ++k) {
    LinExpr e;
    for (int j = 0; j < q; ++j)
      if (G(k, j) != 0.0) e += LinExpr::var(b[j], G(k, j));
    m.add_row(e, RowSense::EQ, rhs[k]);
  }
  for (int j = 0; j < q; ++j) {
    m.add_row(LinExpr::var(b[j]) - LinExpr::var(t), RowSense::LE, 0.0);
    m.add_row(-1.0 * LinExpr::var(b[j]) - LinExpr::var(t), RowSense::LE, 0.0);
  }
  m.set_objective(opt::ObjSense::Minimize, LinExpr::var(t));
  m.freeze();
  auto s = opt::solve_lp(m);
  if (s.status != opt::SolveStatus::Optimal) return std::nullopt;
  Vec out(q);
  for (int j = 0; j < q; ++j) out[j] = s.x[b[j]];
  return out;
}

ContainmentCert extract_cert(const ContainHandles& h, const opt::Solution& s) {
  const int rows = h.outer_cols + h.ident_rows;
  ContainmentCert cert;
  cert.gamma.resize(rows, h.inner_cols);
  cert.beta.resize(rows);
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < h.inner_cols; ++j)
      cert.gamma(r, j) = s.x[h.gamma_pos[r][j]] - s.x[h.gamma_neg[r][j]];
    cert.beta[r] = s.x[h.beta_pos[r]] - s.x[h.beta_neg[r]];
  }
  return cert;
}

bool replay_cert(const ContainmentCert& cert, const Zonotope& inner, const Zonotope& outer,
                 double inflate_value, double tol) {
  const int n = inner.dim();
  const int f = outer.num_generators();
  const bool ident = cert.gamma.rows() == f + n;
  Mat full(n, cert.gamma.rows());
  full.leftCols(f) = outer.generators();
  if (ident) full.rightCols(n) = Mat::Identity(n, n);

  Mat lhs = full * cert.gamma;
  if ((lhs - inner.generators()).cwiseAbs().maxCoeff() > tol) return false;
  Vec cc = full * cert.beta;
  if ((cc - (outer.center() - inner.center())).cwiseAbs().maxCoeff() > tol) return false;
  for (int r = 0; r < cert.gamma.rows(); ++r) {
    double norm = cert.gamma.row(r).cwiseAbs().sum() + std::abs(cert.beta[r]);
    double cap = r < f ? 1.0 : inflate_value;
    if (norm > cap + tol) return false;
  }
  return true;
}

}  // namespace stltube
