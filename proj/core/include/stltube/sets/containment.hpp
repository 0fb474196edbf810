#pragma once

#include <optional>
#include <vector>

#include "stltube/opt/model.hpp"
#include "stltube/sets/polytope.hpp"
#include "stltube/sets/zonotope.hpp"

namespace stltube {

/* Zonotope whose center and generator entries are affine expressions of
 * model variables; the currency of every synthesis encoding. */
struct ModelZono {
  std::vector<opt::LinExpr> center;
  std::vector<std::vector<opt::LinExpr>> gens;  // one vector per generator column

  int dim() const { return static_cast<int>(center.size()); }
  int cols() const { return static_cast<int>(gens.size()); }

  static ModelZono constant(const Zonotope& z);
};

/* Certificate (Gamma, beta) of a zonotope-in-zonotope encoding. */
struct ContainmentCert {
  Mat gamma;
  Vec beta;
  double slack = 0.0;
};

struct ContainHandles {
  std::vector<std::vector<int>> gamma_pos, gamma_neg;  // [outer row][inner col]
  std::vector<int> beta_pos, beta_neg;
  int outer_cols = 0;  // template columns (excluding identity block)
  int ident_rows = 0;  // identity block rows (0 when no inflate)
  int dim = 0;
  int inner_cols = 0;
};

/*
 * Sufficient linear condition for
 *   inner  subset of  Z(outer_center, [outer_G * Diag(scales), inflate * I]).
 *
 * Uses the row-scaled certificate substitution: with G' = Gamma rows scaled
 * by their outer column's factor, the standard condition
 *   inner.G = [outer_G Diag(s), d I] Gamma,  ||[Gamma beta]||_inf <= 1 (row-wise)
 * becomes  inner.G = [outer_G, I] G'  with row norms bounded by the scales
 * themselves, which is linear jointly in G', the scales, and the inflate
 * variable.  Scales must be nonnegative.
 */
ContainHandles encode_zono_in_template(opt::OptModel& m, const ModelZono& inner,
                                       const std::vector<opt::LinExpr>& outer_center,
                                       const Mat& outer_G,
                                       const std::vector<opt::LinExpr>& scales,
                                       const opt::LinExpr* inflate, opt::RowTag tag = {});

/* Classic fixed-outer form; rejects model-variable outer generators by type. */
ContainHandles encode_zono_in_zono(opt::OptModel& m, const ModelZono& inner,
                                   const Zonotope& outer, const opt::LinExpr* inflate = nullptr,
                                   opt::RowTag tag = {});

/* Exact support-function condition H_k c + sum_j |H_k g_j| <= h_k (+ inflate ||H_k||_1). */
void encode_zono_in_polytope(opt::OptModel& m, const ModelZono& inner, const HPolytope& outer,
                             const opt::LinExpr* inflate = nullptr, opt::RowTag tag = {});

/* Minimal d >= 0 with z subset of target (+) Z(0, d I); 0 iff contained. */
double directed_hausdorff(const Zonotope& target, const Zonotope& z);
double directed_hausdorff(const HPolytope& target, const Zonotope& z);

/* Membership via the feasibility LP c + G b = x, ||b||_inf <= 1 + tol. */
bool contains_point(const Zonotope& z, const Vec& x, double tol = 1e-7);

/* min ||b||_inf subject to G b = rhs; empty when the system is inconsistent. */
std::optional<Vec> min_inf_norm_solve(const Mat& G, const Vec& rhs);

ContainmentCert extract_cert(const ContainHandles& h, const opt::Solution& s);
/* Replays the certificate against the encoding equations; true within tol. */
bool replay_cert(const ContainmentCert& cert, const Zonotope& inner, const Zonotope& outer,
                 double inflate_value = 0.0, double tol = 1e-9);

}  // namespace stltube
