#pragma once

#include <Eigen/Dense>
#include <limits>

namespace stltube {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

/* Closed interval box, used for forward reachability bounds. */
struct IntervalBox {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }

  static IntervalBox point(const Vec& x) { return {x, x}; }

  IntervalBox affine(const Mat& A, const Vec& b) const {
    Vec c = 0.5 * (lo + hi);
    Vec r = 0.5 * (hi - lo);
    Vec cc = A * c + b;
    Vec rr = A.cwiseAbs() * r;
    return {cc - rr, cc + rr};
  }

  IntervalBox sum(const IntervalBox& o) const { return {lo + o.lo, hi + o.hi}; }

  IntervalBox intersect(const IntervalBox& o) const {
    return {lo.cwiseMax(o.lo), hi.cwiseMin(o.hi)};
  }
};

}  // namespace stltube
