#pragma once

#include "stltube/linalg.hpp"

namespace stltube {

/* H-polytope { x : H x <= h }. */
class HPolytope {
 public:
  HPolytope() = default;
  HPolytope(Mat H, Vec h);

  static HPolytope from_box(const Vec& lo, const Vec& hi);

  const Mat& H() const { return H_; }
  const Vec& h() const { return h_; }
  int dim() const { return static_cast<int>(H_.cols()); }
  int rows() const { return static_cast<int>(H_.rows()); }

  bool contains(const Vec& x, double tol = 1e-9) const;

 private:
  Mat H_;
  Vec h_;
};

}  // namespace stltube
