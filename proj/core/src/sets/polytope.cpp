#include "stltube/sets/polytope.hpp"

#include <stdexcept>

namespace stltube {

HPolytope::HPolytope(Mat H, Vec h) : H_(std::move(H)), h_(std::move(h)) {
  if (H_.rows() < 1) throw std::invalid_argument("HPolytope: needs at least one row");
  if (H_.rows() != h_.size()) throw std::invalid_argument("HPolytope: row count mismatch");
  if (!H_.allFinite() || !h_.allFinite())
    throw std::invalid_argument("HPolytope: non-finite entries");
}

HPolytope HPolytope::from_box(const Vec& lo, const Vec& hi) {
  const int n = static_cast<int>(lo.size());
  if (hi.size() != n) throw std::invalid_argument("from_box: size mismatch");
  Mat H(2 * n, n);
  Vec h(2 * n);
  H.setZero();
  for (int i = 0; i < n; ++i) {
    H(i, i) = 1.0;
    h(i) = hi(i);
    H(n + i, i) = -1.0;
    h(n + i) = -lo(i);
  }
  return HPolytope(H, h);
}

bool HPolytope::contains(const Vec& x, double tol) const {
  return ((H_ * x - h_).array() <= tol).all();
}

}  // namespace stltube
