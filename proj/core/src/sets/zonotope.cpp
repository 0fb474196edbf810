#include "stltube/sets/zonotope.hpp"

#include <stdexcept>

namespace stltube {

Zonotope::Zonotope(Vec center, Mat generators)
    : c_(std::move(center)), G_(std::move(generators)) {
  if (G_.size() == 0 && G_.rows() != c_.size()) G_.resize(c_.size(), 0);
  if (G_.rows() != c_.size())
    throw std::invalid_argument("Zonotope: generator rows do not match center dimension");
  if (!c_.allFinite() || !G_.allFinite())
    throw std::invalid_argument("Zonotope: non-finite entries");
}

Zonotope Zonotope::from_box(const Vec& lo, const Vec& hi) {
  if (lo.size() != hi.size()) throw std::invalid_argument("from_box: size mismatch");
  Vec c = 0.5 * (lo + hi);
  Vec r = 0.5 * (hi - lo);
  if ((r.array() < 0).any()) throw std::invalid_argument("from_box: lower above upper");
  Mat G = r.asDiagonal();
  return Zonotope(c, G);
}

Vec Zonotope::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec b(num_generators());
  for (int j = 0; j < b.size(); ++j) b[j] = u(rng);
  return at(b);
}

Vec Zonotope::sample_extreme(std::mt19937_64& rng) const {
  Vec b(num_generators());
  for (int j = 0; j < b.size(); ++j) b[j] = (rng() & 1u) ? 1.0 : -1.0;
  return at(b);
}

Zonotope minkowski(const Zonotope& a, const Zonotope& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("minkowski: dimension mismatch");
  Mat G(a.dim(), a.num_generators() + b.num_generators());
  G << a.generators(), b.generators();
  return Zonotope(a.center() + b.center(), G);
}

Zonotope affine_map(const Mat& A, const Vec& b, const Zonotope& z) {
  if (A.cols() != z.dim()) throw std::invalid_argument("affine_map: dimension mismatch");
  if (b.size() != A.rows()) throw std::invalid_argument("affine_map: offset dimension mismatch");
  return Zonotope(A * z.center() + b, A * z.generators());
}

std::pair<Vec, Vec> interval_hull(const Zonotope& z) {
  Vec r = z.generators().cwiseAbs().rowwise().sum();
  return {z.center() - r, z.center() + r};
}

}  // namespace stltube
