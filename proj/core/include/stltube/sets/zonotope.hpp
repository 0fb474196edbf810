#pragma once

#include <random>
#include <utility>

#include "stltube/linalg.hpp"

namespace stltube {

/**
 * Zonotope Z(c,G) = { c + G b : ||b||_inf <= 1 }.
 *
 * The generator matrix G is n x q; q = 0 encodes a singleton. Values are
 * immutable after construction and safe to share across threads.
 */
class Zonotope {
 public:
  Zonotope() = default;
  Zonotope(Vec center, Mat generators);

  static Zonotope singleton(const Vec& c) { return Zonotope(c, Mat(c.size(), 0)); }
  static Zonotope from_box(const Vec& lo, const Vec& hi);

  const Vec& center() const { return c_; }
  const Mat& generators() const { return G_; }
  int dim() const { return static_cast<int>(c_.size()); }
  int num_generators() const { return static_cast<int>(G_.cols()); }

  /* Sample a member point c + G b with b drawn uniformly from the unit box. */
  Vec sample(std::mt19937_64& rng) const;
  /* Sample a vertex-candidate point with b in {-1,+1}^q. */
  Vec sample_extreme(std::mt19937_64& rng) const;
  Vec at(const Vec& b) const { return c_ + G_ * b; }

 private:
  Vec c_;
  Mat G_;
};

Zonotope minkowski(const Zonotope& a, const Zonotope& b);
Zonotope affine_map(const Mat& A, const Vec& b, const Zonotope& z);

/* Componentwise bounds c - sum_i |g_i| .. c + sum_i |g_i|. */
std::pair<Vec, Vec> interval_hull(const Zonotope& z);

}  // namespace stltube
