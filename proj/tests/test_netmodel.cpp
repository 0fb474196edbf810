#include <random>

#include "doctest.h"
#include "stltube/net/network.hpp"

using namespace stltube;
using namespace stltube::net;

TEST_CASE("power ring: discretized matrices match the hand Euler step") {
  PowerAreaParams p;  // paper defaults 110, 0.5, 25
  auto net = build_power_ring(3, p, 5);
  REQUIRE(net.size() == 3);
  const auto& s = net.subs[0];
  CHECK(s.A[0](0, 0) == doctest::Approx(1.0));
  CHECK(s.A[0](0, 1) == doctest::Approx(0.6283185307));
  CHECK(s.A[0](1, 0) == doctest::Approx(-0.070028175));
  CHECK(s.A[0](1, 1) == doctest::Approx(0.996));
  CHECK(s.B[0](0, 0) == doctest::Approx(0.0));
  CHECK(s.B[0](1, 0) == doctest::Approx(0.44));
  REQUIRE(s.couplings.size() == 2);
  for (const auto& [j, c] : s.couplings) {
    REQUIRE(c.A.has_value());
    CHECK((*c.A)[0](1, 0) == doctest::Approx(0.035014087));
    CHECK((*c.A)[0].cwiseAbs().sum() == doctest::Approx(0.035014087));
    CHECK(!c.B.has_value());
  }
  CHECK(s.W[0].generators()(1, 0) == doctest::Approx(4.4e-4));
  CHECK(s.x_init(0) == doctest::Approx(0.1));

  CHECK_THROWS_AS(build_power_ring(2, p, 5), std::invalid_argument);
}

TEST_CASE("power ring: zero load bound collapses W to a singleton") {
  PowerAreaParams p;
  p.omega_bound = 0.0;
  auto net = build_power_ring(3, p, 4);
  CHECK(net.subs[0].W[0].num_generators() == 0);
}

TEST_CASE("aggregate: single subsystem blocks equal the subsystem matrices") {
  PowerAreaParams p;
  auto net = build_power_ring(3, p, 4);
  net.subs[0].couplings.clear();
  Network single;
  single.horizon = 4;
  single.subs = {net.subs[0]};
  auto agg = aggregate(single);
  CHECK(agg.A[0].isApprox(net.subs[0].A[0]));
  CHECK(agg.B[0].isApprox(net.subs[0].B[0]));
  CHECK(agg.n == 2);
  CHECK(agg.m == 1);
}

TEST_CASE("aggregate: 3-ring has 3 diagonal and 6 coupling blocks") {
  auto net = build_power_ring(3, PowerAreaParams{}, 4);
  auto agg = aggregate(net);
  int diag = 0, offdiag = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      bool nonzero = agg.A[0].block(2 * i, 2 * j, 2, 2).cwiseAbs().sum() > 0;
      if (!nonzero) continue;
      (i == j ? diag : offdiag)++;
    }
  CHECK(diag == 3);
  CHECK(offdiag == 6);
}

TEST_CASE("aggregate vs per-subsystem simulation agree to 1e-12 (100 random runs)") {
  auto net = build_power_ring(4, PowerAreaParams{}, 6);
  auto agg = aggregate(net);
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (int run = 0; run < 100; ++run) {
    std::vector<Vec> x(net.size());
    for (int i = 0; i < net.size(); ++i) x[i] = net.subs[i].x_init;
    Vec xa = agg.x_init;
    for (int t = 0; t < net.horizon; ++t) {
      std::vector<Vec> uv(net.size()), wv(net.size());
      Vec ua(agg.m), wa(agg.n);
      for (int i = 0; i < net.size(); ++i) {
        uv[i] = Vec::Constant(1, u(rng));
        wv[i] = net.subs[i].W[t].sample(rng);
        ua.segment(agg.u_off[i], 1) = uv[i];
        wa.segment(agg.x_off[i], 2) = wv[i];
      }
      x = step_network(net, x, uv, wv, t);
      xa = step_aggregate(agg, xa, ua, wa, t);
      for (int i = 0; i < net.size(); ++i)
        CHECK((x[i] - xa.segment(agg.x_off[i], 2)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("Euler discretization: halving dt gives second-order step agreement") {
  // two half steps of the dt/2 model vs one step of the dt model, compared
  // at dt and dt/2: local error contracts by about 4
  auto step_err = [](double dt) {
    PowerAreaParams p;
    p.dt = dt;
    auto coarse = build_power_ring(3, p, 1);
    p.dt = dt / 2;
    auto fine = build_power_ring(3, p, 1);
    Mat Ac = coarse.subs[0].A[0];
    Mat Af = fine.subs[0].A[0];
    return (Af * Af - Ac).cwiseAbs().maxCoeff();
  };
  double e1 = step_err(0.1);
  double e2 = step_err(0.05);
  CHECK(e1 / e2 > 2.5);
  CHECK(e1 / e2 < 6.0);
}

TEST_CASE("validate: well-formed, bad x_init, shape mismatch") {
  auto net = build_power_ring(3, PowerAreaParams{}, 4);
  CHECK(validate(net).empty());

  auto bad1 = net;
  bad1.subs[1].x_init = Vec::Constant(2, 99.0);
  auto r1 = validate(bad1);
  REQUIRE(r1.size() == 1);
  CHECK(r1[0].find("x_init outside") != std::string::npos);

  auto bad2 = net;
  (*bad2.subs[2].couplings.begin()->second.A)[1] = Mat::Zero(1, 1);
  auto r2 = validate(bad2);
  REQUIRE(r2.size() == 1);
  CHECK(r2[0].find("(i,j,t)=(2,0,1)") != std::string::npos);
}

TEST_CASE("reach intervals: contain simulated trajectories and respect X") {
  auto net = build_power_ring(3, PowerAreaParams{}, 8);
  auto rb = reach_intervals(net);
  REQUIRE(rb.x[0].size() == 9);
  CHECK(rb.x[0][0].lo(0) == doctest::Approx(0.1));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (int run = 0; run < 50; ++run) {
    std::vector<Vec> x(3);
    for (int i = 0; i < 3; ++i) x[i] = net.subs[i].x_init;
    for (int t = 0; t < net.horizon; ++t) {
      std::vector<Vec> uv(3), wv(3);
      for (int i = 0; i < 3; ++i) {
        uv[i] = Vec::Constant(1, u(rng));
        wv[i] = net.subs[i].W[t].sample(rng);
      }
      x = step_network(net, x, uv, wv, t);
      for (int i = 0; i < 3; ++i) {
        CHECK(((x[i] - rb.x[i][t + 1].lo).array() >= -1e-9).all());
        CHECK(((rb.x[i][t + 1].hi - x[i]).array() >= -1e-9).all());
      }
    }
  }
}
