#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "landau/capacity.hpp"
#include "landau/curve.hpp"

using namespace landau;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("log-kernel weights integrate trigonometric densities exactly") {
  const int n = 32;
  const auto w = log_kernel_weights(n);
  // ∫ log(4 sin²((t-τ)/2)) cos(kτ) dτ = -2π cos(kt)/|k| for k ≠ 0, and 0 for k = 0
  for (int k : {0, 1, 3, 7, 15}) {
    for (int i : {0, 5}) {
      double s = 0;
      for (int j = 0; j < n; ++j) s += w[(i - j + n) % n] * std::cos(k * SmoothCurve::parameter(j, n));
      const double t = SmoothCurve::parameter(i, n);
      const double expect = k == 0 ? 0.0 : -2 * M_PI * std::cos(k * t) / k;
      CHECK_THAT(s, WithinAbs(expect, 1e-13));
    }
  }
}

TEST_CASE("curve geometry: orientation, normals, area, length") {
  const auto c = circle(64, 2.0);
  CHECK_THAT(c.area(), WithinRel(4 * M_PI, 1e-14));
  CHECK_THAT(c.length(), WithinRel(4 * M_PI, 1e-14));
  // ν_Ω points toward the centre
  CHECK_THAT(c.normals()[0].x(), WithinAbs(-1.0, 1e-15));
  CHECK(c.contains(Vec2(0.3, 0.1)));
  CHECK_FALSE(c.contains(Vec2(2.3, 0.1)));
  CHECK_THAT(c.distance(Vec2(3, 0)), WithinAbs(1.0, 1e-12));

  // clockwise samples are reoriented
  std::vector<Vec2> cw(16);
  for (int i = 0; i < 16; ++i) cw[i] = {std::cos(-2 * M_PI * i / 16), std::sin(-2 * M_PI * i / 16)};
  const auto r = SmoothCurve::from_samples(cw);
  CHECK(r.area() > 0);
  CHECK_THAT(r.points()[1].y(), WithinAbs(std::sin(2 * M_PI / 16), 1e-14));

  CHECK_THAT(ellipse(128, 2, 1).area(), WithinRel(2 * M_PI, 1e-14));
  CHECK_THAT(flower(128, 0.2, 3).area(), WithinRel(M_PI * (1 + 0.02), 1e-13));
}

TEST_CASE("spectral derivatives from samples match the exact ones") {
  const auto exact = flower(64, 0.2, 3);
  const auto sampled = SmoothCurve::from_samples(exact.points());
  for (int i = 0; i < 64; ++i) {
    CHECK((sampled.tangents()[i] - exact.tangents()[i]).norm() < 1e-12);
    CHECK((sampled.second_derivatives()[i] - exact.second_derivatives()[i]).norm() < 1e-11);
  }
}

TEST_CASE("resampling is trigonometric interpolation") {
  const auto coarse = flower(32, 0.2, 3);
  const auto fine = coarse.resampled(128);
  const auto exact = flower(128, 0.2, 3);
  for (int i = 0; i < 128; ++i) CHECK((fine.points()[i] - exact.points()[i]).norm() < 1e-13);
  const auto back = fine.resampled(32);
  for (int i = 0; i < 32; ++i) CHECK((back.points()[i] - coarse.points()[i]).norm() < 1e-13);
}

TEST_CASE("curve invariants are enforced") {
  CHECK_THROWS_AS(circle(7), landau::invalid_argument);
  CHECK_THROWS_AS(circle(2), landau::invalid_argument);
  // figure eight: x = sin t, y = sin 2t crosses itself at the origin
  std::vector<Vec2> eight(64);
  for (int i = 0; i < 64; ++i) {
    const double t = 2 * M_PI * i / 64 + 0.01;
    eight[i] = {std::sin(t), 0.5 * std::sin(2 * t)};
  }
  CHECK_THROWS_WITH(SmoothCurve::from_samples(eight), ContainsSubstring("not simple"));
  std::vector<Vec2> still(8, Vec2(1, 1));
  CHECK_THROWS_AS(SmoothCurve::from_samples(still), landau::invalid_argument);
}

TEST_CASE("curve file parsing") {
  std::ostringstream os;
  write_curve(os, ellipse(16, 2, 1));
  std::istringstream in(os.str());
  const auto c = parse_curve(in);
  CHECK(c.size() == 16);
  CHECK_THAT(c.points()[4].y(), WithinAbs(1.0, 1e-15));

  auto fails_at = [](const std::string& text, int line) {
    std::istringstream s(text);
    try {
      parse_curve(s);
    } catch (const curve_parse_error& e) {
      CHECK(e.line() == line);
      return;
    }
    FAIL("no parse error for: " << text);
  };
  fails_at("", 1);
  fails_at("abc\n", 1);
  fails_at("5\n", 1);
  fails_at("4\n0 1 0\n1.5707963267948966 0 1\n3.14159 -1\n", 4);
  fails_at("4\n0 1 0\n1.5707963267948966 0 1\n", 4);
  fails_at("4\n0 1 0\n1.0 0 1\n3.141592653589793 -1 0\n4.71238898038469 0 -1\n", 3);
  fails_at("4\n0 1 0\n1.5707963267948966 0 1\n3.141592653589793 -1 0\n4.71238898038469 0 -1\n1 2 3\n", 6);
}

TEST_CASE("equilibrium measure of circles") {
  const auto m = solve_equilibrium(circle(64));
  for (double mu : m.density) CHECK_THAT(mu, WithinAbs(1 / (2 * M_PI), 1e-13));
  CHECK_THAT(m.robin_constant, WithinAbs(0.0, 1e-13));
  CHECK_THAT(m.total_mass, WithinAbs(1.0, 1e-13));
  CHECK(m.nonnegative);
  CHECK(m.residual < 1e-12);
  CHECK_THAT(solve_equilibrium(circle(64, 2.0)).robin_constant, WithinAbs(-std::log(2.0), 1e-13));
  CHECK_THAT(capacity(circle(128)), WithinAbs(1.0, 1e-12));
  CHECK_THAT(capacity(circle(64, 3.5, Vec2(1, -2))), WithinRel(3.5, 1e-12));
}

TEST_CASE("ellipse capacity matches the conformal-map value (a+b)/2") {
  CHECK_THAT(capacity(ellipse(256, 2, 1)), WithinAbs(1.5, 1e-6));
  CHECK_THAT(solve_equilibrium(ellipse(256, 2, 1)).robin_constant, WithinAbs(-std::log(1.5), 1e-6));
  // spectral convergence: the error collapses faster than any fixed power
  std::vector<double> errs;
  for (int n : {8, 16, 32}) errs.push_back(std::abs(capacity(ellipse(n, 2, 1)) - 1.5));
  CHECK(errs[1] < errs[0] / 16);
  CHECK(errs[2] < 1e-10);
  CHECK(errs[0] / errs[1] < errs[1] / std::max(errs[2], 1e-300));
}

TEST_CASE("capacity scaling, rigid-motion invariance and monotonicity") {
  const auto f = flower(128, 0.2, 3);
  const double c0 = capacity(f);
  for (double lambda : {0.5, 2.0, 10.0}) CHECK_THAT(capacity(f.transformed(lambda, 0, Vec2::Zero())), WithinAbs(lambda * c0, 1e-10 * lambda));
  CHECK_THAT(capacity(f.transformed(1, 0.7, Vec2(3, -1))), WithinAbs(c0, 1e-10));
  // nested: disk 0.8 ⊂ flower ⊂ disk 1.2
  CHECK(capacity(circle(128, 0.8)) <= c0);
  CHECK(c0 <= capacity(circle(128, 1.2)));
  CHECK(capacity(ellipse(128, 1.5, 1)) <= capacity(ellipse(128, 2, 1)));
}

TEST_CASE("equilibrium density of a non-convex curve stays positive and is flagged otherwise") {
  const auto m = solve_equilibrium(flower(128, 0.2, 3));
  CHECK_THAT(m.total_mass, WithinAbs(1.0, 1e-12));
  CHECK(m.nonnegative);
}
