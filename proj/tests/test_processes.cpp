#include "opvol/errors.hpp"
#include "opvol/processes.hpp"
#include "opvol/report.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace opvol;
using opvol::testing::test_stream;

TEST_CASE("streams are reproducible and keyed") {
  Stream a = derive_stream(1, 2, Purpose::clock);
  Stream b = derive_stream(1, 2, Purpose::clock);
  Stream c = derive_stream(1, 3, Purpose::clock);
  Stream d = derive_stream(1, 2, Purpose::jumps);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
}

TEST_CASE("clock times are increasing and inside the horizon") {
  Stream s = test_stream(10);
  for (int i = 0; i < 200; ++i) {
    const PoissonClock c = sample_clock(3.0, 2.0, s);
    for (std::size_t k = 0; k < c.count(); ++k) {
      CHECK(c.jump_times[k] > 0.0);
      CHECK(c.jump_times[k] <= 2.0);
      if (k) CHECK(c.jump_times[k] > c.jump_times[k - 1]);
    }
  }
}

TEST_CASE("clock count has Poisson mean and variance") {
  Stream s = test_stream(11);
  const int R = 20000;
  std::vector<double> counts(R), centered(R);
  for (int r = 0; r < R; ++r) counts[r] = static_cast<double>(sample_clock(2.0, 1.5, s).count());
  const Estimate m = estimate(counts);
  CHECK(std::abs(m.mean - 3.0) <= 3.0 * m.se);
  for (int r = 0; r < R; ++r) centered[r] = (counts[r] - 3.0) * (counts[r] - 3.0);
  const Estimate v = estimate(centered);
  CHECK(std::abs(v.mean - 3.0) <= 3.0 * v.se);
}

TEST_CASE("clock rejects bad parameters") {
  Stream s = test_stream(12);
  CHECK_THROWS_AS(sample_clock(0.0, 1.0, s), ConfigError);
  CHECK_THROWS_AS(sample_clock(-1.0, 1.0, s), ConfigError);
  CHECK_THROWS_AS(sample_clock(1.0, 0.0, s), ConfigError);
}

TEST_CASE("tensor jumps are PSD rank one and truncate coordinates") {
  Stream s = test_stream(13);
  const JumpLaw law = JumpLaw::gaussian(Vector::Constant(4, 1.0));
  const TensorJump j = sample_tensor_jump(law, {2, 4}, s);
  CHECK(j.jump.matrix().isApprox(j.y.coeffs() * j.y.coeffs().transpose()));
  CHECK(j.approx[1].matrix() == j.jump.matrix());
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b) {
      if (a > 2 || b > 2) CHECK(j.approx[0].entry(a, b) == 0.0);
      else CHECK(j.approx[0].entry(a, b) == j.jump.entry(a, b));
    }
  CHECK(norm(j.jump, NormMode::trace) == doctest::Approx(j.y.squared_norm()).epsilon(1e-12));
}

TEST_CASE("custom jump law") {
  Stream s = test_stream(14);
  const JumpLaw law = JumpLaw::custom(3, [](Stream&) { return Vector::Constant(3, 2.0); });
  CHECK_FALSE(law.is_gaussian());
  const TensorJump j = sample_tensor_jump(law, {1}, s);
  CHECK(j.jump.entry(3, 3) == 4.0);
  CHECK(j.approx[0].entry(1, 1) == 4.0);
  CHECK(j.approx[0].entry(2, 2) == 0.0);
}

TEST_CASE("coupled jumps share the clock") {
  Stream s = test_stream(15);
  Stream cs = test_stream(16);
  PoissonClock clock = sample_clock(5.0, 1.0, cs);
  const std::size_t n = clock.count();
  const CoupledJumpStream cj = sample_coupled_jumps(JumpLaw::gaussian(Vector::Constant(3, 1.0)), clock, {1, 3}, s);
  CHECK(cj.jumps.size() == n);
  CHECK(cj.approx_jumps.size() == 2);
  CHECK(cj.approx_jumps[0].size() == n);
  for (std::size_t i = 0; i < n; ++i) CHECK(cj.approx_jumps[1][i] == cj.jumps[i]);
}

TEST_CASE("compound Poisson second moment formula") {
  const SecondMoment m = cp_second_moment(2.0, 1.0, 3.0, 1.0);
  CHECK(m.exact == doctest::Approx(2.0 * 3.0 + 4.0 * 1.0));
  CHECK(m.bound == doctest::Approx(2.0 * 3.0 * 3.0));
  CHECK(m.exact <= m.bound);
  const SecondMoment zero = cp_second_moment(2.0, 0.0, 3.0, 1.0);
  CHECK(zero.exact == 0.0);
  CHECK_THROWS_AS(cp_second_moment(1.0, 1.0, 1.0, 2.0), InvalidMoments);
}

TEST_CASE("compound Poisson second moment against simulation") {
  // Scalar jumps J ~ N(1, 1): E J^2 = 2, (E J)^2 = 1.
  Stream s = test_stream(17);
  std::normal_distribution<double> n(1.0, 1.0);
  const int R = 20000;
  std::vector<double> l2(R);
  for (int r = 0; r < R; ++r) {
    const PoissonClock c = sample_clock(2.0, 1.0, s);
    double sum = 0.0;
    for (std::size_t i = 0; i < c.count(); ++i) sum += n(s);
    l2[r] = sum * sum;
  }
  const Estimate e = estimate(l2);
  const SecondMoment m = cp_second_moment(2.0, 1.0, 2.0, 1.0);
  CHECK(std::abs(e.mean - m.exact) <= 3.0 * e.se);
}

TEST_CASE("Q-Wiener spec") {
  Vector q(3);
  q << 1.0, 0.25, 0.0;
  const QWienerSpec spec(q);
  CHECK(spec.trace() == 1.25);
  CHECK(spec.sqrt_covariance().entry(2, 2) == 0.5);
  CHECK_THROWS_AS(QWienerSpec{Vector()}, ConfigError);
  Vector neg(2);
  neg << 1.0, -0.1;
  CHECK_THROWS_AS(QWienerSpec{neg}, ConfigError);
}

TEST_CASE("Q-Wiener increments have covariance dt Q") {
  Vector q(2);
  q << 1.0, 0.25;
  const QWienerSpec spec(q);
  Stream s = test_stream(18);
  const std::vector<double> grid{0.0, 0.5, 2.0};
  const int R = 20000;
  std::vector<double> a(R), b(R), cross(R);
  for (int r = 0; r < R; ++r) {
    const auto inc = sample_wiener_increments(spec, grid, s);
    REQUIRE(inc.size() == 2);
    a[r] = inc[0][0] * inc[0][0];
    b[r] = inc[1][1] * inc[1][1];
    cross[r] = inc[0][0] * inc[1][0];
  }
  const Estimate ea = estimate(a), eb = estimate(b), ec = estimate(cross);
  CHECK(std::abs(ea.mean - 0.5) <= 3.0 * ea.se);
  CHECK(std::abs(eb.mean - 1.5 * 0.25) <= 3.0 * eb.se);
  CHECK(std::abs(ec.mean) <= 3.0 * ec.se);
}

TEST_CASE("Q-Wiener increments need a valid grid") {
  const QWienerSpec spec(Vector::Ones(2));
  Stream s = test_stream(19);
  CHECK_THROWS_AS(sample_wiener_increments(spec, {0.1, 0.5}, s), ConfigError);
  CHECK_THROWS_AS(sample_wiener_increments(spec, {0.0, 0.5, 0.5}, s), ConfigError);
}
