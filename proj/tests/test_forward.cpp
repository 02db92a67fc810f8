#include "opvol/errors.hpp"
#include "opvol/forward.hpp"
#include "opvol/report.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace opvol;
using opvol::testing::random_matrix;
using opvol::testing::random_psd;
using opvol::testing::rel_diff;
using opvol::testing::test_stream;

namespace {

std::vector<double> uniform_times(double horizon, int steps) {
  std::vector<double> t(steps + 1);
  for (int m = 0; m <= steps; ++m) t[m] = horizon * m / steps;
  return t;
}

}  // namespace

TEST_CASE("diagonal semigroup constants") {
  Vector rates(3);
  rates << -0.5, 0.2, -1.0;
  const ForwardSemigroupSpec f = ForwardSemigroupSpec::diagonal(rates);
  CHECK(f.c() == 1.0);
  CHECK(f.k() == 0.2);
  const Matrix s = f.semigroup(2.0);
  for (int j = 0; j < 3; ++j) CHECK(s(j, j) == doctest::Approx(std::exp(2.0 * rates[j])).epsilon(1e-15));
  // ||S(t)|| <= c e^{kt}
  for (double t : {0.1, 1.0, 3.0}) {
    Eigen::JacobiSVD<Matrix> svd(f.semigroup(t));
    CHECK(svd.singularValues()[0] <= f.c() * std::exp(f.k() * t) * (1 + 1e-14));
  }
}

TEST_CASE("skew semigroup is orthogonal") {
  Stream s = test_stream(40);
  const Matrix g = random_matrix(4, 4, s);
  const ForwardSemigroupSpec f = ForwardSemigroupSpec::skew(g - g.transpose());
  CHECK(f.k() == 0.0);
  const Matrix u = f.semigroup(0.7);
  CHECK(rel_diff(u.transpose() * u, Matrix::Identity(4, 4)) <= 1e-13);
  CHECK_THROWS_AS(ForwardSemigroupSpec::skew(g), ConfigError);
}

TEST_CASE("stepper matches the semigroup") {
  Vector rates(2);
  rates << -0.3, 0.1;
  const ForwardStepper st(ForwardSemigroupSpec::diagonal(rates), 0.01);
  CHECK(rel_diff(st.semigroup(0.01), st.spec().semigroup(0.01)) <= 1e-15);
  CHECK(rel_diff(st.semigroup(0.0037), st.spec().semigroup(0.0037)) <= 1e-15);
}

TEST_CASE("recursion against a hand-rolled loop") {
  Stream s = test_stream(41);
  Vector rates(3);
  rates << -0.3, 0.1, 0.0;
  const ForwardStepper st(ForwardSemigroupSpec::diagonal(rates), 0.25);
  const std::vector<double> times{0.0, 0.25, 0.3, 0.5};
  std::vector<HSOperator> sq;
  std::vector<HilbertVector> inc;
  for (int m = 0; m < 4; ++m) sq.push_back(psd_sqrt(random_psd(3, s)));
  for (int m = 0; m < 3; ++m) inc.emplace_back(opvol::testing::random_vector(3, s));
  const auto x = forward_recursion(sq, inc, times, st);
  REQUIRE(x.size() == 4);
  Vector ref = Vector::Zero(3);
  CHECK(x[0].coeffs() == ref);
  for (int m = 0; m < 3; ++m) {
    const double dt = times[m + 1] - times[m];
    const Matrix sdt = rates.array().unaryExpr([dt](double r) { return std::exp(r * dt); }).matrix().asDiagonal();
    ref = sdt * (ref + sq[m].matrix() * inc[m].coeffs());
    CHECK((x[m + 1].coeffs() - ref).norm() <= 1e-14);
  }
}

TEST_CASE("scheme second moment for constant volatility and A = 0") {
  Vector q(4);
  q << 1.0, 0.25, 1.0 / 9, 1.0 / 16;
  const QWienerSpec qs(q);
  const auto times = uniform_times(2.0, 50);
  const ForwardStepper st(ForwardSemigroupSpec::diagonal(Vector::Zero(4)), 2.0 / 50);
  const std::vector<HSOperator> sq(times.size(), HSOperator::identity(4));
  CHECK(scheme_second_moment(sq, times, st, qs) == doctest::Approx(2.0 * qs.trace()).epsilon(1e-13));
}

TEST_CASE("scheme second moment against the discrete sum for diagonal A") {
  Vector q(2), rates(2);
  q << 1.0, 0.5;
  rates << -1.0, 0.4;
  const QWienerSpec qs(q);
  const int M = 20;
  const auto times = uniform_times(1.0, M);
  const ForwardStepper st(ForwardSemigroupSpec::diagonal(rates), 1.0 / M);
  const std::vector<HSOperator> sq(times.size(), HSOperator::identity(2));
  double expected = 0.0;
  for (int m = 0; m < M; ++m)
    for (int j = 0; j < 2; ++j) expected += q[j] * std::exp(2.0 * rates[j] * (1.0 - times[m])) / M;
  CHECK(scheme_second_moment(sq, times, st, qs) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("Monte Carlo recursion matches the scheme second moment") {
  Vector q(3), rates(3);
  q << 1.0, 0.25, 0.1;
  rates << -0.5, 0.0, 0.3;
  const QWienerSpec qs(q);
  const int M = 10;
  const auto times = uniform_times(1.0, M);
  const ForwardStepper st(ForwardSemigroupSpec::diagonal(rates), 1.0 / M);
  Stream s = test_stream(42);
  const HSOperator root = psd_sqrt(random_psd(3, s));
  const std::vector<HSOperator> sq(times.size(), root);
  const int R = 20000;
  std::vector<double> x2(R);
  for (int r = 0; r < R; ++r) {
    const auto inc = sample_wiener_increments(qs, times, s);
    x2[r] = forward_recursion(sq, inc, times, st).back().squared_norm();
  }
  const Estimate e = estimate(x2);
  CHECK(std::abs(e.mean - scheme_second_moment(sq, times, st, qs)) <= 3.0 * e.se);
}

TEST_CASE("coupled forward paths share increments") {
  Stream s = test_stream(43);
  const Vector l = karhunen_loeve_spectrum(3);
  const Propagator prop(GeneratorSpec::sylvester(HSOperator::diagonal(-l)), 0.1);
  const CoupledJumpStream cj =
      sample_coupled_jumps(JumpLaw::gaussian(Vector::Ones(3)), sample_clock(2.0, 1.0, s), {1, 3}, s);
  const auto grid = make_variance_grid(1.0, 10, cj.clock.jump_times);
  const HSOperator v0 = HSOperator::identity(3);
  const VariancePath exact = evolve_variance(v0, prop, cj, -1, grid);
  const std::vector<VariancePath> approx{evolve_variance(v0, prop, cj, 0, grid),
                                         evolve_variance(v0, prop, cj, 1, grid)};
  const ForwardStepper st(ForwardSemigroupSpec::diagonal(Vector::Constant(3, -0.1)), 0.1);
  const QWienerSpec qs(Vector::Ones(3));
  const ForwardPath fp = simulate_forward_coupled(exact, approx, {1, 3}, st, qs, s);
  CHECK(fp.times.size() == exact.right_indices().size());
  CHECK(fp.increments.size() == fp.times.size() - 1);
  // Level 3 equals the exact model, so its forward path coincides.
  CHECK(forward_sup_error(fp, 3) == 0.0);
  CHECK(forward_sup_error(fp, 1) >= 0.0);
  CHECK(fp.level_index(1) == 0);
  CHECK_THROWS_AS(fp.level_index(2), ConfigError);
}
