#pragma once

// Volatility-modulated forward X(t) = int_0^t S(t-s) sqrt(V(s)) dB(s) and its
// level-n approximants, all driven by one Q-Wiener path.

#include "opvol/operator_core.hpp"
#include "opvol/processes.hpp"
#include "opvol/rng.hpp"
#include "opvol/variance.hpp"

#include <vector>

namespace opvol {

enum class ForwardKind { diagonal, skew };

/// Semigroup S(t) = exp(tA) with certified ||S(t)||_op <= c e^{kt}.
class ForwardSemigroupSpec {
 public:
  /// A = diag(rates); c = 1, k = max rate.
  static ForwardSemigroupSpec diagonal(Vector rates);
  /// A* = -A; c = 1, k = 0. Throws ConfigError when A is not skew-adjoint.
  static ForwardSemigroupSpec skew(Matrix a);

  ForwardKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return static_cast<int>(a_.rows()); }
  const Matrix& generator() const noexcept { return a_; }
  double c() const noexcept { return c_; }
  double k() const noexcept { return k_; }

  Matrix semigroup(double t) const;

 private:
  ForwardKind kind_ = ForwardKind::diagonal;
  Matrix a_;
  double c_ = 1.0;
  double k_ = 0.0;
};

/// S(dt) with the uniform step precomputed; immutable.
class ForwardStepper {
 public:
  ForwardStepper(ForwardSemigroupSpec spec, double uniform_step);
  const ForwardSemigroupSpec& spec() const noexcept { return spec_; }
  Matrix semigroup(double dt) const;

 private:
  ForwardSemigroupSpec spec_;
  double uniform_step_;
  Matrix uniform_factor_;
};

struct ForwardPath {
  std::vector<double> times;
  std::vector<int> levels;
  std::vector<HilbertVector> x;
  /// x_levels[l][m] is X^n(times[m]) for n = levels[l].
  std::vector<std::vector<HilbertVector>> x_levels;
  /// Shared increments over [times[m], times[m+1]].
  std::vector<HilbertVector> increments;

  int level_index(int level) const;
};

/// Left-endpoint recursion X_{m+1} = S(dt_m) (X_m + sqrt_v[m] dB_m), X_0 = 0.
std::vector<HilbertVector> forward_recursion(const std::vector<HSOperator>& sqrt_v,
                                             const std::vector<HilbertVector>& increments,
                                             const std::vector<double>& times, const ForwardStepper& stepper);

/// psd_sqrt of V at each right-continuous grid point.
std::vector<HSOperator> sqrt_along_path(const VariancePath& path);

/// Simulates X and every X^n on the distinct times of the variance grid.
/// All paths must share the grid; increments come from `stream`.
ForwardPath simulate_forward_coupled(const VariancePath& exact, const std::vector<VariancePath>& approx,
                                     const std::vector<int>& levels, const ForwardStepper& stepper,
                                     const QWienerSpec& q, Stream& stream);

/// max over the grid of |X(t) - X^n(t)|^2.
double forward_sup_error(const ForwardPath& path, int level);

/// E|X_M|^2 of the recursion for deterministic sqrt(V) values:
/// sum_m dt_m ||S(t_M - t_m) sqrt_v[m] Q^{1/2}||_HS^2.
double scheme_second_moment(const std::vector<HSOperator>& sqrt_v, const std::vector<double>& times,
                            const ForwardStepper& stepper, const QWienerSpec& q);

}  // namespace opvol
