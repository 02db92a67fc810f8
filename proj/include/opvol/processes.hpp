#pragma once

// Random drivers: Poisson clock, coupled compound Poisson jumps on L_HS(H),
// and Q-Wiener increments on H.

#include "opvol/operator_core.hpp"
#include "opvol/rng.hpp"

#include <functional>
#include <vector>

namespace opvol {

struct PoissonClock {
  double intensity = 0.0;
  double horizon = 0.0;
  /// Strictly increasing, inside (0, horizon].
  std::vector<double> jump_times;

  std::size_t count() const noexcept { return jump_times.size(); }
};

/// Exponential(intensity) inter-arrival times truncated at the horizon.
PoissonClock sample_clock(double intensity, double horizon, Stream& stream);

/// Law of the vector Y whose tensor square Y (x) Y is the jump.
class JumpLaw {
 public:
  using Sampler = std::function<Vector(Stream&)>;

  /// Centered Gaussian with independent coordinates of variance gamma_j.
  static JumpLaw gaussian(Vector gamma);
  /// User-supplied sampler returning coefficient vectors of length d.
  static JumpLaw custom(int d, Sampler sampler);

  int dim() const noexcept { return dim_; }
  bool is_gaussian() const noexcept { return !sampler_; }
  const Vector& gamma() const noexcept { return gamma_; }

  HilbertVector sample(Stream& stream) const;

 private:
  int dim_ = 0;
  Vector gamma_;
  Sampler sampler_;
};

struct TensorJump {
  HilbertVector y;
  HSOperator jump;
  /// One entry per requested level n: (Y^n) (x) (Y^n).
  std::vector<HSOperator> approx;
};

/// Draws Y and returns Y (x) Y together with its level-n approximants.
TensorJump sample_tensor_jump(const JumpLaw& law, const std::vector<int>& levels, Stream& stream);

/// Exact and truncated jump sequences sharing one clock.
struct CoupledJumpStream {
  PoissonClock clock;
  std::vector<int> levels;
  std::vector<HilbertVector> ys;
  std::vector<HSOperator> jumps;
  /// approx_jumps[l][i] belongs to levels[l] and clock.jump_times[i].
  std::vector<std::vector<HSOperator>> approx_jumps;
};

CoupledJumpStream sample_coupled_jumps(const JumpLaw& law, PoissonClock clock,
                                       const std::vector<int>& levels, Stream& stream);

struct SecondMoment {
  /// lambda t m2 + (lambda t)^2 m1sq
  double exact = 0.0;
  /// lambda t (1 + lambda t) m2
  double bound = 0.0;
};

/// E|L(t)|^2 for a compound Poisson process with E|J|^2 = m2, |E J|^2 = m1sq.
/// Throws InvalidMoments when m1sq > m2.
SecondMoment cp_second_moment(double intensity, double t, double m2, double m1sq);

class QWienerSpec {
 public:
  /// Throws ConfigError on an empty, negative or non-finite spectrum.
  explicit QWienerSpec(Vector q);

  int dim() const noexcept { return static_cast<int>(q_.size()); }
  const Vector& q() const noexcept { return q_; }
  double trace() const noexcept { return trace_; }
  /// Q^{1/2} as a diagonal operator.
  HSOperator sqrt_covariance() const;

 private:
  Vector q_;
  double trace_ = 0.0;
};

/// Increments over [t_m, t_{m+1}]; the grid must start at 0 and increase strictly.
std::vector<HilbertVector> sample_wiener_increments(const QWienerSpec& spec,
                                                    const std::vector<double>& grid, Stream& stream);

}  // namespace opvol
