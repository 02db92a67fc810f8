#include "opvol/processes.hpp"

#include "opvol/errors.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace opvol {

PoissonClock sample_clock(double intensity, double horizon, Stream& stream) {
  if (!(intensity > 0.0) || !std::isfinite(intensity))
    throw ConfigError("sample_clock: intensity must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw ConfigError("sample_clock: horizon must be positive");
  PoissonClock clock{intensity, horizon, {}};
  std::exponential_distribution<double> gap(intensity);
  double t = 0.0;
  while (true) {
    t += gap(stream);
    if (t > horizon) break;
    if (!clock.jump_times.empty() && t <= clock.jump_times.back()) continue;
    clock.jump_times.push_back(t);
  }
  return clock;
}

JumpLaw JumpLaw::gaussian(Vector gamma) {
  if (gamma.size() == 0) throw ConfigError("jump law: spectrum must be non-empty");
  for (Eigen::Index j = 0; j < gamma.size(); ++j) {
    if (!std::isfinite(gamma[j]) || gamma[j] < 0.0) {
      std::ostringstream os;
      os << "jump law: spectrum entry " << j + 1 << " must be finite and >= 0";
      throw ConfigError(os.str());
    }
  }
  JumpLaw law;
  law.dim_ = static_cast<int>(gamma.size());
  law.gamma_ = std::move(gamma);
  return law;
}

JumpLaw JumpLaw::custom(int d, Sampler sampler) {
  if (d < 1) throw ConfigError("jump law: dimension must be >= 1");
  if (!sampler) throw ConfigError("jump law: empty sampler");
  JumpLaw law;
  law.dim_ = d;
  law.sampler_ = std::move(sampler);
  return law;
}

HilbertVector JumpLaw::sample(Stream& stream) const {
  if (sampler_) {
    Vector y = sampler_(stream);
    if (y.size() != dim_) throw ConfigError("jump law: sampler returned wrong dimension");
    return HilbertVector(std::move(y));
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector y(dim_);
  for (int j = 0; j < dim_; ++j) y[j] = std::sqrt(gamma_[j]) * normal(stream);
  return HilbertVector(std::move(y));
}

TensorJump sample_tensor_jump(const JumpLaw& law, const std::vector<int>& levels, Stream& stream) {
  HilbertVector y = law.sample(stream);
  HSOperator jump = tensor_product(y, y);
  std::vector<HSOperator> approx;
  approx.reserve(levels.size());
  for (int n : levels) {
    if (n == y.dim()) {
      approx.push_back(jump);
    } else {
      HilbertVector yn = project_vector(y, n);
      approx.push_back(tensor_product(yn, yn));
    }
  }
  return TensorJump{std::move(y), std::move(jump), std::move(approx)};
}

CoupledJumpStream sample_coupled_jumps(const JumpLaw& law, PoissonClock clock,
                                       const std::vector<int>& levels, Stream& stream) {
  CoupledJumpStream out;
  out.levels = levels;
  out.approx_jumps.resize(levels.size());
  for (std::size_t i = 0; i < clock.count(); ++i) {
    TensorJump tj = sample_tensor_jump(law, levels, stream);
    out.ys.push_back(std::move(tj.y));
    out.jumps.push_back(std::move(tj.jump));
    for (std::size_t l = 0; l < levels.size(); ++l) out.approx_jumps[l].push_back(std::move(tj.approx[l]));
  }
  out.clock = std::move(clock);
  return out;
}

SecondMoment cp_second_moment(double intensity, double t, double m2, double m1sq) {
  if (intensity < 0.0 || t < 0.0 || m2 < 0.0 || m1sq < 0.0)
    throw ConfigError("cp_second_moment: arguments must be nonnegative");
  if (m1sq > m2) {
    std::ostringstream os;
    os.precision(17);
    os << "cp_second_moment: |E J|^2 = " << m1sq << " exceeds E|J|^2 = " << m2;
    throw InvalidMoments(os.str());
  }
  const double lt = intensity * t;
  return SecondMoment{lt * m2 + lt * lt * m1sq, lt * (1.0 + lt) * m2};
}

QWienerSpec::QWienerSpec(Vector q) : q_(std::move(q)) {
  if (q_.size() == 0) throw ConfigError("Q spectrum must be non-empty");
  for (Eigen::Index j = 0; j < q_.size(); ++j) {
    if (!std::isfinite(q_[j]) || q_[j] < 0.0) {
      std::ostringstream os;
      os << "Q spectrum entry " << j + 1 << " must be finite and >= 0";
      throw ConfigError(os.str());
    }
  }
  trace_ = q_.sum();
}

HSOperator QWienerSpec::sqrt_covariance() const { return HSOperator::diagonal(Vector(q_.cwiseSqrt())); }

std::vector<HilbertVector> sample_wiener_increments(const QWienerSpec& spec,
                                                    const std::vector<double>& grid, Stream& stream) {
  if (grid.empty() || grid.front() != 0.0)
    throw ConfigError("sample_wiener_increments: grid must start at 0");
  for (std::size_t m = 1; m < grid.size(); ++m)
    if (!(grid[m] > grid[m - 1]))
      throw ConfigError("sample_wiener_increments: grid must be strictly increasing");
  const int d = spec.dim();
  const Vector sq = spec.q().cwiseSqrt();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<HilbertVector> out;
  out.reserve(grid.size() - 1);
  for (std::size_t m = 0; m + 1 < grid.size(); ++m) {
    const double s = std::sqrt(grid[m + 1] - grid[m]);
    Vector db(d);
    for (int j = 0; j < d; ++j) db[j] = sq[j] * s * normal(stream);
    out.emplace_back(std::move(db));
  }
  return out;
}

}  // namespace opvol
