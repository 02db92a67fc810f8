#include "opvol/forward.hpp"

#include "opvol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opvol {

ForwardSemigroupSpec ForwardSemigroupSpec::diagonal(Vector rates) {
  if (rates.size() == 0) throw ConfigError("forward semigroup: rates must be non-empty");
  if (!rates.allFinite()) throw ConfigError("forward semigroup: non-finite rate");
  ForwardSemigroupSpec s;
  s.kind_ = ForwardKind::diagonal;
  s.k_ = rates.maxCoeff();
  s.a_ = rates.asDiagonal();
  return s;
}

ForwardSemigroupSpec ForwardSemigroupSpec::skew(Matrix a) {
  if (a.rows() == 0 || a.rows() != a.cols()) throw ConfigError("forward semigroup: A must be square");
  if (!a.allFinite()) throw ConfigError("forward semigroup: non-finite entry in A");
  if ((a + a.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ConfigError("forward semigroup: A is not skew-adjoint");
  ForwardSemigroupSpec s;
  s.kind_ = ForwardKind::skew;
  s.a_ = 0.5 * (a - a.transpose());
  s.k_ = 0.0;
  return s;
}

Matrix ForwardSemigroupSpec::semigroup(double t) const {
  if (kind_ == ForwardKind::diagonal) return Matrix((t * a_.diagonal()).array().exp().matrix().asDiagonal());
  return expm(a_, t);
}

ForwardStepper::ForwardStepper(ForwardSemigroupSpec spec, double uniform_step)
    : spec_(std::move(spec)), uniform_step_(uniform_step) {
  if (uniform_step_ > 0.0) uniform_factor_ = spec_.semigroup(uniform_step_);
}

Matrix ForwardStepper::semigroup(double dt) const {
  if (uniform_step_ > 0.0 && std::abs(dt - uniform_step_) <= 1e-12 * uniform_step_) return uniform_factor_;
  return spec_.semigroup(dt);
}

int ForwardPath::level_index(int level) const {
  auto it = std::find(levels.begin(), levels.end(), level);
  if (it == levels.end()) {
    std::ostringstream os;
    os << "forward path: level " << level << " was not simulated";
    throw ConfigError(os.str());
  }
  return static_cast<int>(it - levels.begin());
}

std::vector<HilbertVector> forward_recursion(const std::vector<HSOperator>& sqrt_v,
                                             const std::vector<HilbertVector>& increments,
                                             const std::vector<double>& times, const ForwardStepper& stepper) {
  if (times.empty()) throw ConfigError("forward_recursion: empty grid");
  if (increments.size() + 1 != times.size() || sqrt_v.size() < increments.size())
    throw ConfigError("forward_recursion: grid, increments and volatility sizes disagree");
  const int d = stepper.spec().dim();
  std::vector<HilbertVector> x;
  x.reserve(times.size());
  Vector state = Vector::Zero(d);
  x.emplace_back(state);
  for (std::size_t m = 0; m < increments.size(); ++m) {
    const Matrix s = stepper.semigroup(times[m + 1] - times[m]);
    state = s * (state + sqrt_v[m].matrix() * increments[m].coeffs());
    x.emplace_back(state);
  }
  return x;
}

std::vector<HSOperator> sqrt_along_path(const VariancePath& path) {
  std::vector<HSOperator> out;
  const auto idx = path.right_indices();
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(psd_sqrt(path.values[i]));
  return out;
}

ForwardPath simulate_forward_coupled(const VariancePath& exact, const std::vector<VariancePath>& approx,
                                     const std::vector<int>& levels, const ForwardStepper& stepper,
                                     const QWienerSpec& q, Stream& stream) {
  if (approx.size() != levels.size()) throw ConfigError("simulate_forward_coupled: one path per level required");
  for (const auto& p : approx) {
    bool same = p.grid.size() == exact.grid.size();
    for (std::size_t i = 0; same && i < p.grid.size(); ++i)
      same = p.grid[i].t == exact.grid[i].t && p.grid[i].left_limit == exact.grid[i].left_limit;
    if (!same) throw ConfigError("simulate_forward_coupled: variance paths do not share a grid");
  }
  if (q.dim() != stepper.spec().dim()) throw ConfigError("simulate_forward_coupled: Q dimension mismatch");

  ForwardPath out;
  out.levels = levels;
  for (std::size_t i : exact.right_indices()) out.times.push_back(exact.grid[i].t);
  out.increments = sample_wiener_increments(q, out.times, stream);

  out.x = forward_recursion(sqrt_along_path(exact), out.increments, out.times, stepper);
  out.x_levels.reserve(levels.size());
  for (const auto& p : approx)
    out.x_levels.push_back(forward_recursion(sqrt_along_path(p), out.increments, out.times, stepper));
  return out;
}

double forward_sup_error(const ForwardPath& path, int level) {
  const auto& xn = path.x_levels[static_cast<std::size_t>(path.level_index(level))];
  double sup = 0.0;
  for (std::size_t m = 0; m < path.x.size(); ++m) sup = std::max(sup, (path.x[m] - xn[m]).squared_norm());
  return sup;
}

double scheme_second_moment(const std::vector<HSOperator>& sqrt_v, const std::vector<double>& times,
                            const ForwardStepper& stepper, const QWienerSpec& q) {
  if (times.size() < 2 || sqrt_v.size() + 1 < times.size())
    throw ConfigError("scheme_second_moment: grid and volatility sizes disagree");
  const Matrix qh = q.sqrt_covariance().matrix();
  // Walk backwards accumulating S(t_M - t_m).
  Matrix tail = Matrix::Identity(stepper.spec().dim(), stepper.spec().dim());
  double total = 0.0;
  for (std::size_t m = times.size() - 1; m-- > 0;) {
    const double dt = times[m + 1] - times[m];
    tail = tail * stepper.semigroup(dt);
    total += dt * (tail * sqrt_v[m].matrix() * qh).squaredNorm();
  }
  return total;
}

}  // namespace opvol
