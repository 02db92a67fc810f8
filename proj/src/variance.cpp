#include "opvol/variance.hpp"

#include "opvol/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace opvol {

namespace {

// Largest d for which the d^2 x d^2 action is formed to get an exact op norm.
constexpr int kExplicitNormMaxDim = 16;

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector vec(const Matrix& t) { return Eigen::Map<const Vector>(t.data(), t.size()); }

Matrix unvec(const Vector& v, int d) { return Eigen::Map<const Matrix>(v.data(), d, d); }

bool is_diagonal(const Matrix& m) {
  for (Eigen::Index k = 0; k < m.cols(); ++k)
    for (Eigen::Index j = 0; j < m.rows(); ++j)
      if (j != k && m(j, k) != 0.0) return false;
  return true;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.transpose() * m, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace

const char* to_string(GeneratorKind kind) noexcept {
  switch (kind) {
    case GeneratorKind::sandwich:
      return "sandwich";
    case GeneratorKind::sylvester:
      return "sylvester";
    case GeneratorKind::general:
      return "general";
  }
  return "unknown";
}

GeneratorSpec GeneratorSpec::sandwich(HSOperator c, std::optional<Vector> eigenvalues,
                                      std::optional<Matrix> eigenvectors) {
  GeneratorSpec g;
  g.kind_ = GeneratorKind::sandwich;
  g.dim_ = c.dim();
  g.c_ = std::move(c);
  g.eigenvalues_ = std::move(eigenvalues);
  g.eigenvectors_ = std::move(eigenvectors);
  g.finalize();
  return g;
}

GeneratorSpec GeneratorSpec::sylvester(HSOperator c, std::optional<Vector> eigenvalues,
                                       std::optional<Matrix> eigenvectors) {
  GeneratorSpec g = sandwich(std::move(c), std::move(eigenvalues), std::move(eigenvectors));
  g.kind_ = GeneratorKind::sylvester;
  g.finalize();
  return g;
}

GeneratorSpec GeneratorSpec::general(Matrix action, int d) {
  if (d < 1) throw ConfigError("general generator: dimension must be >= 1");
  if (action.rows() != d * d || action.cols() != d * d)
    throw ConfigError("general generator: action must be d^2 x d^2");
  if (!action.allFinite()) throw ConfigError("general generator: non-finite action entry");
  GeneratorSpec g;
  g.kind_ = GeneratorKind::general;
  g.dim_ = d;
  g.action_ = std::move(action);
  g.finalize();
  return g;
}

void GeneratorSpec::finalize() {
  const int d = dim_;
  if (eigenvalues_ && eigenvalues_->size() != d)
    throw ConfigError("generator: eigenvalue count must equal the dimension");
  if (eigenvectors_ && (eigenvectors_->rows() != d || eigenvectors_->cols() != d))
    throw ConfigError("generator: eigenvector matrix must be d x d");

  // Entrywise symbol, when the action is diagonal in the tensor basis.
  symbol_.reset();
  if (kind_ != GeneratorKind::general && is_diagonal(c_->matrix())) {
    const Vector cd = c_->matrix().diagonal();
    Matrix s(d, d);
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        s(j, k) = kind_ == GeneratorKind::sandwich ? cd[j] * cd[k] : cd[j] + cd[k];
    symbol_ = std::move(s);
  } else if (kind_ == GeneratorKind::general && is_diagonal(action_)) {
    symbol_ = unvec(action_.diagonal(), d);
  }
  if (symbol_ && projection_) symbol_ = symbol_->cwiseProduct(projection_->mask());

  // Adjoint compatibility: C real gives it for sandwich/Sylvester; a
  // projection keeps it iff its index set is symmetric.
  if (kind_ == GeneratorKind::general) {
    Matrix perm = Matrix::Zero(d * d, d * d);
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) perm(k + d * j, j + d * k) = 1.0;
    const Matrix m = explicit_matrix();
    preserves_adjoint_ = (perm * m - m * perm).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + m.cwiseAbs().maxCoeff());
  } else {
    preserves_adjoint_ = true;
  }
  if (projection_) {
    const Matrix& mk = projection_->mask();
    preserves_adjoint_ = preserves_adjoint_ && mk == mk.transpose();
  }

  if (symbol_) {
    op_norm_ = symbol_->cwiseAbs().maxCoeff();
    op_norm_exact_ = true;
  } else if (d <= kExplicitNormMaxDim) {
    op_norm_ = spectral_norm(explicit_matrix());
    op_norm_exact_ = true;
  } else {
    const double cn = kind_ == GeneratorKind::general ? 0.0 : norm(*c_, NormMode::op);
    switch (kind_) {
      case GeneratorKind::sandwich:
        op_norm_ = cn * cn;
        break;
      case GeneratorKind::sylvester:
        op_norm_ = 2.0 * cn;
        break;
      case GeneratorKind::general:
        op_norm_ = action_.norm();
        break;
    }
    op_norm_exact_ = false;
  }
}

const HSOperator& GeneratorSpec::c() const {
  if (!c_) throw ConfigError("generator: the general kind has no underlying operator C");
  return *c_;
}

Matrix GeneratorSpec::apply(const Matrix& t) const {
  if (t.rows() != dim_ || t.cols() != dim_) throw ConfigError("generator: operand dimension mismatch");
  if (symbol_) return symbol_->cwiseProduct(t);
  const Matrix in = projection_ ? Matrix(t.cwiseProduct(projection_->mask())) : t;
  Matrix out;
  switch (kind_) {
    case GeneratorKind::sandwich:
      out = c_->matrix() * in * c_->matrix().transpose();
      break;
    case GeneratorKind::sylvester:
      out = c_->matrix() * in + in * c_->matrix().transpose();
      break;
    case GeneratorKind::general:
      out = unvec(action_ * vec(in), dim_);
      break;
  }
  if (projection_) out = out.cwiseProduct(projection_->mask());
  return out;
}

HSOperator GeneratorSpec::apply(const HSOperator& t) const { return HSOperator(apply(t.matrix())); }

Matrix GeneratorSpec::explicit_matrix() const {
  const int d = dim_;
  Matrix m;
  switch (kind_) {
    case GeneratorKind::sandwich:
      m = kron(c_->matrix(), c_->matrix());
      break;
    case GeneratorKind::sylvester: {
      const Matrix id = Matrix::Identity(d, d);
      m = kron(id, c_->matrix()) + kron(c_->matrix(), id);
      break;
    }
    case GeneratorKind::general:
      m = action_;
      break;
  }
  if (projection_) {
    const Vector mk = vec(projection_->mask());
    m = mk.asDiagonal() * m * mk.asDiagonal();
  }
  return m;
}

GeneratorSpec truncate_generator(const GeneratorSpec& spec, const ProjectionSpec& p) {
  if (p.dim() != spec.dim()) throw ConfigError("truncate_generator: projection dimension mismatch");
  if (p.is_full()) return spec;
  GeneratorSpec out = spec;
  if (out.projection_) {
    std::vector<std::pair<int, int>> pairs;
    for (int j = 1; j <= spec.dim(); ++j)
      for (int k = 1; k <= spec.dim(); ++k)
        if (spec.projection_->contains(j, k) && p.contains(j, k)) pairs.emplace_back(j, k);
    out.projection_ = ProjectionSpec::from_pairs(spec.dim(), pairs);
  } else {
    out.projection_ = p;
  }
  out.finalize();
  return out;
}

double generator_distance_op(const GeneratorSpec& a, const GeneratorSpec& b) {
  if (a.dim() != b.dim()) throw ConfigError("generator_distance_op: dimension mismatch");
  if (a.diagonal_symbol() && b.diagonal_symbol())
    return (*a.diagonal_symbol() - *b.diagonal_symbol()).cwiseAbs().maxCoeff();
  return spectral_norm(a.explicit_matrix() - b.explicit_matrix());
}

GeneratorEigensystem generator_eigensystem(const GeneratorSpec& spec) {
  if (spec.kind() == GeneratorKind::general)
    throw ConfigError("generator_eigensystem: needs a sandwich or Sylvester generator");
  const int d = spec.dim();
  const Matrix& c = spec.c().matrix();
  const double defect = (c * c.transpose() - c.transpose() * c).norm();
  if (defect > 1e-10) throw NotNormal(defect);

  GeneratorEigensystem es;
  if (spec.eigenvalues()) {
    es.lambda = *spec.eigenvalues();
    es.basis = spec.eigenvectors() ? *spec.eigenvectors() : Matrix(Matrix::Identity(d, d));
    const double scale = 1.0 + norm(spec.c(), NormMode::op);
    const double pair_err = (c * es.basis - es.basis * es.lambda.asDiagonal()).cwiseAbs().maxCoeff();
    if (pair_err > 1e-10 * scale)
      throw ConfigError("generator_eigensystem: supplied eigen-pairs do not diagonalize C");
  } else {
    if (!spec.c().is_self_adjoint())
      throw ConfigError("generator_eigensystem: eigen-pairs must be supplied for non-self-adjoint C");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (c + c.transpose()));
    es.lambda = solver.eigenvalues();
    es.basis = solver.eigenvectors();
  }

  es.Lambda.resize(d, d);
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j)
      es.Lambda(j, k) = spec.kind() == GeneratorKind::sandwich ? es.lambda[j] * es.lambda[k]
                                                               : es.lambda[j] + es.lambda[k];

  // Check G(u_j (x) u_k) = Lambda(j,k) u_j (x) u_k for the untruncated action.
  GeneratorSpec full = spec;
  if (spec.is_truncated()) {
    full = spec.kind() == GeneratorKind::sandwich ? GeneratorSpec::sandwich(spec.c()) : GeneratorSpec::sylvester(spec.c());
  }
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < d; ++j) {
      const Matrix e = es.basis.col(j) * es.basis.col(k).transpose();
      const double err = (full.apply(e) - es.Lambda(j, k) * e).cwiseAbs().maxCoeff();
      if (err > 1e-10 * (1.0 + std::abs(es.Lambda(j, k)))) {
        std::ostringstream os;
        os << "generator_eigensystem: eigen-action check failed at (" << j + 1 << "," << k + 1 << ")";
        throw InternalError(os.str());
      }
    }
  }
  return es;
}

double eigen_tail_sup_squared(const Matrix& Lambda, const ProjectionSpec& p) {
  if (Lambda.rows() != p.dim() || Lambda.cols() != p.dim())
    throw ConfigError("eigen_tail_sup_squared: dimension mismatch");
  double sup = 0.0;
  for (int k = 1; k <= p.dim(); ++k)
    for (int j = 1; j <= p.dim(); ++j)
      if (!p.contains(j, k)) sup = std::max(sup, Lambda(j - 1, k - 1) * Lambda(j - 1, k - 1));
  return sup;
}

Vector karhunen_loeve_spectrum(int d) {
  if (d < 1) throw ConfigError("karhunen_loeve_spectrum: dimension must be >= 1");
  Vector out(d);
  for (int j = 0; j < d; ++j) {
    const double v = 2.0 / ((2.0 * j + 1.0) * std::numbers::pi);
    out[j] = v * v;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Propagator

Propagator::Propagator(GeneratorSpec generator, double uniform_step)
    : generator_(std::move(generator)), uniform_step_(uniform_step) {
  if (generator_.diagonal_symbol()) {
    mode_ = Mode::symbol;
  } else if (generator_.kind() == GeneratorKind::sylvester && !generator_.is_truncated()) {
    mode_ = Mode::factored;
  } else {
    mode_ = Mode::explicit_action;
  }
  if (uniform_step_ > 0.0) uniform_factor_ = make_factor(uniform_step_);
}

Matrix Propagator::make_factor(double dt) const {
  switch (mode_) {
    case Mode::symbol:
      return (dt * *generator_.diagonal_symbol()).array().exp().matrix();
    case Mode::factored:
      return expm(generator_.c().matrix(), dt);
    case Mode::explicit_action:
      return expm(generator_.explicit_matrix(), dt);
  }
  throw InternalError("Propagator: unknown mode");
}

Matrix Propagator::apply_factor(const Matrix& factor, const Matrix& v, double) const {
  switch (mode_) {
    case Mode::symbol:
      return factor.cwiseProduct(v);
    case Mode::factored:
      return factor * v * factor.transpose();
    case Mode::explicit_action:
      return unvec(factor * vec(v), generator_.dim());
  }
  throw InternalError("Propagator: unknown mode");
}

Matrix Propagator::step(const Matrix& v, double dt) const {
  if (dt == 0.0) return v;
  if (uniform_step_ > 0.0 && std::abs(dt - uniform_step_) <= 1e-12 * uniform_step_)
    return apply_factor(uniform_factor_, v, dt);
  return apply_factor(make_factor(dt), v, dt);
}

// ---------------------------------------------------------------------------
// Grid and paths

std::vector<GridPoint> make_variance_grid(double horizon, int steps, const std::vector<double>& jump_times) {
  if (!(horizon > 0.0)) throw ConfigError("variance grid: horizon must be positive");
  if (steps < 1) throw ConfigError("variance grid: step count must be >= 1");
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(steps) + 1 + jump_times.size());
  for (int m = 0; m <= steps; ++m) times.push_back(m == steps ? horizon : horizon * m / steps);
  for (double t : jump_times) {
    if (!(t > 0.0) || t > horizon) throw ConfigError("variance grid: jump time outside (0, T]");
    times.push_back(t);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  std::vector<GridPoint> grid;
  grid.reserve(times.size() + jump_times.size());
  std::size_t next_jump = 0;
  std::vector<double> sorted_jumps = jump_times;
  std::sort(sorted_jumps.begin(), sorted_jumps.end());
  for (double t : times) {
    while (next_jump < sorted_jumps.size() && sorted_jumps[next_jump] < t) ++next_jump;
    if (next_jump < sorted_jumps.size() && sorted_jumps[next_jump] == t) grid.push_back({t, true});
    grid.push_back({t, false});
  }
  return grid;
}

std::vector<std::size_t> VariancePath::right_indices() const {
  std::vector<std::size_t> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!grid[i].left_limit) out.push_back(i);
  return out;
}

VariancePath evolve_variance(const HSOperator& v0, const Propagator& propagator,
                             const std::vector<double>& jump_times, const std::vector<HSOperator>& jumps,
                             const std::vector<GridPoint>& grid) {
  const int d = propagator.generator().dim();
  if (v0.dim() != d) throw ConfigError("evolve_variance: V0 dimension mismatch");
  if (jump_times.size() != jumps.size()) throw ConfigError("evolve_variance: jump count mismatch");
  if (grid.empty() || grid.front().t != 0.0 || grid.front().left_limit)
    throw ConfigError("evolve_variance: grid must start at t = 0");

  // Every jump time needs a left-limit point followed by its right point.
  std::size_t found = 0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (grid[i].left_limit) {
      if (found >= jump_times.size() || grid[i].t != jump_times[found] || grid[i + 1].t != grid[i].t ||
          grid[i + 1].left_limit)
        throw ConfigError("evolve_variance: grid left limits do not match the jump times");
      ++found;
    }
  }
  if (found != jump_times.size()) throw ConfigError("evolve_variance: grid is missing jump times");

  bool symmetric = v0.is_self_adjoint() && propagator.generator().preserves_adjoint();
  for (const auto& x : jumps) symmetric = symmetric && x.is_self_adjoint();

  VariancePath path;
  path.grid = grid;
  path.values.reserve(grid.size());
  Matrix state = v0.matrix();
  double t_prev = 0.0;
  std::size_t next_jump = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const GridPoint& gp = grid[i];
    if (gp.t < t_prev) throw ConfigError("evolve_variance: grid must be nondecreasing");
    state = propagator.step(state, gp.t - t_prev);
    t_prev = gp.t;
    if (!gp.left_limit && next_jump < jump_times.size() && jump_times[next_jump] == gp.t) {
      state += jumps[next_jump].matrix();
      ++next_jump;
    }
    if (symmetric) state = 0.5 * (state + state.transpose());
    path.values.emplace_back(state);
  }
  return path;
}

VariancePath evolve_variance(const HSOperator& v0, const Propagator& propagator,
                             const CoupledJumpStream& stream, int level_index,
                             const std::vector<GridPoint>& grid) {
  if (level_index < 0) return evolve_variance(v0, propagator, stream.clock.jump_times, stream.jumps, grid);
  if (static_cast<std::size_t>(level_index) >= stream.approx_jumps.size())
    throw ConfigError("evolve_variance: unknown level index");
  return evolve_variance(v0, propagator, stream.clock.jump_times,
                         stream.approx_jumps[static_cast<std::size_t>(level_index)], grid);
}

double variance_sup_error(const VariancePath& path, const VariancePath& approx, NormMode mode) {
  if (path.grid.size() != approx.grid.size() || path.values.size() != approx.values.size())
    throw InternalError("variance_sup_error: grids differ (coupling violated)");
  double sup = 0.0;
  for (std::size_t i = 0; i < path.grid.size(); ++i) {
    if (path.grid[i].t != approx.grid[i].t || path.grid[i].left_limit != approx.grid[i].left_limit)
      throw InternalError("variance_sup_error: grids differ (coupling violated)");
    sup = std::max(sup, norm(path.values[i] - approx.values[i], mode));
  }
  return sup;
}

PositivityReport check_positivity_conditions(const GeneratorSpec& spec, const CoupledJumpStream& jumps,
                                             const HSOperator& v0, Stream& stream, int trials) {
  const int d = spec.dim();
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random_matrix = [&] {
    Matrix m(d, d);
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) m(j, k) = normal(stream);
    return m;
  };
  auto is_psd = [](const HSOperator& t) {
    return t.is_self_adjoint() && min_eigenvalue(t) >= -psd_tolerance(t);
  };

  PositivityReport r;
  std::ostringstream note;

  r.adjoint_compatible = true;
  for (int i = 0; i < trials; ++i) {
    const Matrix t = random_matrix();
    const Matrix lhs = spec.apply(t).transpose();
    const Matrix rhs = spec.apply(Matrix(t.transpose()));
    if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + lhs.cwiseAbs().maxCoeff())) {
      r.adjoint_compatible = false;
      break;
    }
  }

  if (spec.kind() == GeneratorKind::sylvester && !spec.is_truncated()) {
    // exp(tG)P = exp(tC) P exp(tC)* is PSD for PSD P.
    r.cone_preserving = true;
    note << "cone condition validated structurally for the Sylvester form; ";
  } else {
    r.cone_preserving = true;
    for (int i = 0; i < trials; ++i) {
      const Matrix g = random_matrix();
      const HSOperator out(spec.apply(Matrix(g * g.transpose())));
      if (!is_psd(HSOperator(Matrix(0.5 * (out.matrix() + out.matrix().transpose())))) ||
          !out.is_self_adjoint()) {
        r.cone_preserving = false;
        break;
      }
    }
  }

  r.jumps_psd = true;
  for (const auto& x : jumps.jumps) r.jumps_psd = r.jumps_psd && is_psd(x);
  for (const auto& level : jumps.approx_jumps)
    for (const auto& x : level) r.jumps_psd = r.jumps_psd && is_psd(x);

  r.initial_psd = is_psd(v0);
  if (!r.initial_psd) note << "V0 is not self-adjoint PSD; ";
  r.note = note.str();
  return r;
}

}  // namespace opvol
