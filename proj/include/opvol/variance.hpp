#pragma once

// Drift generators on L_HS(H), exact pathwise evolution of the variance
// process V(t) = exp(tG) V0 + sum_{T_i <= t} exp((t - T_i) G) X_i, and
// sup-norm path comparisons.

#include "opvol/operator_core.hpp"
#include "opvol/processes.hpp"
#include "opvol/rng.hpp"

#include <optional>
#include <string>
#include <vector>

namespace opvol {

enum class GeneratorKind { sandwich, sylvester, general };

const char* to_string(GeneratorKind kind) noexcept;

/// Bounded linear operator G on L_HS(H). Operators are vectorized
/// column-major: vec(T)[j + d*k] = T(j,k) with 0-based j, k.
class GeneratorSpec {
 public:
  /// T -> C T C*.
  static GeneratorSpec sandwich(HSOperator c, std::optional<Vector> eigenvalues = std::nullopt,
                                std::optional<Matrix> eigenvectors = std::nullopt);
  /// T -> C T + T C*.
  static GeneratorSpec sylvester(HSOperator c, std::optional<Vector> eigenvalues = std::nullopt,
                                 std::optional<Matrix> eigenvectors = std::nullopt);
  /// Explicit d^2 x d^2 action on vec(T).
  static GeneratorSpec general(Matrix action, int d);

  GeneratorKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  /// Underlying C; throws ConfigError for the general kind.
  const HSOperator& c() const;
  const std::optional<Vector>& eigenvalues() const noexcept { return eigenvalues_; }
  const std::optional<Matrix>& eigenvectors() const noexcept { return eigenvectors_; }

  /// Projection of a compressed generator Pi G Pi, if any.
  const std::optional<ProjectionSpec>& projection() const noexcept { return projection_; }
  bool is_truncated() const noexcept { return projection_.has_value(); }

  /// When G acts entrywise, (G T)(j,k) = symbol(j,k) T(j,k).
  const std::optional<Matrix>& diagonal_symbol() const noexcept { return symbol_; }
  /// (G T)* = G(T*) for every T.
  bool preserves_adjoint() const noexcept { return preserves_adjoint_; }

  HSOperator apply(const HSOperator& t) const;
  Matrix apply(const Matrix& t) const;
  Matrix explicit_matrix() const;

  /// ||G||_op on L_HS(H). Exact when op_norm_is_exact(), otherwise an upper bound.
  double op_norm() const noexcept { return op_norm_; }
  bool op_norm_is_exact() const noexcept { return op_norm_exact_; }

  friend GeneratorSpec truncate_generator(const GeneratorSpec& spec, const ProjectionSpec& p);

 private:
  GeneratorSpec() = default;
  void finalize();

  GeneratorKind kind_ = GeneratorKind::general;
  int dim_ = 0;
  std::optional<HSOperator> c_;
  std::optional<Vector> eigenvalues_;
  std::optional<Matrix> eigenvectors_;
  Matrix action_;
  std::optional<ProjectionSpec> projection_;
  std::optional<Matrix> symbol_;
  bool preserves_adjoint_ = false;
  double op_norm_ = 0.0;
  bool op_norm_exact_ = false;
};

/// Pi G Pi. A full projection returns the generator unchanged.
GeneratorSpec truncate_generator(const GeneratorSpec& spec, const ProjectionSpec& p);

/// ||A - B||_op on L_HS(H), from the explicit actions.
double generator_distance_op(const GeneratorSpec& a, const GeneratorSpec& b);

struct GeneratorEigensystem {
  /// Eigenvalues of C.
  Vector lambda;
  /// Orthonormal eigenvectors of C as columns.
  Matrix basis;
  /// Lambda(j,k): eigenvalue of G on basis_j (x) basis_k.
  Matrix Lambda;
};

/// Eigenvalues of a sandwich (lambda_j lambda_k) or Sylvester
/// (lambda_j + lambda_k) generator, checked against the action to 1e-10.
/// Throws NotNormal when ||CC* - C*C||_HS > 1e-10.
GeneratorEigensystem generator_eigensystem(const GeneratorSpec& spec);

/// sup over (j,k) outside the projection of Lambda(j,k)^2 (0 for a full projection).
double eigen_tail_sup_squared(const Matrix& Lambda, const ProjectionSpec& p);

/// Karhunen-Loeve eigenvalues (2 / ((2j + 1) pi))^2 for j = 0..d-1.
Vector karhunen_loeve_spectrum(int d);

/// exp(dt G), with the step of a uniform grid precomputed. Immutable, so one
/// instance can serve every replication.
class Propagator {
 public:
  Propagator(GeneratorSpec generator, double uniform_step);

  const GeneratorSpec& generator() const noexcept { return generator_; }
  Matrix step(const Matrix& v, double dt) const;

 private:
  enum class Mode { symbol, factored, explicit_action };
  Matrix make_factor(double dt) const;
  Matrix apply_factor(const Matrix& factor, const Matrix& v, double dt) const;

  GeneratorSpec generator_;
  Mode mode_;
  double uniform_step_;
  Matrix uniform_factor_;
};

struct GridPoint {
  double t = 0.0;
  /// Value taken just before a jump at t.
  bool left_limit = false;
};

/// Uniform points k T / M merged with every jump time and its left limit.
std::vector<GridPoint> make_variance_grid(double horizon, int steps, const std::vector<double>& jump_times);

struct VariancePath {
  std::vector<GridPoint> grid;
  std::vector<HSOperator> values;

  /// Indices of the right-continuous grid points (one per distinct time).
  std::vector<std::size_t> right_indices() const;
};

/// Exact evolution given jump times and the jumps applied at them.
VariancePath evolve_variance(const HSOperator& v0, const Propagator& propagator,
                             const std::vector<double>& jump_times, const std::vector<HSOperator>& jumps,
                             const std::vector<GridPoint>& grid);

/// Same, picking the jumps of one level from a coupled stream (level_index < 0
/// selects the exact jumps).
VariancePath evolve_variance(const HSOperator& v0, const Propagator& propagator,
                             const CoupledJumpStream& stream, int level_index,
                             const std::vector<GridPoint>& grid);

/// max over the grid of ||V(t) - V^n(t)||. Throws InternalError on grid mismatch.
double variance_sup_error(const VariancePath& path, const VariancePath& approx, NormMode mode);

struct PositivityReport {
  bool adjoint_compatible = false;
  bool cone_preserving = false;
  bool jumps_psd = false;
  bool initial_psd = false;
  std::string note;

  bool all() const noexcept { return adjoint_compatible && cone_preserving && jumps_psd && initial_psd; }
};

/// Checks (a) G(T)* = G(T*), (b) G maps PSD to PSD, (c) jumps PSD, (d) V0 PSD.
/// (a) and (b) are sampled with `trials` random operators from `stream`.
PositivityReport check_positivity_conditions(const GeneratorSpec& spec, const CoupledJumpStream& jumps,
                                             const HSOperator& v0, Stream& stream, int trials = 32);

}  // namespace opvol
