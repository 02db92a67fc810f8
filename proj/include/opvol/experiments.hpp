#pragma once

// Coupled Monte Carlo ensembles across truncation levels, and the reductions
// that turn them into bound reports, convergence tables and option prices.

#include "opvol/bounds.hpp"
#include "opvol/forward.hpp"
#include "opvol/pricing.hpp"
#include "opvol/processes.hpp"
#include "opvol/report.hpp"
#include "opvol/variance.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace opvol {

/// What the level-n model changes relative to the reference model.
enum class Perturbation {
  /// Jumps (Y^n)^{(x)2} with Y^n the first n coordinates of Y; levels in [1, d].
  jumps,
  /// Compressed generator Pi_n G Pi_n; levels index the projection family.
  generator,
};

enum class ProjectionFamily {
  /// {(j,k) : j + k <= n}, n in [2, 2d].
  anti_diagonal,
  /// {(j,k) : j, k <= n}, n in [1, d].
  square,
};

struct GeneratorConfig {
  GeneratorKind kind = GeneratorKind::sylvester;
  /// Eigenvalues lambda_j of the diagonal operator C = scale diag(lambda).
  Vector spectrum;
  /// Defaults to -1 for Sylvester (mean reversion) and 1 for sandwich.
  std::optional<double> scale;
};

struct ForwardConfig {
  ForwardKind kind = ForwardKind::diagonal;
  /// Diagonal kind: A = diag(rates).
  Vector rates;
  /// Skew kind: A = strength (S - S*) with S the unit shift e_j -> e_{j+1}.
  double strength = 1.0;
};

struct CoupledScenario {
  int d = 8;
  std::vector<int> levels{2, 4, 6};
  double horizon = 1.0;
  int steps = 200;
  double intensity = 1.0;
  Vector jump_gamma;
  Vector q;
  GeneratorConfig generator;
  ForwardConfig forward;
  Vector initial_spectrum;
  /// Use V0^n = Pi_n V0 (jumps mode: first n coordinates) instead of V0^n = V0.
  bool truncate_initial = false;
  Perturbation perturbation = Perturbation::jumps;
  ProjectionFamily projection = ProjectionFamily::anti_diagonal;
  PayoffSpec payoff = PayoffSpec::call(0.0);
  /// Riesz vector of the forward functional.
  Vector functional;
  PayoffSpec vol_payoff = PayoffSpec::identity();
  /// Riesz operator of the volatility functional (default: trace).
  Matrix vol_functional;
  std::optional<double> exercise_time;
  std::int64_t replications = 2000;
  std::uint64_t seed = 20240917;

  /// The scenario with every empty field set to its documented default.
  CoupledScenario with_defaults() const;
  /// Throws ConfigError naming the offending field.
  void validate() const;
  /// Level meaning "no truncation": d for jumps, 2d or d for generator mode.
  int full_level() const;
};

struct RunOptions {
  /// Worker threads; 0 picks the available hardware parallelism.
  int threads = 0;
  /// Optional execution order of replications (a permutation of 0..R-1).
  std::vector<std::size_t> order;
};

/// Per-level values of one replication.
struct LevelSample {
  double sup_dv_hs = 0.0;
  double sup_dv_op = 0.0;
  double sup_dv_tr = 0.0;
  double sup_dsqrt_op2 = 0.0;
  double sup_dsqrt_hs2 = 0.0;
  double sup_dl_hs2 = 0.0;
  double pathwise_hs_excess = 0.0;
  double pathwise_tr_excess = 0.0;
  double sup_di2 = 0.0;
  double abs_dx_tau = 0.0;
  double payoff = 0.0;
  double vol_payoff = 0.0;
  double dsqrt_tau_hs = 0.0;
  // Independent probe jump.
  double probe_dx_hs2 = 0.0;
  double probe_dx_tr = 0.0;
  double probe_dy2 = 0.0;
  double probe_dy4 = 0.0;
};

struct ReplicationSample {
  std::size_t jump_count = 0;
  double payoff = 0.0;
  double vol_payoff = 0.0;
  double x_tau_norm2 = 0.0;
  double probe_y2 = 0.0;
  double probe_y4 = 0.0;
  double probe_x_hs = 0.0;
  double probe_x_hs2 = 0.0;
  double probe_x_tr = 0.0;
  std::vector<LevelSample> levels;
};

/// Deterministic per-level quantities.
struct LevelInfo {
  int level = 0;
  double gen_norm_approx = 0.0;
  double gen_distance = 0.0;
  /// sup of Lambda^2 outside the projection (generator mode, diagonal C).
  std::optional<double> tail_sup_sq;
  double dv0_hs2 = 0.0;
  double dv0_hs = 0.0;
  double dv0_tr = 0.0;
  /// ||V0 - Pi V0||_HS^2 for the anti-diagonal projection of this level.
  double projection_tail = 0.0;
};

struct Ensemble {
  CoupledScenario scenario;
  double gen_norm = 0.0;
  double trace_q = 0.0;
  double forward_c = 1.0;
  double forward_k = 0.0;
  double v0_hs2 = 0.0;
  double v0_tr = 0.0;
  double functional_norm = 0.0;
  double vol_functional_norm = 0.0;
  std::vector<LevelInfo> levels;
  std::vector<ReplicationSample> samples;
};

/// Simulates every replication of the scenario (after defaults and validation).
Ensemble simulate_ensemble(const CoupledScenario& scenario, const RunOptions& options = {});

std::vector<BoundReport> bound_reports(const Ensemble& ensemble);

/// simulate_ensemble followed by bound_reports.
std::vector<BoundReport> run_experiment(const CoupledScenario& scenario, const RunOptions& options = {});

struct ConvergenceRow {
  int level = 0;
  std::string id;
  double estimate = 0.0;
  double se = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  /// Each id's estimates are weakly decreasing within 3 combined standard errors.
  bool monotone = true;
  std::vector<std::string> non_monotone;
};

ConvergenceTable convergence_table(const Ensemble& ensemble);
/// Needs at least 3 levels.
ConvergenceTable convergence_study(const CoupledScenario& scenario, const RunOptions& options = {});

struct PricingRow {
  /// -1 for the untruncated model.
  int level = -1;
  double price = 0.0;
  double se = 0.0;
  double price_diff = 0.0;
  double lipschitz_bound = 0.0;
  double theorem_cap = 0.0;
  bool pass = true;
};

std::vector<PriceRobustness> pricing_reports(const Ensemble& ensemble);
std::vector<PricingRow> pricing_rows(const Ensemble& ensemble);
std::vector<PricingRow> run_pricing(const CoupledScenario& scenario, const RunOptions& options = {});

/// Product of two sample means with a delta-method standard error that
/// accounts for their covariance.
Estimate product_of_means(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace opvol
