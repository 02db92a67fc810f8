#pragma once

// Closed-form constants and right-hand sides of the robustness estimates.
// Every function is pure; expectations are supplied by the caller.

#include <optional>

namespace opvol {

struct BoundInputs {
  /// Forward semigroup constants, ||S(t)||_op <= c e^{kt}.
  double c = 1.0;
  double k = 0.0;
  double trace_q = 0.0;
  double horizon = 0.0;
  double intensity = 0.0;

  /// ||G||_op, ||G^n||_op and ||G - G^n||_op of the variance generators.
  double gen_norm = 0.0;
  double gen_norm_approx = 0.0;
  double gen_distance = 0.0;

  double m_v0_hs2 = 0.0;        // E||V0||_HS^2
  double m_jump_hs2 = 0.0;      // E||X||_HS^2
  double m_jump_hs_sq = 0.0;    // (E||X||_HS)^2
  double m_v0_tr = 0.0;         // E||V0||_1
  double m_jump_tr = 0.0;       // E||X||_1
  double m_djump_hs2 = 0.0;     // E||X - X^n||_HS^2
  double m_djump_tr = 0.0;      // E||X - X^n||_1
  double m_dv0_hs2 = 0.0;       // E||V0 - V0^n||_HS^2
  double m_sup_dv_op = 0.0;     // E sup_t ||V - V^n||_op
  double tail_sup_sq = 0.0;     // sup over the dropped indices of Lambda^2
};

/// c^2 Tr(Q) (e^{2kT} - 1) / (2k), with the limit c^2 Tr(Q) T when |k| < 1e-12 / T.
double bound_forward(const BoundInputs& in);

struct JumpVarianceConstants {
  /// 2 e^{2T||G||}
  double c0 = 0.0;
  /// 2 e^{2T||G||} T lambda (1 + lambda T) e^{2T||G||}, with the exponential factor doubled.
  double c1 = 0.0;
  /// The same with a single exponential factor.
  double c1_single_exp = 0.0;
  /// 2 T lambda (1 + lambda T), present when ||G|| = 0 and V0^n = V0.
  std::optional<double> no_drift;
};

JumpVarianceConstants bound_variance_jumps(const BoundInputs& in);

/// 2 T^2 e^{2T(||G|| v ||G^n||)} (E||V0||^2 + lambda T E||X||^2 + lambda^2 T^2 (E||X||)^2);
/// multiply by ||G - G^n||_op^2.
double bound_variance_generator(const BoundInputs& in);

/// 4 T^2 e^{2T||G||} (same moment factor); multiply by the eigenvalue tail sup.
double bound_variance_generator_compact(const BoundInputs& in);

enum class SqrtCase { op_norm, hs_jumps, hs_generator };

struct SqrtBound {
  /// Multiplicative constant with the unspecified k set to `k`.
  double constant = 0.0;
  double rhs = 0.0;
  double k = 1.0;
};

/// op_norm: rhs = E sup||V - V^n||_op (constant 1).
/// hs_jumps: constant k e^{||G|| T} lambda T, rhs = constant E||X - X^n||_1.
/// hs_generator: constant k T e^{T(||G|| v ||G^n||)} (E||V0||_1 + lambda T E||X||_1),
///               rhs = constant ||G - G^n||_op.
SqrtBound bound_sqrt(const BoundInputs& in, SqrtCase which, double k = 1.0);

/// 4 sqrt(E|Y|^4 E|Y - Y^n|^4).
double bound_tensor_jump(double m4, double m4diff);

/// 2 sqrt(E|Y|^2 E|Y - Y^n|^2), bounding E||X - X^n||_1 for tensor-squared jumps.
double bound_tensor_trace(double m2, double m2diff);

/// K ||D||_op E|X(tau) - X^n(tau)|.
double bound_pricing(double lipschitz, double functional_norm, double mean_abs_error);

/// Pathwise bound e^{||G|| t} (||V0 - V0^n|| + sum_{T_i <= t} ||X_i - X_i^n||).
double bound_pathwise(double gen_norm, double t, double initial_diff, double jump_diff_sum);

}  // namespace opvol
