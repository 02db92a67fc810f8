#include "opvol/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace opvol {

double bound_forward(const BoundInputs& in) {
  const double t = in.horizon;
  if (!(t > 0.0)) return 0.0;
  const double scale = in.c * in.c * in.trace_q;
  if (std::abs(in.k) < 1e-12 / t) return scale * t;
  return scale * std::expm1(2.0 * in.k * t) / (2.0 * in.k);
}

JumpVarianceConstants bound_variance_jumps(const BoundInputs& in) {
  const double t = in.horizon;
  const double lt = in.intensity * t;
  const double e = std::exp(2.0 * t * in.gen_norm);
  JumpVarianceConstants out;
  out.c0 = 2.0 * e;
  out.c1 = 2.0 * e * lt * (1.0 + lt) * e;
  out.c1_single_exp = 2.0 * e * lt * (1.0 + lt);
  if (in.gen_norm == 0.0 && in.m_dv0_hs2 == 0.0) out.no_drift = 2.0 * lt * (1.0 + lt);
  return out;
}

namespace {

double generator_moment_factor(const BoundInputs& in) {
  const double lt = in.intensity * in.horizon;
  return in.m_v0_hs2 + lt * in.m_jump_hs2 + lt * lt * in.m_jump_hs_sq;
}

}  // namespace

double bound_variance_generator(const BoundInputs& in) {
  const double t = in.horizon;
  const double g = std::max(in.gen_norm, in.gen_norm_approx);
  return 2.0 * t * t * std::exp(2.0 * t * g) * generator_moment_factor(in);
}

double bound_variance_generator_compact(const BoundInputs& in) {
  const double t = in.horizon;
  return 4.0 * t * t * std::exp(2.0 * t * in.gen_norm) * generator_moment_factor(in);
}

SqrtBound bound_sqrt(const BoundInputs& in, SqrtCase which, double k) {
  const double t = in.horizon;
  const double lt = in.intensity * t;
  SqrtBound out;
  out.k = k;
  switch (which) {
    case SqrtCase::op_norm:
      out.constant = 1.0;
      out.rhs = in.m_sup_dv_op;
      break;
    case SqrtCase::hs_jumps:
      out.constant = k * std::exp(in.gen_norm * t) * lt;
      out.rhs = out.constant * in.m_djump_tr;
      break;
    case SqrtCase::hs_generator:
      out.constant = k * t * std::exp(t * std::max(in.gen_norm, in.gen_norm_approx)) *
                     (in.m_v0_tr + lt * in.m_jump_tr);
      out.rhs = out.constant * in.gen_distance;
      break;
  }
  return out;
}

double bound_tensor_jump(double m4, double m4diff) { return 4.0 * std::sqrt(m4 * m4diff); }

double bound_tensor_trace(double m2, double m2diff) { return 2.0 * std::sqrt(m2 * m2diff); }

double bound_pricing(double lipschitz, double functional_norm, double mean_abs_error) {
  return lipschitz * functional_norm * mean_abs_error;
}

double bound_pathwise(double gen_norm, double t, double initial_diff, double jump_diff_sum) {
  return std::exp(gen_norm * t) * (initial_diff + jump_diff_sum);
}

}  // namespace opvol
