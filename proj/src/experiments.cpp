#include "opvol/experiments.hpp"

#include "opvol/errors.hpp"
#include "opvol/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace opvol {

namespace {

constexpr int kMaxDim = 64;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

void check_spectrum(const Vector& v, int d, const std::string& field, bool nonnegative) {
  if (v.size() != d) {
    std::ostringstream os;
    os << "expected " << d << " entries, got " << v.size();
    field_error(field, os.str());
  }
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (!std::isfinite(v[j])) field_error(field, "entries must be finite");
    if (nonnegative && v[j] < 0.0) field_error(field, "entries must be >= 0");
  }
}

struct Norms {
  double hs = 0.0;
  double op = 0.0;
  double tr = 0.0;
};

Norms norms_of(const Matrix& m) {
  Norms n;
  n.hs = m.norm();
  if (n.hs == 0.0) return n;
  Vector s;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() <= kSelfAdjointTolerance) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    s = es.eigenvalues().cwiseAbs();
  } else {
    Eigen::JacobiSVD<Matrix> svd(m);
    s = svd.singularValues();
  }
  n.op = s.maxCoeff();
  n.tr = s.sum();
  return n;
}

/// Estimate of a smooth function of means: `value` plus the standard error of
/// the per-sample influence (first-order term of the function).
Estimate delta_estimate(double value, const std::vector<double>& influence) {
  return Estimate{value, estimate(influence).se};
}

template <class F>
std::vector<double> column(const std::vector<ReplicationSample>& samples, F&& f) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(f(s));
  return out;
}

Estimate scaled(Estimate e, double factor) { return Estimate{factor * e.mean, std::abs(factor) * e.se}; }

Estimate sqrt_of(Estimate e) {
  if (e.mean <= 0.0) return Estimate{0.0, 0.0};
  const double r = std::sqrt(e.mean);
  return Estimate{r, e.se / (2.0 * r)};
}

Estimate sum_of(Estimate a, Estimate b) { return Estimate{a.mean + b.mean, std::hypot(a.se, b.se)}; }

ProjectionSpec projection_for(const CoupledScenario& s, int n) {
  return s.projection == ProjectionFamily::anti_diagonal ? ProjectionSpec::level(s.d, n)
                                                         : ProjectionSpec::square(s.d, n);
}

Matrix skew_shift(int d, double strength) {
  Matrix a = Matrix::Zero(d, d);
  for (int j = 0; j + 1 < d; ++j) {
    a(j + 1, j) = strength;
    a(j, j + 1) = -strength;
  }
  return a;
}

template <class Fn>
void parallel_for(std::size_t count, int threads, const std::vector<std::size_t>& order, Fn&& fn) {
  if (!order.empty()) {
    if (order.size() != count) throw ConfigError("run options: order must list every replication once");
    std::vector<char> seen(count, 0);
    for (std::size_t r : order) {
      if (r >= count || seen[r]) throw ConfigError("run options: order must be a permutation");
      seen[r] = 1;
    }
  }
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(count, 1));

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;

  auto work = [&] {
    while (true) {
      const std::size_t pos = next.fetch_add(1);
      if (pos >= count) return;
      const std::size_t r = order.empty() ? pos : order[pos];
      try {
        fn(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (r < error_index) {
          error_index = r;
          error = std::current_exception();
        }
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

// ---------------------------------------------------------------------------
// Scenario

CoupledScenario CoupledScenario::with_defaults() const {
  CoupledScenario s = *this;
  if (s.d < 1 || s.d > kMaxDim) return s;  // validate() reports it
  const int d = s.d;
  auto geometric = [d] {
    Vector v(d);
    for (int j = 0; j < d; ++j) v[j] = std::ldexp(1.0, -(j + 1));
    return v;
  };
  if (s.jump_gamma.size() == 0) s.jump_gamma = geometric();
  if (s.q.size() == 0) {
    s.q.resize(d);
    for (int j = 0; j < d; ++j) s.q[j] = 1.0 / ((j + 1.0) * (j + 1.0));
  }
  if (s.generator.spectrum.size() == 0) s.generator.spectrum = karhunen_loeve_spectrum(d);
  if (!s.generator.scale) s.generator.scale = s.generator.kind == GeneratorKind::sandwich ? 1.0 : -1.0;
  if (s.forward.rates.size() == 0) {
    s.forward.rates.resize(d);
    for (int j = 0; j < d; ++j) s.forward.rates[j] = -0.1 * (j + 1);
  }
  if (s.initial_spectrum.size() == 0) s.initial_spectrum = geometric();
  if (s.functional.size() == 0) s.functional = HilbertVector::basis(d, 1).coeffs();
  if (s.vol_functional.size() == 0) s.vol_functional = Matrix::Identity(d, d);
  return s;
}

int CoupledScenario::full_level() const {
  if (perturbation == Perturbation::jumps || projection == ProjectionFamily::square) return d;
  return 2 * d;
}

void CoupledScenario::validate() const {
  if (d < 1 || d > kMaxDim) field_error("d", "must be in [1, 64]");
  if (levels.empty()) field_error("levels", "must list at least one level");
  const int lo = perturbation == Perturbation::generator && projection == ProjectionFamily::anti_diagonal ? 2 : 1;
  const int hi = full_level();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < lo || levels[i] > hi) {
      std::ostringstream os;
      os << "level " << levels[i] << " outside [" << lo << ", " << hi << "]";
      field_error("levels", os.str());
    }
    if (i > 0 && levels[i] <= levels[i - 1]) field_error("levels", "must be strictly increasing");
  }
  if (!std::isfinite(horizon) || !(horizon > 0.0)) field_error("horizon", "must be > 0");
  if (steps < 1) field_error("steps", "must be >= 1");
  if (!std::isfinite(intensity) || !(intensity > 0.0)) field_error("intensity", "must be > 0");
  check_spectrum(jump_gamma, d, "jump_gamma", true);
  check_spectrum(q, d, "q", true);
  check_spectrum(generator.spectrum, d, "generator.spectrum", false);
  if (!generator.scale || !std::isfinite(*generator.scale)) field_error("generator.scale", "must be finite");
  if (generator.kind == GeneratorKind::general) field_error("generator.kind", "must be sandwich or sylvester");
  if (forward.kind == ForwardKind::diagonal) check_spectrum(forward.rates, d, "forward.rates", false);
  if (!std::isfinite(forward.strength)) field_error("forward.strength", "must be finite");
  check_spectrum(initial_spectrum, d, "initial.spectrum", true);
  check_spectrum(functional, d, "functional", false);
  if (vol_functional.rows() != d || vol_functional.cols() != d)
    field_error("vol_functional", "must be a d x d matrix");
  if (!vol_functional.allFinite()) field_error("vol_functional", "entries must be finite");
  if (replications < 2) field_error("replications", "must be >= 2");
  if (exercise_time) {
    const double tau = *exercise_time;
    if (!std::isfinite(tau) || !(tau > 0.0) || tau > horizon) field_error("exercise_time", "must be in (0, horizon]");
    const double k = tau * steps / horizon;
    if (std::abs(k - std::round(k)) > 1e-9) field_error("exercise_time", "must be a multiple of horizon / steps");
  }
}

// ---------------------------------------------------------------------------
// Simulation

Ensemble simulate_ensemble(const CoupledScenario& scenario, const RunOptions& options) {
  const CoupledScenario s = scenario.with_defaults();
  s.validate();
  const int d = s.d;
  const double T = s.horizon;
  const double h = T / s.steps;
  const double tau = s.exercise_time.value_or(T);
  const bool jumps_mode = s.perturbation == Perturbation::jumps;
  const std::size_t L = s.levels.size();

  const Vector c_diag = *s.generator.scale * s.generator.spectrum;
  const GeneratorSpec gen = s.generator.kind == GeneratorKind::sandwich
                                ? GeneratorSpec::sandwich(HSOperator::diagonal(c_diag), c_diag)
                                : GeneratorSpec::sylvester(HSOperator::diagonal(c_diag), c_diag);
  const Propagator exact_prop(gen, h);
  std::vector<Propagator> level_props;
  if (!jumps_mode) {
    for (int n : s.levels) level_props.emplace_back(truncate_generator(gen, projection_for(s, n)), h);
  }

  const JumpLaw law = JumpLaw::gaussian(s.jump_gamma);
  const QWienerSpec qspec(s.q);
  const ForwardSemigroupSpec fwd = s.forward.kind == ForwardKind::diagonal
                                       ? ForwardSemigroupSpec::diagonal(s.forward.rates)
                                       : ForwardSemigroupSpec::skew(skew_shift(d, s.forward.strength));
  const ForwardStepper stepper(fwd, h);
  const HSOperator v0 = HSOperator::diagonal(s.initial_spectrum);
  const FunctionalSpec dfun = FunctionalSpec::forward(HilbertVector(s.functional));
  const FunctionalSpec vfun = FunctionalSpec::volatility(HSOperator(s.vol_functional));

  Ensemble ens;
  ens.scenario = s;
  ens.gen_norm = gen.op_norm();
  ens.trace_q = qspec.trace();
  ens.forward_c = fwd.c();
  ens.forward_k = fwd.k();
  ens.v0_hs2 = v0.matrix().squaredNorm();
  ens.v0_tr = norm(v0, NormMode::trace);
  ens.functional_norm = dfun.op_norm();
  ens.vol_functional_norm = vfun.op_norm();

  std::vector<HSOperator> v0_levels;
  std::optional<Matrix> Lambda;
  if (!jumps_mode && gen.diagonal_symbol()) Lambda = generator_eigensystem(gen).Lambda;
  for (std::size_t l = 0; l < L; ++l) {
    const int n = s.levels[l];
    LevelInfo info;
    info.level = n;
    HSOperator v0n = v0;
    if (s.truncate_initial) {
      if (jumps_mode) {
        Vector diag = s.initial_spectrum;
        diag.tail(d - n).setZero();
        v0n = HSOperator::diagonal(diag);
      } else {
        v0n = project_operator(v0, projection_for(s, n));
      }
    }
    const Norms dv0 = norms_of(v0.matrix() - v0n.matrix());
    info.dv0_hs2 = dv0.hs * dv0.hs;
    info.dv0_hs = dv0.hs;
    info.dv0_tr = dv0.tr;
    info.gen_norm_approx = jumps_mode ? gen.op_norm() : level_props[l].generator().op_norm();
    info.gen_distance = jumps_mode ? 0.0 : generator_distance_op(gen, level_props[l].generator());
    if (Lambda) info.tail_sup_sq = eigen_tail_sup_squared(*Lambda, projection_for(s, n));
    const HSOperator tail = v0 - project_operator(v0, ProjectionSpec::level(d, std::min(n, 2 * d)));
    info.projection_tail = tail.matrix().squaredNorm();
    ens.levels.push_back(info);
    v0_levels.push_back(std::move(v0n));
  }

  const std::vector<int> jump_levels = jumps_mode ? s.levels : std::vector<int>{};
  const std::size_t R = static_cast<std::size_t>(s.replications);
  ens.samples.resize(R);

  auto kernel = [&](std::size_t r) {
    try {
      Stream clock_stream = derive_stream(s.seed, r, Purpose::clock);
      Stream jump_stream = derive_stream(s.seed, r, Purpose::jumps);
      Stream probe_stream = derive_stream(s.seed, r, Purpose::probe);
      Stream wiener_stream = derive_stream(s.seed, r, Purpose::wiener);

      PoissonClock clock = sample_clock(s.intensity, T, clock_stream);
      const CoupledJumpStream js = sample_coupled_jumps(law, std::move(clock), jump_levels, jump_stream);
      const auto grid = make_variance_grid(T, s.steps, js.clock.jump_times);

      const VariancePath exact = evolve_variance(v0, exact_prop, js, -1, grid);
      std::vector<HSOperator> exact_sqrt;
      exact_sqrt.reserve(grid.size());
      for (const auto& v : exact.values) exact_sqrt.push_back(psd_sqrt(v));

      const auto right = exact.right_indices();
      std::vector<double> times;
      times.reserve(right.size());
      std::vector<HSOperator> right_sqrt;
      right_sqrt.reserve(right.size());
      for (std::size_t i : right) {
        times.push_back(grid[i].t);
        right_sqrt.push_back(exact_sqrt[i]);
      }
      const auto increments = sample_wiener_increments(qspec, times, wiener_stream);
      const auto x = forward_recursion(right_sqrt, increments, times, stepper);
      const std::size_t m_tau = locate_time(times, tau);

      ReplicationSample out;
      out.jump_count = js.clock.count();
      out.payoff = s.payoff(dfun(x[m_tau]));
      out.vol_payoff = s.vol_payoff(vfun(exact_sqrt[right[m_tau]]));
      out.x_tau_norm2 = x[m_tau].squared_norm();

      const HilbertVector y = law.sample(probe_stream);
      const HSOperator probe_x = tensor_product(y, y);
      const Norms px = norms_of(probe_x.matrix());
      out.probe_y2 = y.squared_norm();
      out.probe_y4 = out.probe_y2 * out.probe_y2;
      out.probe_x_hs = px.hs;
      out.probe_x_hs2 = px.hs * px.hs;
      out.probe_x_tr = px.tr;

      out.levels.resize(L);
      for (std::size_t l = 0; l < L; ++l) {
        LevelSample& ls = out.levels[l];
        const LevelInfo& info = ens.levels[l];
        const Propagator& prop = jumps_mode ? exact_prop : level_props[l];
        const VariancePath path = evolve_variance(v0_levels[l], prop, js, jumps_mode ? static_cast<int>(l) : -1, grid);

        std::vector<HSOperator> level_sqrt;
        level_sqrt.reserve(grid.size());
        for (const auto& v : path.values) level_sqrt.push_back(psd_sqrt(v));

        // Sup errors over the grid, and the pathwise bound checked at every point.
        const double growth = ens.gen_norm;
        double jump_hs_sum = 0.0, jump_tr_sum = 0.0;
        Matrix dl = Matrix::Zero(d, d);
        std::size_t next_jump = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
          if (!grid[i].left_limit && next_jump < js.clock.count() && js.clock.jump_times[next_jump] == grid[i].t) {
            if (jumps_mode) {
              const Matrix dj = js.jumps[next_jump].matrix() - js.approx_jumps[l][next_jump].matrix();
              const Norms dn = norms_of(dj);
              jump_hs_sum += dn.hs;
              jump_tr_sum += dn.tr;
              dl += dj;
              ls.sup_dl_hs2 = std::max(ls.sup_dl_hs2, dl.squaredNorm());
            }
            ++next_jump;
          }
          const Norms dv = norms_of(exact.values[i].matrix() - path.values[i].matrix());
          ls.sup_dv_hs = std::max(ls.sup_dv_hs, dv.hs);
          ls.sup_dv_op = std::max(ls.sup_dv_op, dv.op);
          ls.sup_dv_tr = std::max(ls.sup_dv_tr, dv.tr);
          const Norms ds = norms_of(exact_sqrt[i].matrix() - level_sqrt[i].matrix());
          ls.sup_dsqrt_op2 = std::max(ls.sup_dsqrt_op2, ds.op * ds.op);
          ls.sup_dsqrt_hs2 = std::max(ls.sup_dsqrt_hs2, ds.hs * ds.hs);
          if (jumps_mode) {
            const double e = std::exp(growth * grid[i].t);
            const double rhs_hs = e * (info.dv0_hs + jump_hs_sum);
            const double rhs_tr = e * (info.dv0_tr + jump_tr_sum);
            ls.pathwise_hs_excess = std::max(ls.pathwise_hs_excess, dv.hs - rhs_hs * (1.0 + 1e-10) - 1e-13);
            ls.pathwise_tr_excess = std::max(ls.pathwise_tr_excess, dv.tr - rhs_tr * (1.0 + 1e-10) - 1e-13);
          }
        }

        std::vector<HSOperator> level_right;
        level_right.reserve(right.size());
        for (std::size_t i : right) level_right.push_back(level_sqrt[i]);
        const auto xn = forward_recursion(level_right, increments, times, stepper);
        for (std::size_t m = 0; m < x.size(); ++m) ls.sup_di2 = std::max(ls.sup_di2, (x[m] - xn[m]).squared_norm());
        ls.abs_dx_tau = (x[m_tau] - xn[m_tau]).norm();
        ls.payoff = s.payoff(dfun(xn[m_tau]));
        const std::size_t i_tau = right[m_tau];
        ls.vol_payoff = s.vol_payoff(vfun(level_sqrt[i_tau]));
        ls.dsqrt_tau_hs = (exact_sqrt[i_tau].matrix() - level_sqrt[i_tau].matrix()).norm();

        if (jumps_mode) {
          const HilbertVector yn = project_vector(y, s.levels[l]);
          const Norms dxn = norms_of(probe_x.matrix() - tensor_product(yn, yn).matrix());
          ls.probe_dx_hs2 = dxn.hs * dxn.hs;
          ls.probe_dx_tr = dxn.tr;
          ls.probe_dy2 = (y - yn).squared_norm();
          ls.probe_dy4 = ls.probe_dy2 * ls.probe_dy2;
        }
      }
      ens.samples[r] = std::move(out);
    } catch (...) {
      std::ostringstream os;
      os << "replication " << r;
      rethrow_with_context(os.str());
    }
  };

  parallel_for(R, options.threads, options.order, kernel);
  return ens;
}

// ---------------------------------------------------------------------------
// Reductions

Estimate product_of_means(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw ConfigError("product_of_means: sample sizes differ");
  const double mx = estimate(x).mean;
  const double my = estimate(y).mean;
  std::vector<double> influence(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) influence[i] = my * x[i] + mx * y[i];
  return delta_estimate(mx * my, influence);
}

namespace {

BoundInputs base_inputs(const Ensemble& e) {
  BoundInputs in;
  in.c = e.forward_c;
  in.k = e.forward_k;
  in.trace_q = e.trace_q;
  in.horizon = e.scenario.horizon;
  in.intensity = e.scenario.intensity;
  in.gen_norm = e.gen_norm;
  in.m_v0_hs2 = e.v0_hs2;
  in.m_v0_tr = e.v0_tr;
  return in;
}

template <class F>
std::vector<double> level_column(const Ensemble& e, std::size_t l, F&& f) {
  return column(e.samples, [&](const ReplicationSample& s) { return f(s.levels[l]); });
}

Estimate theorem_cap(const Ensemble& e, std::size_t l, double forward_constant) {
  const Estimate sup_dv = estimate(level_column(e, l, [](const LevelSample& s) { return s.sup_dv_hs; }));
  const double kd = e.scenario.payoff.lipschitz() * e.functional_norm;
  return scaled(sqrt_of(scaled(sup_dv, forward_constant)), kd);
}

PriceRobustness forward_price_report(const Ensemble& e, std::size_t l, double forward_constant) {
  std::vector<PriceSample> ps;
  ps.reserve(e.samples.size());
  for (const auto& s : e.samples) ps.push_back(PriceSample{s.payoff, s.levels[l].payoff, s.levels[l].abs_dx_tau});
  const FunctionalSpec dfun = FunctionalSpec::forward(HilbertVector(e.scenario.functional));
  return price_robustness_from_samples(ps, e.levels[l].level, dfun, e.scenario.payoff,
                                       theorem_cap(e, l, forward_constant));
}

}  // namespace

std::vector<BoundReport> bound_reports(const Ensemble& e) {
  const CoupledScenario& s = e.scenario;
  const bool jumps_mode = s.perturbation == Perturbation::jumps;
  const double T = s.horizon;
  const double lt = s.intensity * T;
  const BoundInputs base = base_inputs(e);
  const double forward_constant = bound_forward(base);
  const auto R = e.samples.size();

  const auto y2 = column(e.samples, [](const ReplicationSample& r) { return r.probe_y2; });
  const auto y4 = column(e.samples, [](const ReplicationSample& r) { return r.probe_y4; });
  const auto x_hs = column(e.samples, [](const ReplicationSample& r) { return r.probe_x_hs; });
  const auto x_hs2 = column(e.samples, [](const ReplicationSample& r) { return r.probe_x_hs2; });
  const auto x_tr = column(e.samples, [](const ReplicationSample& r) { return r.probe_x_tr; });

  std::vector<BoundReport> out;
  for (std::size_t l = 0; l < e.levels.size(); ++l) {
    const LevelInfo& info = e.levels[l];
    const int n = info.level;
    BoundInputs in = base;
    in.gen_norm_approx = info.gen_norm_approx;
    in.gen_distance = info.gen_distance;
    in.m_dv0_hs2 = info.dv0_hs2;

    auto col = [&](double LevelSample::*field) {
      return level_column(e, l, [field](const LevelSample& ls) { return ls.*field; });
    };
    const Estimate sup_dv_hs = estimate(col(&LevelSample::sup_dv_hs));
    std::vector<double> sup_dv_hs2 = col(&LevelSample::sup_dv_hs);
    for (double& v : sup_dv_hs2) v *= v;

    if (jumps_mode) {
      const auto hs_excess = col(&LevelSample::pathwise_hs_excess);
      const auto tr_excess = col(&LevelSample::pathwise_tr_excess);
      const double hs_viol = static_cast<double>(std::count_if(hs_excess.begin(), hs_excess.end(), [](double v) { return v > 0.0; }));
      const double tr_viol = static_cast<double>(std::count_if(tr_excess.begin(), tr_excess.end(), [](double v) { return v > 0.0; }));
      std::ostringstream pn;
      pn << "violations of ||V - V^n|| <= e^{||G|| t}(||dV0|| + sum ||dX_i||) over " << R << " replications";
      out.push_back(make_bound_report("pathwise_hs", n, exact(hs_viol), exact(0.0), pn.str()));
      out.push_back(make_bound_report("pathwise_trace", n, exact(tr_viol), exact(0.0), pn.str()));

      const auto dy2 = col(&LevelSample::probe_dy2);
      const auto dy4 = col(&LevelSample::probe_dy4);
      const auto dx_hs2 = col(&LevelSample::probe_dx_hs2);
      const auto dx_tr = col(&LevelSample::probe_dx_tr);
      const Estimate m_dx_hs2 = estimate(dx_hs2);
      const Estimate m_dx_tr = estimate(dx_tr);

      out.push_back(make_bound_report("tensor_jump", n, m_dx_hs2, scaled(sqrt_of(product_of_means(y4, dy4)), 4.0),
                                      "E||X - X^n||_HS^2 <= 4 sqrt(E|Y|^4 E|Y - Y^n|^4)"));
      out.push_back(make_bound_report("tensor_trace", n, m_dx_tr, scaled(sqrt_of(product_of_means(y2, dy2)), 2.0),
                                      "E||X - X^n||_1 <= 2 sqrt(E|Y|^2 E|Y - Y^n|^2)"));

      in.m_djump_hs2 = m_dx_hs2.mean;
      in.m_djump_tr = m_dx_tr.mean;
      const JumpVarianceConstants jc = bound_variance_jumps(in);
      const Estimate lhs = estimate(sup_dv_hs2);
      out.push_back(make_bound_report("variance_jumps", n, lhs,
                                      sum_of(exact(jc.c0 * info.dv0_hs2), scaled(m_dx_hs2, jc.c1)),
                                      "C0 E||dV0||^2 + C1 E||dX||^2, C1 with the doubled exponential factor"));
      out.push_back(make_bound_report("variance_jumps_single_exp", n, lhs,
                                      sum_of(exact(jc.c0 * info.dv0_hs2), scaled(m_dx_hs2, jc.c1_single_exp)),
                                      "sharpened C1 with a single exponential factor"));
      out.push_back(make_bound_report("compound_poisson_sup", n, estimate(col(&LevelSample::sup_dl_hs2)),
                                      scaled(m_dx_hs2, 2.0 * lt * (1.0 + lt)),
                                      "E sup||L - L^n||^2 <= 2 T lambda (1 + lambda T) E||dX||^2"));

      out.push_back(make_bound_report("sqrt_op", n, estimate(col(&LevelSample::sup_dsqrt_op2)),
                                      estimate(col(&LevelSample::sup_dv_op)),
                                      "E sup||sqrt V - sqrt V^n||_op^2 <= E sup||V - V^n||_op"));
      out.push_back(make_bound_report("sqrt_hs", n, estimate(col(&LevelSample::sup_dsqrt_hs2)),
                                      estimate(col(&LevelSample::sup_dv_tr)),
                                      "E sup||sqrt V - sqrt V^n||_HS^2 <= E sup||V - V^n||_1"));
      if (!s.truncate_initial) {
        const SqrtBound sb = bound_sqrt(in, SqrtCase::hs_jumps);
        out.push_back(make_bound_report("sqrt_hs_jumps", n, estimate(col(&LevelSample::sup_dsqrt_hs2)),
                                        scaled(m_dx_tr, sb.constant),
                                        "constant k e^{||G|| T} lambda T with unspecified k set to 1"));
      }
    } else {
      const double dist2 = info.gen_distance * info.gen_distance;
      if (info.tail_sup_sq) {
        out.push_back(make_bound_report("generator_tail", n, exact(dist2), exact(2.0 * *info.tail_sup_sq),
                                        "||G - G^n||_op^2 <= 2 sup over dropped indices of Lambda^2"));
      }
      // Moment factor E||V0||^2 + lambda T E||X||^2 + (lambda T)^2 (E||X||)^2 with delta-method error.
      const double m_x_hs = estimate(x_hs).mean;
      const double m_x_hs2 = estimate(x_hs2).mean;
      std::vector<double> influence(R);
      for (std::size_t r = 0; r < R; ++r) influence[r] = lt * x_hs2[r] + 2.0 * lt * lt * m_x_hs * x_hs[r];
      const Estimate factor = delta_estimate(e.v0_hs2 + lt * m_x_hs2 + lt * lt * m_x_hs * m_x_hs, influence);
      in.m_jump_hs2 = m_x_hs2;
      in.m_jump_hs_sq = m_x_hs * m_x_hs;
      const double g = std::max(e.gen_norm, info.gen_norm_approx);
      const Estimate lhs = estimate(sup_dv_hs2);
      out.push_back(make_bound_report("variance_generator", n, lhs,
                                      scaled(factor, 2.0 * T * T * std::exp(2.0 * T * g) * dist2),
                                      "2 T^2 e^{2T(||G|| v ||G^n||)} (moments) ||G - G^n||_op^2"));
      if (info.tail_sup_sq) {
        out.push_back(make_bound_report("variance_generator_compact", n, lhs,
                                        scaled(factor, 4.0 * T * T * std::exp(2.0 * T * e.gen_norm) * *info.tail_sup_sq),
                                        "4 T^2 e^{2T||G||} (moments) sup tail Lambda^2"));
      }
      out.push_back(make_bound_report("sqrt_op", n, estimate(col(&LevelSample::sup_dsqrt_op2)),
                                      estimate(col(&LevelSample::sup_dv_op)),
                                      "E sup||sqrt V - sqrt V^n||_op^2 <= E sup||V - V^n||_op"));
      out.push_back(make_bound_report("sqrt_hs", n, estimate(col(&LevelSample::sup_dsqrt_hs2)),
                                      estimate(col(&LevelSample::sup_dv_tr)),
                                      "E sup||sqrt V - sqrt V^n||_HS^2 <= E sup||V - V^n||_1"));
      const Estimate m_x_tr = estimate(x_tr);
      in.m_jump_tr = m_x_tr.mean;
      const SqrtBound sb = bound_sqrt(in, SqrtCase::hs_generator);
      const double per_trace = sb.k * T * std::exp(T * g) * lt * info.gen_distance;
      out.push_back(make_bound_report("sqrt_hs_generator", n, estimate(col(&LevelSample::sup_dsqrt_hs2)),
                                      Estimate{sb.rhs, per_trace * m_x_tr.se},
                                      "constant k T e^{T(||G|| v ||G^n||)} (E||V0||_1 + lambda T E||X||_1), k set to 1"));
    }

    out.push_back(make_bound_report("forward_sup", n, estimate(col(&LevelSample::sup_di2)),
                                    scaled(sup_dv_hs, forward_constant),
                                    "E sup|X - X^n|^2 <= C(T) E sup||V - V^n||_HS, sup over the grid"));

    const PriceRobustness pr = forward_price_report(e, l, forward_constant);
    out.push_back(pr.lipschitz_link);
    if (pr.cap_link) out.push_back(*pr.cap_link);

    std::vector<double> vdiff(R);
    for (std::size_t r = 0; r < R; ++r) vdiff[r] = e.samples[r].vol_payoff - e.samples[r].levels[l].vol_payoff;
    const Estimate vd = estimate(vdiff);
    const double kv = s.vol_payoff.lipschitz() * e.vol_functional_norm;
    out.push_back(make_bound_report("vol_price_lipschitz", n, Estimate{std::abs(vd.mean), vd.se},
                                    scaled(estimate(col(&LevelSample::dsqrt_tau_hs)), kv),
                                    "|P - P^n| <= K ||D|| E||sqrt V(tau) - sqrt V^n(tau)||_HS"));
  }
  return out;
}

std::vector<BoundReport> run_experiment(const CoupledScenario& scenario, const RunOptions& options) {
  return bound_reports(simulate_ensemble(scenario, options));
}

ConvergenceTable convergence_table(const Ensemble& e) {
  const bool jumps_mode = e.scenario.perturbation == Perturbation::jumps;
  ConvergenceTable table;
  std::vector<std::string> ids;
  for (std::size_t l = 0; l < e.levels.size(); ++l) {
    const LevelInfo& info = e.levels[l];
    const int n = info.level;
    auto add = [&](const std::string& id, Estimate est) {
      table.rows.push_back(ConvergenceRow{n, id, est.mean, est.se});
      if (l == 0) ids.push_back(id);
    };
    auto col = [&](double LevelSample::*field) {
      return level_column(e, l, [field](const LevelSample& ls) { return ls.*field; });
    };
    if (jumps_mode) {
      add("jump_vector_tail", estimate(col(&LevelSample::probe_dy2)));
      add("jump_hs2", estimate(col(&LevelSample::probe_dx_hs2)));
    } else {
      add("generator_distance_op2", exact(info.gen_distance * info.gen_distance));
    }
    std::vector<double> sup_dv_hs2 = col(&LevelSample::sup_dv_hs);
    for (double& v : sup_dv_hs2) v *= v;
    add("variance_sup_hs2", estimate(sup_dv_hs2));
    add("sqrt_sup_hs2", estimate(col(&LevelSample::sup_dsqrt_hs2)));
    add("forward_sup", estimate(col(&LevelSample::sup_di2)));
    add("projection_tail", exact(info.projection_tail));
  }

  for (const auto& id : ids) {
    const ConvergenceRow* prev = nullptr;
    bool ok = true;
    for (const auto& row : table.rows) {
      if (row.id != id) continue;
      if (prev && row.estimate > prev->estimate + 3.0 * std::hypot(row.se, prev->se) +
                                     1e-12 * (1.0 + std::abs(prev->estimate)))
        ok = false;
      prev = &row;
    }
    if (!ok) {
      table.monotone = false;
      table.non_monotone.push_back(id);
    }
  }
  return table;
}

ConvergenceTable convergence_study(const CoupledScenario& scenario, const RunOptions& options) {
  if (scenario.levels.size() < 3) field_error("levels", "the convergence study needs at least 3 levels");
  return convergence_table(simulate_ensemble(scenario, options));
}

std::vector<PriceRobustness> pricing_reports(const Ensemble& e) {
  const double forward_constant = bound_forward(base_inputs(e));
  std::vector<PriceRobustness> out;
  for (std::size_t l = 0; l < e.levels.size(); ++l) out.push_back(forward_price_report(e, l, forward_constant));
  return out;
}

std::vector<PricingRow> pricing_rows(const Ensemble& e) {
  std::vector<PricingRow> rows;
  const Estimate base = estimate(column(e.samples, [](const ReplicationSample& r) { return r.payoff; }));
  rows.push_back(PricingRow{-1, base.mean, base.se, 0.0, 0.0, 0.0, true});
  for (const auto& pr : pricing_reports(e)) {
    rows.push_back(PricingRow{pr.level, pr.price.mean, pr.price.se, pr.price_diff.mean, pr.lipschitz_bound.mean,
                              pr.theorem_cap ? pr.theorem_cap->mean : 0.0, pr.pass()});
  }
  return rows;
}

std::vector<PricingRow> run_pricing(const CoupledScenario& scenario, const RunOptions& options) {
  return pricing_rows(simulate_ensemble(scenario, options));
}

}  // namespace opvol
